"""Target probability profiles."""

import json
from pathlib import Path

import numpy as np

from .synthesis import check_profile

FILE_NORM_TOL = 1e-6

# probabilities used by random_profile when zero_blocks=True
ZERO_PAIR_PROB = 0.15
TRUNCATE_PROB = 0.1


def _check_n(n):
    if int(n) != n or n < 1:
        raise ValueError(f"N must be a positive integer, got {n!r}")
    return int(n)


def w_state_profile(n):
    """Equal weight ``1/N`` on every even site, nothing on the odd leg."""
    n = _check_n(n)
    P = np.zeros(2 * n)
    P[1::2] = 1.0 / n
    return P


def gaussian_state_profile(n, sigma):
    """Gaussian packet centred at chain ``(N+1)/2`` on the even leg.

    Weights ``exp(-(k - (N+1)/2)^2 / (2 sigma^2))`` are renormalized so the
    discrete profile sums to one.
    """
    n = _check_n(n)
    if not (np.isfinite(sigma) and sigma > 0):
        raise ValueError(f"sigma must be positive, got {sigma!r}")
    k = np.arange(1, n + 1)
    w = np.exp(-((k - 0.5 * (n + 1)) ** 2) / (2.0 * sigma**2))
    P = np.zeros(2 * n)
    P[1::2] = w / w.sum()
    return P


def random_profile(n, seed, even_support_only=False, zero_blocks=True):
    """Reproducible random profile for property tests.

    Entries are uniform on [0, 1) and then normalized.  With ``zero_blocks``
    each interior site pair ``(2k, 2k+1)`` is emptied with probability
    ``ZERO_PAIR_PROB`` and, with probability ``TRUNCATE_PROB``, every site
    past a random cut is emptied too; both exercise the degenerate branches of
    the solver.  Site 1 is refilled if nothing survives.
    """
    n = _check_n(n)
    rng = np.random.default_rng(seed)
    P = rng.random(2 * n)
    if even_support_only:
        P[0::2] = 0.0
    if zero_blocks:
        for k in range(1, n):
            if rng.random() < ZERO_PAIR_PROB:
                P[2 * k - 1 : 2 * k + 1] = 0.0
        if rng.random() < TRUNCATE_PROB:
            P[rng.integers(1, 2 * n):] = 0.0
    if P.sum() == 0.0:
        P[1 if even_support_only else 0] = 1.0
    return P / P.sum()


def parse_profile_text(text):
    """Parse a profile from CSV text: one value per line or comma separated, ``#`` comments."""
    values = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        for tok in line.split(","):
            tok = tok.strip()
            if tok:
                try:
                    values.append(float(tok))
                except ValueError:
                    raise ValueError(f"cannot parse probability {tok!r}") from None
    return values


def validate_loaded_profile(values):
    P = np.asarray(values, dtype=float)
    if P.ndim != 1 or P.size == 0:
        raise ValueError("profile is empty")
    if P.size % 2:
        raise ValueError(f"profile length {P.size} is odd; need 2N entries")
    if np.any(P < 0):
        raise ValueError("profile has negative entries")
    total = P.sum()
    # slack so that a file summing to exactly 1 - FILE_NORM_TOL in decimal passes
    if abs(total - 1.0) > FILE_NORM_TOL * (1 + 1e-9):
        raise ValueError(f"profile sums to {total!r}; off by more than {FILE_NORM_TOL}")
    return check_profile(P / total)


def custom_profile_from_file(path):
    """Load a profile from a CSV file or a JSON file (list, or ``{"probabilities": [...]}``)."""
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".json":
        data = json.loads(text)
        if isinstance(data, dict):
            data = data["probabilities"]
        if not isinstance(data, list):
            raise ValueError("JSON profile must be a list of probabilities")
        values = [float(x) for x in data]
    else:
        values = parse_profile_text(text)
    return validate_loaded_profile(values)
