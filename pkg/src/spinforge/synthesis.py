"""Inverse problem: couplings and pulse times from a target probability profile.

Probabilities live in two coordinate systems.  ``P`` is indexed by physical
sites 1..2N.  ``q`` is indexed by virtual sites: ``q[2k-1]`` and ``q[2k]``
(1-based) are the left and right ends of virtual chain ``k``.

Every chain ``k`` is described by two angles,

* ``theta_k = 2 J_k t_k``, the rotation done before the pulse that hands the
  right-end amplitude on to chain ``k+1``;
* ``alpha_k = 2 J_k tau_{k+1}``, the rotation of what stays behind until the
  end of the protocol.

Both follow from ``q`` alone.  With ``alpha_k = N pi + ...`` and
``theta_k in [0, pi/2]`` every ratio ``J_{k+1}/J_k`` stays within
``[1/(1 + 1/2N), 1 + 1/N]``.
"""

from dataclasses import dataclass, field

import numpy as np

# weights below this count as exactly zero when choosing a branch (0/0 cases);
# amplitude sqrt(1e-30) is below double resolution of a unit vector
ZERO_TOL = 1e-30
SUPPORT_TOL = 1e-12
CLAMP_TOL = 1e-9
NORM_TOL = 1e-10
PHASE_MAG_TOL = 1e-8


class SynthesisError(ValueError):
    """Raised when a profile cannot be turned into a consistent schedule."""


def check_profile(P, atol=NORM_TOL):
    """Validate a probability profile on 2N sites and return it as an array."""
    P = np.asarray(P, dtype=float)
    if P.ndim != 1 or P.size == 0 or P.size % 2:
        raise ValueError(f"profile must have an even, nonzero length; got shape {P.shape}")
    if not np.all(np.isfinite(P)):
        raise ValueError("profile has non-finite entries")
    if np.any(P < 0):
        raise ValueError("profile has negative entries")
    total = P.sum()
    if abs(total - 1.0) > atol:
        raise ValueError(f"profile sums to {total!r}, not 1")
    return P


@dataclass(frozen=True)
class VirtualProfile:
    """Virtual-chain probabilities plus the orientation of each interior site pair.

    ``orientation[k-1]`` is +1 when the even site ``2k`` of the pair
    ``(2k, 2k+1)`` carries at least as much probability as the odd site, and
    -1 otherwise.  The larger share always sits in ``q[2k]``; the orientation
    records which physical site it belongs to, so the map back is exact.
    """

    q: np.ndarray
    orientation: np.ndarray = None

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        if q.ndim != 1 or q.size == 0 or q.size % 2:
            raise ValueError("virtual profile must have an even, nonzero length")
        if np.any(q < 0):
            raise ValueError("virtual profile has negative entries")
        n = q.size // 2
        if self.orientation is None:
            s = np.ones(n - 1)
        else:
            s = np.asarray(self.orientation, dtype=float)
            if s.shape != (n - 1,) or not np.all(np.isin(s, (-1.0, 1.0))):
                raise ValueError("orientation must hold N-1 entries of +1 or -1")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "orientation", s)

    @property
    def n(self):
        return self.q.size // 2


def _as_virtual(q):
    return q if isinstance(q, VirtualProfile) else VirtualProfile(q)


def site_to_virtual_probabilities(P):
    """Map site probabilities to virtual-chain probabilities.

    The boundary sites map to themselves; each interior pair
    ``(P[2k], P[2k+1])`` becomes ``mean ± sqrt(P[2k] P[2k+1])``.
    """
    P = check_profile(P)
    n = P.size // 2
    q = P.copy()
    even, odd = P[1:-1:2], P[2:-1:2]
    # mean +- sqrt(a b) written as (sqrt a +- sqrt b)^2 / 2: no cancellation,
    # and the two agree exactly when one site is empty
    ra, rb = np.sqrt(even), np.sqrt(odd)
    q[1:-1:2] = 0.5 * (ra + rb) ** 2
    q[2:-1:2] = 0.5 * (ra - rb) ** 2
    orientation = np.where(odd > even, -1.0, 1.0)
    return VirtualProfile(q, orientation if n > 1 else np.ones(0))


def virtual_to_site_probabilities(q):
    """Inverse of :func:`site_to_virtual_probabilities`.

    A bare array is read with every orientation +1.
    """
    v = _as_virtual(q)
    P = v.q.copy()
    big, small = np.sqrt(v.q[1:-1:2]), np.sqrt(v.q[2:-1:2])
    plus = 0.5 * (big + small) ** 2
    minus = 0.5 * (big - small) ** 2
    heavy_even = v.orientation > 0
    P[1:-1:2] = np.where(heavy_even, plus, minus)
    P[2:-1:2] = np.where(heavy_even, minus, plus)
    return P


def residual_weights(q):
    """``A_0..A_N``: amplitude still travelling right after each chain.

    ``A_k^2`` is the probability on virtual sites beyond ``2k``.
    """
    v = _as_virtual(q)
    tail = np.cumsum(v.q[::-1])[::-1]
    A = np.empty(v.n + 1)
    A[0] = 1.0
    A[1:-1] = np.sqrt(tail[2:-1:2])
    A[-1] = 0.0
    return A


@dataclass(frozen=True)
class Schedule:
    """Couplings, pulse intervals and local phase layer for one target.

    ``tails[k-1]`` is ``tau_k``, the time from pulse ``k-1`` (or the start) to
    the end of the protocol; ``tails[N] = tau_{N+1} = t_N``.
    """

    couplings: np.ndarray
    intervals: np.ndarray
    tails: np.ndarray
    phases: np.ndarray
    j1: float
    theta: np.ndarray = field(default=None, compare=False, repr=False)
    alpha: np.ndarray = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        for name in ("couplings", "intervals", "tails", "phases"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        n = self.couplings.size
        if n == 0:
            raise ValueError("empty schedule")
        if self.intervals.shape != (n,) or self.tails.shape != (n + 1,):
            raise ValueError("intervals/tails have inconsistent lengths")
        if self.phases.shape != (2 * n,):
            raise ValueError("phases must have 2N entries")
        if np.any(self.couplings <= 0) or np.any(self.intervals < 0):
            raise ValueError("couplings must be positive and intervals nonnegative")

    @property
    def n(self):
        return self.couplings.size

    @property
    def total_time(self):
        return float(self.intervals.sum())

    def with_phases(self, phases):
        return Schedule(self.couplings, self.intervals, self.tails, phases, self.j1,
                        self.theta, self.alpha)


def _clamped_ratio(num, den, what):
    r = num / den
    if r < -CLAMP_TOL or r > 1.0 + CLAMP_TOL:
        raise SynthesisError(f"{what} ratio {r!r} outside [0, 1]")
    return min(max(r, 0.0), 1.0)


def chain_angles(q):
    """Per-chain angles ``(theta, alpha)`` for the bounded branch ``m_k=0, n_k=N``."""
    v = _as_virtual(q)
    n = v.n
    q = v.q
    if abs(q.sum() - 1.0) > NORM_TOL:
        raise SynthesisError(f"virtual profile sums to {q.sum()!r}, not 1")
    tail = np.cumsum(q[::-1])[::-1]
    # sign of the virtual left-end amplitude of chain k; -1 where the site pair
    # feeding it is odd-heavy (second root of cos^2 = ratio)
    sign = np.concatenate(([1.0], v.orientation))
    theta = np.empty(n)
    alpha = np.empty(n)
    exhausted = False
    for k in range(n):
        left, right = q[2 * k], q[2 * k + 1]
        remaining = tail[2 * k]
        if exhausted or remaining < ZERO_TOL:
            exhausted = True
            theta[k], alpha[k] = np.pi / 2, n * np.pi
            continue
        pair = left + right
        if pair < ZERO_TOL:
            # empty chain: hand everything on, park nothing
            theta[k], alpha[k] = np.pi / 2, n * np.pi
        else:
            theta[k] = np.arccos(np.sqrt(_clamped_ratio(pair, remaining, "chain occupation")))
            split = np.sqrt(_clamped_ratio(left, pair, "left/right split"))
            alpha[k] = n * np.pi + np.arccos(sign[k] * split)
    if not exhausted and abs(theta[-1]) > 1e-8:
        raise SynthesisError(f"last chain angle {theta[-1]!r} should vanish; corrupted profile")
    if not exhausted:
        theta[-1] = 0.0
    return theta, alpha


def solve_schedule(q, j1=1.0):
    """Solve for couplings, pulse intervals and tail times.

    ``q`` is a :class:`VirtualProfile` (or a bare array, read with all
    orientations +1).  ``j1`` fixes the overall time scale.  The returned
    schedule has a zero phase layer; see :func:`phase_corrections`.
    """
    if not (np.isfinite(j1) and j1 > 0):
        raise SynthesisError(f"j1 must be positive, got {j1!r}")
    theta, alpha = chain_angles(q)
    n = theta.size
    total = theta + alpha

    # tau_{k+1} / tau_k = alpha_k / (theta_k + alpha_k)
    tau = np.empty(n + 1)
    tau[0] = total[0] / (2.0 * j1)
    tau[1:] = tau[0] * np.cumprod(alpha / total)
    # J_{k+1} / J_k = (theta_{k+1} + alpha_{k+1}) / alpha_k
    J = j1 * np.concatenate(([1.0], np.cumprod(total[1:] / alpha[:-1])))

    tau[n] = tau[n - 1]
    t = np.empty(n)
    t[:-1] = tau[:-2] - tau[1:-1]
    t[-1] = tau[n - 1]
    return Schedule(J, t, tau, np.zeros(2 * n), float(j1), theta, alpha)


def coupling_bounds_check(schedule, rtol=1e-12):
    """Check ``J_k/J_1`` against the per-chain product bounds and ``(e^-1/2, e)``."""
    J = np.asarray(getattr(schedule, "couplings", schedule), dtype=float)
    n = J.size
    ratios = J / J[0]
    k = np.arange(n)
    lower = (1.0 + 0.5 / n) ** (-k)
    upper = (1.0 + 1.0 / n) ** k
    product_ok = bool(np.all(ratios >= lower * (1 - rtol)) and np.all(ratios <= upper * (1 + rtol)))
    e_ok = bool(np.all(ratios > np.exp(-0.5)) and np.all(ratios < np.e))
    return {
        "ratios": ratios,
        "lower": lower,
        "upper": upper,
        "within_product_bounds": product_ok,
        "within_e_bounds": e_ok,
        "pass": product_ok and e_ok,
    }


def phase_corrections(target, generated):
    """Local phases turning ``generated`` into ``target`` site by site.

    Returns ``phi`` in ``[0, 2 pi)`` with ``target = exp(i phi) * generated``
    on the support of the target; zero elsewhere.
    """
    target = np.asarray(target, dtype=complex)
    generated = np.asarray(generated, dtype=complex)
    if target.shape != generated.shape:
        raise ValueError("target and generated states differ in size")
    if np.max(np.abs(np.abs(target) - np.abs(generated))) > PHASE_MAG_TOL:
        raise ValueError("target and generated magnitudes differ; phases cannot fix that")
    phi = np.mod(np.angle(target) - np.angle(generated), 2 * np.pi)
    phi[phi >= 2 * np.pi] = 0.0
    phi[np.abs(target) <= SUPPORT_TOL] = 0.0
    return phi


def apply_phases(psi, phases):
    return np.asarray(psi, dtype=complex) * np.exp(1j * np.asarray(phases, dtype=float))
