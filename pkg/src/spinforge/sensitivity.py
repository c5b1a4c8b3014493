"""Robustness of a schedule against accumulated pulse-timing errors.

Error model: every free-evolution interval is stretched by the same ``eps``,
so pulse ``k`` fires ``k * eps`` late.  Fidelities are taken against the
state the unperturbed schedule produces.  Epsilons are reported in the
dimensionless form ``J_1 * eps``.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from .chain_model import build_network_hamiltonian
from .dynamics import SpectralPropagator, fidelity, propagate_full
from .pipeline import synthesize

BISECT_RTOL = 1e-3


def default_workers():
    try:
        return max(1, int(os.environ.get("SPINFORGE_THREADS", "1")))
    except ValueError:
        return 1


def perturbed_schedule(schedule, epsilon, jitter=0.0, seed=None):
    """Intervals with every ``t_k`` replaced by ``t_k + epsilon``.

    ``jitter`` adds independent Gaussian noise of that standard deviation to
    each interval on top of the uniform shift (off by default).
    """
    t = np.asarray(getattr(schedule, "intervals", schedule), dtype=float) + epsilon
    if jitter:
        t = t + np.random.default_rng(seed).normal(0.0, jitter, t.size)
    if np.any(t < 0):
        raise ValueError(f"epsilon={epsilon!r} makes an interval negative")
    return t


@dataclass
class FidelityCurve:
    eps_scaled: np.ndarray
    fidelity: np.ndarray
    n: int
    label: str = ""
    # eps_scaled -> fidelity, for threshold refinement; absent on curves read from disk
    evaluate: Optional[Callable[[float], float]] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.eps_scaled = np.asarray(self.eps_scaled, dtype=float)
        self.fidelity = np.asarray(self.fidelity, dtype=float)
        if self.eps_scaled.shape != self.fidelity.shape or self.eps_scaled.ndim != 1:
            raise ValueError("curve needs matching 1-d eps and fidelity arrays")
        if np.any(np.diff(self.eps_scaled) <= 0):
            raise ValueError("eps values must be strictly increasing")

    @property
    def points(self):
        return list(zip(self.eps_scaled.tolist(), self.fidelity.tolist()))


def check_grid(grid):
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size == 0:
        raise ValueError("epsilon grid is empty")
    if g[0] != 0.0 or np.any(np.diff(g) <= 0):
        raise ValueError("epsilon grid must start at 0 and increase strictly")
    return g


def make_grid(eps_max, steps):
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if steps == 1:
        return np.zeros(1)
    if not eps_max > 0:
        raise ValueError("eps_max must be positive")
    return np.linspace(0.0, eps_max, int(steps))


def schedule_evaluator(schedule):
    """``eps_scaled -> fidelity`` against the unperturbed final state."""
    U = SpectralPropagator(build_network_hamiltonian(schedule.couplings))
    ideal = propagate_full(schedule.couplings, schedule.intervals, propagator=U)
    j1 = schedule.couplings[0]

    def evaluate(eps_scaled):
        t = perturbed_schedule(schedule, eps_scaled / j1)
        return fidelity(ideal, propagate_full(schedule.couplings, t, propagator=U))

    return evaluate


def schedule_fidelity_curve(schedule, epsilon_grid, label="", workers=None):
    grid = check_grid(epsilon_grid)
    evaluate = schedule_evaluator(schedule)
    workers = workers or default_workers()
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            fids = list(pool.map(evaluate, grid))
    else:
        fids = [evaluate(e) for e in grid]
    return FidelityCurve(grid, np.array(fids), schedule.n, label, evaluate)


def fidelity_curve(profile, j1, epsilon_grid, label="", workers=None):
    """Synthesize a schedule for ``profile`` and sweep the timing error over the grid."""
    return schedule_fidelity_curve(synthesize(profile, j1), epsilon_grid, label, workers)


class Threshold(NamedTuple):
    eps_scaled: float
    unbounded: bool


def tolerance_threshold(curve, f_star):
    """Largest error before the fidelity first falls below ``f_star``.

    The bracketing grid interval is refined by bisection when the curve can
    be re-evaluated, else by linear interpolation.  If the fidelity never
    drops below ``f_star`` the grid maximum is returned with ``unbounded``.
    """
    if not 0.0 < f_star < 1.0:
        raise ValueError("f_star must lie in (0, 1)")
    eps, fid = curve.eps_scaled, curve.fidelity
    below = np.flatnonzero(fid < f_star)
    if below.size == 0:
        return Threshold(float(eps[-1]), True)
    i = below[0]
    if i == 0:
        return Threshold(float(eps[0]), False)
    lo, hi = eps[i - 1], eps[i]
    if curve.evaluate is None:
        f_lo, f_hi = fid[i - 1], fid[i]
        return Threshold(float(lo + (f_lo - f_star) / (f_lo - f_hi) * (hi - lo)), False)
    while hi - lo > BISECT_RTOL * lo:
        mid = 0.5 * (lo + hi)
        if curve.evaluate(mid) < f_star:
            hi = mid
        else:
            lo = mid
    return Threshold(float(0.5 * (lo + hi)), False)


def threshold_table(curve, levels):
    """``{F*: eps*}`` for several fidelity levels."""
    return {float(f): tolerance_threshold(curve, f).eps_scaled for f in sorted(levels, reverse=True)}


class ScalingRow(NamedTuple):
    n: int
    eps_star: float
    n_times_eps_star: float
    unbounded: bool


@dataclass
class SensitivityReport:
    f_star: float
    rows: list
    thresholds: dict

    @property
    def spread(self):
        """max/min of ``N * eps*`` over the rows."""
        prod = [r.n_times_eps_star for r in self.rows]
        return max(prod) / min(prod)


def default_eps_max(n):
    return 0.4 / n


def scaling_analysis(profile_family, n_list, j1=1.0, f_star=0.99, steps=100, eps_max=None,
                     levels=None, workers=None):
    """Tolerance ``eps*(N)`` across chain lengths for one family of targets.

    ``profile_family`` maps N to a site profile.  ``eps_max`` is either a
    number or a callable of N; by default the grid spans ``[0, 0.4/N]``.
    """
    n_list = [int(n) for n in n_list]
    if not n_list:
        raise ValueError("n_list is empty")
    levels = tuple(levels or (f_star,))
    rows, thresholds = [], {}
    for n in n_list:
        top = eps_max(n) if callable(eps_max) else (eps_max or default_eps_max(n))
        curve = fidelity_curve(profile_family(n), j1, make_grid(top, steps), workers=workers)
        th = tolerance_threshold(curve, f_star)
        rows.append(ScalingRow(n, th.eps_scaled, n * th.eps_scaled, th.unbounded))
        thresholds[n] = threshold_table(curve, levels)
    return SensitivityReport(f_star, rows, thresholds)
