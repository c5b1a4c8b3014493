"""Time evolution: closed-form virtual-chain model and dense network propagation."""

import numpy as np

from .chain_model import basis_state, build_network_hamiltonian, check_state, virtual_basis_transform


def two_site_rotation(J, t, amps):
    """Evolve ``(a, b)`` under ``[[0, J], [J, 0]]`` for time ``t``."""
    a, b = amps
    c, s = np.cos(J * t), np.sin(J * t)
    return c * a - 1j * s * b, -1j * s * a + c * b


def evolve_virtual_closed_form(schedule):
    """Final site-basis state of a schedule, written down chain by chain.

    Chain ``k`` receives ``(-i)^(k-1) A_{k-1}`` on its left end at pulse
    ``k-1``, rotates by ``2 J_k t_k``, loses its right end to chain ``k+1`` at
    pulse ``k`` and then rotates freely for the remaining ``tau_{k+1}``.
    The phase layer of the schedule is not applied.
    """
    J = schedule.couplings
    t = schedule.intervals
    tau = schedule.tails
    n = J.size
    if not np.allclose(tau[:-1], np.cumsum(t[::-1])[::-1], rtol=1e-12, atol=1e-12) or tau[-1] != t[-1]:
        raise ValueError("schedule tails are inconsistent with its intervals")

    held = 2 * J * (tau[:-1] - tau[1:])          # rotation before the hand-off
    free = 2 * J * tau[1:]                        # rotation after it
    A = np.concatenate(([1.0], np.cumprod(np.sin(2 * J[:-1] * t[:-1]))))
    phase = (-1j) ** np.arange(n)
    kept = A * np.cos(held)

    virt = np.empty(2 * n, dtype=complex)
    virt[0::2] = phase * kept * np.cos(free)
    virt[1::2] = -1j * phase * kept * np.sin(free)
    return virtual_basis_transform(n).T @ virt


class SpectralPropagator:
    """``exp(-iHt)`` for a fixed real symmetric ``H``, diagonalized once."""

    def __init__(self, H):
        H = np.asarray(H, dtype=float)
        if H.ndim != 2 or H.shape[0] != H.shape[1]:
            raise ValueError("H must be square")
        if not np.allclose(H, H.T, rtol=0, atol=1e-14 * max(1.0, np.abs(H).max())):
            raise ValueError("H must be symmetric")
        # eigh raises LinAlgError if it fails to converge
        self.energies, self.vectors = np.linalg.eigh(H)

    def matrix(self, t):
        V = self.vectors
        return (V * np.exp(-1j * self.energies * t)) @ V.T

    def apply(self, psi, t):
        V = self.vectors
        return V @ (np.exp(-1j * self.energies * t) * (V.T @ psi))


def expm_symmetric(H, t):
    """``exp(-iHt)`` for real symmetric ``H`` by spectral decomposition."""
    return SpectralPropagator(H).matrix(t)


def _pulse_index(k):
    # pulse after interval k (1-based) acts on site 2k+1
    return 2 * k


def propagate_full(couplings, intervals, pulses=True, initial=None, propagator=None):
    """Dense evolution ``e^{-iHt_N} Z_{2N-1} ... Z_3 e^{-iHt_1} |initial>``.

    ``initial`` defaults to ``|1>``.  With ``pulses=False`` the Z gates are
    skipped.  A prebuilt ``propagator`` for the same couplings may be passed
    to avoid rediagonalizing.
    """
    J = np.asarray(couplings, dtype=float)
    t = np.asarray(intervals, dtype=float)
    n = J.size
    if t.shape != (n,):
        raise ValueError(f"need {n} intervals, got shape {t.shape}")
    psi = basis_state(1, n) if initial is None else check_state(initial, n).copy()
    U = propagator or SpectralPropagator(build_network_hamiltonian(J))
    for k in range(1, n + 1):
        psi = U.apply(psi, t[k - 1])
        if pulses and k < n:
            psi[_pulse_index(k)] *= -1
    return psi


def sample_evolution(couplings, intervals, samples_per_interval=10, initial=None, pulses=True):
    """Site probabilities along the protocol.

    Returns ``(times, probs)``: ``times`` has ``1 + N*samples_per_interval``
    entries starting at 0, and ``probs[i]`` holds the 2N site probabilities
    at ``times[i]``.  Each interval is sampled uniformly, its end point
    included; pulses fire at interval boundaries (they do not change site
    probabilities, only subsequent dynamics).
    """
    if int(samples_per_interval) != samples_per_interval or samples_per_interval < 1:
        raise ValueError("samples_per_interval must be a positive integer")
    s = int(samples_per_interval)
    J = np.asarray(couplings, dtype=float)
    t = np.asarray(intervals, dtype=float)
    n = J.size
    if t.shape != (n,):
        raise ValueError(f"need {n} intervals, got shape {t.shape}")
    psi = basis_state(1, n) if initial is None else check_state(initial, n).copy()
    U = SpectralPropagator(build_network_hamiltonian(J))

    times = [0.0]
    probs = [np.abs(psi) ** 2]
    clock = 0.0
    for k in range(1, n + 1):
        step = t[k - 1] / s
        for j in range(1, s + 1):
            times.append(clock + j * step)
            probs.append(np.abs(U.apply(psi, j * step)) ** 2)
        psi = U.apply(psi, t[k - 1])
        clock += t[k - 1]
        if pulses and k < n:
            psi[_pulse_index(k)] *= -1
    return np.array(times), np.array(probs)


def fidelity(a, b):
    """``|<a|b>|^2``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(abs(np.vdot(a, b)) ** 2)
