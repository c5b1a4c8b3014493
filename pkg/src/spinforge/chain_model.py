"""Quasi-1D XX network in the single-excitation sector.

The network has 2N sites arranged as two legs (even and odd sites).  In the
basis ``|i,j±> = (|i> ± |j>)/sqrt(2)`` the hopping Hamiltonian splits into N
independent two-site chains; chain ``k`` couples ``|2k-2,2k-1->`` to
``|2k,2k+1+>`` with strength ``2 J_k``.  The two ends are single sites:
``|0,1-> := |1>`` and ``|2N,2N+1+> := |2N>``.

All public functions speak 1-based site indices.

Note on the boundary couplings: to give the first and last virtual chains the
same off-diagonal ``2 J_k`` as the interior ones, the physical couplings at the
ends are ``sqrt(2) J_1`` and ``sqrt(2) J_N`` (``2 J_1`` when N = 1).
"""

import numpy as np

SQRT2 = np.sqrt(2.0)


def _check_size(n):
    if int(n) != n or n < 1:
        raise ValueError(f"chain size must be a positive integer, got {n!r}")
    return int(n)


def _check_couplings(couplings, n=None):
    J = np.asarray(couplings, dtype=float)
    if J.ndim != 1 or J.size == 0:
        raise ValueError("couplings must be a non-empty 1-d sequence")
    if n is not None and J.size != n:
        raise ValueError(f"expected {n} couplings, got {J.size}")
    if not np.all(np.isfinite(J)) or np.any(J <= 0):
        raise ValueError("all couplings must be finite and positive")
    return J


def build_network_hamiltonian(couplings, n=None):
    """Return the 2N x 2N single-excitation Hamiltonian for ``couplings``.

    ``n`` defaults to ``len(couplings)``; when given it must agree.
    """
    J = _check_couplings(couplings, n)
    N = J.size
    H = np.zeros((2 * N, 2 * N))
    if N == 1:
        H[0, 1] = 2.0 * J[0]
        return H + H.T

    # 0-based: site s lives at index s-1
    H[0, 1] = H[0, 2] = SQRT2 * J[0]
    for k in range(2, N):
        up, down = 2 * k - 3, 2 * k - 2       # sites 2k-2, 2k-1
        left, right = 2 * k - 1, 2 * k        # sites 2k, 2k+1
        H[up, left] = H[up, right] = J[k - 1]
        H[down, left] = H[down, right] = -J[k - 1]
    H[2 * N - 3, 2 * N - 1] = SQRT2 * J[-1]
    H[2 * N - 2, 2 * N - 1] = -SQRT2 * J[-1]
    return H + H.T


def virtual_basis_transform(n):
    """Orthogonal matrix whose rows are the virtual basis vectors.

    Row order: ``|0,1->, |2,3+>, |2,3->, |4,5+>, ..., |2N-2,2N-1->, |2N,2N+1+>``,
    so virtual coordinates ``2k-1`` and ``2k`` (1-based) are the left and
    right ends of chain ``k``.  Site amplitudes ``x`` map to virtual
    amplitudes as ``T @ x``.
    """
    N = _check_size(n)
    T = np.zeros((2 * N, 2 * N))
    T[0, 0] = 1.0
    T[-1, -1] = 1.0
    h = 1.0 / SQRT2
    for k in range(1, N):
        even, odd = 2 * k - 1, 2 * k          # sites 2k, 2k+1
        T[even, even] = T[even, odd] = h       # |2k,2k+1+>
        T[odd, even], T[odd, odd] = h, -h      # |2k,2k+1->
    return T


def pulse_operator(site, n):
    """Z on ``site`` restricted to the single-excitation sector (diagonal)."""
    N = _check_size(n)
    if int(site) != site or not 1 <= site <= 2 * N:
        raise ValueError(f"site must lie in 1..{2 * N}, got {site!r}")
    d = np.ones(2 * N)
    d[int(site) - 1] = -1.0
    return np.diag(d)


def virtual_blocks(couplings):
    """Block-diagonal matrix the network Hamiltonian reduces to in the virtual basis."""
    J = _check_couplings(couplings)
    D = np.zeros((2 * J.size, 2 * J.size))
    for k, Jk in enumerate(J):
        D[2 * k, 2 * k + 1] = D[2 * k + 1, 2 * k] = 2.0 * Jk
    return D


def basis_state(site, n):
    """``|site>`` as a complex vector of length 2N."""
    N = _check_size(n)
    if not 1 <= site <= 2 * N:
        raise ValueError(f"site must lie in 1..{2 * N}, got {site!r}")
    psi = np.zeros(2 * N, dtype=complex)
    psi[site - 1] = 1.0
    return psi


def check_state(psi, n=None, atol=1e-12):
    """Validate a single-excitation state and return it as a complex array."""
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1 or psi.size % 2:
        raise ValueError("state must be a 1-d vector of even length")
    if n is not None and psi.size != 2 * n:
        raise ValueError(f"state has {psi.size} amplitudes, expected {2 * n}")
    norm = np.vdot(psi, psi).real
    if abs(norm - 1.0) > atol:
        raise ValueError(f"state is not normalized (norm^2 = {norm!r})")
    return psi
