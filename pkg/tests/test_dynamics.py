import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from spinforge.chain_model import build_network_hamiltonian, virtual_basis_transform
from spinforge.dynamics import (evolve_virtual_closed_form, expm_symmetric, fidelity, propagate_full,
                                sample_evolution, two_site_rotation)
from spinforge.pipeline import synthesize
from spinforge.states import random_profile, w_state_profile
from spinforge.synthesis import Schedule, site_to_virtual_probabilities, solve_schedule


def rand_state(rng, dim):
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return psi / np.linalg.norm(psi)


def test_two_site_rotation():
    assert two_site_rotation(1.3, 0.0, (0.6, 0.8j)) == (0.6, 0.8j)
    a, b = two_site_rotation(1.0, np.pi / 2, (1.0, 0.0))
    assert abs(a) < 1e-16 and abs(b + 1j) < 1e-16
    rng = np.random.default_rng(1)
    for _ in range(20):
        v = rand_state(rng, 2)
        out = np.array(two_site_rotation(rng.normal(), rng.normal(), v))
        assert abs(np.linalg.norm(out) - 1) < 1e-14


def test_expm_identity_and_two_site():
    H = build_network_hamiltonian([0.8])
    np.testing.assert_allclose(expm_symmetric(H, 0.0), np.eye(2), atol=1e-15)
    t = 0.37
    c, s = np.cos(1.6 * t), np.sin(1.6 * t)
    np.testing.assert_allclose(expm_symmetric(H, t), [[c, -1j * s], [-1j * s, c]], atol=1e-15)


@pytest.mark.parametrize("seed", range(5))
def test_expm_matches_scipy(seed):
    rng = np.random.default_rng(seed)
    M = rng.normal(size=(12, 12))
    H = M + M.T
    t = rng.uniform(-3, 3)
    U = expm_symmetric(H, t)
    np.testing.assert_allclose(U, scipy.linalg.expm(-1j * H * t), atol=1e-11)
    np.testing.assert_allclose(U @ U.conj().T, np.eye(12), atol=1e-12)


def test_expm_rejects_asymmetric():
    with pytest.raises(ValueError):
        expm_symmetric(np.array([[0.0, 1.0], [0.0, 0.0]]), 1.0)


def test_closed_form_w2():
    psi = evolve_virtual_closed_form(synthesize(w_state_profile(2)))
    np.testing.assert_allclose(psi, [0, -1j / np.sqrt(2), 0, -1 / np.sqrt(2)], atol=1e-15)


def test_single_chain_transfer():
    # q = (0, 1): 2 J1 t1 = 3 pi / 2 puts the excitation on site 2 as +i
    s = solve_schedule(np.array([0.0, 1.0]), 1.0)
    assert np.isclose(2 * s.couplings[0] * s.intervals[0], 1.5 * np.pi, rtol=1e-15)
    for psi in (evolve_virtual_closed_form(s), propagate_full(s.couplings, s.intervals)):
        np.testing.assert_allclose(psi, [0, 1j], atol=1e-15)


def test_zero_time_schedule_is_identity():
    n = 4
    s = Schedule(np.ones(n), np.zeros(n), np.zeros(n + 1), np.zeros(2 * n), 1.0)
    e1 = np.eye(2 * n)[0]
    np.testing.assert_allclose(evolve_virtual_closed_form(s), e1, atol=0)
    np.testing.assert_allclose(propagate_full(s.couplings, s.intervals), e1, atol=1e-15)
    rng = np.random.default_rng(0)
    psi = rand_state(rng, 2 * n)
    out = propagate_full(s.couplings, s.intervals, initial=psi, pulses=False)
    np.testing.assert_allclose(out, psi, atol=1e-15)


def dense_oracle(J, t):
    """Dense product of scipy expm and explicit Z matrices, no shared kernel."""
    n = len(J)
    H = build_network_hamiltonian(J)
    psi = np.zeros(2 * n, complex)
    psi[0] = 1
    for k in range(n):
        psi = scipy.linalg.expm(-1j * H * t[k]) @ psi
        if k < n - 1:
            Z = np.eye(2 * n)
            Z[2 * k + 2, 2 * k + 2] = -1
            psi = Z @ psi
    return psi


@pytest.mark.parametrize("seed", range(6))
def test_engines_agree_with_scipy_oracle(seed):
    n = 2 + seed
    s = synthesize(random_profile(n, seed))
    ref = dense_oracle(s.couplings, s.intervals)
    np.testing.assert_allclose(propagate_full(s.couplings, s.intervals), ref, atol=1e-10)
    np.testing.assert_allclose(evolve_virtual_closed_form(s), ref, atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 25), st.integers(0, 2**31), st.booleans())
def test_engine_equivalence_and_probabilities(n, seed, even_only):
    P = random_profile(n, seed, even_support_only=even_only)
    s = solve_schedule(site_to_virtual_probabilities(P))
    closed = evolve_virtual_closed_form(s)
    dense = propagate_full(s.couplings, s.intervals)
    assert np.max(np.abs(closed - dense)) <= 1e-9
    np.testing.assert_allclose(np.abs(dense) ** 2, P, atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(0.1, 5.0), min_size=2, max_size=12), st.integers(0, 2**31))
def test_unitarity(J, seed):
    rng = np.random.default_rng(seed)
    t = rng.uniform(0, 10, len(J))
    psi = rand_state(rng, 2 * len(J))
    out = propagate_full(J, t, initial=psi)
    assert abs(np.linalg.norm(out) - 1) < 1e-12


def test_block_confinement_without_pulses():
    rng = np.random.default_rng(3)
    J = rng.uniform(0.5, 2, 6)
    t = rng.uniform(0, 3, 6)
    psi = propagate_full(J, t, pulses=False)
    virt = virtual_basis_transform(6) @ psi
    assert np.max(np.abs(psi[3:])) < 1e-12
    assert np.max(np.abs(virt[2:])) < 1e-12


def test_fidelity():
    e1, e2 = np.eye(2)
    assert fidelity(e1, e1) == 1.0
    assert fidelity(e1, e2) == 0.0
    assert fidelity(e1, (e1 + e2) / np.sqrt(2)) == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(ValueError):
        fidelity(e1, np.ones(3))


def test_sample_evolution():
    s = synthesize(w_state_profile(2))
    times, probs = sample_evolution(s.couplings, s.intervals, 1)
    np.testing.assert_allclose(times, [0, s.intervals[0], s.intervals.sum()])
    np.testing.assert_allclose(probs[-1], [0, 0.5, 0, 0.5], atol=1e-12)
    end = propagate_full(s.couplings, s.intervals)
    np.testing.assert_allclose(probs[-1], np.abs(end) ** 2, atol=1e-14)

    times, probs = sample_evolution(s.couplings, s.intervals, 25)
    assert times.shape == (51,) and probs.shape == (51, 4)
    np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-10)
    with pytest.raises(ValueError):
        sample_evolution(s.couplings, s.intervals, 0)


def test_sample_evolution_midpoints_match_dense():
    s = synthesize(random_profile(4, 11))
    times, probs = sample_evolution(s.couplings, s.intervals, 2)
    # row 3: after interval 1, the Z_3 pulse and half of interval 2
    H = build_network_hamiltonian(s.couplings)
    psi = scipy.linalg.expm(-1j * H * s.intervals[0]) @ np.eye(8)[0]
    psi[2] *= -1
    psi = scipy.linalg.expm(-1j * H * 0.5 * s.intervals[1]) @ psi
    np.testing.assert_allclose(probs[3], np.abs(psi) ** 2, atol=1e-12)
