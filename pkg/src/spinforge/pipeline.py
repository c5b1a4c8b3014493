"""Profile -> schedule -> verified state, glued together."""

import numpy as np

from .chain_model import check_state
from .dynamics import evolve_virtual_closed_form, fidelity, propagate_full
from .synthesis import (apply_phases, check_profile, phase_corrections, site_to_virtual_probabilities,
                        solve_schedule)


def synthesize(profile, j1=1.0, target=None):
    """Schedule (phase layer included) that prepares ``target`` from ``|1>``.

    ``target`` defaults to the nonnegative real amplitudes ``sqrt(profile)``;
    if given, its magnitudes must match ``sqrt(profile)``.
    """
    P = check_profile(profile)
    schedule = solve_schedule(site_to_virtual_probabilities(P), j1)
    target = np.sqrt(P) + 0j if target is None else check_state(target, P.size // 2, atol=1e-10)
    generated = evolve_virtual_closed_form(schedule)
    return schedule.with_phases(phase_corrections(target, generated))


def prepared_state(schedule, engine="dense"):
    """State after the full protocol including the final phase layer."""
    if engine == "dense":
        psi = propagate_full(schedule.couplings, schedule.intervals)
    elif engine == "closed":
        psi = evolve_virtual_closed_form(schedule)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    return apply_phases(psi, schedule.phases)


def verify_schedule(schedule, target=None):
    """Run both engines and compare them and the result to ``target``.

    Without a target the reference is ``sqrt`` of the closed-form
    probabilities, which checks the dense engine together with the phase layer.
    """
    closed = evolve_virtual_closed_form(schedule)
    dense = propagate_full(schedule.couplings, schedule.intervals)
    probs = np.abs(dense) ** 2
    if target is None:
        target = np.sqrt(np.abs(closed) ** 2) + 0j
    target = np.asarray(target, dtype=complex)
    return {
        "engine_deviation": float(np.max(np.abs(closed - dense))),
        "fidelity": fidelity(target, apply_phases(dense, schedule.phases)),
        "probabilities": probs,
        "target_probabilities": np.abs(target) ** 2,
    }
