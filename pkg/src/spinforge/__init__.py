"""Exact state generation on a quasi-1D XX spin network.

A single excitation starting on site 1 is steered into any target
single-excitation state by engineered couplings and timed Z pulses.
"""

__version__ = "0.1.0"

from .chain_model import (build_network_hamiltonian, pulse_operator, virtual_basis_transform,
                          virtual_blocks)
from .dynamics import (SpectralPropagator, evolve_virtual_closed_form, expm_symmetric, fidelity,
                       propagate_full, sample_evolution, two_site_rotation)
from .pipeline import prepared_state, synthesize, verify_schedule
from .sensitivity import (FidelityCurve, SensitivityReport, fidelity_curve, make_grid, perturbed_schedule,
                          scaling_analysis, tolerance_threshold)
from .states import custom_profile_from_file, gaussian_state_profile, random_profile, w_state_profile
from .synthesis import (Schedule, SynthesisError, VirtualProfile, coupling_bounds_check,
                        phase_corrections, residual_weights, site_to_virtual_probabilities,
                        solve_schedule, virtual_to_site_probabilities)
