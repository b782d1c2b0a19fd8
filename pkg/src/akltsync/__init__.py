"""Dissipative synchronization of fractionalized edge spins in open spin-1
AKLT/Haldane chains: exact operator algebra, Lindblad evolution, Liouvillian
spectra, stochastic-circuit unraveling and cavity adiabatic elimination."""

__version__ = "0.1.0"

from .operators import Operator, embed, inversion_operator, pair_projector_spin2, spin1_local, total_ops
from .model import ChainSpec, DissipatorSpec, build_global_dissipator, build_hamiltonian, build_local_dissipators, symmetry_check
from .manifold import GroundManifold, compute_manifold, edge_profile, symmetry_operator_A
from .lindblad import (
    EvolveOptions,
    LindbladModel,
    SpectrumOptions,
    apply_liouvillian,
    delta_m_blocks,
    evolve,
    overlap_coefficients,
    random_pure_state,
    spectrum_near_axis,
)
from .sync import anti_sync_error, build_sync_report, fit_frequency, inversion_parity_check, long_time_prediction, verify_dynamical_symmetry
from .circuit import CircuitSpec, build_ha, measure_and_reset, run_ensemble, run_trajectory, trotter_step
from .cavity import CavityModel, adiabatic_comparison, build_cavity_model

__all__ = [name for name in dir() if not name.startswith("_")]
