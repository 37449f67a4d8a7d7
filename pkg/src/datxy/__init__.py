"""Anisotropic XY chain with DM interaction in uniform and alternating
transverse fields: spectra, correlators, order parameters, entanglement,
phase boundaries, quench dynamics, and an exact-diagonalization oracle."""

__version__ = "0.1.0"

from .correlators import CorrelatorSet, wick_czz
from .errors import (DatxyError, DomainError, EmptyWindow, NonConvergence,
                     NotAState, ResourceLimit, UnclassifiedPoint)
from .params import ModelParams, QuadratureSpec, Regime, classify_regime
from .quadrature import integrate, integrate_vec
from .uniform import (DispersionPoint, RootPair, root_pair, spectrum_uniform,
                      thermal_correlators_uniform, zero_T_correlators_uniform)
from .blocks import (MomentumBlockSet, bdg_bands, bdg_matrix, build_blocks,
                     min_gap, momentum_fock_hamiltonian, thermal_correlators_alt)
from .rdm import (assemble_rdm, equilibrium_correlators, equilibrium_ln,
                  ent_derivative, factorization_scan, log_negativity,
                  negativity, partial_transpose, thermal_monotonicity,
                  Monotonicity)
from .order import (Phase, PhaseLabel, Thresholds, chiral_order,
                    chiral_order_closed_form, classify_point, pm_discriminator,
                    staggered_mx, staggered_mx_ladder)
from .quench import (ErgodicityVerdict, QuenchSpec, TimeTrace, ergodicity_verdict,
                     evolve, evolve_alt, evolve_uniform, kernels,
                     time_averaged_ln)
from .scans import Axis, ScanGrid
from .ed import SpinChainED, ed_quench, ed_thermal_correlators

__all__ = [
    "CorrelatorSet", "wick_czz",
    "DatxyError", "DomainError", "EmptyWindow", "NonConvergence", "NotAState",
    "ResourceLimit", "UnclassifiedPoint",
    "ModelParams", "QuadratureSpec", "Regime", "classify_regime",
    "integrate", "integrate_vec",
    "DispersionPoint", "RootPair", "root_pair", "spectrum_uniform",
    "thermal_correlators_uniform", "zero_T_correlators_uniform",
    "MomentumBlockSet", "bdg_bands", "bdg_matrix", "build_blocks", "min_gap",
    "momentum_fock_hamiltonian", "thermal_correlators_alt",
    "assemble_rdm", "equilibrium_correlators", "equilibrium_ln",
    "ent_derivative", "factorization_scan", "log_negativity", "negativity",
    "partial_transpose", "thermal_monotonicity", "Monotonicity",
    "Phase", "PhaseLabel", "Thresholds", "chiral_order",
    "chiral_order_closed_form", "classify_point", "pm_discriminator",
    "staggered_mx", "staggered_mx_ladder",
    "ErgodicityVerdict", "QuenchSpec", "TimeTrace", "ergodicity_verdict",
    "evolve", "evolve_alt", "evolve_uniform", "kernels", "time_averaged_ln",
    "Axis", "ScanGrid",
    "SpinChainED", "ed_quench", "ed_thermal_correlators",
]
