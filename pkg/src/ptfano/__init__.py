"""Scattering on tight-binding chains with side-coupled non-Hermitian defects."""

from .analytic import (
    EffectivePotential,
    FanoParameters,
    ResonanceSet,
    ScatteringSolution,
    amplitudes,
    amplitudes_a,
    amplitudes_b,
    amplitudes_c,
    effective_potential,
    effective_potential_a,
    effective_potential_b,
    effective_potential_c,
    fano_double,
    fano_formula,
    fano_single,
    resonances,
    resonances_a,
    resonances_b,
    reflection_b_pt,
    transmission_b_pt,
)
from .compare import CompareReport, compare
from .errors import (
    InvalidModelError,
    OutOfBandError,
    PoleError,
    ScatteringError,
    SingularSystemError,
    UnsupportedAnalysisError,
)
from .model import (
    ChainLead,
    DefectBlock,
    PTSymmetryReport,
    ScatteringModel,
    build_generic,
    build_model_a,
    build_model_b,
    build_model_b_pt,
    build_model_c,
    check_pt_symmetry,
    wavenumber,
    with_param,
)
from .oracle import OracleSolution, assemble, solve_scattering
from .sweep import SweepResult, SweepSpec, conservation_audit, detect_phase_jumps, run_sweep, run_sweep_axis

__version__ = "0.1.0"
