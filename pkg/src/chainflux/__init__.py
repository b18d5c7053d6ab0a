"""Heat flux of R/L mover steady states in quasifree fermionic chains."""
from .config import fixture, load_model
from .errors import (
    ChainFluxError,
    ConfigTooSmall,
    CustomOutOfRange,
    EigenNotConverged,
    IdenticallyZero,
    InadmissibleCase,
    InvalidModel,
    IsingPoint,
    NonCommuting,
    NotGaugeInvariant,
    OddDimension,
    QuadratureNotConverged,
    TooLarge,
    WindowTooShort,
)
from .fermi import FermiSpec
from .flux import (
    FluxReport,
    entropy_lower_bound,
    flux_sweep,
    heat_flux,
    heat_flux_gauge,
    heat_flux_xy,
    mu_identity_check,
)
from .kernels import BACKEND
from .model import ModelSpec, case_id, classify, pauli_symbol, position_symbol, spectrum
from .oracle import LatticeConfig, ness_flux
from .pfaffian import SkewMatrix, pfaffian, pfaffian_reference, quasifree_correlator
from .spectral import eigenvalue_functions, rl_density, sign_velocity, velocity
from .trigpoly import TrigPoly

__all__ = [
    "BACKEND", "ChainFluxError", "ConfigTooSmall", "CustomOutOfRange", "EigenNotConverged",
    "FermiSpec", "FluxReport", "IdenticallyZero", "InadmissibleCase", "InvalidModel", "IsingPoint",
    "LatticeConfig", "ModelSpec", "NonCommuting", "NotGaugeInvariant", "OddDimension",
    "QuadratureNotConverged", "SkewMatrix", "TooLarge", "TrigPoly", "WindowTooShort",
    "case_id", "classify", "eigenvalue_functions", "entropy_lower_bound", "fixture", "flux_sweep",
    "heat_flux", "heat_flux_gauge", "heat_flux_xy", "load_model", "mu_identity_check", "ness_flux",
    "pauli_symbol", "pfaffian", "pfaffian_reference", "position_symbol", "quasifree_correlator",
    "rl_density", "sign_velocity", "spectrum", "velocity",
]
