"""Exception types raised across the package."""


class ChainFluxError(Exception):
    """Base class for all package errors."""


class IdenticallyZero(ChainFluxError):
    """A trigonometric polynomial with all coefficients zero was given where roots are needed."""


class InvalidModel(ChainFluxError, ValueError):
    """Model coefficients violate the construction invariants."""


class InadmissibleCase(ChainFluxError):
    """The model's velocity operator has zero in its spectrum; the R/L construction does not apply."""

    def __init__(self, case_id: int, message: str | None = None):
        self.case_id = case_id
        super().__init__(message or inadmissible_diagnosis(case_id))


class NotGaugeInvariant(ChainFluxError):
    """The gauge-invariant flux formula was requested for a model with u0 != 0."""


class IsingPoint(ChainFluxError):
    """XY closed form requested at (gamma, h) = (+-1/2, 0), where the spectrum is flat."""


class CustomOutOfRange(ChainFluxError, ValueError):
    """A custom Fermi odd part returned |mu(x)| > 1."""


class QuadratureNotConverged(ChainFluxError):
    """Adaptive quadrature failed to meet the requested tolerance."""


class OddDimension(ChainFluxError, ValueError):
    """Pfaffian of an odd-dimensional skew matrix."""


class TooLarge(ChainFluxError, ValueError):
    """Exhaustive pairing enumeration requested beyond its size limit."""


class ConfigTooSmall(ChainFluxError, ValueError):
    """Lattice half-width too small for exact truncation of the coupling."""


class NonCommuting(ChainFluxError):
    """Decoupled Hamiltonian and inverse-temperature operator fail to commute."""


class WindowTooShort(ChainFluxError, ValueError):
    """Time-averaging window too short relative to the maximal group velocity."""


class EigenNotConverged(ChainFluxError):
    """Jacobi sweeps exhausted before the off-diagonal norm reached tolerance."""


def inadmissible_diagnosis(case_id: int) -> str:
    if case_id == 1:
        return ("Case 1: both bands are flat, the asymptotic velocity vanishes "
                "identically (0 in eig(V)); no R/L mover flux")
    if case_id == 6:
        return ("Case 6: u0^2 = |u|^2, one band is pinned at 0 on a set of positive "
                "measure (0 in eig(V)); no R/L mover flux")
    return f"Case {case_id}: inadmissible"
