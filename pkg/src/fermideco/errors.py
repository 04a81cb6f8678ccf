"""Exception types raised by fermideco."""


class FermidecoError(Exception):
    """Base class for all library errors."""


class ZeroNorm(FermidecoError, ValueError):
    """Amplitude vector has (numerically) zero norm."""


class BadLength(FermidecoError, ValueError):
    """Amplitude vector does not have exactly six entries."""


class NonPhysical(FermidecoError, ValueError):
    """Matrix is not a valid density matrix (non-Hermitian, trace != 1 or not PSD)."""


class QuadratureFailure(FermidecoError, RuntimeError):
    """Requested quadrature tolerance could not be reached within the evaluation budget."""


class ZeroInitialEntanglement(FermidecoError, ValueError):
    """Persistence ratio requested for a state with vanishing initial concurrence."""


class BadProbability(FermidecoError, ValueError):
    """Damping probability outside [0, 1]."""


class MalformedStateFile(FermidecoError, ValueError):
    """State JSON document does not follow the expected schema."""
