"""Exception hierarchy shared by all modules."""


class WeylScatterError(Exception):
    """Base class for every error raised by the package."""


class ConfigurationError(WeylScatterError, ValueError):
    pass


# linear algebra
class NonHermitianInput(WeylScatterError, ValueError):
    pass


class IndefiniteInput(WeylScatterError, ValueError):
    pass


class SingularMatrix(WeylScatterError, ArithmeticError):
    pass


class ConvergenceFailure(WeylScatterError, ArithmeticError):
    pass


class NonFiniteInput(WeylScatterError, ValueError):
    pass


# special functions
class DomainError(WeylScatterError, ValueError):
    pass


class OrderCapExceeded(WeylScatterError, ValueError):
    pass


# Weyl functions and boundary values
class UnsupportedBoundaryPoint(WeylScatterError, ValueError):
    pass


class ModelDomainError(WeylScatterError, ValueError):
    pass


class ExclusionSetHit(ModelDomainError):
    pass


class ExtrapolationDiverged(WeylScatterError, ArithmeticError):
    pass


class RankAmbiguous(WeylScatterError, UserWarning):
    """Eigenvalue of Im M close to the rank threshold.  Reported, not raised."""


# scattering matrix
class SingularWeylValue(SingularMatrix):
    pass


class IndefiniteImPart(IndefiniteInput):
    pass


class SingularRobinPencil(SingularMatrix):
    pass


class NonUnitarySample(WeylScatterError, ValueError):
    pass


# verification modules
class ResolventUnavailable(WeylScatterError, NotImplementedError):
    pass


class ModelNotDiagonal(WeylScatterError, ValueError):
    pass


class OracleUnavailable(WeylScatterError, NotImplementedError):
    pass


class TruncationTooSmall(WeylScatterError, ArithmeticError):
    pass


class FactorizationResidual(WeylScatterError, ArithmeticError):
    pass
