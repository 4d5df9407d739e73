"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class CavityError(Exception):
    exit_code = 3


class ConfigError(CavityError, ValueError):
    exit_code = 2


class SingularConfig(CavityError, ValueError):
    """Cavity geometry with L <= |dL| (one sub-cavity has non-positive length)."""
    exit_code = 2


class SingularDenominator(CavityError, ZeroDivisionError):
    """Characteristic evaluated at the pole k^2 chi + i k chi_dot - v = 0."""


class BracketingFailure(CavityError):
    pass


class NoConvergence(CavityError):
    pass


class DegenerateRoot(CavityError):
    pass


class NearDegenerate(CavityError):
    pass


class OutOfDomain(CavityError, ValueError):
    pass


class StepFailure(CavityError):
    pass


class ZeroSensitivity(CavityError):
    pass


class MixedDriveUnsupported(CavityError):
    pass


class Unachievable(CavityError):
    pass


class NegativeEffectiveV(CavityError):
    pass


class FitDiverged(CavityError):
    exit_code = 4
