class DimensionError(ValueError):
    """Requested basis or matrix exceeds a configured size cap."""


class NormalizationError(ValueError):
    """State vector is not normalized to the required tolerance."""


class ParityError(ValueError):
    """Pairing construction needs even M and N."""


class HermiticityError(ValueError):
    """Matrix deviates from Hermitian beyond tolerance."""


class TraceNormalizationError(ValueError):
    """Density matrix does not have unit trace."""


class TheoremViolation(RuntimeError):
    """An optimizer found a state beating a proven bound.

    This can only mean a bug (or a counterexample); ``report`` carries
    the offending result so it can be written out before aborting.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
