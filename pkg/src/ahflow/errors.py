"""Exception types shared across the package."""


class AhflowError(Exception):
    """Base class for package-specific failures."""


class SeriesKindError(AhflowError, TypeError):
    """Mixed exact/float scalars without explicit promotion."""


class NonInvertibleSeriesError(AhflowError, ValueError):
    """Reciprocal or matrix inverse of a series with vanishing leading term."""


class SubstitutionError(AhflowError, ValueError):
    """Inner series of a composition is not a near-identity reparametrization."""


class TruncationError(AhflowError, LookupError):
    """A coefficient beyond the provable truncation order was requested."""


class StabilityError(AhflowError, RuntimeError):
    """Time integration produced NaN or a non-positive metric component."""


class FitConditioningError(AhflowError, ValueError):
    """Least-squares window too small or ill-conditioned for the requested orders."""


class SchemaError(AhflowError, ValueError):
    """Scenario configuration violates the published schema."""
