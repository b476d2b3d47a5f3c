"""Error types shared across the package.

Every failure mode is loud: operations that would silently lose exactness
raise instead of truncating or rounding.
"""


class BraneGaugeError(Exception):
    """Base class for all package-specific errors."""


class DegreeOverflow(BraneGaugeError):
    """An exact polynomial operation would exceed the truncation degree."""


class DegreeMismatch(BraneGaugeError):
    """Pairing or addition of exterior forms of incompatible degree."""


class SizeMismatch(BraneGaugeError):
    """Dimension-incompatible matrices, vectors or permutations."""


class NotASplitting(BraneGaugeError):
    """A candidate jet morphism does not split the projection."""


class RankJump(BraneGaugeError):
    """Differential ranks vary across evaluation points; cohomology is not
    locally free in the evaluated model."""


class NotCompatible(BraneGaugeError):
    """A connection family or chain map fails its intertwining identity."""


class ToleranceUnreachable(BraneGaugeError):
    """No Newton start converged for a nonzero gradient system."""


class UnknownLabel(BraneGaugeError):
    """A generator label is not present in the strata catalog."""


class ObstructedBrane(BraneGaugeError):
    """The gauge-field linear system is inconsistent: the obstruction class
    of the complex does not vanish in the model."""


class ModelParseError(BraneGaugeError):
    """A model file or polynomial string failed validation.

    Carries a human-readable pointer to the offending location.
    """

    def __init__(self, message, location=None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)
