"""Exception types shared across the package."""


class WeightLabError(Exception):
    """Base class for all domain errors."""


class MalformedVector(WeightLabError):
    """A weight vector's support violates its module's index set."""


class MalformedState(WeightLabError):
    """A tensor state's support violates the admissible (k, l) indices."""


class NotUnitarizable(WeightLabError):
    """Operation requires a unitarizable module and the classification fails."""


class IndexOutOfSupport(WeightLabError):
    """Basis index outside the module's index set."""


class SupportMismatch(WeightLabError):
    """Target module's support is not contained in the tensor product's."""


class OutOfRange(WeightLabError):
    """FE-eigenvalue target outside the admissible scan ranges."""


class OutOfWindow(WeightLabError):
    """Parameters outside the window required by the smooth-vector test."""


class DivergentAtBoundary(WeightLabError):
    """Hypergeometric series diverges on the unit circle."""


class GammaPole(WeightLabError):
    """Hypergeometric lower parameter hits a pole before the series terminates."""


class NotInConfiguration(WeightLabError):
    """Parameters are not in the required special configuration."""
