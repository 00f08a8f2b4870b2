"""Exception types raised across the package."""


class ParameterError(ValueError):
    """Invalid physical or numerical parameter."""


class OverdampedError(ParameterError):
    """Damping rate at or above the natural frequency; no real reduced frequency exists."""


class StabilityRangeError(ValueError):
    """Polynomial order or index outside the supported range."""


class GridResolutionError(ValueError):
    """Grid too narrow or too coarse for the requested state."""

    def __init__(self, bound: str, required: float, actual: float):
        self.bound = bound
        self.required = required
        self.actual = actual
        super().__init__(f"grid violates {bound}: required {required:.6g}, got {actual:.6g}")


class BranchError(ValueError):
    """Fresnel parameters fall on a branch the requested construction does not cover."""


class DegenerateParameterError(ValueError):
    """Fresnel parameters make a denominator vanish."""


class ConfigurationError(ValueError):
    """Propagation plan or run configuration is inconsistent."""


class TruncatedSupportError(ValueError):
    """Sampled function does not decay inside the window it is sampled on."""


class ShapeError(ValueError):
    """Arrays live on incompatible grids."""
