"""Restricted isometry constant bounds, SRSR thresholds and desk-scale validation."""

__version__ = "0.1.0"

from .core_math import CONSTANTS, GAMMA0, RHO0, TAU0  # noqa: E402
from .rates import GrowthPoint, RateKind, RateModel  # noqa: E402

__all__ = ["CONSTANTS", "GAMMA0", "RHO0", "TAU0", "GrowthPoint", "RateKind", "RateModel", "__version__"]
