"""Entropy of toral-automorphism suspension flows via periodic-orbit pressure."""

from .checks import (DerivativeReport, OriginBump, VarianceEstimate, entropy_derivative_check,
                     variance_estimate)
from .core import (BracketError, CountCapError, EntropyResult, PeriodicPointSet, birkhoff_sums,
                   entropy_from_sums, entropy_suspension, fixed_point_count, periodic_points, pressure,
                   torus_mean)

__all__ = [
    "BracketError", "CountCapError", "DerivativeReport", "EntropyResult", "OriginBump", "PeriodicPointSet",
    "VarianceEstimate", "birkhoff_sums", "entropy_derivative_check", "entropy_from_sums",
    "entropy_suspension", "fixed_point_count", "periodic_points", "pressure", "torus_mean",
    "variance_estimate",
]
