"""Local functionals: S from hyperbolic zeros, P_min from shortest periodic orbits."""

from .core import (MinPeriod, NonHyperbolicError, PartialResultError, SValue, ZeroRecord, cubic_roots,
                   eigenvalues, find_zeros, min_period, s_functional)

__all__ = ["MinPeriod", "NonHyperbolicError", "PartialResultError", "SValue", "ZeroRecord", "cubic_roots",
           "eigenvalues", "find_zeros", "min_period", "s_functional"]
