"""Helicity and Ruelle invariant computations."""

from .forms import WedgeTerm, permutation_sign, wedge
from .helicity import (HelicityResult, class_dependence, helicity_class_consistency,
                       helicity_integral, helicity_tube_wedge)
from .ruelle import (CocyclePath, CocycleState, RuelleEstimate, UnwrapError, cocycle_from_matrices,
                     cocycle_integrate, cocycle_integrate_generator, rotation_per_time,
                     ruelle_numeric, ruelle_tube_closed, tube_rotation_rates)

__all__ = [
    "CocyclePath", "CocycleState", "HelicityResult", "RuelleEstimate", "UnwrapError", "WedgeTerm",
    "class_dependence", "cocycle_from_matrices", "cocycle_integrate", "cocycle_integrate_generator",
    "helicity_class_consistency", "helicity_integral", "helicity_tube_wedge", "permutation_sign",
    "rotation_per_time", "ruelle_numeric", "ruelle_tube_closed", "tube_rotation_rates", "wedge",
]
