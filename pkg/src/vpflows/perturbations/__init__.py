"""Explicit perturbation constructions with certificates."""

from .certified import CertificateError, CertifiedField, Clause
from .corrector import CorrectorDomainError, SeparableBump3D, box_bump, helicity_corrector
from .franks import FranksField, FranksInput, Mollifier, franks_local_field, franks_mollifier
from .lift import LiftConstructionError, LiftField, lift_axiom_field
from .shift import (GramSingularityError, HelicityScan, L2BumpSolution, delta_helicity_scan,
                    l2_bump_pair, null_bump_triple, ruelle_shift_family)

__all__ = [
    "CertificateError", "CertifiedField", "Clause", "CorrectorDomainError", "FranksField", "FranksInput",
    "GramSingularityError", "HelicityScan", "L2BumpSolution", "LiftConstructionError", "LiftField",
    "Mollifier", "SeparableBump3D", "box_bump", "delta_helicity_scan", "franks_local_field",
    "franks_mollifier", "helicity_corrector", "l2_bump_pair", "lift_axiom_field", "null_bump_triple",
    "ruelle_shift_family",
]
