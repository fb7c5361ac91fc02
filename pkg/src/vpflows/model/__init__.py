"""Model objects: profiles, toric flow tubes, flow boxes, trigonometric fields and suspensions."""

from .fields import CatSuspension, FlowBoxField, Trig2D, TrigField3T, abc_sine_field
from .io import ModelParseError, load_model, model_from_dict
from .profiles import (BasisOverflowError, BumpCombination, BumpProfile1D, PerturbedProfile,
                       PlateauBump1D, ScalarProfile1D, antiderivative, primitive)
from .tube import TubeError, TubeProfile


def tube_boundary_class_set(tp: TubeProfile) -> tuple[float, float]:
    """Translation vector ``(int G, -int F)`` so that the class set is ``{z (+) (z + c)}``."""
    return (tp.integral_G(), -tp.integral_F())


__all__ = [
    "BasisOverflowError", "BumpCombination", "BumpProfile1D", "CatSuspension", "FlowBoxField",
    "ModelParseError", "PerturbedProfile", "PlateauBump1D", "ScalarProfile1D", "Trig2D",
    "TrigField3T", "TubeError", "TubeProfile", "abc_sine_field", "antiderivative", "load_model",
    "model_from_dict", "primitive", "tube_boundary_class_set",
]
