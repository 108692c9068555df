"""Rotationally symmetric smooth metric measure spaces and their hypotheses."""

from .builtins import BUILTINS, builtin, builtin_names
from .certificates import CurvatureCertificate, verify_bound
from .core import (RotSymSpace, SpaceError, area_density_f, ball_volumes, direction_nodes,
                   mean_curvature, mean_curvature_f, ric_f_N_radial, ric_f_radial, ric_radial,
                   vol_f)
from .generator import GENERATOR_MODES, GenerationFailure, generate_space
from .profiles import DirectionalWeight, RadialProfile, constant, from_expression, from_knots

__all__ = [
    "BUILTINS", "builtin", "builtin_names", "CurvatureCertificate", "verify_bound",
    "RotSymSpace", "SpaceError", "area_density_f", "ball_volumes", "direction_nodes",
    "mean_curvature", "mean_curvature_f", "ric_f_N_radial", "ric_f_radial", "ric_radial",
    "vol_f", "GENERATOR_MODES", "GenerationFailure", "generate_space", "DirectionalWeight",
    "RadialProfile", "constant", "from_expression", "from_knots",
]
