"""Numerical verification of special Lagrangian families in C^n.

Flat and Fubini-Study Lagrangian residuals, the Lagrangian angle, and a
discrete Laplace-Beltrami study for Lawlor necks and exponential families.
"""

__version__ = "0.1.0"

from .families import CustomFamily, ExponentialFamily, LawlorFamily, ProfileValue  # noqa: E402
from .sigma import sigma_points, sigma_sample, tangent_frame  # noqa: E402
from .verify import (  # noqa: E402
    angle_constancy,
    condition_Im_residual,
    condition_r2_residual,
    det_identity_check,
    lagrangian_angle,
    lagrangian_residual,
    theorem_sweep,
)

__all__ = [
    "CustomFamily",
    "ExponentialFamily",
    "LawlorFamily",
    "ProfileValue",
    "angle_constancy",
    "condition_Im_residual",
    "condition_r2_residual",
    "det_identity_check",
    "lagrangian_angle",
    "lagrangian_residual",
    "sigma_points",
    "sigma_sample",
    "tangent_frame",
    "theorem_sweep",
]
