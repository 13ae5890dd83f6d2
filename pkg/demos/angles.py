"""
Lagrangian angles
=================

The argument of ``dz_1 ^ ... ^ dz_n`` on an oriented tangent frame. It is
constant (mod pi) on a special Lagrangian and drifts linearly along the
exponential families ``w_j(s) = exp(i (lam_j + C) s)``.
"""

import numpy as np

from speclag.families import ExponentialFamily, LawlorFamily
from speclag.sigma import sigma_sample
from speclag.verify import angle_constancy, angle_slope

s = np.linspace(-2, 2, 41)
psi = np.array([0.3, -1.1])
trace = angle_constancy(LawlorFamily([1.5, 1.5], psi), sigma_sample([1, 1], 1, 100, seed=0), s)
print("Lawlor: fitted phase", trace.fitted_phase, " spread", trace.std_dev)
print("        expected (mod pi):", psi.sum() + np.pi / 2)

##############################################################################
# For ``lam = (1, 2)`` and ``C = 1`` the slope is ``sum(lam_j + C) = 5``.

fam = ExponentialFamily([1.0, 2.0], 1.0)
x = sigma_sample(fam.lam, fam.C, 1, seed=0)[0].x
print("exponential slope:", angle_slope(fam, x, np.linspace(-1, 1, 41)))
