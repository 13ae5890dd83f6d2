"""
Symplectic forms on C^n
=======================

The flat form and the Fubini-Study form in the affine chart, evaluated on
random tangent vectors at a random base point.
"""

import numpy as np

from speclag.forms import conformal_factor, fs_hermitian_matrix, kahler_potential_scale, omega_fs, omega_st

rng = np.random.default_rng(0)
z, u, v = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))

##############################################################################
# Both forms are antisymmetric. Near the origin the Fubini-Study form agrees
# with the flat one, far away it is damped by ``1 / (1 + |z|^2)``.

print("omega_st(u, v)        ", omega_st(u, v))
print("omega_st(v, u)        ", omega_st(v, u))
print("omega_fs at z         ", omega_fs(z, u, v))
print("omega_fs at 1e-8 * z  ", omega_fs(1e-8 * z, u, v))

##############################################################################
# The Hermitian matrix of the metric has determinant ``(1 + |z|^2)^-(n+1)``,
# which fixes the conformal factor ``c = det(h)^(-1/n)``.

h = fs_hermitian_matrix(z)
K = kahler_potential_scale(z)
print("det h * K^3           ", np.linalg.det(h).real * K**3)
print("conformal factor      ", conformal_factor(z), "=", K**1.5)
