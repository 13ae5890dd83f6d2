"""
Lawlor profile curves
=====================

Each Lawlor coordinate is ``x_j r_j(s) exp(i phi_j(s))``. The phase is an
improper-looking integral whose integrand is smooth at zero; for
``a = (1, 1)`` it has the closed form ``arctan(s / sqrt(s^2 + 2))``.
"""

import numpy as np

from speclag.families import LawlorFamily, lawlor_phi

fam = LawlorFamily([1.0, 1.0])
s = np.linspace(-3, 3, 7)

##############################################################################
# Quadrature against the closed form.

numeric = lawlor_phi(fam, 0, s)
exact = np.arctan(s / np.sqrt(s**2 + 2))
for si, a, b in zip(s, numeric, exact):
    print(f"s = {si:+.1f}   phi = {a:+.15f}   closed form = {b:+.15f}")
print("phi(1) - pi/6 =", lawlor_phi(fam, 0, 1.0) - np.pi / 6)

##############################################################################
# With unequal parameters the phases separate, and the moduli ``r_j`` differ.

pv = LawlorFamily([0.5, 3.0]).profiles(np.array([0.0, 1.0, 2.0]))
print("r  :\n", pv.r)
print("phi:\n", pv.phi)
