"""
Mean curvature under the conformal Fubini-Study metric
======================================================

An equal-parameter Lawlor surface in C^2 is special Lagrangian, so it should
be minimal for ``c g_FS``. We discretize the Laplace-Beltrami operator on a
periodic ``(alpha, s)`` grid and watch the residual under refinement.

Two variants are shown. The componentwise Laplacian of the coordinates is
the mean curvature only in flat space; in a curved ambient metric it misses
the Christoffel term, and it does not converge to zero here. Adding that
term gives the tension field, which converges at second order.
"""

from speclag.families import LawlorFamily
from speclag.meancurv import ParamGrid, convergence_study, laplace_beltrami_residual

equal, unequal = LawlorFamily([1.0, 1.0]), LawlorFamily([1.0, 2.0])

for connection in (False, True):
    label = "tension field" if connection else "componentwise"
    print(label)
    for h, res, order in convergence_study(equal, "conformal-fubini-study", [32, 64, 128], connection=connection):
        print(f"   h = {h:.4f}  residual = {res:.3e}  order = {order}")
    fine = laplace_beltrami_residual(unequal, "conformal-fubini-study", ParamGrid(128, 128), connection=connection)
    print(f"   a = (1, 2) at 128^2: {fine.residual:.3e}")

##############################################################################
# In flat space both variants coincide and converge.

for h, res, order in convergence_study(equal, "flat", [32, 64, 128]):
    print(f"flat  h = {h:.4f}  residual = {res:.3e}  order = {order}")
