"""
Which Lawlor families are Lagrangian for Fubini-Study?
======================================================

Every Lawlor family is Lagrangian for the flat form. For the Fubini-Study
form this survives only when all parameters ``a_j`` are equal. The sweep
below samples the unit sphere and a grid of ``s`` and reports the
normalized residual ``|omega(V_i, V_j)| / (|V_i| |V_j|)``.
"""

from speclag.verify import theorem_sweep

grid = [(1, 1), (1, 1.25), (1, 1.5), (1, 2), (2, 2)]
for row in theorem_sweep(2, grid, sigma_count=100, seed=1):
    print(
        f"a = {row.a}:  flat {row.standard.max_residual:.1e}"
        f"   Fubini-Study {row.fubini_study.max_residual:.1e}   -> {row.fs_class}"
    )

##############################################################################
# The same holds in three dimensions.

for row in theorem_sweep(3, [(0.5, 0.5, 0.5), (0.5, 1, 3)], sigma_count=100, seed=1):
    print(f"a = {row.a}:  Fubini-Study {row.fubini_study.max_residual:.1e} -> {row.fs_class}")
