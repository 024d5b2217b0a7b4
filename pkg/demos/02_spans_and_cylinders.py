# %% [markdown]
# # Generalized linear spans
#
# The span of a finite set E at a base point p is p + span{x - p}.  It does
# not depend on which point of E is the base, and re-spanning balls of it
# (the higher order spans) never adds anything.

# %%
import numpy as np

from isoext import (
    BasicCylinder, PointSet, Weights, bounding_radius, build_span, cylinder_index_set,
    cylinder_span, gs_power, index_set_finite, index_set_span, subspace_residual,
)
from isoext.generate import isometric

inst, _ = isometric(10, rank=4, points=12, seed=3)
s = inst.sample()
E = s.source_set
S = build_span(E, s.p)
print("rank:", S.rank, " basis orthonormality error:", S.gram_error())

other = build_span(E, E.points[5])
print("change of base point, subspace residual:", subspace_residual(S, other))

# %% [markdown]
# ## Stabilization
# Orders 1, 2, 3, 5 and radii r0, 2 r0, 10 r0 all give the same subspace.

# %%
r0 = bounding_radius(E, s.p).radius
for order in (1, 2, 3, 5):
    worst = max(subspace_residual(S, gs_power(E, s.p, order, m * r0)) for m in (1, 2, 10))
    print(f"order {order}: worst residual {worst:.1e}")

# %% [markdown]
# ## Basic cylinders
# A product of factors that are either a single value or an interval.  Its
# span is the base point plus the free axes, and the axes along which two
# grid points differ are exactly those free axes.

# %%
a = Weights.harmonic(5)
J = BasicCylinder([0.3, 0.0, 0.5, 0.2, 0.0], [0.3, 1.0, 0.5, 0.9, 1.0])
print("free axes:", J.free_indices, " classification:", J.classification)
grid = PointSet(a, J.grid(3))
print("grid size:", len(grid))
print("index set from points:", index_set_finite(grid), " from J:", cylinder_index_set(J))
Sg = build_span(grid, grid.points[0])
print("span of grid vs cylinder span:", subspace_residual(Sg, cylinder_span(a, J, grid.points[0])))
print("axes inside the span:", index_set_span(Sg))
