# %% [markdown]
# # From the span to the whole space
#
# The orthonormal basis of the domain and its image are each completed to a
# full orthonormal basis.  Sending one completed basis to the other gives a
# linear isometry L, and G(x) = q + L(x - p) agrees with F on the domain.

# %%
import numpy as np

from isoext import apply_global, build_axis_extension, build_extension, build_global, decompose, evaluate
from isoext.generate import cylinder, isometric
from isoext.space import norms

inst, truth = isometric(8, rank=3, points=6, seed=5)
s = inst.sample()
F2 = build_extension(s, level=2)
G = build_global(F2)
print("determinant:", G.determinant())
print(G.diagnostics)

# %% [markdown]
# G is an isometry of the whole (truncated) space, not only the domain.

# %%
rng = np.random.default_rng(1)
x, y = rng.uniform(-2, 2, size=(2, 200, 8))
a = s.weights
gap = np.abs(norms(a, apply_global(G, x) - apply_global(G, y)) - norms(a, x - y))
print("largest distance change over 200 random pairs:", gap.max())

# %% [markdown]
# The image of the domain and the completion directions split the space
# into an orthogonal direct sum.

# %%
print(decompose(G, F2).as_dict())

# %% [markdown]
# ## Axis-wise construction
# For an axis-aligned domain, a larger axis set Lambda can be covered while
# keeping F on the original axes.

# %%
inst, _, J = cylinder(6, free=2, seed=8)
sc = inst.sample()
Fc = build_extension(sc)
lam = sorted(set(J.free_indices) | {1, 2, 3})
A = build_axis_extension(Fc, lam)
print("Lambda:", lam, " rank:", A.rank)
print("agrees with F on its domain:", float(np.max(norms(sc.weights, evaluate(A, sc.sources) - sc.targets))))
