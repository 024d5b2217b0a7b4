# %% [markdown]
# # Extending to the span
#
# Given pairs x_k -> y_k that preserve distances, the extension F sends
# p + sum c_k (x_k - p) to q + sum c_k (y_k - q).  It is built from one
# orthonormalization of the source differences, and the same coefficients
# applied to the target differences give the images of the basis.

# %%
import numpy as np

from isoext import build_extension, evaluate, evaluate_coordinate_formula, image_span, subspace_residual, build_span
from isoext.generate import cylinder, isometric
from isoext.space import norms

inst, truth = isometric(12, rank=5, points=9, seed=21)
s = inst.sample()
F = build_extension(s)
print(F.diagnostics)

rng = np.random.default_rng(0)
u = s.p + rng.normal(size=(4, F.rank)) @ F.domain.basis
print("agreement with the generating map:", norms(s.weights, evaluate(F, u) - truth(u)))

# %% [markdown]
# Points outside the span are refused instead of silently projected.

# %%
try:
    evaluate(F, s.p + 10.0)
except Exception as exc:
    print(type(exc).__name__, "-", exc)

# %% [markdown]
# ## Higher levels
# Level 2 re-extends from E plus points of the level 1 domain.  Further
# levels reproduce the same map.

# %%
F2, F4 = build_extension(s, level=2), build_extension(s, level=4)
print("F2 vs F4:", float(np.max(norms(s.weights, evaluate(F2, u) - evaluate(F4, u)))))
print("image span vs span of targets:", subspace_residual(image_span(F2), build_span(s.target_set, s.q)))

# %% [markdown]
# ## Axis-aligned domains
# When the domain is spanned by coordinate axes the map can be written
# axis by axis: F(u) = q + sum_i (u_i - p_i) L(e_i).

# %%
inst, _, J = cylinder(6, free=3, seed=4)
sc = inst.sample()
Fc = build_extension(sc)
x = sc.p.copy()
for i in J.free_indices:
    x[i - 1] += 0.3
print("coordinate formula - evaluate:", norms(sc.weights, evaluate_coordinate_formula(Fc, x) - evaluate(Fc, x)))
