# %% [markdown]
# # The weighted space and paired samples
#
# A point is a length-N float array.  The weights decide the geometry:
# coordinate i is stretched by a_i, so a unit step along axis i has length a_i.

# %%
import numpy as np

from isoext import PairedSample, Weights, cube_check, dist, inner, norm, unit_basis, validate_isometry
from isoext.generate import isometric, perturbed

a = Weights.geometric(6, 0.5)
print("weights:", a.to_list())

x = np.array([1.0, 0, 0, 0, 0, 1.0])
print("||x||_a =", norm(a, x))  # sqrt(1/4 + 1/4096)

# %% [markdown]
# The normalized axis vectors e_i / a_i are orthonormal.  Indices are 1-based.

# %%
E = np.array([unit_basis(a, i) for i in range(1, 7)])
print("max |<u_i, u_j> - delta_ij| =",
      max(abs(inner(a, E[i], E[j]) - (i == j)) for i in range(6) for j in range(6)))

# %% [markdown]
# ## Is a pairing distance preserving?
#
# A generated instance comes with the map that produced it.  The validation
# report gives the largest distance mismatch, absolute and relative.

# %%
inst, truth = isometric(6, rank=3, points=8, seed=11)
s = inst.sample()
report = validate_isometry(s)
print(report.as_dict())

bad = perturbed(6, 3, 8, seed=11, delta=1e-3).sample()
print("scaled by 1.001 ->", validate_isometry(bad).passed,
      f"(relative residual {validate_isometry(bad).relative_residual:.2e})")

# %% [markdown]
# Sources in the Hilbert cube [0, 1]^N are the common setting; the cube check
# lists any coordinate that leaves it.

# %%
print(cube_check(s.sources).as_dict()["inside"], len(cube_check(s.targets).violations), "target violations")
print("d_a(p, q) =", dist(a, s.p, s.q))
