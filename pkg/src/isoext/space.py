"""Weighted sequence space truncated to N coordinates.

Points are plain 1-D float arrays of length N.  The geometry comes from a
:class:`Weights` object, which defines

    <x, y>_a = sum_i a_i**2 * x_i * y_i,   ||x||_a = sqrt(<x, x>_a),
    d_a(x, y) = ||x - y||_a.

All reductions go through :func:`compensated_sum` because the weights can
span many orders of magnitude (a_i = 2**-i for instance).

Coordinate indices in the public API are 1-based, matching the usual
notation e_1, ..., e_N for the standard basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError

__all__ = [
    "Weights",
    "as_vector",
    "as_points",
    "compensated_sum",
    "inner",
    "inner_matrix",
    "gram",
    "norm",
    "norms",
    "dist",
    "translate",
    "unit_basis",
    "standard_basis",
]


@dataclass(frozen=True, eq=False)
class Weights:
    """Positive weights a_1..a_N defining the inner product.

    >>> a = Weights([1.0, 0.5, 0.25])
    >>> a.n
    3
    """

    values: np.ndarray
    tail_note: str | None = None
    sq: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=float).ravel()
        if v.size < 1:
            raise ValueError("weights need at least one entry")
        if not np.all(np.isfinite(v)):
            raise ValueError("weights must be finite")
        if np.any(v <= 0):
            raise ValueError("weights must be strictly positive")
        sq = v * v
        if not math.isfinite(math.fsum(sq)):
            raise ValueError("sum of squared weights is not finite")
        v.setflags(write=False)
        sq.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "sq", sq)

    @classmethod
    def geometric(cls, n: int, ratio: float = 0.5) -> "Weights":
        """a_i = ratio**i for i = 1..n."""
        if not 0 < ratio < 1:
            raise ValueError("ratio must lie in (0, 1) for a square-summable rule")
        return cls(ratio ** np.arange(1, n + 1), tail_note=f"a_i = {ratio!r}**i")

    @classmethod
    def harmonic(cls, n: int) -> "Weights":
        """a_i = 1/i for i = 1..n."""
        return cls(1.0 / np.arange(1, n + 1), tail_note="a_i = 1/i")

    @property
    def n(self) -> int:
        return self.values.size

    def __len__(self):
        return self.values.size

    def __eq__(self, other):
        if not isinstance(other, Weights):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash(self.values.tobytes())

    def to_list(self) -> list[float]:
        return [float(x) for x in self.values]


def as_vector(a: Weights, x) -> np.ndarray:
    """Validate ``x`` as a point of the space defined by ``a``."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1 or v.size != a.n:
        raise DimensionError(f"expected a vector of length {a.n}, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise DimensionError("coordinates must be finite")
    return v


def as_points(a: Weights, xs) -> np.ndarray:
    """Validate a stack of points, returned as an (m, N) array."""
    v = np.asarray(xs, dtype=float)
    if v.ndim == 1 and v.size == 0:
        return np.zeros((0, a.n))
    if v.ndim != 2 or v.shape[1] != a.n:
        raise DimensionError(f"expected shape (m, {a.n}), got {v.shape}")
    if not np.all(np.isfinite(v)):
        raise DimensionError("coordinates must be finite")
    return v


_BLOCK = 1 << 21  # elements per temporary in blocked reductions


def _pairwise_twosum(t: np.ndarray) -> np.ndarray:
    """Pairwise reduction over the last axis with TwoSum error terms."""
    errs = []
    while t.shape[-1] > 1:
        h = t.shape[-1] // 2
        x = t[..., :h]
        y = t[..., h:2 * h]
        s = x + y
        z = s - x
        errs.append((x - (s - z)) + (y - z))
        if t.shape[-1] % 2:
            s = np.concatenate([s, t[..., 2 * h:]], axis=-1)
        t = s
    if not errs:
        return t[..., 0].copy()
    return t[..., 0] + np.concatenate(errs, axis=-1).sum(axis=-1)


def _extract(t: np.ndarray, shift: int, top: np.ndarray | None = None):
    """Split t = hi + lo where the hi parts sum exactly in any order.

    With sigma a power of two above (n + 2) * max|t|, every fl(sigma + t) -
    sigma is a multiple of 2**-53 * sigma and all partial sums of those
    stay below sigma, so they are exact; t - hi is exact as well.
    """
    _, e = np.frexp(np.abs(t).max(axis=-1) if top is None else top)
    sigma = np.ldexp(1.0, e + shift)[..., None]
    hi = (sigma + t) - sigma
    return hi, t - hi


def compensated_sum(terms, axis: int = -1) -> np.ndarray:
    """Sum along ``axis`` with error-free transformations.

    Two extraction passes split the terms into parts whose sums are exact,
    leaving remainders of relative size about (n eps)**2; the result is as
    accurate as a sum carried in twice the working precision, then rounded.
    Inputs with extreme exponents go through a pairwise reduction with
    TwoSum error terms instead; non-finite entries propagate as in a plain
    sum.
    """
    t = np.asarray(terms, dtype=float)
    if axis not in (-1, t.ndim - 1):
        t = np.moveaxis(t, axis, -1)
    n = t.shape[-1]
    if n == 0:
        return np.zeros(t.shape[:-1])
    if n == 1:
        return t[..., 0].copy()
    with np.errstate(invalid="ignore"):
        top = np.abs(t).max(axis=-1)
    if not np.all(np.isfinite(top)):
        return t.sum(axis=-1)
    live = top[top != 0]
    if live.size and not (live.max() <= _EXTRACT_MAX and live.min() >= _EXTRACT_MIN):
        return _pairwise_twosum(t)
    shift = math.ceil(math.log2(n + 2))
    hi1, lo = _extract(t, shift, top)
    hi2, lo = _extract(lo, shift)
    return (hi1.sum(axis=-1) + hi2.sum(axis=-1)) + lo.sum(axis=-1)


_EXTRACT_MAX = 2.0**900
_EXTRACT_MIN = 2.0**-800


def inner(a: Weights, x, y) -> float:
    x = as_vector(a, x)
    y = as_vector(a, y)
    return float(compensated_sum(a.sq * (x * y)))


def inner_matrix(a: Weights, xs, ys) -> np.ndarray:
    """Matrix of inner products <xs[i], ys[j]>_a.

    Unvalidated fast path used by the span and completion kernels; inputs
    must already be (m, N) and (k, N) float arrays.  Rows of ``xs`` are
    processed in blocks so the (block, k, N) temporary stays small.
    """
    xs = np.atleast_2d(xs)
    ys = np.atleast_2d(ys)
    block = max(1, _BLOCK // max(1, ys.shape[0] * a.n))
    if xs.shape[0] <= block:
        return compensated_sum(a.sq * (xs[:, None, :] * ys[None, :, :]))
    out = np.empty((xs.shape[0], ys.shape[0]))
    for i in range(0, xs.shape[0], block):
        xb = xs[i:i + block]
        out[i:i + block] = compensated_sum(a.sq * (xb[:, None, :] * ys[None, :, :]))
    return out


def gram(a: Weights, xs) -> np.ndarray:
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    return inner_matrix(a, xs, xs)


def norm(a: Weights, x) -> float:
    return float(norms(a, as_vector(a, x)[None])[0])


_TINY, _HUGE = 1e-280, 1e280


def norms(a: Weights, xs) -> np.ndarray:
    """Row-wise norms of an (m, N) array.

    The terms are nonnegative, so the plain sum is already accurate to a
    few ulps relative and no compensation is needed.  Rows whose squared
    norm underflows or overflows are rescaled by their largest weighted
    coordinate first, as ``hypot`` does.
    """
    xs = np.atleast_2d(xs)
    with np.errstate(over="ignore", invalid="ignore"):
        w = xs * a.values
        sq = (w * w).sum(axis=-1)
    bad = ~((sq >= _TINY) & (sq <= _HUGE))
    if bad.any():
        w = np.abs(w[bad])
        big = w.max(axis=1)
        safe = np.where(big > 0, big, 1.0)
        r = w / safe[:, None]
        out = np.sqrt(np.maximum(sq, 0.0))
        out[bad] = np.sqrt((r * r).sum(axis=-1)) * big
        return out
    return np.sqrt(np.maximum(sq, 0.0))


def dist(a: Weights, x, y) -> float:
    x = as_vector(a, x)
    y = as_vector(a, y)
    if np.array_equal(x, y):
        return 0.0
    return norm(a, x - y)


def translate(x, c) -> np.ndarray:
    """Translation T_c(x) = x + c."""
    x = np.asarray(x, dtype=float)
    c = np.asarray(c, dtype=float)
    if x.shape != c.shape:
        raise DimensionError(f"shape mismatch: {x.shape} vs {c.shape}")
    return x + c


def unit_basis(a: Weights, i: int) -> np.ndarray:
    """The normalized axis vector e_i / a_i (1-based ``i``)."""
    if not 1 <= i <= a.n:
        raise IndexError(f"axis index {i} outside 1..{a.n}")
    v = np.zeros(a.n)
    v[i - 1] = 1.0 / a.values[i - 1]
    return v


def standard_basis(n: int, i: int) -> np.ndarray:
    """The raw axis vector e_i (1-based ``i``)."""
    if not 1 <= i <= n:
        raise IndexError(f"axis index {i} outside 1..{n}")
    v = np.zeros(n)
    v[i - 1] = 1.0
    return v
