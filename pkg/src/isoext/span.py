"""Generalized linear spans as affine subspaces with orthonormal bases.

A span is stored as a base point p plus a basis of its direction space
that is orthonormal for <., .>_a.  At finite N every linear span is
closed, so the first-order span and its closure coincide; the n-th order
recursion is still carried out literally by :func:`gs_power`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import BaseNotInSet, RadiusTooSmall
from .pointset import PointSet, bounding_radius
from .space import Weights, as_vector, inner_matrix, norms, unit_basis

__all__ = [
    "RANK_TOL",
    "MEMBERSHIP_TOL",
    "GramSchmidtResult",
    "pivoted_gram_schmidt",
    "AffineSpan",
    "IndexSet",
    "BasicCylinder",
    "build_span",
    "contains",
    "project",
    "subspace_residual",
    "same_subspace",
    "index_set_finite",
    "index_set_span",
    "constant_coordinates",
    "is_axis_aligned",
    "axis_span",
    "ball_representatives",
    "gs_power",
    "cylinder_span",
    "cylinder_index_set",
]

RANK_TOL = 1e-8
MEMBERSHIP_TOL = 1e-8


@dataclass
class GramSchmidtResult:
    basis: np.ndarray  # (k, N), orthonormal rows
    coeffs: np.ndarray  # (k, m): basis = coeffs @ vectors
    pivots: list
    scale: float  # largest input norm
    residuals: np.ndarray  # final residual norm of every input vector


def pivoted_gram_schmidt(a: Weights, vectors: np.ndarray, tol: float = RANK_TOL) -> GramSchmidtResult:
    """Orthonormalize the rows of ``vectors`` under <., .>_a.

    Modified Gram-Schmidt with greedy pivoting: at every step the remaining
    vector with the largest residual norm is admitted, provided that norm
    exceeds ``tol`` times the largest input norm.  Each admitted vector is
    re-orthogonalized once against the basis built so far.  Ties go to the
    lowest index.  The coefficients expressing every basis vector as a
    combination of the inputs are tracked alongside.
    """
    vectors = np.atleast_2d(np.asarray(vectors, dtype=float))
    m, n = vectors.shape
    R = vectors.copy()
    C = np.eye(m)
    basis, coeffs, pivots = [], [], []
    if m == 0:
        return GramSchmidtResult(np.zeros((0, n)), np.zeros((0, 0)), [], 0.0, np.zeros(0))
    res = norms(a, R)
    scale = float(res.max())
    active = np.ones(m, dtype=bool)
    while len(basis) < n and active.any():
        cand = np.where(active, res, -1.0)
        j = int(np.argmax(cand))
        if cand[j] <= tol * scale:
            break
        b = R[j] / res[j]
        c = C[j] / res[j]
        if basis:
            B = np.array(basis)
            h = inner_matrix(a, B, b[None])[:, 0]
            b = b - h @ B
            c = c - h @ np.array(coeffs)
            nb = float(norms(a, b[None])[0])
            b = b / nb
            c = c / nb
        basis.append(b)
        coeffs.append(c)
        pivots.append(j)
        active[j] = False
        h = inner_matrix(a, R, b[None])[:, 0]
        R -= np.outer(h, b)
        C -= np.outer(h, c)
        res = norms(a, R)
    return GramSchmidtResult(
        basis=np.array(basis).reshape(len(basis), n),
        coeffs=np.array(coeffs).reshape(len(coeffs), m),
        pivots=pivots,
        scale=scale,
        residuals=res,
    )


@dataclass(frozen=True, eq=False)
class AffineSpan:
    """The affine set base + span(basis); ``basis`` rows are a-orthonormal."""

    weights: Weights
    base: np.ndarray
    basis: np.ndarray
    order: int = 1
    closed: bool = True  # finite-dimensional subspaces are always closed
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        base = as_vector(self.weights, self.base).copy()
        basis = np.asarray(self.basis, dtype=float).reshape(-1, self.weights.n).copy()
        if basis.shape[0] > self.weights.n:
            raise ValueError("more basis vectors than dimensions")
        base.setflags(write=False)
        basis.setflags(write=False)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "basis", basis)

    @property
    def rank(self) -> int:
        return self.basis.shape[0]

    def coordinates(self, u) -> np.ndarray:
        """<u - base, b_k>_a for every basis vector."""
        u = np.asarray(u, dtype=float)
        if self.rank == 0:
            return np.zeros((0,) if u.ndim == 1 else (u.shape[0], 0))
        c = inner_matrix(self.weights, np.atleast_2d(u - self.base), self.basis)
        return c[0] if u.ndim == 1 else c

    def project(self, u) -> np.ndarray:
        return self.base + self.coordinates(u) @ self.basis

    def residual(self, u) -> float:
        """a-norm of the component of u - base orthogonal to the span."""
        u = as_vector(self.weights, u)
        return float(norms(self.weights, (u - self.project(u))[None])[0])

    def gram_error(self) -> float:
        if self.rank == 0:
            return 0.0
        g = inner_matrix(self.weights, self.basis, self.basis)
        return float(np.max(np.abs(g - np.eye(self.rank))))

    def as_dict(self) -> dict:
        return {
            "base": self.base.tolist(),
            "basis": self.basis.tolist(),
            "order": self.order,
            "rank": self.rank,
            "closed": self.closed,
            "gram_error": self.gram_error(),
            "diagnostics": dict(self.diagnostics),
        }


def build_span(E: PointSet, p, tol: float = RANK_TOL) -> AffineSpan:
    """First-order span of E about p, i.e. p + span{x - p : x in E}."""
    a = E.weights
    p = as_vector(a, p)
    if E.index_of(p) is None:
        raise BaseNotInSet("base point is not an element of the set")
    gs = pivoted_gram_schmidt(a, E.points - p, tol)
    diag = {
        "scale": gs.scale,
        "pivots": gs.pivots,
        "max_residual": float(gs.residuals.max()) if gs.residuals.size else 0.0,
    }
    return AffineSpan(a, p, gs.basis, order=1, diagnostics=diag)


def contains(S: AffineSpan, u, tol: float = MEMBERSHIP_TOL) -> bool:
    u = as_vector(S.weights, u)
    off = float(norms(S.weights, (u - S.base)[None])[0])
    return S.residual(u) <= tol * max(1.0, off)


def project(S: AffineSpan, u) -> np.ndarray:
    return S.project(as_vector(S.weights, u))


def subspace_residual(S: AffineSpan, T: AffineSpan) -> float:
    """Largest residual of either direction basis projected onto the other.

    Zero exactly when the two direction spaces coincide (same rank and
    mutual containment); the base points are ignored.
    """
    if S.rank != T.rank:
        return float("inf")
    if S.rank == 0:
        return 0.0
    a = S.weights
    worst = 0.0
    for X, Y in ((S.basis, T.basis), (T.basis, S.basis)):
        c = inner_matrix(a, X, Y)
        worst = max(worst, float(np.max(norms(a, X - c @ Y))))
    return worst


def same_subspace(S: AffineSpan, T: AffineSpan, tol: float = 1e-10) -> bool:
    return subspace_residual(S, T) <= tol


@dataclass(frozen=True)
class IndexSet:
    """Sorted 1-based coordinate indices."""

    indices: tuple
    kind: str = "combinatorial"  # or "subspace"

    def __post_init__(self):
        idx = tuple(sorted({int(i) for i in self.indices}))
        if idx and idx[0] < 1:
            raise ValueError("indices are 1-based")
        if self.kind not in ("combinatorial", "subspace"):
            raise ValueError(f"unknown index set kind {self.kind!r}")
        object.__setattr__(self, "indices", idx)

    def __iter__(self):
        return iter(self.indices)

    def __len__(self):
        return len(self.indices)

    def __contains__(self, i):
        return i in self.indices

    def as_set(self) -> set:
        return set(self.indices)


def index_set_finite(E: PointSet, tol: float = 1e-12) -> IndexSet:
    """Coordinates i with some x, x + alpha e_i (alpha != 0) both in E.

    Exhaustive scan over all pairs, in row blocks.
    """
    pts = E.points
    m, n = pts.shape
    found = np.zeros(n, dtype=bool)
    step = max(1, (1 << 22) // max(1, m * n))
    for lo in range(0, m, step):
        differs = np.abs(pts[lo:lo + step, None, :] - pts[None, :, :]) > tol
        one = differs.sum(axis=-1) == 1
        if one.any():
            found |= differs[one].any(axis=0)
    return IndexSet(tuple(np.flatnonzero(found) + 1), kind="combinatorial")


def index_set_span(S: AffineSpan, tol: float = MEMBERSHIP_TOL) -> IndexSet:
    """Axis directions contained in the direction space of S.

    For a translated subspace V + p, x and x + alpha e_i both lie in it
    iff e_i is in V.  Membership is tested with the unit vector e_i / a_i,
    which has norm one, so the test does not depend on the weight scale.
    """
    a = S.weights
    idx = [i for i in range(1, a.n + 1) if contains(S, S.base + unit_basis(a, i), tol)]
    return IndexSet(tuple(idx), kind="subspace")


def constant_coordinates(S: AffineSpan, tol: float = 1e-10) -> IndexSet:
    """Coordinates on which every point of the span agrees with the base."""
    if S.rank == 0:
        return IndexSet(tuple(range(1, S.weights.n + 1)), kind="subspace")
    flat = np.max(np.abs(S.basis), axis=0) <= tol
    return IndexSet(tuple(np.flatnonzero(flat) + 1), kind="subspace")


def is_axis_aligned(S: AffineSpan, tol: float = MEMBERSHIP_TOL) -> bool:
    """Whether S = base + span{e_i : i in index_set_span(S)}."""
    return len(index_set_span(S, tol)) == S.rank


def axis_span(a: Weights, base, indices, order: int = 1) -> AffineSpan:
    """base + span{e_i : i in indices} with basis e_i / a_i."""
    idx = sorted(set(int(i) for i in indices))
    basis = np.array([unit_basis(a, i) for i in idx]).reshape(len(idx), a.n)
    return AffineSpan(a, base, basis, order=order)


def ball_representatives(S: AffineSpan, r: float) -> np.ndarray:
    """Points base + (r/2) b_k: one per basis direction, inside B_r(base)."""
    return S.base + 0.5 * r * S.basis


def _ball_sample(E_points: np.ndarray, S: AffineSpan, r: float, dedup_tol: float) -> np.ndarray:
    reps = ball_representatives(S, r)
    a = S.weights
    keep = [
        v for v in reps
        if float(np.min(norms(a, E_points - v))) > dedup_tol
    ]
    return np.vstack([E_points] + ([np.array(keep)] if keep else []))


def gs_power(E: PointSet, p, n: int, r: float, tol: float = RANK_TOL) -> AffineSpan:
    """n-th order span GS^n(E, p) = GS(GS^{n-1}(E, p) cap B_r(p), p).

    The intersection with the ball is represented by E itself (which lies
    in every GS^k and inside the ball) together with each current basis
    direction rescaled to length r/2.  The result is re-spanned from that
    sample at every level.
    """
    if n < 1:
        raise ValueError("order must be at least 1")
    p = as_vector(E.weights, p)
    need = bounding_radius(E, p).max_distance
    if not r > need:
        raise RadiusTooSmall(f"radius {r!r} does not enclose the set (needs > {need!r})")
    S = build_span(E, p, tol)
    for level in range(2, n + 1):
        sample = PointSet(E.weights, _ball_sample(E.points, S, r, E.dedup_tol), E.dedup_tol)
        S = build_span(sample, p, tol)
        S = AffineSpan(S.weights, S.base, S.basis, order=level, diagnostics=S.diagnostics)
    return S


_KINDS = ("non-degenerate", "degenerate", "interval-like")


@dataclass(frozen=True, eq=False)
class BasicCylinder:
    """Product of per-coordinate factors inside [0, 1]^N.

    Factor i is the closed interval [lower[i], upper[i]]; equal endpoints
    make it the single point {lower[i]}.  Non-point factors must have the
    shape [0, t], [s, t], [s, 1] (0 < s < t < 1) or [0, 1].
    """

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.array(self.lower, dtype=float).ravel()
        hi = np.array(self.upper, dtype=float).ravel()
        if lo.shape != hi.shape or lo.size < 1:
            raise ValueError("lower and upper must have the same positive length")
        if np.any(lo < 0) or np.any(hi > 1) or np.any(lo > hi):
            raise ValueError("factors must satisfy 0 <= lower <= upper <= 1")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def from_factors(cls, factors) -> "BasicCylinder":
        """Build from a list of (lo, hi) tuples or scalars (point factors)."""
        lo, hi = [], []
        for f in factors:
            if np.ndim(f) == 0:
                lo.append(float(f))
                hi.append(float(f))
            else:
                lo.append(float(f[0]))
                hi.append(float(f[1]))
        return cls(lo, hi)

    @property
    def n(self) -> int:
        return self.lower.size

    @property
    def point_indices(self) -> tuple:
        return tuple(int(i) + 1 for i in np.flatnonzero(self.lower == self.upper))

    @property
    def free_indices(self) -> tuple:
        return tuple(int(i) + 1 for i in np.flatnonzero(self.lower < self.upper))

    @property
    def classification(self) -> str:
        k = len(self.point_indices)
        if k == 0:
            return "non-degenerate"
        if k > self.n / 2:
            return "interval-like"
        return "degenerate"

    def __contains__(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))

    def grid(self, per_axis: int = 3) -> np.ndarray:
        """Product grid with ``per_axis`` evenly spaced values per free factor."""
        axes = [
            np.linspace(lo, hi, per_axis) if lo < hi else np.array([lo])
            for lo, hi in zip(self.lower, self.upper)
        ]
        return np.array(list(product(*axes)))


def cylinder_index_set(J: BasicCylinder) -> IndexSet:
    """Index set of a cylinder: exactly its non-point factors."""
    return IndexSet(J.free_indices, kind="combinatorial")


def cylinder_span(a: Weights, J: BasicCylinder, p) -> AffineSpan:
    """GS(J, p) = p + span{e_i : i free in J}, basis e_i / a_i."""
    if J.n != a.n:
        raise ValueError("cylinder and weights have different dimensions")
    p = as_vector(a, p)
    if p not in J:
        raise BaseNotInSet("base point is not in the cylinder")
    return axis_span(a, p, J.free_indices)
