"""Finite point sets and local isometries given as explicit pairs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.spatial import cKDTree

from .errors import DuplicatePoint, MalformedPairing
from .space import Weights, as_points, as_vector, compensated_sum, inner_matrix, norms

__all__ = [
    "DEDUP_TOL",
    "PointSet",
    "PairedSample",
    "ValidationReport",
    "CubeReport",
    "Radius",
    "validate_isometry",
    "cube_check",
    "bounding_radius",
    "pairwise_distances",
]

DEDUP_TOL = 1e-12


def _close_pairs(a: Weights, pts: np.ndarray, tol: float) -> set:
    # d_a(x, y) is the Euclidean distance between a*x and a*y
    return cKDTree(pts * a.values).query_pairs(tol)


def pairwise_distances(a: Weights, pts: np.ndarray, chunk: int = 1 << 20) -> np.ndarray:
    """Full (m, m) matrix of weighted distances, built in row blocks."""
    m, n = pts.shape
    out = np.empty((m, m))
    step = max(1, chunk // max(1, m * n))
    for lo in range(0, m, step):
        d = pts[lo:lo + step, None, :] - pts[None, :, :]
        out[lo:lo + step] = np.sqrt(np.maximum(compensated_sum(a.sq * d * d), 0.0))
    return out


@dataclass(frozen=True, eq=False)
class PointSet:
    """A finite, duplicate-free set of points in the weighted space."""

    weights: Weights
    points: np.ndarray
    dedup_tol: float = DEDUP_TOL

    def __post_init__(self):
        pts = as_points(self.weights, self.points).copy()
        if pts.shape[0] < 1:
            raise ValueError("a point set needs at least one point")
        close = _close_pairs(self.weights, pts, self.dedup_tol)
        if close:
            i, j = min(close)
            raise DuplicatePoint(
                f"points {i} and {j} are within {self.dedup_tol:g} of each other"
            )
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return self.points.shape[0]

    def __iter__(self):
        return iter(self.points)

    def index_of(self, p, tol: float | None = None) -> int | None:
        """Index of the element equal to ``p`` (within ``tol``), else None."""
        p = as_vector(self.weights, p)
        tol = self.dedup_tol if tol is None else tol
        d = norms(self.weights, self.points - p)
        k = int(np.argmin(d))
        scale = max(1.0, float(norms(self.weights, p[None])[0]))
        return k if d[k] <= tol * scale else None


@dataclass(frozen=True, eq=False)
class PairedSample:
    """A map f given by pairs (x_j, f(x_j)); the base pair is (p, q)."""

    weights: Weights
    sources: np.ndarray
    targets: np.ndarray
    base_index: int = 0
    dedup_tol: float = DEDUP_TOL
    _source_set: PointSet = field(init=False, repr=False)

    def __post_init__(self):
        a = self.weights
        src = as_points(a, self.sources).copy()
        tgt = as_points(a, self.targets).copy()
        if src.shape[0] < 1:
            raise MalformedPairing("need at least one pair")
        if src.shape != tgt.shape:
            raise MalformedPairing(f"{src.shape[0]} sources but {tgt.shape[0]} targets")
        if not 0 <= self.base_index < src.shape[0]:
            raise MalformedPairing(f"base_index {self.base_index} out of range")
        for name, pts in (("sources", src), ("targets", tgt)):
            close = _close_pairs(a, pts, self.dedup_tol)
            if close:
                i, j = min(close)
                raise MalformedPairing(f"duplicate {name}: entries {i} and {j}")
        src.setflags(write=False)
        tgt.setflags(write=False)
        object.__setattr__(self, "sources", src)
        object.__setattr__(self, "targets", tgt)
        object.__setattr__(self, "_source_set", PointSet(a, src, self.dedup_tol))

    @classmethod
    def from_pairs(cls, weights: Weights, pairs, base_index: int = 0) -> "PairedSample":
        pairs = list(pairs)
        return cls(
            weights,
            [x for x, _ in pairs],
            [y for _, y in pairs],
            base_index=base_index,
        )

    def __len__(self):
        return self.sources.shape[0]

    @property
    def p(self) -> np.ndarray:
        return self.sources[self.base_index]

    @property
    def q(self) -> np.ndarray:
        return self.targets[self.base_index]

    @property
    def source_set(self) -> PointSet:
        return self._source_set

    @property
    def target_set(self) -> PointSet:
        return PointSet(self.weights, self.targets, self.dedup_tol)

    def reversed(self) -> "PairedSample":
        return PairedSample(
            self.weights, self.targets, self.sources, self.base_index, self.dedup_tol
        )

    def with_base(self, base_index: int) -> "PairedSample":
        return PairedSample(
            self.weights, self.sources, self.targets, base_index, self.dedup_tol
        )


@dataclass(frozen=True)
class ValidationReport:
    max_residual: float
    relative_residual: float
    gram_residual: float
    relative_gram_residual: float
    scale: float
    tol: float
    passed: bool

    def as_dict(self) -> dict:
        return dict(
            passed=self.passed,
            max_residual=self.max_residual,
            relative_residual=self.relative_residual,
            gram_residual=self.gram_residual,
            relative_gram_residual=self.relative_gram_residual,
            scale=self.scale,
            tol=self.tol,
        )


def validate_isometry(s: PairedSample, tol: float = 1e-9) -> ValidationReport:
    """Check d_a(f(x), f(y)) = d_a(x, y) over all pairs.

    The verdict uses the largest distance discrepancy relative to the
    largest source distance.  The centered Gram residual
    max |<f(x)-q, f(y)-q> - <x-p, y-p>| is reported alongside; for a true
    isometry it vanishes as well.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = s.weights
    d_src = pairwise_distances(a, s.sources)
    d_tgt = pairwise_distances(a, s.targets)
    residual = float(np.max(np.abs(d_tgt - d_src)))
    scale = float(np.max(d_src))
    relative = residual / scale if scale > 0 else residual

    xs = s.sources - s.p
    ys = s.targets - s.q
    g_res = float(np.max(np.abs(inner_matrix(a, ys, ys) - inner_matrix(a, xs, xs))))
    r2 = float(np.max(norms(a, xs))) ** 2
    return ValidationReport(
        max_residual=residual,
        relative_residual=relative,
        gram_residual=g_res,
        relative_gram_residual=g_res / r2 if r2 > 0 else g_res,
        scale=scale,
        tol=tol,
        passed=relative <= tol,
    )


@dataclass(frozen=True)
class CubeReport:
    inside: bool
    violations: list  # (point index, 1-based coordinate, value)

    def as_dict(self) -> dict:
        return {
            "inside": self.inside,
            "violations": [
                {"point": i, "coordinate": c, "value": v} for i, c, v in self.violations
            ],
        }


def cube_check(ps: PointSet | np.ndarray) -> CubeReport:
    """Report coordinates falling outside [0, 1]; informational only."""
    pts = ps.points if isinstance(ps, PointSet) else np.atleast_2d(ps)
    bad = np.argwhere((pts < 0.0) | (pts > 1.0))
    violations = [(int(i), int(j) + 1, float(pts[i, j])) for i, j in bad]
    return CubeReport(inside=not violations, violations=violations)


class Radius(NamedTuple):
    max_distance: float
    radius: float


def bounding_radius(ps: PointSet, p, eps: float = 1e-6) -> Radius:
    """Largest distance from ``p`` and a strictly enclosing ball radius."""
    p = as_vector(ps.weights, p)
    d = float(np.max(norms(ps.weights, ps.points - p)))
    return Radius(d, d * (1.0 + eps) if d > 0 else eps)
