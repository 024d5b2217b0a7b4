"""Extension of a local isometry to the span of its domain.

Given pairs (x_j, f(x_j)) with base pair (p, q), the extension F acts on
p + span{x_j - p} by

    F(p + sum_j c_j (x_j - p)) = q + sum_j c_j (f(x_j) - q).

It is represented through an a-orthonormal basis b_k of the domain
directions and the images v_k of those basis vectors.  Each b_k comes out
of pivoted Gram-Schmidt as an explicit combination of the differences
x_j - p; applying the same coefficients to f(x_j) - q gives v_k, so no
Gram matrix is ever inverted.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import InconsistentPairing, IsometryViolation, NotAxisAligned, OutsideDomain, RadiusTooSmall
from .pointset import PairedSample, bounding_radius, validate_isometry
from .space import Weights, as_points, as_vector, inner_matrix, norms, standard_basis, unit_basis
from .span import (
    MEMBERSHIP_TOL,
    RANK_TOL,
    AffineSpan,
    IndexSet,
    ball_representatives,
    index_set_span,
    pivoted_gram_schmidt,
)

__all__ = [
    "ISOMETRY_TOL",
    "HARD_TOL",
    "SpanIsometry",
    "build_extension",
    "evaluate",
    "evaluate_coordinate_formula",
    "image_span",
]

ISOMETRY_TOL = 1e-9
HARD_TOL = 1e-4
ORTHO_WARN = 1e-8


@dataclass(frozen=True, eq=False)
class SpanIsometry:
    """Linear isometry of the domain span, written as u -> q + L(u - p)."""

    domain: AffineSpan
    q: np.ndarray
    images: np.ndarray  # (rank, N): L applied to domain.basis
    level: int = 1
    diagnostics: dict = field(default_factory=dict)
    lower: "SpanIsometry | None" = field(default=None, repr=False)  # previous level

    def __post_init__(self):
        q = as_vector(self.weights, self.q).copy()
        images = np.asarray(self.images, dtype=float).reshape(-1, self.weights.n).copy()
        if images.shape[0] != self.domain.rank:
            raise ValueError("need exactly one image per domain basis vector")
        q.setflags(write=False)
        images.setflags(write=False)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "images", images)

    @property
    def weights(self) -> Weights:
        return self.domain.weights

    @property
    def p(self) -> np.ndarray:
        return self.domain.base

    @property
    def rank(self) -> int:
        return self.domain.rank

    def orthonormality_error(self) -> float:
        if self.rank == 0:
            return 0.0
        g = inner_matrix(self.weights, self.images, self.images)
        return float(np.max(np.abs(g - np.eye(self.rank))))

    def matrix(self) -> np.ndarray:
        """Matrix of L in the domain's orthonormal basis: M[k, l] = <v_l, b_k>.

        Only a faithful description of L when the image span equals the
        domain span (as for maps fixing the span).
        """
        if self.rank == 0:
            return np.zeros((0, 0))
        return inner_matrix(self.weights, self.domain.basis, self.images)

    def ambient_matrix(self) -> np.ndarray:
        """N x N matrix of L extended by zero on the orthogonal complement."""
        return self.images.T @ (self.domain.basis * self.weights.sq)

    def __call__(self, u, tol: float = MEMBERSHIP_TOL):
        return evaluate(self, u, tol)

    def as_dict(self) -> dict:
        return {
            "level": self.level,
            "rank": self.rank,
            "p": self.p.tolist(),
            "q": self.q.tolist(),
            "domain_basis": self.domain.basis.tolist(),
            "images": self.images.tolist(),
            "matrix": self.matrix().tolist(),
            "orthonormality_error": self.orthonormality_error(),
            "diagnostics": dict(self.diagnostics),
        }


def _extend_once(s: PairedSample, tol: float, rank_tol: float, level: int,
                 lower: SpanIsometry | None = None) -> SpanIsometry:
    report = validate_isometry(s, tol)
    if not report.passed:
        raise IsometryViolation(
            f"pairing is not an isometry: relative distance residual "
            f"{report.relative_residual:.3e} > {tol:.1e}",
            residual=report.relative_residual,
        )
    a = s.weights
    p, q = s.p, s.q
    X = s.sources - p
    Y = s.targets - q

    # well-definedness: centered Gram matrices must agree
    wd = report.relative_gram_residual
    if wd > HARD_TOL:
        raise IsometryViolation(
            f"centered Gram matrices disagree by {wd:.3e} (relative)", residual=wd
        )
    if wd > tol:
        warnings.warn(f"centered Gram residual {wd:.3e} exceeds tolerance {tol:.1e}")

    gs = pivoted_gram_schmidt(a, X, rank_tol)
    target_rank = pivoted_gram_schmidt(a, Y, rank_tol).basis.shape[0]
    if target_rank != gs.basis.shape[0]:
        raise InconsistentPairing(
            f"source differences have rank {gs.basis.shape[0]}, targets {target_rank}"
        )
    images = gs.coeffs @ Y if gs.basis.shape[0] else np.zeros((0, a.n))

    domain = AffineSpan(
        a, p, gs.basis, order=level,
        diagnostics={"scale": gs.scale, "pivots": gs.pivots},
    )
    F = SpanIsometry(domain, q, images, level=level, lower=lower)
    ortho = F.orthonormality_error()
    if ortho > HARD_TOL:
        raise IsometryViolation(f"basis images far from orthonormal ({ortho:.3e})", residual=ortho)
    if ortho > ORTHO_WARN:
        warnings.warn(f"basis images drift from orthonormality by {ortho:.3e}")

    fitted = _apply(F, s.sources)
    ext = float(np.max(norms(a, fitted - s.targets))) / max(1.0, gs.scale)
    F.diagnostics.update(
        rank=F.rank,
        distance_residual=report.relative_residual,
        well_definedness_residual=wd,
        orthonormality_error=ortho,
        extension_residual=ext,
    )
    return F


def build_extension(
    s: PairedSample,
    tol: float = ISOMETRY_TOL,
    rank_tol: float = RANK_TOL,
    level: int = 1,
    radius: float | None = None,
) -> SpanIsometry:
    """Extend the sampled isometry to its span, at recursion ``level``.

    Level 1 is the direct extension F.  Level n > 1 rebuilds the map from
    the sample E together with points of the previous level's domain
    inside the ball B_r(p), whose images come from the previous level's
    operator.  The previous level stays reachable through ``F.lower``.

    Raises IsometryViolation when the pairs do not preserve distances at
    ``tol`` or the centered Gram matrices differ by more than 1e-4
    (relative), and InconsistentPairing when sources and targets span
    subspaces of different rank.
    """
    if level < 1:
        raise ValueError("level must be at least 1")
    F = _extend_once(s, tol, rank_tol, 1)
    if level == 1:
        return F
    need = bounding_radius(s.source_set, s.p).max_distance
    r = radius if radius is not None else (2.0 * need if need > 0 else 1.0)
    if not r > need:
        raise RadiusTooSmall(f"radius {r!r} does not enclose the sources (needs > {need!r})")
    a = s.weights
    for k in range(2, level + 1):
        reps = [
            v for v in ball_representatives(F.domain, r)
            if float(np.min(norms(a, s.sources - v))) > s.dedup_tol
        ]
        src = np.vstack([s.sources] + ([np.array(reps)] if reps else []))
        tgt = _apply(F, src)
        sample = PairedSample(a, src, tgt, s.base_index, s.dedup_tol)
        F = _extend_once(sample, tol, rank_tol, k, lower=F)
        F.diagnostics["radius"] = r
    return F


def _apply(F: SpanIsometry, u: np.ndarray) -> np.ndarray:
    if F.rank == 0:
        return np.broadcast_to(F.q, np.shape(u)).copy()
    return F.q + F.domain.coordinates(u) @ F.images


def evaluate(F: SpanIsometry, u, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
    """q + sum_k <u - p, b_k>_a v_k for u in the domain span.

    ``u`` may be a single point or an (m, N) stack.  Points off the domain
    span raise OutsideDomain instead of being projected.
    """
    a = F.weights
    u = np.asarray(u, dtype=float)
    pts = as_points(a, np.atleast_2d(u))
    off = pts - F.p
    resid = norms(a, off - F.domain.coordinates(pts).reshape(len(pts), -1) @ F.domain.basis)
    limit = tol * np.maximum(1.0, norms(a, off))
    if np.any(resid > limit):
        worst = float(np.max(resid))
        raise OutsideDomain(f"point lies {worst:.3e} off the domain span", residual=worst)
    out = _apply(F, pts)
    return out[0] if u.ndim == 1 else out


def _axis_indices(F: SpanIsometry, lam, tol: float) -> list:
    found = index_set_span(F.domain, tol)
    if lam is None:
        lam = found
    idx = sorted(set(int(i) for i in lam))
    if len(found) != F.rank or set(idx) != found.as_set():
        raise NotAxisAligned(
            f"domain of rank {F.rank} is not spanned by axes {idx} "
            f"(contained axes: {list(found)})"
        )
    return idx


def evaluate_coordinate_formula(
    F: SpanIsometry, u, lam: IndexSet | None = None, tol: float = MEMBERSHIP_TOL
) -> np.ndarray:
    """Evaluate via the axis expansion q + sum_i <u-p, e_i/a_i> (1/a_i) L(e_i).

    Requires a domain spanned by coordinate axes; L(e_i) is obtained from
    :func:`evaluate`.
    """
    a = F.weights
    u = as_vector(a, u)
    idx = _axis_indices(F, lam, tol)
    evaluate(F, u, tol)  # membership check
    out = F.q.copy()
    for i in idx:
        e = standard_basis(a.n, i)
        image = evaluate(F, F.p + e, tol) - F.q
        coef = inner_matrix(a, (u - F.p)[None], unit_basis(a, i)[None])[0, 0]
        out = out + coef / a.values[i - 1] * image
    return out


def image_span(F: SpanIsometry, tol: float = RANK_TOL) -> AffineSpan:
    """The span q + span{v_k}, re-orthonormalized if the images drifted."""
    basis = F.images
    drift = F.orthonormality_error()
    if drift > 1e-10:
        basis = pivoted_gram_schmidt(F.weights, basis, tol).basis
    return AffineSpan(F.weights, F.q, basis, order=F.level, diagnostics={"drift": drift})
