"""From a span isometry to an isometry of the whole (truncated) space.

The domain basis and the image basis are each completed to a full
a-orthonormal family of N vectors; the global map sends the k-th source
vector to the k-th target vector.  Completion vectors are chosen greedily
from the axis directions e_i / a_i, which makes the construction
deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotAxisAligned, NotOrthonormal
from .extension import SpanIsometry, evaluate
from .space import Weights, as_points, as_vector, inner_matrix, norms, standard_basis, unit_basis
from .span import MEMBERSHIP_TOL, axis_span, index_set_span

__all__ = [
    "GlobalIsometry",
    "DecompositionReport",
    "complete_basis",
    "build_global",
    "build_axis_extension",
    "apply_global",
    "decompose",
]

ORTHONORMAL_TOL = 1e-8
_TIE = 1e-12


def _orthonormality_error(a: Weights, vecs: np.ndarray) -> float:
    if len(vecs) == 0:
        return 0.0
    g = inner_matrix(a, vecs, vecs)
    return float(np.max(np.abs(g - np.eye(len(vecs)))))


def complete_basis(a: Weights, partial, tol: float = ORTHONORMAL_TOL) -> np.ndarray:
    """Vectors extending ``partial`` to a complete a-orthonormal family.

    Candidates are the axis vectors e_i / a_i.  At each step every
    candidate's residual against the current family is updated and the one
    with the largest residual is admitted; candidates within a relative 1e-12 of
    the best count as tied and the lowest index wins.  The admitted
    residual is orthogonalized twice before normalization.

    >>> a = Weights([1.0, 0.5])
    >>> complete_basis(a, np.zeros((0, 2)))
    array([[1., 0.],
           [0., 2.]])
    """
    family = np.asarray(partial, dtype=float).reshape(-1, a.n)
    err = _orthonormality_error(a, family)
    if err > tol:
        raise NotOrthonormal(f"partial family deviates from orthonormal by {err:.3e}")
    R = np.diag(1.0 / a.values)
    for _ in range(2 if family.shape[0] else 0):
        R = R - inner_matrix(a, R, family) @ family
    added = []
    for _ in range(a.n - family.shape[0]):
        res = norms(a, R)
        best = float(res.max())
        j = int(np.flatnonzero(res >= best * (1.0 - _TIE))[0])
        v = R[j]
        current = np.vstack([family] + added) if added else family
        if current.shape[0]:
            v = v - inner_matrix(a, v[None], current)[0] @ current
        v = v / float(norms(a, v[None])[0])
        added.append(v[None])
        R = R - np.outer(inner_matrix(a, R, v[None])[:, 0], v)
    return np.vstack(added) if added else np.zeros((0, a.n))


@dataclass(frozen=True, eq=False)
class GlobalIsometry:
    """x -> q + L(x - p) with L mapping source_basis[k] to target_basis[k]."""

    weights: Weights
    p: np.ndarray
    q: np.ndarray
    source_basis: np.ndarray  # (N, N), domain basis first
    target_basis: np.ndarray  # (N, N), span images first
    rank: int  # number of leading vectors that come from the span
    matrix: np.ndarray = field(init=False)
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        a = self.weights
        S = np.asarray(self.source_basis, dtype=float).reshape(a.n, a.n)
        T = np.asarray(self.target_basis, dtype=float).reshape(a.n, a.n)
        # x = sum_k <x, s_k>_a s_k, hence L = T^t S W with W = diag(a^2)
        L = T.T @ (S * a.sq)
        for arr in (S, T, L):
            arr.setflags(write=False)
        object.__setattr__(self, "p", as_vector(a, self.p))
        object.__setattr__(self, "q", as_vector(a, self.q))
        object.__setattr__(self, "source_basis", S)
        object.__setattr__(self, "target_basis", T)
        object.__setattr__(self, "matrix", L)

    def __call__(self, x):
        return apply_global(self, x)

    def determinant(self) -> float:
        return float(np.linalg.det(self.matrix))

    def as_dict(self) -> dict:
        return {
            "p": self.p.tolist(),
            "q": self.q.tolist(),
            "rank": self.rank,
            "matrix": self.matrix.tolist(),
            "source_basis": self.source_basis.tolist(),
            "target_basis": self.target_basis.tolist(),
            "diagnostics": dict(self.diagnostics),
        }


def build_global(F: SpanIsometry, tol: float = ORTHONORMAL_TOL) -> GlobalIsometry:
    """Complete both sides of F and return the resulting global isometry."""
    a = F.weights
    S = np.vstack([F.domain.basis, complete_basis(a, F.domain.basis, tol)])
    T = np.vstack([F.images, complete_basis(a, F.images, tol)])
    G = GlobalIsometry(a, F.p, F.q, S, T, rank=F.rank)
    G.diagnostics.update(
        source_gram_error=_orthonormality_error(a, S),
        target_gram_error=_orthonormality_error(a, T),
        extension_residual=_extension_residual(G, F),
    )
    return G


def _extension_residual(G: GlobalIsometry, F: SpanIsometry) -> float:
    if F.rank == 0:
        return 0.0
    # agreement on p + b_k, the points spanning F's domain
    pts = F.p + F.domain.basis
    return float(np.max(norms(G.weights, apply_global(G, pts) - (F.q + F.images))))


def apply_global(G: GlobalIsometry, x) -> np.ndarray:
    """q + L(x - p) for one point or an (m, N) stack."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = as_vector(G.weights, x)
        return G.q + G.matrix @ (x - G.p)
    x = as_points(G.weights, x)
    return G.q + (x - G.p) @ G.matrix.T


def build_axis_extension(F: SpanIsometry, lam=None, tol: float = MEMBERSHIP_TOL) -> SpanIsometry:
    """The axis-wise construction for a domain spanned by coordinate axes.

    With D the axes contained in F's domain and ``lam`` a superset of D
    (default: every axis), set e'_i = L(e_i) for i in D and
    e'_i = a_i c_i for i in lam minus D, where the c_i are completion
    vectors of {L(e_i / a_i) : i in D} taken in increasing index order.
    The returned operator acts on p + span{e_i : i in lam} by

        u -> q + sum_{i in lam} <u - p, e_i / a_i>_a (1 / a_i) e'_i.
    """
    a = F.weights
    found = index_set_span(F.domain, tol)
    if len(found) != F.rank:
        raise NotAxisAligned(
            f"domain of rank {F.rank} contains only the axes {list(found)}"
        )
    lam = set(range(1, a.n + 1)) if lam is None else set(int(i) for i in lam)
    if not found.as_set() <= lam:
        raise ValueError(f"index set {sorted(lam)} must contain {list(found)}")
    dom = sorted(found.as_set())
    # L(e_i) for axes in the domain, rescaled to unit length
    unit_images = {
        i: (evaluate(F, F.p + standard_basis(a.n, i), tol) - F.q) / a.values[i - 1]
        for i in dom
    }
    known = np.array([unit_images[i] for i in dom]).reshape(len(dom), a.n)
    extra = sorted(lam - found.as_set())
    fill = complete_basis(a, known)[: len(extra)]
    for i, v in zip(extra, fill):
        unit_images[i] = v
    idx = sorted(lam)
    domain = axis_span(a, F.p, idx, order=F.level)
    images = np.array([unit_images[i] for i in idx]).reshape(len(idx), a.n)
    return SpanIsometry(domain, F.q, images, level=F.level, diagnostics={"lambda": idx})


@dataclass(frozen=True)
class DecompositionReport:
    image_dim: int
    complement_dim: int
    total_dim: int
    cross_inner_max: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "image_dim": self.image_dim,
            "complement_dim": self.complement_dim,
            "total_dim": self.total_dim,
            "cross_inner_max": self.cross_inner_max,
            "passed": self.passed,
        }


def decompose(G: GlobalIsometry, F: SpanIsometry, tol: float = 1e-9) -> DecompositionReport:
    """Image span plus completion complement as an orthogonal direct sum."""
    a = G.weights
    V = G.target_basis[: F.rank]
    C = G.target_basis[F.rank:]
    cross = float(np.max(np.abs(inner_matrix(a, V, C)))) if len(V) and len(C) else 0.0
    total = len(V) + len(C)
    return DecompositionReport(
        image_dim=len(V),
        complement_dim=len(C),
        total_dim=total,
        cross_inner_max=cross,
        passed=total == a.n and cross <= tol,
    )
