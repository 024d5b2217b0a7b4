"""Synthetic problem instances with known ground truth.

Every generator draws from :class:`~isoext.rng.XorShift64Star`, and the
random orthogonal matrices are built with pure-Python Gram-Schmidt over
``math.fsum``, so the same seed gives the same instance on any platform.
The orthogonalization here is deliberately independent of the package's
weighted kernels; it serves as the oracle in tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .instance import ProblemInstance
from .rng import XorShift64Star
from .span import BasicCylinder

__all__ = [
    "KINDS",
    "Truth",
    "random_weights",
    "orthogonal_matrix",
    "weighted_orthogonal",
    "isometric",
    "cylinder",
    "random_cylinder",
    "perturbed",
    "generate",
]

KINDS = ("isometric", "grid", "perturbed", "sheared")


@dataclass
class Truth:
    """The generating affine map x -> Q x + t and the weights it preserves."""

    weights: np.ndarray
    Q: np.ndarray
    t: np.ndarray

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return x @ self.Q.T + self.t


def random_weights(rng: XorShift64Star, n: int) -> list:
    """n weights drawn uniformly from (0, 1]."""
    return [1.0 - rng.random() for _ in range(n)]


def orthogonal_matrix(rng: XorShift64Star, n: int) -> np.ndarray:
    """Euclidean orthogonal n x n matrix from Gram-Schmidt on Gaussian columns."""
    cols: list = []
    while len(cols) < n:
        v = [rng.normal() for _ in range(n)]
        for _ in range(2):
            for c in cols:
                h = math.fsum(vi * ci for vi, ci in zip(v, c))
                v = [vi - h * ci for vi, ci in zip(v, c)]
        nv = math.sqrt(math.fsum(vi * vi for vi in v))
        if nv < 1e-6:
            continue
        cols.append([vi / nv for vi in v])
    return np.array(cols).T


def weighted_orthogonal(rng: XorShift64Star, weights) -> np.ndarray:
    """Q = D^-1 O D with D = diag(a): preserves <x, y>_a for orthogonal O."""
    a = np.asarray(weights, dtype=float)
    O = orthogonal_matrix(rng, a.size)
    return O * a[None, :] / a[:, None]


def _cloud(rng: XorShift64Star, n: int, rank: int, points: int) -> np.ndarray:
    base = np.array([rng.random() for _ in range(n)])
    dirs = np.array([[rng.normal() for _ in range(n)] for _ in range(rank)]).reshape(rank, n)
    pts = [base]
    for _ in range(points - 1):
        c = np.array([rng.uniform(-0.5, 0.5) for _ in range(rank)])
        pts.append(base + c @ dirs)
    return np.array(pts)


def _truth(rng: XorShift64Star, weights: list) -> Truth:
    Q = weighted_orthogonal(rng, weights)
    t = np.array([rng.uniform(-1.0, 1.0) for _ in weights])
    return Truth(np.asarray(weights), Q, t)


def _instance(weights, src, tgt, seed, gen, queries=()) -> ProblemInstance:
    return ProblemInstance(
        weights=list(weights),
        pairs=[(list(map(float, x)), list(map(float, y))) for x, y in zip(src, tgt)],
        base_index=0,
        queries=[list(map(float, qv)) for qv in queries],
        seed=seed,
        generator=gen,
    )


def isometric(n: int, rank: int, points: int | None = None, seed: int = 0,
              queries: int = 0) -> tuple[ProblemInstance, Truth]:
    """Random rank-``rank`` cloud mapped by a random weighted-orthogonal map."""
    if not 0 <= rank <= n:
        raise ValueError("rank must lie in 0..n")
    points = points if points is not None else rank + 2
    if points < 1 or (rank > 0 and points < rank + 1):
        raise ValueError("need at least rank + 1 points")
    if rank == 0:
        points = 1
    rng = XorShift64Star(seed)
    w = random_weights(rng, n)
    src = _cloud(rng, n, rank, points)
    truth = _truth(rng, w)
    qs = [[rng.uniform(-1.0, 2.0) for _ in range(n)] for _ in range(queries)]
    gen = {"kind": "isometric", "dim": n, "rank": rank, "points": points}
    return _instance(w, src, truth(src), seed, gen, qs), truth


def random_cylinder(rng: XorShift64Star, n: int, free: int) -> BasicCylinder:
    """Cylinder with ``free`` random non-point factors of random shape."""
    idx = set(rng.sample(range(n), free))
    lo, hi = [], []
    for i in range(n):
        if i not in idx:
            v = rng.random()
            lo.append(v)
            hi.append(v)
            continue
        s, t = sorted((rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95)))
        if t - s < 0.05:
            s, t = 0.25, 0.75
        shape = rng.randint(0, 3)
        lo.append((0.0, s, s, 0.0)[shape])
        hi.append((t, t, 1.0, 1.0)[shape])
    return BasicCylinder(lo, hi)


def cylinder(n: int, free: int, seed: int = 0, per_axis: int = 3,
             identity: bool = False) -> tuple[ProblemInstance, Truth, BasicCylinder]:
    """Product grid sampled from a random basic cylinder, then mapped."""
    rng = XorShift64Star(seed)
    w = random_weights(rng, n)
    J = random_cylinder(rng, n, free)
    src = J.grid(per_axis)
    truth = Truth(np.asarray(w), np.eye(n), np.zeros(n)) if identity else _truth(rng, w)
    gen = {"kind": "grid", "dim": n, "free": free, "per_axis": per_axis,
           "lower": J.lower.tolist(), "upper": J.upper.tolist()}
    return _instance(w, src, truth(src), seed, gen), truth, J


def perturbed(n: int, rank: int, points: int | None = None, seed: int = 0,
              delta: float = 1e-3, mode: str = "scale") -> ProblemInstance:
    """Isometric instance with targets scaled by (1 + delta) or sheared.

    Scaling is about q, so every distance from q grows by the factor.  The
    shear d -> d + delta <d, u>_a w uses u along the first target
    difference and w an a-unit vector orthogonal to it.
    """
    inst, _ = isometric(n, rank, points, seed)
    w = np.asarray(inst.weights)
    src = np.array([x for x, _ in inst.pairs])
    tgt = np.array([y for _, y in inst.pairs])
    q = tgt[inst.base_index]
    d = tgt - q
    if mode == "scale":
        new = q + (1.0 + delta) * d
    elif mode == "shear":
        nrm = lambda v: math.sqrt(math.fsum((w * w * v * v).tolist()))
        k = next(k for k in range(len(d)) if nrm(d[k]) > 0)
        u = d[k] / nrm(d[k])
        # an a-unit vector orthogonal to u: Gram-Schmidt on the axis least aligned with u
        i = int(np.argmin(np.abs(w * u)))
        e = np.zeros(n)
        e[i] = 1.0 / w[i]
        e = e - math.fsum((w * w * e * u).tolist()) * u
        e = e / nrm(e)
        coef = np.array([math.fsum((w * w * row * u).tolist()) for row in d])
        new = q + d + delta * coef[:, None] * e[None, :]
    else:
        raise ValueError(f"unknown perturbation mode {mode!r}")
    out = _instance(inst.weights, src, new, seed, dict(inst.generator))
    out.generator.update(kind="perturbed" if mode == "scale" else "sheared", delta=delta)
    return out


def generate(kind: str, n: int, rank: int | None = None, seed: int = 0,
             points: int | None = None, delta: float = 1e-3, queries: int = 0) -> ProblemInstance:
    """Dispatch used by the command line front end."""
    rank = n if rank is None else rank
    if kind == "isometric":
        return isometric(n, rank, points, seed, queries)[0]
    if kind == "grid":
        return cylinder(n, rank, seed)[0]
    if kind == "perturbed":
        return perturbed(n, rank, points, seed, delta, "scale")
    if kind == "sheared":
        return perturbed(n, rank, points, seed, delta, "shear")
    raise ValueError(f"unknown instance kind {kind!r}")
