"""Closed convex sets with exact metric projections.

Every set kind has a closed-form nearest-point map, so the projection
characterization, firm nonexpansiveness and idempotence can be checked
numerically to tight tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import DimensionMismatch, LinearMap, as_vector, inner, norm

__all__ = [
    "ConvexSet",
    "Box",
    "Ball",
    "Halfspace",
    "Hyperplane",
    "Singleton",
    "AffineNullspace",
    "WholeSpace",
    "membership_residual",
    "check_projection_characterization",
    "CharacterizationReport",
    "sample_point",
]


class ConvexSet:
    """Base class: a nonempty closed convex set with an exact projection."""

    kind: str = "abstract"
    dim: int

    def project(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _check(self, x: np.ndarray) -> np.ndarray:
        if x.size != self.dim:
            raise DimensionMismatch(f"{self.kind} set lives in dimension {self.dim}, got {x.size}")
        return np.asarray(x, dtype=float)


@dataclass(frozen=True, eq=False)
class Box(ConvexSet):
    """Axis-aligned box {x : lower <= x <= upper} (componentwise)."""

    lower: np.ndarray
    upper: np.ndarray
    kind = "box"

    def __post_init__(self):
        lo = as_vector(self.lower)
        up = as_vector(self.upper, lo.size)
        if np.any(lo > up):
            raise ValueError("box requires lower <= upper componentwise")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", up)
        object.__setattr__(self, "dim", lo.size)

    def project(self, x):
        x = self._check(x)
        return np.clip(x, self.lower, self.upper)


@dataclass(frozen=True, eq=False)
class Ball(ConvexSet):
    """Euclidean ball {x : ||x - center|| <= radius}."""

    center: np.ndarray
    radius: float
    kind = "ball"

    def __post_init__(self):
        c = as_vector(self.center)
        if not self.radius > 0:
            raise ValueError("ball requires radius > 0")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", float(self.radius))
        object.__setattr__(self, "dim", c.size)

    def project(self, x):
        x = self._check(x)
        d = x - self.center
        dist = norm(d)
        if dist <= self.radius:
            return x.copy()
        return self.center + (self.radius / dist) * d


@dataclass(frozen=True, eq=False)
class Halfspace(ConvexSet):
    """Halfspace {x : <normal, x> <= offset}."""

    normal: np.ndarray
    offset: float
    kind = "halfspace"

    def __post_init__(self):
        a = as_vector(self.normal)
        if norm(a) == 0.0:
            raise ValueError("halfspace normal must be nonzero")
        object.__setattr__(self, "normal", a)
        object.__setattr__(self, "offset", float(self.offset))
        object.__setattr__(self, "dim", a.size)

    def project(self, x):
        x = self._check(x)
        excess = inner(self.normal, x) - self.offset
        if excess <= 0.0:
            return x.copy()
        return x - (excess / inner(self.normal, self.normal)) * self.normal


@dataclass(frozen=True, eq=False)
class Hyperplane(ConvexSet):
    """Hyperplane {x : <normal, x> = offset}."""

    normal: np.ndarray
    offset: float
    kind = "hyperplane"

    def __post_init__(self):
        a = as_vector(self.normal)
        if norm(a) == 0.0:
            raise ValueError("hyperplane normal must be nonzero")
        object.__setattr__(self, "normal", a)
        object.__setattr__(self, "offset", float(self.offset))
        object.__setattr__(self, "dim", a.size)

    def project(self, x):
        x = self._check(x)
        excess = inner(self.normal, x) - self.offset
        return x - (excess / inner(self.normal, self.normal)) * self.normal


@dataclass(frozen=True, eq=False)
class Singleton(ConvexSet):
    """One-point set {point}."""

    point: np.ndarray
    kind = "singleton"

    def __post_init__(self):
        p = as_vector(self.point)
        object.__setattr__(self, "point", p)
        object.__setattr__(self, "dim", p.size)

    def project(self, x):
        self._check(x)
        return self.point.copy()


@dataclass(frozen=True, eq=False)
class AffineNullspace(ConvexSet):
    """Null space {x : Mx = 0} of a linear map, projected via an orthonormal basis.

    An orthonormal basis of null(M) is precomputed from the SVD of M with rank
    tolerance ``rank_tol`` (default 1e-10 * ||M||), which makes every
    projection an exact subspace projection B (B^T x).  The set is never
    empty since 0 is always a member.
    """

    map: LinearMap
    rank_tol: float | None = None
    basis: np.ndarray = field(init=False, repr=False)
    kind = "affine_nullspace"

    def __post_init__(self):
        m = self.map.matrix
        u, s, vt = np.linalg.svd(m)
        smax = float(s[0]) if s.size else 0.0
        tol = self.rank_tol if self.rank_tol is not None else 1e-10 * smax
        if smax == 0.0:
            rank = 0
        else:
            rank = int(np.sum(s > tol))
        basis = vt[rank:].T.copy()  # (cols, cols - rank), orthonormal columns
        basis.flags.writeable = False
        object.__setattr__(self, "rank_tol", float(tol))
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "dim", self.map.cols)

    def project(self, x):
        x = self._check(x)
        if self.basis.shape[1] == 0:
            return np.zeros(self.dim)
        return self.basis @ (self.basis.T @ x)


@dataclass(frozen=True, eq=False)
class WholeSpace(ConvexSet):
    """The whole ambient space; projection is the identity."""

    dim: int
    kind = "whole_space"

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")

    def project(self, x):
        x = self._check(x)
        return x.copy()


def membership_residual(cset: ConvexSet, x: np.ndarray) -> float:
    """Distance from x to the set, ||x - P(x)||; ~0 iff x is a member."""
    return norm(np.asarray(x, dtype=float) - cset.project(x))


@dataclass(frozen=True)
class CharacterizationReport:
    """Result of sampling the variational characterization of a projection."""

    max_violation: float
    samples: int
    seed: int

    @property
    def passed(self) -> bool:
        return self.max_violation <= 1e-10


def sample_point(cset: ConvexSet, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Draw a member of the set by projecting an ambient Gaussian sample."""
    return cset.project(rng.standard_normal(cset.dim) * scale)


def check_projection_characterization(
    cset: ConvexSet, x: np.ndarray, samples: int = 100, seed: int = 0
) -> CharacterizationReport:
    """Sample-check that z = P(x) satisfies <x - z, y - z> <= 0 for members y.

    Members are drawn by projecting ambient Gaussian points.  Returns the
    maximum inner product observed; nonpositive (up to 1e-10) certifies the
    nearest-point property on the sample.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    x = np.asarray(x, dtype=float)
    z = cset.project(x)
    rng = np.random.default_rng(seed)
    scale = 1.0 + norm(x)
    worst = -np.inf
    for _ in range(samples):
        y = sample_point(cset, rng, scale)
        worst = max(worst, inner(x - z, y - z))
    return CharacterizationReport(max_violation=float(worst), samples=samples, seed=seed)
