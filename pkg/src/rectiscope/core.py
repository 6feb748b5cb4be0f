"""Core geometry: weighted point clouds, closed balls, affine subspaces, simplices.

All floating point work is 64-bit.  Balls are closed throughout: a point at
distance exactly ``r`` from the center belongs to ``B(x, r)``.  Degeneracy
decisions (affine rank, zero heights, zero volumes) are made with
scale-relative thresholds so that exactly flat inputs produce exact zeros.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

# Rank cut for affine hulls: singular values <= SV_RTOL * sigma_max count as
# zero.  Covariance eigenvalues use the squared threshold.  Gram
# determinants cannot resolve that finely: the subtraction noise in a
# determinant is ~eps * prod(diag), so their degeneracy cut sits at 1e-12
# of the diagonal product (heights below ~1e-6 of the edge scale).
SV_RTOL = 1e-10
EIG_RTOL = SV_RTOL**2
GRAM_RTOL = 1e-12


class InputError(ValueError):
    """Invalid user-supplied data: bad cloud file, dimension mismatch, ..."""


class BudgetError(RuntimeError):
    """A computation would exceed its configured budget."""


def _as_matrix(points) -> np.ndarray:
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.ndim != 2:
        raise InputError(f"expected a 2-d array of points, got shape {pts.shape}")
    return np.ascontiguousarray(pts)


def _as_vector(x, m: int | None = None) -> np.ndarray:
    v = np.asarray(x, dtype=np.float64).reshape(-1)
    if m is not None and v.shape[0] != m:
        raise InputError(f"expected a point in R^{m}, got dimension {v.shape[0]}")
    return v


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class DiscreteMeasure:
    """Weighted point cloud sum_i w_i * delta_{x_i} in R^m.

    Parameters
    ----------
    points : (N, m) array
        Atom locations; all coordinates finite.
    weights : (N,) array
        Strictly positive, finite masses.
    intrinsic_dim : int
        Target dimension n, 0 <= n <= m, used by all flatness and
        curvature quantities built on this measure.
    """

    points: np.ndarray
    weights: np.ndarray
    intrinsic_dim: int

    def __post_init__(self):
        pts = _as_matrix(self.points)
        w = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        if pts.shape[0] == 0:
            raise InputError("a measure needs at least one atom")
        if w.shape[0] != pts.shape[0]:
            raise InputError(
                f"{pts.shape[0]} points but {w.shape[0]} weights"
            )
        if not np.all(np.isfinite(pts)):
            raise InputError("non-finite coordinate in point cloud")
        if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
            raise InputError("weights must be strictly positive and finite")
        n = int(self.intrinsic_dim)
        if not 0 <= n <= pts.shape[1]:
            raise InputError(
                f"intrinsic_dim must be in [0, {pts.shape[1]}], got {n}"
            )
        object.__setattr__(self, "points", _freeze(pts))
        object.__setattr__(self, "weights", _freeze(w))
        object.__setattr__(self, "intrinsic_dim", n)

    @property
    def count(self) -> int:
        return self.points.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.points.shape[1]

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())

    @cached_property
    def index(self) -> "SpatialIndex":
        return SpatialIndex(self.points)

    def ball_indices(self, center, radius: float) -> np.ndarray:
        """Indices of atoms in the closed ball, ascending."""
        return self.index.query(_as_vector(center, self.ambient_dim), float(radius))

    def ball_mass(self, center, radius: float) -> float:
        return float(self.weights[self.ball_indices(center, radius)].sum())

    def restrict(self, indices) -> "DiscreteMeasure":
        """Sub-measure on the given atoms (weights preserved)."""
        idx = np.asarray(indices, dtype=np.intp)
        return DiscreteMeasure(self.points[idx], self.weights[idx], self.intrinsic_dim)


@dataclass(frozen=True)
class Ball:
    """Closed ball {y : |y - center| <= radius}."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = _as_vector(self.center)
        r = float(self.radius)
        if not np.all(np.isfinite(c)):
            raise InputError("ball center must be finite")
        if not (r > 0.0 and math.isfinite(r)):
            raise InputError("ball radius must be positive and finite")
        object.__setattr__(self, "center", _freeze(c))
        object.__setattr__(self, "radius", r)

    def contains(self, point) -> bool:
        d = _as_vector(point, self.center.shape[0]) - self.center
        return float(d @ d) <= self.radius * self.radius


class SpatialIndex:
    """Uniform-grid accelerator for closed-ball range queries.

    The final candidate filter evaluates the same squared-distance
    comparison a full linear scan would, on the same float64 values, so
    query results agree with a scan exactly, including boundary atoms.
    Build cost is O(N); queries touch only grid cells overlapping the
    ball's bounding box and fall back to a scan when that box is large.
    """

    def __init__(self, points):
        pts = _as_matrix(points)
        self._points = pts
        n, m = pts.shape
        lo = pts.min(axis=0)
        hi = pts.max(axis=0)
        span = float(np.max(hi - lo))
        if span <= 0.0:
            span = 1.0
        cells_per_axis = max(1, int(round(n ** (1.0 / m))))
        self._h = span / cells_per_axis
        self._lo = lo
        dims = np.floor((hi - lo) / self._h).astype(np.int64) + 1
        self._dims = dims
        strides = np.ones(m, dtype=np.int64)
        for a in range(m - 2, -1, -1):
            strides[a] = strides[a + 1] * dims[a + 1]
        self._strides = strides
        keys = (np.floor((pts - lo) / self._h).astype(np.int64) @ strides)
        order = np.argsort(keys, kind="stable")
        sorted_keys = keys[order]
        starts = np.flatnonzero(np.r_[True, sorted_keys[1:] != sorted_keys[:-1]])
        self._cells = {
            int(sorted_keys[s]): order[s:e]
            for s, e in zip(starts, np.r_[starts[1:], len(order)])
        }

    def query(self, center, radius: float) -> np.ndarray:
        """Ascending indices of points in the closed ball B(center, radius)."""
        pts = self._points
        c = _as_vector(center, pts.shape[1])
        r = float(radius)
        lo_idx = np.floor((c - r - self._lo) / self._h).astype(np.int64)
        hi_idx = np.floor((c + r - self._lo) / self._h).astype(np.int64)
        lo_idx = np.clip(lo_idx, 0, self._dims - 1)
        hi_idx = np.clip(hi_idx, 0, self._dims - 1)
        n_cells = int(np.prod(hi_idx - lo_idx + 1))
        if n_cells >= pts.shape[0] or n_cells > 65536:
            cand = None  # scan everything
        else:
            ranges = [np.arange(a, b + 1) for a, b in zip(lo_idx, hi_idx)]
            grids = np.meshgrid(*ranges, indexing="ij")
            keys = sum(g.ravel() * s for g, s in zip(grids, self._strides))
            chunks = [self._cells[k] for k in keys.tolist() if int(k) in self._cells]
            if not chunks:
                return np.empty(0, dtype=np.intp)
            cand = np.concatenate(chunks)
        if cand is None:
            d2 = ((pts - c) ** 2).sum(axis=1)
            return np.flatnonzero(d2 <= r * r).astype(np.intp)
        d2 = ((pts[cand] - c) ** 2).sum(axis=1)
        return np.sort(cand[d2 <= r * r]).astype(np.intp)


def range_query(index: SpatialIndex, ball: Ball) -> np.ndarray:
    return index.query(ball.center, ball.radius)


@dataclass(frozen=True)
class AffineSubspace:
    """Affine subspace base + span(frame), frame rows orthonormal.

    ``frame`` has shape (n, m); n may be zero, in which case the subspace
    is the single point ``base``.
    """

    base: np.ndarray
    frame: np.ndarray

    def __post_init__(self):
        base = _as_vector(self.base)
        frame = np.asarray(self.frame, dtype=np.float64)
        if frame.ndim != 2 or frame.shape[1] != base.shape[0]:
            frame = frame.reshape(-1, base.shape[0])
        if frame.shape[0] > 0:
            gram = frame @ frame.T
            if not np.allclose(gram, np.eye(frame.shape[0]), atol=1e-12):
                raise InputError("frame vectors must be orthonormal to 1e-12")
        object.__setattr__(self, "base", _freeze(base))
        object.__setattr__(self, "frame", _freeze(np.ascontiguousarray(frame)))

    @property
    def dim(self) -> int:
        return self.frame.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.base.shape[0]

    def project(self, z) -> np.ndarray:
        z = _as_vector(z, self.ambient_dim)
        rel = z - self.base
        return self.base + self.frame.T @ (self.frame @ rel)

    def distances(self, points) -> np.ndarray:
        """Distances of many points to the subspace, vectorized."""
        pts = _as_matrix(points)
        if pts.shape[1] != self.ambient_dim:
            raise InputError("dimension mismatch in distance computation")
        rel = pts - self.base
        resid = rel - (rel @ self.frame.T) @ self.frame
        return np.sqrt((resid**2).sum(axis=1))


def dist_to_affine(z, subspace: AffineSubspace) -> float:
    """Euclidean distance from z to the affine subspace."""
    z = _as_vector(z)
    if z.shape[0] != subspace.ambient_dim:
        raise InputError(
            f"point lives in R^{z.shape[0]} but subspace in R^{subspace.ambient_dim}"
        )
    rel = z - subspace.base
    resid = rel - subspace.frame.T @ (subspace.frame @ rel)
    return float(np.sqrt(resid @ resid))


def affine_hull(points) -> AffineSubspace:
    """Smallest affine subspace containing the points.

    The rank is the number of singular values of the centered point matrix
    above SV_RTOL times the largest one, so nearly dependent inputs yield
    lower-dimensional hulls.
    """
    pts = _as_matrix(points)
    centroid = pts.mean(axis=0)
    centered = pts - centroid
    if pts.shape[0] == 1:
        return AffineSubspace(centroid, np.empty((0, pts.shape[1])))
    _, sigma, vt = np.linalg.svd(centered, full_matrices=False)
    if sigma.size == 0 or sigma[0] <= 0.0:
        rank = 0
    else:
        rank = int(np.sum(sigma > SV_RTOL * sigma[0]))
    return AffineSubspace(centroid, vt[:rank])


@dataclass(frozen=True)
class Simplex:
    """Ordered vertex list of a k-simplex in R^m, 1 <= k <= m."""

    vertices: np.ndarray

    def __post_init__(self):
        verts = _as_matrix(self.vertices)
        k = verts.shape[0] - 1
        if k < 1:
            raise InputError("a simplex needs at least two vertices")
        if k > verts.shape[1]:
            raise InputError(
                f"{k}-simplex does not fit in R^{verts.shape[1]}"
            )
        object.__setattr__(self, "vertices", _freeze(verts))

    @property
    def dim(self) -> int:
        return self.vertices.shape[0] - 1

    @property
    def diameter(self) -> float:
        return diameter(self.vertices)


def _vertices_of(simplex) -> np.ndarray:
    if isinstance(simplex, Simplex):
        return simplex.vertices
    return _as_matrix(simplex)


def diameter(points) -> float:
    pts = _as_matrix(points)
    d2max = 0.0
    for i in range(pts.shape[0] - 1):
        diff = pts[i + 1 :] - pts[i]
        d2 = (diff * diff).sum(axis=1)
        m = float(d2.max())
        if m > d2max:
            d2max = m
    return math.sqrt(d2max)


def simplex_volume(simplex) -> float:
    """k-dimensional volume of the convex hull of k+1 vertices.

    The square of k! times the volume is the Gram determinant of the edge
    vectors; it is evaluated through a QR factorization of the edge matrix
    (det(E E^T) = prod(diag R)^2), which keeps the error linear rather
    than quadratic in the conditioning.  Degenerate vertex sets give 0.
    The 0-simplex has volume 1 by the counting-measure convention.
    """
    verts = _vertices_of(simplex)
    k = verts.shape[0] - 1
    if k == 0:
        return 1.0
    edges = verts[1:] - verts[0]
    r = np.linalg.qr(edges.T, mode="r")
    diag = np.abs(np.diag(r))
    top = float(diag.max(initial=0.0))
    if top == 0.0 or np.any(diag <= SV_RTOL * top):
        return 0.0
    return float(np.prod(diag)) / math.factorial(k)


def h_min(simplex) -> float:
    """Minimum vertex height over the affine hull of the opposite face.

    Returns 0 exactly when the vertices are affinely dependent (repeated
    vertices included): the dependent vertex then lies on the hull of the
    others up to the rank threshold.
    """
    verts = _vertices_of(simplex)
    if verts.shape[0] < 2:
        raise InputError("h_min needs at least two vertices")
    best = math.inf
    for i in range(verts.shape[0]):
        face = np.delete(verts, i, axis=0)
        d = dist_to_affine(verts[i], affine_hull(face))
        if d < best:
            best = d
    # snap to an exact zero at the same relative scale used for ranks
    if best <= SV_RTOL * diameter(verts):
        return 0.0
    return best


def menger_curvature(x, y, z) -> float:
    """Reciprocal circumradius of a point triple: 4 Area / (product of sides).

    Collinear triples have an infinite circumradius and return 0; by the
    degenerate-tuple convention, coincident points return 0 as well.
    """
    x = _as_vector(x)
    y = _as_vector(y, x.shape[0])
    z = _as_vector(z, x.shape[0])
    u = y - x
    v = z - x
    w = z - y
    a2 = float(u @ u)
    b2 = float(v @ v)
    c2 = float(w @ w)
    if a2 == 0.0 or b2 == 0.0 or c2 == 0.0:
        return 0.0
    cross2 = a2 * b2 - float(u @ v) ** 2
    if cross2 <= GRAM_RTOL * (a2 * b2):
        return 0.0
    # 4 * Area = 2 * sqrt(cross2)
    return 2.0 * math.sqrt(cross2) / math.sqrt(a2 * b2 * c2)
