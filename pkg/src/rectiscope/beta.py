"""Flatness numbers: beta_p, centered beta-hat, and Jones square functions.

For a weighted cloud mu, a center x, and a radius r the p-flatness of
mu restricted to the closed ball B(x, r) against an n-plane L is

    obj(L) = (1/r^n) * sum_{|x_i - x| <= r} w_i * (dist(x_i, L) / r)^p

and beta_p(x, r) = (inf_L obj(L))^(1/p) over all n-planes.  For p = 2 the
infimum is attained at the plane through the weighted centroid spanned by
the top eigenvectors of the weighted covariance, so beta_2 is computed
exactly.  The centered variant restricts the competitors to planes through
x; its minimizer is the analogous eigenplane of the second-moment matrix
about x.  General p uses iteratively reweighted least squares.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    EIG_RTOL,
    AffineSubspace,
    DiscreteMeasure,
    InputError,
    SpatialIndex,
    _as_vector,
    _freeze,
)

IRLS_MAX_ITER = 200
IRLS_RTOL = 1e-9
IRLS_RESTARTS = 8


@dataclass(frozen=True)
class BetaResult:
    """One flatness evaluation: value, minimizing plane, and provenance."""

    value: float
    optimal_plane: AffineSubspace
    p: float
    centered: bool
    objective: float = 0.0
    flags: tuple[str, ...] = ()

    @property
    def empty_ball(self) -> bool:
        return "empty_ball" in self.flags


@dataclass(frozen=True)
class ScaleConfig:
    """Geometric ladder of radii r0 * ratio^j, j = 0..count-1."""

    r0: float = 1.0
    ratio: float = 0.5
    count: int = 12

    def __post_init__(self):
        if not (self.r0 > 0 and math.isfinite(self.r0)):
            raise InputError("r0 must be positive")
        if not (0.0 < self.ratio < 1.0):
            raise InputError("ratio must lie in (0, 1)")
        if self.count < 1:
            raise InputError("count must be >= 1")

    def radii(self) -> np.ndarray:
        return self.r0 * self.ratio ** np.arange(self.count)


@dataclass(frozen=True)
class ScaleProfile:
    """A scalar quantity sampled along a descending ladder of radii."""

    radii: np.ndarray
    values: np.ndarray
    alpha: float
    ratio: float

    def __post_init__(self):
        radii = np.asarray(self.radii, dtype=np.float64).reshape(-1)
        values = np.asarray(self.values, dtype=np.float64).reshape(-1)
        if radii.shape != values.shape:
            raise InputError("radii and values must have equal length")
        if radii.size and np.any(np.diff(radii) >= 0):
            raise InputError("radii must be strictly decreasing")
        object.__setattr__(self, "radii", _freeze(radii))
        object.__setattr__(self, "values", _freeze(values))


def _ball_data(mu: DiscreteMeasure, x, r, index):
    x = _as_vector(x, mu.ambient_dim)
    idx = (index or mu.index).query(x, r)
    return x, idx, mu.points[idx], mu.weights[idx]


def _floored_tail(eigenvalues: np.ndarray, n: int) -> float:
    """Sum of the smallest (m - n) eigenvalues with the relative zero floor."""
    lam = np.array(eigenvalues, dtype=np.float64)
    top = max(float(lam.max(initial=0.0)), 0.0)
    lam[lam <= EIG_RTOL * top] = 0.0
    m = lam.shape[0]
    return float(lam[: m - n].sum())


def _axis_plane(base: np.ndarray, n: int) -> AffineSubspace:
    frame = np.eye(base.shape[0])[:n]
    return AffineSubspace(base, frame)


def _empty_result(x, n, p, centered) -> BetaResult:
    return BetaResult(
        value=0.0,
        optimal_plane=_axis_plane(x, n),
        p=p,
        centered=centered,
        objective=0.0,
        flags=("empty_ball",),
    )


def _eigenplane(pts, w, about, n):
    """Top-n eigenplane of sum_i w_i (p_i - about)(p_i - about)^T.

    Returns (frame, tail eigenvalue sum).  The frame rows span the plane;
    the tail sum is the weighted squared-distance residual.
    """
    rel = pts - about
    second = (rel * w[:, None]).T @ rel
    lam, vec = np.linalg.eigh(second)
    tail = _floored_tail(lam, n)
    m = rel.shape[1]
    frame = vec[:, m - n :].T if n > 0 else np.empty((0, m))
    return frame, tail


def beta2(mu: DiscreteMeasure, x, r: float, index: SpatialIndex | None = None) -> BetaResult:
    """Exact beta_2 over all n-planes (weighted PCA solution).

    The optimal plane passes through the weighted centroid of the in-ball
    atoms and is spanned by the top-n eigenvectors of their weighted
    covariance; the objective equals the sum of the m-n smallest
    eigenvalues divided by r^(n+2).  An empty ball gives 0, flagged.
    """
    n = mu.intrinsic_dim
    x, idx, pts, w = _ball_data(mu, x, r, index)
    if idx.size == 0:
        return _empty_result(x, n, 2.0, centered=False)
    centroid = (pts * w[:, None]).sum(axis=0) / w.sum()
    frame, tail = _eigenplane(pts, w, centroid, n)
    objective = tail / r ** (n + 2)
    return BetaResult(
        value=math.sqrt(objective),
        optimal_plane=AffineSubspace(centroid, frame),
        p=2.0,
        centered=False,
        objective=objective,
    )


def beta2_centered(
    mu: DiscreteMeasure, x, r: float, index: SpatialIndex | None = None
) -> BetaResult:
    """Exact centered beta-hat_2: competitors are n-planes through x."""
    n = mu.intrinsic_dim
    x, idx, pts, w = _ball_data(mu, x, r, index)
    if idx.size == 0:
        return _empty_result(x, n, 2.0, centered=True)
    frame, tail = _eigenplane(pts, w, x, n)
    objective = tail / r ** (n + 2)
    return BetaResult(
        value=math.sqrt(objective),
        optimal_plane=AffineSubspace(x, frame),
        p=2.0,
        centered=True,
        objective=objective,
    )


def plane_objective(pts, w, plane: AffineSubspace, r: float, n: int, p: float) -> float:
    """The beta_p objective of one plane on in-ball data."""
    d = plane.distances(pts)
    return float((w * (d / r) ** p).sum()) / r**n


def _rng(seed: int, stream: int = 0) -> np.random.Generator:
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, stream & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _irls(pts, w, r, n, p, start_base, start_frame):
    """Iteratively reweighted least squares from a starting plane.

    Returns (objective, base, frame, converged).  Reweights by
    dist^(p-2) (floored near zero for p < 2) and refits the weighted
    eigenplane until the relative objective change drops below IRLS_RTOL.
    """
    base, frame = start_base, start_frame
    plane = AffineSubspace(base, frame)
    obj = plane_objective(pts, w, plane, r, n, p)
    best = (obj, base, frame)
    floor = 1e-12 * r
    converged = False
    for _ in range(IRLS_MAX_ITER):
        d = plane.distances(pts)
        u = w * np.maximum(d, floor) ** (p - 2.0)
        centroid = (pts * u[:, None]).sum(axis=0) / u.sum()
        frame, _ = _eigenplane(pts, u, centroid, n)
        plane = AffineSubspace(centroid, frame)
        new_obj = plane_objective(pts, w, plane, r, n, p)
        if new_obj < best[0]:
            best = (new_obj, centroid, frame)
        if abs(new_obj - obj) <= IRLS_RTOL * max(obj, 1e-300):
            obj = new_obj
            converged = True
            break
        if new_obj > obj:  # oscillation; keep the best iterate seen
            obj = new_obj
            break
        obj = new_obj
    return best[0], best[1], best[2], converged


def beta_p(
    mu: DiscreteMeasure,
    x,
    r: float,
    p: float,
    index: SpatialIndex | None = None,
    restarts: int = IRLS_RESTARTS,
    seed: int = 0,
) -> BetaResult:
    """Approximate beta_p over all n-planes via IRLS with random restarts.

    Seeded at the exact p = 2 plane plus ``restarts`` random planes
    (deterministic given ``seed``); returns the best objective^(1/p).
    """
    if p < 1.0 or not math.isfinite(p):
        raise InputError("p must lie in [1, inf)")
    n = mu.intrinsic_dim
    if p == 2.0:
        return beta2(mu, x, r, index)
    x, idx, pts, w = _ball_data(mu, x, r, index)
    if idx.size == 0:
        return _empty_result(x, n, p, centered=False)
    m = mu.ambient_dim

    seed_plane = beta2(mu, x, r, index).optimal_plane
    starts = [(seed_plane.base, seed_plane.frame)]
    rng = _rng(seed, stream=0xB)
    for _ in range(restarts):
        g = rng.standard_normal((m, max(n, 1)))
        q, _ = np.linalg.qr(g)
        frame = q[:, :n].T
        base = pts[int(rng.integers(0, pts.shape[0]))]
        starts.append((base, frame))

    best = None
    best_converged = False
    for base, frame in starts:
        obj, b, f, conv = _irls(pts, w, r, n, p, base, frame)
        if best is None or obj < best[0]:
            best = (obj, b, f)
            best_converged = conv
    obj, base, frame = best
    flags = () if best_converged else ("irls_max_iter",)
    return BetaResult(
        value=obj ** (1.0 / p),
        optimal_plane=AffineSubspace(base, frame),
        p=p,
        centered=False,
        objective=obj,
        flags=flags,
    )


def dini_weight(r: np.ndarray | float, gamma: float) -> np.ndarray | float:
    """The weight log(1/r)^(-gamma); square-integrable dr/r when gamma > 1/2."""
    return np.log(1.0 / r) ** (-gamma)


def jones_function(
    mu: DiscreteMeasure,
    x,
    alpha: float,
    scales: ScaleConfig,
    variant: str = "uncentered",
    dini_gamma: float | None = None,
    index: SpatialIndex | None = None,
) -> tuple[float, ScaleProfile]:
    """Discrete Jones square function sum_j beta(x, r_j)^2 / r_j^(2 alpha).

    Returns the sum together with the per-scale beta profile.  When
    ``dini_gamma`` is set (only allowed with alpha = 1) every r_j in the
    denominator is replaced by r_j * log(1/r_j)^(-gamma).  Empty-ball
    scales contribute 0.
    """
    if not 0.0 <= alpha <= 1.0:
        raise InputError("alpha must lie in [0, 1]")
    if variant not in ("centered", "uncentered"):
        raise InputError(f"unknown variant {variant!r}")
    if dini_gamma is not None:
        if alpha != 1.0:
            raise InputError("the Dini-weighted variant requires alpha = 1")
        if scales.r0 >= 1.0:
            raise InputError("Dini weighting needs radii below 1")
    evaluate = beta2_centered if variant == "centered" else beta2
    index = index or mu.index
    radii = scales.radii()
    betas = np.empty_like(radii)
    total = 0.0
    for j, r in enumerate(radii):
        b = evaluate(mu, x, float(r), index)
        betas[j] = b.value
        denom = r * dini_weight(r, dini_gamma) if dini_gamma is not None else r
        total += b.value**2 / denom ** (2.0 * alpha)
    profile = ScaleProfile(radii, betas, alpha=alpha, ratio=scales.ratio)
    return total, profile
