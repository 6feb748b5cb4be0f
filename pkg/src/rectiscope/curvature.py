"""Pointwise Menger-type curvatures of weighted clouds.

For intrinsic dimension n the curvature of mu at x and scale r integrates

    h_min(x, x_1, ..., x_{n+1})^p / diam({x, x_1, ..., x_{n+1}})^(p(1+alpha) + n(n+1))

over ordered (n+1)-tuples drawn from mu restricted to the closed ball
B(x, r), weighted by the product of the atom masses.  Tuples with repeated
points, or any affinely degenerate vertex set, contribute 0.

The kernels work on squared quantities: for a simplex with edge Gram
matrix G and faces F_v,

    h_min^2 = det(G) / max_v det(F_v),

which avoids square roots and keeps the arithmetic identical between the
vectorized production path and a scalar reference, so exhaustive sums are
reproducible bit for bit (totals use exactly rounded summation, which is
order independent).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    GRAM_RTOL,
    BudgetError,
    DiscreteMeasure,
    InputError,
    SpatialIndex,
    _as_vector,
)
from .beta import ScaleConfig, ScaleProfile

EXHAUSTIVE_TUPLE_BUDGET = 10**8
_CHUNK = 1 << 18
_MAX_STRATA = 48


@dataclass(frozen=True)
class CurvatureEstimate:
    """One curvature evaluation with its statistical error (0 if exact)."""

    value: float
    std_error: float
    method: str
    tuples_evaluated: int
    p: float
    alpha: float
    flags: tuple[str, ...] = ()


def _ipow(x, k: int):
    """x**k for small integer k >= 0 by fixed left-to-right products."""
    if k == 0:
        return np.ones_like(x) if isinstance(x, np.ndarray) else 1.0
    acc = x
    for _ in range(k - 1):
        acc = acc * x
    return acc


def _pow_half(x, exponent: float):
    """x ** (exponent / 2), canonical for integer and half-integer halves."""
    half = exponent / 2.0
    k = math.floor(half)
    if half == k:
        return _ipow(x, int(k))
    if half == k + 0.5:
        return _ipow(x, int(k)) * np.sqrt(x)
    return np.power(x, half)


def _gram_det(edges: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Gram determinant of edge vectors, batched.

    edges has shape (B, k, m).  Returns (det, diagonal product); entries
    are formed with explicit dot products and closed-form determinants for
    k <= 3 so the arithmetic is independent of BLAS kernels.
    """
    k = edges.shape[1]
    if k == 0:
        # the empty Gram matrix of a single-vertex face: volume 1
        ones = np.ones(edges.shape[0])
        return ones, ones
    g = {}
    for a in range(k):
        for b in range(a, k):
            g[a, b] = (edges[:, a, :] * edges[:, b, :]).sum(axis=-1)
    diag = g[0, 0]
    for a in range(1, k):
        diag = diag * g[a, a]
    if k == 1:
        return g[0, 0], diag
    if k == 2:
        return g[0, 0] * g[1, 1] - g[0, 1] * g[0, 1], diag
    if k == 3:
        det = (
            g[0, 0] * (g[1, 1] * g[2, 2] - g[1, 2] * g[1, 2])
            - g[0, 1] * (g[0, 1] * g[2, 2] - g[1, 2] * g[0, 2])
            + g[0, 2] * (g[0, 1] * g[1, 2] - g[1, 1] * g[0, 2])
        )
        return det, diag
    full = np.empty(edges.shape[:1] + (k, k))
    for a in range(k):
        for b in range(a, k):
            full[:, a, b] = g[a, b]
            full[:, b, a] = g[a, b]
    return np.linalg.det(full), diag


def _hmin2_diam2(vertices: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Squared minimum height, squared diameter, and degeneracy mask.

    vertices has shape (B, q, m); the simplex dimension is q - 1.
    Degenerate batches (orthogonality defect of the edge Gram below
    GRAM_RTOL) are masked and must be zeroed by the caller.
    """
    q = vertices.shape[1]
    k = q - 1
    diam2 = None
    for i, j in itertools.combinations(range(q), 2):
        diff = vertices[:, j, :] - vertices[:, i, :]
        d2 = (diff * diff).sum(axis=-1)
        diam2 = d2 if diam2 is None else np.maximum(diam2, d2)

    det, diag = _gram_det(vertices[:, 1:, :] - vertices[:, :1, :])
    degenerate = det <= GRAM_RTOL * diag

    if k == 2:
        # faces of a triangle are its sides; the Gram determinant of one
        # edge is its squared length, so the max face equals diam^2
        face_max = diam2
    else:
        face_max = None
        for v in range(q):
            keep = [i for i in range(q) if i != v]
            face = vertices[:, keep, :]
            fdet, _ = _gram_det(face[:, 1:, :] - face[:, :1, :])
            face_max = fdet if face_max is None else np.maximum(face_max, fdet)
    degenerate = degenerate | (face_max <= 0.0) | (diam2 <= 0.0)
    safe = np.where(face_max > 0.0, face_max, 1.0)
    hmin2 = np.where(degenerate, 0.0, det / safe)
    return hmin2, diam2, degenerate


def tuple_integrand(x: np.ndarray, coords: np.ndarray, p: float, alpha: float) -> np.ndarray:
    """Batched integrand h_min^p / diam^(p(1+alpha) + n(n+1)).

    coords has shape (B, n+1, m); x is prepended to every tuple.  Returns
    one value per batch row, 0 for degenerate tuples.
    """
    if not 0.0 <= alpha < 1.0:
        raise InputError("alpha must lie in [0, 1)")
    if p < 1.0:
        raise InputError("p must be >= 1")
    n = coords.shape[1] - 1
    x_rep = np.broadcast_to(x, (coords.shape[0], 1, coords.shape[2]))
    vertices = np.concatenate([x_rep, coords], axis=1)
    hmin2, diam2, degenerate = _hmin2_diam2(vertices)
    exponent = p * (1.0 + alpha) + n * (n + 1)
    num = _pow_half(hmin2, p)
    den = _pow_half(np.where(diam2 > 0.0, diam2, 1.0), exponent)
    return np.where(degenerate, 0.0, num / den)


def curv_integrand(x, tuple_points, p: float, alpha: float) -> float:
    """Scalar integrand for one (n+1)-tuple (n inferred from its length)."""
    x = _as_vector(x)
    pts = np.asarray(tuple_points, dtype=np.float64).reshape(-1, x.shape[0])
    return float(tuple_integrand(x, pts[None, :, :], p, alpha)[0])


def _weight_products(w_rows: np.ndarray) -> np.ndarray:
    acc = w_rows[:, 0]
    for t in range(1, w_rows.shape[1]):
        acc = acc * w_rows[:, t]
    return acc


def _ball(mu: DiscreteMeasure, x, r, index):
    x = _as_vector(x, mu.ambient_dim)
    idx = (index or mu.index).query(x, float(r))
    return x, idx, mu.points[idx], mu.weights[idx]


def curv_exhaustive(
    mu: DiscreteMeasure,
    x,
    r: float,
    p: float,
    alpha: float,
    index: SpatialIndex | None = None,
    tuple_budget: int = EXHAUSTIVE_TUPLE_BUDGET,
) -> CurvatureEstimate:
    """Exact weighted sum over all ordered (n+1)-tuples with repetition.

    The total is an exactly rounded sum of the per-tuple terms, so it does
    not depend on enumeration order or chunking.  Refuses when the tuple
    count exceeds ``tuple_budget``.
    """
    n = mu.intrinsic_dim
    x, idx, pts, w = _ball(mu, x, r, index)
    k = idx.size
    tuples = k ** (n + 1)
    if tuples > tuple_budget:
        raise BudgetError(
            f"{tuples} tuples exceed the exhaustive budget {tuple_budget}; "
            "use curv_monte_carlo"
        )
    if k == 0:
        return CurvatureEstimate(0.0, 0.0, "exhaustive", 0, p, alpha, ("empty_ball",))

    shape = (k,) * (n + 1)

    def chunks():
        for start in range(0, tuples, _CHUNK):
            flat = np.arange(start, min(start + _CHUNK, tuples))
            multi = np.stack(np.unravel_index(flat, shape), axis=1)
            coeff = _weight_products(w[multi])
            yield coeff * tuple_integrand(x, pts[multi], p, alpha)

    value = math.fsum(itertools.chain.from_iterable(chunks()))
    return CurvatureEstimate(value, 0.0, "exhaustive", tuples, p, alpha)


def _stream_rng(seed: int, stream: int, stratum: int) -> np.random.Generator:
    key = np.array(
        [
            seed & 0xFFFFFFFFFFFFFFFF,
            ((stream & 0xFFFFFFFF) << 32 | (stratum & 0xFFFFFFFF)),
        ],
        dtype=np.uint64,
    )
    return np.random.Generator(np.random.Philox(key=key))


def _draw_indices(rng: np.random.Generator, cumw: np.ndarray, size) -> np.ndarray:
    u = rng.random(size) * cumw[-1]
    return np.searchsorted(cumw, u, side="right").clip(0, cumw.size - 1)


def _allocate(weights: np.ndarray, total: int) -> np.ndarray:
    """Largest-remainder allocation of ``total`` samples, >= 1 per stratum."""
    k = weights.size
    counts = np.ones(k, dtype=int)
    remaining = total - k
    if remaining > 0:
        share = weights / weights.sum() * remaining
        counts += np.floor(share).astype(int)
        left = total - counts.sum()
        if left > 0:
            order = np.argsort(-(share - np.floor(share)), kind="stable")
            counts[order[:left]] += 1
    return counts


def curv_monte_carlo(
    mu: DiscreteMeasure,
    x,
    r: float,
    p: float,
    alpha: float,
    samples: int,
    seed: int,
    strategy: str = "annulus_stratified",
    index: SpatialIndex | None = None,
    stream: int = 0,
) -> CurvatureEstimate:
    """Unbiased Monte Carlo estimate of the exhaustive tuple sum.

    ``uniform`` draws each tuple coordinate independently with probability
    proportional to its weight.  ``annulus_stratified`` stratifies tuples
    by the dyadic annulus of their farthest coordinate from x and samples
    the exact conditional law inside each stratum; sample allocation is
    proportional to the stratum's product mass.  Every stratum gets its
    own counter-based random stream keyed by (seed, stream, stratum), so
    results do not depend on worker count or chunking.
    """
    if samples < 1:
        raise InputError("samples must be >= 1")
    if strategy not in ("uniform", "annulus_stratified"):
        raise InputError(f"unknown strategy {strategy!r}")
    n = mu.intrinsic_dim
    x, idx, pts, w = _ball(mu, x, r, index)
    if idx.size == 0 or w.sum() <= 0.0:
        return CurvatureEstimate(0.0, 0.0, "monte_carlo", 0, p, alpha, ("zero_mass",))
    q = n + 1
    total_mass = float(w.sum())

    if strategy == "uniform":
        rng = _stream_rng(seed, stream, 0)
        cumw = np.cumsum(w)
        draws = _draw_indices(rng, cumw, (samples, q))
        f = tuple_integrand(x, pts[draws], p, alpha)
        scale = total_mass**q
        value = scale * float(f.mean())
        sd = float(f.std(ddof=1)) if samples > 1 else 0.0
        se = scale * sd / math.sqrt(samples)
        return CurvatureEstimate(value, se, "monte_carlo", samples, p, alpha)

    # dyadic annulus level of each atom: 0 is the outermost shell (r/2, r]
    d = np.sqrt(((pts - x) ** 2).sum(axis=1))
    with np.errstate(divide="ignore"):
        lev = np.floor(-np.log2(np.where(d > 0.0, d / r, np.nan)))
    lev = np.where(np.isnan(lev), _MAX_STRATA - 1, lev)
    lev = np.clip(lev, 0, _MAX_STRATA - 1).astype(int)

    occupied = np.unique(lev)
    tail_after = {}  # mass strictly deeper than level s
    mass_at = {}
    for s in occupied:
        mass_at[s] = float(w[lev == s].sum())
        tail_after[s] = float(w[lev > s].sum())
    stratum_mass = np.array(
        [
            (mass_at[s] + tail_after[s]) ** q - tail_after[s] ** q
            for s in occupied
        ]
    )
    keep = stratum_mass > 0.0
    occupied = occupied[keep]
    stratum_mass = stratum_mass[keep]
    if occupied.size > samples:
        top = np.argsort(-stratum_mass)[:samples]
        top.sort()
        occupied = occupied[top]
        stratum_mass = stratum_mass[top]
    counts = _allocate(stratum_mass, samples)

    value = 0.0
    variance = 0.0
    drawn = 0
    for s, g_mass, count in zip(occupied, stratum_mass, counts):
        rng = _stream_rng(seed, stream, int(s) + 1)
        at = np.flatnonzero(lev == s)
        deeper = np.flatnonzero(lev > s)
        t_here = mass_at[s] + tail_after[s]
        prob_here = mass_at[s] / t_here
        # pattern of which coordinates sit exactly at this level,
        # conditioned on at least one
        masks = np.arange(1, 2**q)
        bits = np.array([bin(mk).count("1") for mk in masks])
        pattern_p = prob_here**bits * (1.0 - prob_here) ** (q - bits)
        pattern_p = pattern_p / pattern_p.sum()
        chosen = masks[_draw_indices(rng, np.cumsum(pattern_p), count)]
        draws = np.empty((count, q), dtype=np.intp)
        cum_at = np.cumsum(w[at])
        cum_deep = np.cumsum(w[deeper]) if deeper.size else None
        u = rng.random((count, q))
        for t in range(q):
            here = (chosen >> t) & 1 == 1
            col = np.empty(count, dtype=np.intp)
            if here.any():
                sel = np.searchsorted(cum_at, u[here, t] * cum_at[-1], side="right")
                col_here = at[sel.clip(0, at.size - 1)]
                col[here] = col_here
            if (~here).any():
                sel = np.searchsorted(
                    cum_deep, u[~here, t] * cum_deep[-1], side="right"
                )
                col[~here] = deeper[sel.clip(0, deeper.size - 1)]
            draws[:, t] = col
        f = tuple_integrand(x, pts[draws], p, alpha)
        mean = float(f.mean())
        var = float(f.var(ddof=1)) if count > 1 else 0.0
        value += g_mass * mean
        variance += g_mass**2 * var / count
        drawn += int(count)
    return CurvatureEstimate(
        value, math.sqrt(variance), "monte_carlo", drawn, p, alpha
    )


def curv_profile(
    mu: DiscreteMeasure,
    x,
    p: float,
    alpha: float,
    scales: ScaleConfig,
    method: str = "auto",
    samples: int = 100_000,
    seed: int = 0,
    tuple_budget: int = EXHAUSTIVE_TUPLE_BUDGET,
    index: SpatialIndex | None = None,
) -> ScaleProfile:
    """Curvature estimates along a dyadic ladder, reusing one spatial index.

    ``auto`` runs exhaustively whenever the tuple count fits the budget and
    falls back to stratified Monte Carlo (stream j for scale j) otherwise.
    """
    if method not in ("auto", "exhaustive", "mc"):
        raise InputError(f"unknown method {method!r}")
    index = index or mu.index
    x = _as_vector(x, mu.ambient_dim)
    n = mu.intrinsic_dim
    radii = scales.radii()
    values = np.empty_like(radii)
    for j, r in enumerate(radii):
        k = index.query(x, float(r)).size
        exhaustive_ok = k ** (n + 1) <= tuple_budget
        if method == "exhaustive" or (method == "auto" and exhaustive_ok):
            est = curv_exhaustive(mu, x, float(r), p, alpha, index, tuple_budget)
        else:
            est = curv_monte_carlo(
                mu, x, float(r), p, alpha, samples, seed, index=index, stream=j
            )
        values[j] = est.value
    return ScaleProfile(radii, values, alpha=alpha, ratio=scales.ratio)
