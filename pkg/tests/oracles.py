"""Independent reference implementations used as test oracles.

These deliberately avoid the library's vectorized code paths: the pair
curvature reference walks ordered tuples with plain Python loops and
scalar math, and the plane-search oracles minimize the flatness objective
by direct sampling of candidate planes.
"""

from __future__ import annotations

import math

import numpy as np

from rectiscope.core import GRAM_RTOL


def _pow_half_scalar(x: float, exponent: float) -> float:
    """x ** (exponent / 2), same canonical arithmetic as the library kernel."""
    half = exponent / 2.0
    k = math.floor(half)
    if half == k:
        acc = 1.0
        if k > 0:
            acc = x
            for _ in range(int(k) - 1):
                acc = acc * x
        return acc
    if half == k + 0.5:
        acc = 1.0
        if k > 0:
            acc = x
            for _ in range(int(k) - 1):
                acc = acc * x
        return acc * math.sqrt(x)
    return x**half


def reference_pair_curvature(points, weights, x, r, p, alpha) -> float:
    """Double-loop curvature sum for n = 1 (tuples are ordered pairs).

    Pure Python scalar arithmetic; the total is an exactly rounded sum,
    so it is directly comparable bit for bit with the library value.
    """
    m = len(x)
    pts = [[float(c) for c in row] for row in points]
    w = [float(v) for v in weights]
    x = [float(c) for c in x]
    inside = [
        i
        for i in range(len(pts))
        if sum((pts[i][d] - x[d]) ** 2 for d in range(m)) <= r * r
    ]
    exponent = p * (1.0 + alpha) + 1 * (1 + 1)
    terms = []
    for i in inside:
        for j in inside:
            y, z = pts[i], pts[j]
            u = [y[d] - x[d] for d in range(m)]
            v = [z[d] - x[d] for d in range(m)]
            d01 = sum(t * t for t in u)
            d02 = sum(t * t for t in v)
            d12 = sum((z[d] - y[d]) ** 2 for d in range(m))
            diam2 = max(d01, d02, d12)
            g00 = sum(t * t for t in u)
            g01 = sum(u[d] * v[d] for d in range(m))
            g11 = sum(t * t for t in v)
            det = g00 * g11 - g01 * g01
            diag = g00 * g11
            if det <= GRAM_RTOL * diag or diam2 <= 0.0:
                continue
            h2 = det / diam2
            term = _pow_half_scalar(h2, p) / _pow_half_scalar(diam2, exponent)
            terms.append((w[i] * w[j]) * term)
    return math.fsum(terms)


def grid_min_line_objective_2d(pts, w, x, r, n_angles=1000, n_offsets=100):
    """Min of sum w * dist^2 over an angle-by-offset grid of lines in R^2."""
    best = math.inf
    rel = np.asarray(pts, dtype=float) - np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    offsets = np.linspace(-r, r, n_offsets)
    for theta in np.pi * np.arange(n_angles) / n_angles:
        normal = np.array([-math.sin(theta), math.cos(theta)])
        proj = rel @ normal
        vals = (w[None, :] * (proj[None, :] - offsets[:, None]) ** 2).sum(axis=1)
        best = min(best, float(vals.min()))
    return best


def grid_min_line_objective_p(pts, w, x, r, p, n_angles=400, n_offsets=200):
    """Min of sum w * dist^p over an angle-by-offset grid of lines in R^2."""
    best = math.inf
    rel = np.asarray(pts, dtype=float) - np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    offsets = np.linspace(-r, r, n_offsets)
    for theta in np.pi * np.arange(n_angles) / n_angles:
        normal = np.array([-math.sin(theta), math.cos(theta)])
        proj = rel @ normal
        vals = (w[None, :] * np.abs(proj[None, :] - offsets[:, None]) ** p).sum(axis=1)
        best = min(best, float(vals.min()))
    return best


def zoom_min_line_objective(pts, w, x, r, total=100_000, seed=0, rounds=5):
    """Min of sum w * dist^2 over sampled lines, zooming toward the best.

    Round zero covers directions and offsets globally; later rounds
    shrink a stochastic grid around the best candidate found so far.
    Never touches the eigendecomposition under test.
    """
    rng = np.random.default_rng(seed)
    pts = np.asarray(pts, dtype=float)
    w = np.asarray(w, dtype=float)
    m = pts.shape[1]
    rel = pts - np.asarray(x, dtype=float)
    q2 = (rel**2).sum(axis=1)
    per_round = total // rounds

    def batch(dirs, offs):
        t = rel @ dirs.T
        qo = rel @ offs.T
        o2 = (offs**2).sum(axis=1)
        return w @ (q2[:, None] - 2.0 * qo + o2[None, :] - t**2)

    best_val = math.inf
    best_d = best_o = None
    theta, rho = 1.0, r
    for rnd in range(rounds):
        d = rng.standard_normal((per_round, m))
        if rnd > 0:
            d = best_d[None, :] + theta * d
        d /= np.linalg.norm(d, axis=1, keepdims=True)
        g = rng.standard_normal((per_round, m))
        if rnd == 0:
            g -= (g * d).sum(axis=1, keepdims=True) * d
            norm = np.linalg.norm(g, axis=1, keepdims=True)
            norm[norm == 0.0] = 1.0
            u = rng.random(per_round) ** (1.0 / (m - 1))
            offs = r * u[:, None] * g / norm
        else:
            offs = best_o[None, :] + rho * g
            offs -= (offs * d).sum(axis=1, keepdims=True) * d
        vals = batch(d, offs)
        i = int(np.argmin(vals))
        if vals[i] < best_val:
            best_val = float(vals[i])
            best_d, best_o = d[i], offs[i]
        theta *= 0.3
        rho *= 0.3
    return best_val


def random_rotation(m: int, rng: np.random.Generator) -> np.ndarray:
    q, r_ = np.linalg.qr(rng.standard_normal((m, m)))
    return q * np.sign(np.diag(r_))
