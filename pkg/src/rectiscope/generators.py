"""Synthetic weighted clouds with known regularity class.

Fixtures for tests and diagnostics: exactly flat planes, graphs of a
Weierstrass-type series with tunable Holder exponent, circles, the
four-corner Cantor construction, and noisy planes.  Generation is
deterministic: identical spec and seed give identical clouds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DiscreteMeasure, InputError

KINDS = (
    "plane",
    "lipschitz_graph",
    "holder_graph",
    "circle",
    "cantor4",
    "perturbed_plane",
)

# Weierstrass-type series parameters: amplitude, frequency base, terms.
# With truncation at 12 terms the series is faithful above scale ~2^-10.
GRAPH_AMPLITUDE = 1.0
GRAPH_BASE = 2.0
GRAPH_TERMS = 12


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n: int = 1
    m: int = 2
    count: int = 256
    level: int = 3
    seed: int = 0
    weight_scheme: str = "uniform"
    alpha: float = 0.5
    noise: float = 0.01

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown generator kind {self.kind!r}")
        if self.weight_scheme not in ("uniform", "area"):
            raise InputError(f"unknown weight scheme {self.weight_scheme!r}")
        if not 1 <= self.n <= self.m:
            raise InputError("need 1 <= n <= m")
        if self.kind == "holder_graph" and not 0.0 < self.alpha < 1.0:
            raise InputError("holder_graph needs alpha in (0, 1)")
        if self.kind in ("holder_graph", "lipschitz_graph") and self.m < self.n + 1:
            raise InputError("graphs need m >= n + 1")
        if self.kind == "cantor4" and self.level < 1:
            raise InputError("cantor4 needs level >= 1")
        if self.count < 1:
            raise InputError("count must be >= 1")


def weierstrass(t: np.ndarray, alpha: float) -> np.ndarray:
    """sum_j b^(-j(1+alpha)) cos(b^j t): a C^{1,alpha} profile for alpha in (0,1)."""
    out = np.zeros_like(t, dtype=np.float64)
    for j in range(GRAPH_TERMS + 1):
        out += GRAPH_BASE ** (-j * (1.0 + alpha)) * np.cos(GRAPH_BASE**j * t)
    return GRAPH_AMPLITUDE * out


def cantor4_cells(level: int) -> np.ndarray:
    """Centers of the 4^level level cells of the four-corner Cantor set.

    Each generation keeps the four corner quarters of contraction 1/4 of
    the unit square; cells at depth L are squares of side 4^-L.
    """
    offsets = np.array([[0.0, 0.0], [0.75, 0.0], [0.0, 0.75], [0.75, 0.75]])
    anchors = np.zeros((1, 2))
    scale = 1.0
    for _ in range(level):
        anchors = (anchors[:, None, :] + scale * offsets[None, :, :]).reshape(-1, 2)
        scale *= 0.25
    return anchors + 0.5 * scale  # cell side is `scale`; centers sit mid-cell

def _pad(points: np.ndarray, m: int) -> np.ndarray:
    if points.shape[1] == m:
        return points
    out = np.zeros((points.shape[0], m))
    out[:, : points.shape[1]] = points
    return out


def _jittered_cube(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Quasi-uniform sample of [0,1]^n: jittered grid, trimmed to count."""
    side = max(1, math.ceil(count ** (1.0 / n)))
    axes = [np.arange(side, dtype=np.float64) for _ in range(n)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    jitter = rng.random(grid.shape)
    pts = (grid + 0.9 * jitter) / side
    if pts.shape[0] > count:
        keep = rng.permutation(pts.shape[0])[:count]
        pts = pts[np.sort(keep)]
    return pts


def generate(spec: GeneratorSpec) -> DiscreteMeasure:
    rng = np.random.default_rng(spec.seed)
    kind = spec.kind

    if kind in ("plane", "perturbed_plane"):
        base = _jittered_cube(spec.n, spec.count, rng)
        pts = _pad(base, spec.m)
        if kind == "perturbed_plane" and spec.m > spec.n:
            pts[:, spec.n :] += spec.noise * (
                2.0 * rng.random((pts.shape[0], spec.m - spec.n)) - 1.0
            )
        weights = np.full(pts.shape[0], 1.0 / pts.shape[0])
        return DiscreteMeasure(pts, weights, spec.n)

    if kind in ("lipschitz_graph", "holder_graph"):
        alpha = spec.alpha if kind == "holder_graph" else 0.0
        base = _jittered_cube(spec.n, spec.count, rng)
        base = base[np.lexsort(base.T[::-1])]
        heights = weierstrass(base.sum(axis=1), alpha)
        graph = np.concatenate([base, heights[:, None]], axis=1)
        pts = _pad(graph, spec.m)
        if spec.weight_scheme == "area" and spec.n == 1:
            # arc-length increments along the parametrization
            seg = np.diff(graph, axis=0)
            steps = np.sqrt((seg**2).sum(axis=1))
            weights = np.empty(pts.shape[0])
            weights[1:-1] = 0.5 * (steps[:-1] + steps[1:])
            weights[0] = steps[0] * 0.5 + 1e-12
            weights[-1] = steps[-1] * 0.5 + 1e-12
        else:
            weights = np.full(pts.shape[0], 1.0 / pts.shape[0])
        return DiscreteMeasure(pts, weights, spec.n)

    if kind == "circle":
        angles = 2.0 * np.pi * np.arange(spec.count) / spec.count
        circle = np.stack([np.cos(angles), np.sin(angles)], axis=1)
        pts = _pad(circle, spec.m)
        per_point = (
            2.0 * np.pi / spec.count
            if spec.weight_scheme == "area"
            else 1.0 / spec.count
        )
        return DiscreteMeasure(pts, np.full(spec.count, per_point), 1)

    if kind == "cantor4":
        centers = cantor4_cells(spec.level)
        pts = _pad(centers, spec.m)
        weights = np.full(pts.shape[0], 4.0 ** (-spec.level))
        return DiscreteMeasure(pts, weights, 1)

    raise InputError(f"unknown generator kind {kind!r}")
