"""Finite-scale density profiles and the upper-regular chopping decomposition.

True upper and lower densities are limits as r -> 0 and cannot be read off
finite data; everything here is a finite-scale proxy and is labeled as
such.  The chopping operation keeps the atoms whose ball masses stay below
k * r^n at a ladder of dyadic radii, a discrete relaxation of the
pointwise condition "mu(B(x, r)) <= k r^n for every r below 2^-k".
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._parallel import map_ordered
from .beta import ScaleConfig
from .core import DiscreteMeasure, InputError, SpatialIndex, _as_vector, _freeze

CHOP_DEFAULT_DEPTH = 20


@dataclass(frozen=True)
class DensityProfile:
    """Ratios mu(B(x, r)) / r^n along a radius ladder (finite-scale proxy)."""

    center: np.ndarray
    radii: np.ndarray
    ratios: np.ndarray
    intrinsic_dim: int

    def __post_init__(self):
        object.__setattr__(self, "center", _freeze(_as_vector(self.center)))
        object.__setattr__(
            self, "radii", _freeze(np.asarray(self.radii, dtype=np.float64))
        )
        object.__setattr__(
            self, "ratios", _freeze(np.asarray(self.ratios, dtype=np.float64))
        )
        if self.radii.shape != self.ratios.shape:
            raise InputError("radii and ratios must have equal length")

    @property
    def upper_est(self) -> float:
        return float(self.ratios.max(initial=0.0))

    @property
    def lower_est(self) -> float:
        return float(self.ratios.min(initial=0.0)) if self.ratios.size else 0.0


def _ball_masses_at_radii(
    mu: DiscreteMeasure, x: np.ndarray, radii: np.ndarray, index: SpatialIndex
) -> np.ndarray:
    """mu(B(x, r)) for each r, via one query at the largest radius.

    Per-radius masses are summed in ascending atom order, so they agree
    bit for bit with a full linear scan.
    """
    rmax = float(radii.max(initial=0.0))
    idx = index.query(x, rmax)
    out = np.zeros_like(radii)
    if idx.size == 0:
        return out
    d2 = ((mu.points[idx] - x) ** 2).sum(axis=1)
    w = mu.weights[idx]
    for i, r in enumerate(radii):
        out[i] = w[d2 <= r * r].sum()
    return out


def density_profile(
    mu: DiscreteMeasure, x, scales: ScaleConfig, index: SpatialIndex | None = None
) -> DensityProfile:
    """Exact mass ratios mu(B(x, r_j)) / r_j^n at each ladder radius."""
    x = _as_vector(x, mu.ambient_dim)
    radii = scales.radii()
    masses = _ball_masses_at_radii(mu, x, radii, index or mu.index)
    ratios = masses / radii**mu.intrinsic_dim
    return DensityProfile(x, radii, ratios, mu.intrinsic_dim)


def upper_regularity_constant(
    mu: DiscreteMeasure,
    scales: ScaleConfig,
    centers,
    index: SpatialIndex | None = None,
) -> float:
    """Max of mu(B(x, r)) / r^n over the given centers and ladder radii.

    An empirical lower bound for any valid upper-regularity constant of
    the measure at the tested scales.
    """
    index = index or mu.index
    centers = np.asarray(centers, dtype=np.float64).reshape(-1, mu.ambient_dim)
    profiles = map_ordered(
        lambda c: density_profile(mu, c, scales, index).upper_est, centers
    )
    return float(max(profiles, default=0.0))


def min_pairwise_distance(mu: DiscreteMeasure, chunk: int = 512) -> float:
    """Smallest nonzero pairwise atom distance (0 if atoms coincide)."""
    pts = mu.points
    n = pts.shape[0]
    if n < 2:
        return math.inf
    best = math.inf
    for start in range(0, n - 1, chunk):
        block = pts[start : start + chunk]
        rest = pts[start + 1 :]
        for i, p in enumerate(block):
            diff = rest[i:] - p
            if diff.shape[0] == 0:
                continue
            d2 = (diff * diff).sum(axis=1)
            m = float(d2.min())
            if m < best:
                best = m
    return math.sqrt(best)


def chop_radii(mu: DiscreteMeasure, k: int, depth: int = CHOP_DEFAULT_DEPTH) -> np.ndarray:
    """Dyadic test radii 2^-(k+1), ..., 2^-(k+depth) used by chop.

    Radii below a quarter of the smallest pairwise gap are dropped: there
    the ratios are atom-dominated and carry no information.
    """
    if k < 1:
        raise InputError("k must be >= 1")
    radii = 2.0 ** (-(k + 1 + np.arange(depth, dtype=np.float64)))
    floor = min_pairwise_distance(mu) / 4.0
    return radii[radii >= floor]


def chop(
    mu: DiscreteMeasure,
    k: int,
    depth: int = CHOP_DEFAULT_DEPTH,
    index: SpatialIndex | None = None,
) -> DiscreteMeasure:
    """Restrict mu to atoms with mu(B(x_i, r)) <= k r^n at every test radius.

    Weights are preserved.  When every dyadic radius falls below the
    pairwise-gap floor the condition is vacuous and mu is returned whole.
    """
    radii = chop_radii(mu, k, depth)
    if radii.size == 0:
        return mu
    index = index or mu.index
    bound = float(k) * radii**mu.intrinsic_dim

    def ok(i: int) -> bool:
        masses = _ball_masses_at_radii(mu, mu.points[i], radii, index)
        return bool(np.all(masses <= bound))

    keep = [i for i, good in enumerate(map_ordered(ok, range(mu.count))) if good]
    if not keep:
        raise InputError(f"chopping with k={k} removes every atom")
    return mu.restrict(np.asarray(keep, dtype=np.intp))
