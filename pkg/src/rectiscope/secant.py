"""Secant frames: well-spread, mass-carrying points spanning a ball.

A secant frame at (x, r) is a set of n in-ball atoms x_1, ..., x_n such
that the simplex (x, x_1, ..., x_n) has minimum height delta * r with
delta bounded away from zero, and such that each ball B(x_i, 5 eta r)
carries a definite fraction of the local mass.  Frames certify an
effective n-dimensional spread of the measure at scale r: any points
y_i picked from those balls still span a simplex of height at least
delta * r / 2, and frames at scales r and delta * r / 3 occupy disjoint
product regions.

``theoretical`` mode enforces the closed-form constants derived from the
lower-mass constant lambda and the upper-regularity constant C0;
``empirical`` mode maximizes a mass-times-spread score and reports the
constants actually achieved, which on concrete data are far stronger.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    Ball,
    DiscreteMeasure,
    InputError,
    SpatialIndex,
    _as_vector,
    _freeze,
    affine_hull,
    dist_to_affine,
    h_min,
    simplex_volume,
)
from .curvature import _hmin2_diam2


@dataclass(frozen=True)
class SecantConfig:
    """Constants of the frame construction.

    lam is the lower-mass constant (mu(B(x, r)) >= lam * r^n at tested
    scales), c0 the upper-regularity constant, k_exponent the exponent k
    in the spread constant delta = lam / (2^(k+2) 5^(n-1) c0).  There is
    no default for k_exponent; reports always state the value used.
    """

    lam: float
    c0: float
    k_exponent: int
    n: int
    m: int

    def __post_init__(self):
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise InputError("lam must be positive")
        if not (self.c0 >= self.lam):
            raise InputError("c0 must be >= lam")
        if self.k_exponent < 1:
            raise InputError("k_exponent must be a positive integer")
        if not 1 <= self.n <= self.m:
            raise InputError("need 1 <= n <= m")


def theoretical_constants(cfg: SecantConfig) -> tuple[float, float, float]:
    """(delta, eta, C2) from the configured lambda, C0, and exponent k.

    delta = lam / (2^(k+2) 5^(n-1) c0), eta = delta / (10 n), and
    C2 = lam * eta^m / 2^(m+1) is the guaranteed relative ball mass.
    """
    delta = cfg.lam / (2.0 ** (cfg.k_exponent + 2) * 5.0 ** (cfg.n - 1) * cfg.c0)
    eta = delta / (10.0 * cfg.n)
    c2 = cfg.lam * eta**cfg.m / 2.0 ** (cfg.m + 1)
    return delta, eta, c2


@dataclass(frozen=True)
class SecantFrame:
    """A constructed frame with its achieved constants.

    delta is the achieved ratio h_min(x, x_1, ..., x_n) / r; eta the ball
    parameter actually used (theoretical eta in theoretical mode, the
    achieved delta / (10 n) in empirical mode); masses the restricted
    masses (mu on B(x, r)) of the frame balls.
    """

    center: np.ndarray
    scale: float
    points: np.ndarray
    point_indices: tuple[int, ...]
    delta: float
    eta: float
    masses: np.ndarray
    mode: str
    config: SecantConfig

    def __post_init__(self):
        object.__setattr__(self, "center", _freeze(_as_vector(self.center)))
        object.__setattr__(
            self, "points", _freeze(np.asarray(self.points, dtype=np.float64))
        )
        object.__setattr__(
            self, "masses", _freeze(np.asarray(self.masses, dtype=np.float64))
        )

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def ball_radius(self) -> float:
        return 5.0 * self.eta * self.scale

    @property
    def balls(self) -> list[Ball]:
        if self.ball_radius <= 0.0:
            raise InputError("frame has zero spread; its balls are degenerate")
        return [Ball(p, self.ball_radius) for p in self.points]


@dataclass(frozen=True)
class SecantFailure:
    """Structured failure of the theoretical-mode construction."""

    reasons: tuple[str, ...]
    frame: SecantFrame | None

    @property
    def ok(self) -> bool:
        return False


def _restricted_ball_masses(
    ball_pts: np.ndarray, ball_w: np.ndarray, centers: np.ndarray, radius: float
) -> np.ndarray:
    """(mu restricted to B(x, r))(B(c, radius)) for each candidate center c."""
    out = np.empty(centers.shape[0])
    for i, c in enumerate(centers):
        d2 = ((ball_pts - c) ** 2).sum(axis=1)
        out[i] = ball_w[d2 <= radius * radius].sum()
    return out


def find_secant_frame(
    mu: DiscreteMeasure,
    x,
    r: float,
    cfg: SecantConfig,
    mode: str = "empirical",
    index: SpatialIndex | None = None,
) -> SecantFrame | SecantFailure:
    """Greedy construction of a secant frame at (x, r).

    Step i picks, among in-ball atoms (filtered by ball mass >= C2 r^n in
    theoretical mode, scored by mass times distance in empirical mode),
    the point farthest from the affine hull of x and the points chosen so
    far; ties break to the lowest atom index.  Theoretical mode returns a
    SecantFailure naming the violated conclusion if the resulting frame
    misses the guaranteed height ratio or ball masses.
    """
    if mode not in ("theoretical", "empirical"):
        raise InputError(f"unknown mode {mode!r}")
    x = _as_vector(x, mu.ambient_dim)
    r = float(r)
    n = cfg.n
    if n != mu.intrinsic_dim:
        raise InputError("config dimension n disagrees with the measure")
    idx = (index or mu.index).query(x, r)
    ball_pts = mu.points[idx]
    ball_w = mu.weights[idx]
    mass = float(ball_w.sum())
    if mass < cfg.lam * r**n:
        raise InputError(
            f"lower-mass precondition fails: mu(B(x, r)) = {mass:.6g} "
            f"< lam * r^n = {cfg.lam * r ** n:.6g}"
        )
    delta_t, eta_t, c2 = theoretical_constants(cfg)
    select_radius = 5.0 * eta_t * r
    cand_mass = _restricted_ball_masses(ball_pts, ball_w, ball_pts, select_radius)

    chosen: list[int] = []
    basis: list[np.ndarray] = []  # orthonormal, spans chosen - x
    for _ in range(n):
        rel = ball_pts - x
        for b in basis:
            rel = rel - np.outer(rel @ b, b)
        dist = np.sqrt((rel**2).sum(axis=1))
        if mode == "theoretical":
            eligible = cand_mass >= c2 * r**n
            if not eligible.any():
                return SecantFailure(("ball_mass",), None)
            score = np.where(eligible, dist, -np.inf)
        else:
            score = cand_mass * dist
        pick = int(np.argmax(score))  # argmax takes the first = lowest index
        chosen.append(pick)
        direction = ball_pts[pick] - x
        for b in basis:
            direction = direction - (direction @ b) * b
        norm = float(np.sqrt(direction @ direction))
        if norm > 0.0:
            basis.append(direction / norm)

    frame_pts = ball_pts[chosen]
    achieved = h_min(np.vstack([x[None, :], frame_pts])) / r
    if mode == "theoretical":
        eta = eta_t
        masses = cand_mass[chosen]
    else:
        eta = achieved / (10.0 * n)
        masses = _restricted_ball_masses(ball_pts, ball_w, frame_pts, 5.0 * eta * r)
    frame = SecantFrame(
        center=x,
        scale=r,
        points=frame_pts,
        point_indices=tuple(int(idx[c]) for c in chosen),
        delta=achieved,
        eta=eta,
        masses=masses,
        mode=mode,
        config=cfg,
    )
    if mode == "theoretical":
        reasons = []
        if achieved < delta_t:
            reasons.append("min_height_ratio")
        if np.any(masses < c2 * r**n):
            reasons.append("ball_mass")
        if reasons:
            return SecantFailure(tuple(reasons), frame)
    return frame


def _uniform_in_ball(
    rng: np.random.Generator, center: np.ndarray, radius: float, count: int
) -> np.ndarray:
    m = center.shape[0]
    g = rng.standard_normal((count, m))
    g /= np.sqrt((g**2).sum(axis=1, keepdims=True))
    u = rng.random(count) ** (1.0 / m)
    return center + radius * u[:, None] * g


@dataclass(frozen=True)
class FrameCheckReport:
    """Sampled verification of a frame's guarantees."""

    tuples_checked: int
    height_threshold: float
    min_height: float
    height_violations: int
    disjoint: bool | None
    notes: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return self.height_violations == 0 and self.disjoint is not False


def verify_frame_conclusions(
    frame: SecantFrame,
    mu: DiscreteMeasure,
    tuples: int = 10_000,
    seed: int = 0,
    eta_override: float | None = None,
    index: SpatialIndex | None = None,
) -> FrameCheckReport:
    """Check the frame's two guarantees by sampling.

    (a) draws up to ``tuples`` continuum tuples (y_1, ..., y_n), y_i
    uniform in the frame ball around x_i, and checks the simplex
    (x, y_1, ..., y_n) keeps minimum height >= delta * r / 2;
    (b) builds the companion frame at scale delta * r / 3 and checks the
    two product ball regions are disjoint (some component pair of balls
    is separated).  ``eta_override`` widens the sampling balls, which is
    how the detection tests break guarantee (a) on purpose.
    """
    rng = np.random.default_rng(seed)
    n = frame.n
    r = frame.scale
    eta = frame.eta if eta_override is None else float(eta_override)
    radius = 5.0 * eta * r
    if radius <= 0.0:
        return FrameCheckReport(0, 0.0, 0.0, 0, None, ("zero_spread",))
    ys = np.stack(
        [_uniform_in_ball(rng, p, radius, tuples) for p in frame.points], axis=1
    )
    x_rep = np.broadcast_to(
        frame.center, (tuples, 1, frame.center.shape[0])
    )
    vertices = np.concatenate([x_rep, ys], axis=1)
    hmin2, _, degenerate = _hmin2_diam2(vertices)
    heights = np.sqrt(np.where(degenerate, 0.0, hmin2))
    threshold = frame.delta * r / 2.0
    violations = int(np.sum(heights < threshold))

    notes: list[str] = []
    disjoint: bool | None = None
    sub = find_secant_frame(mu, frame.center, frame.delta * r / 3.0, frame.config,
                            frame.mode, index)
    if isinstance(sub, SecantFailure):
        notes.append("companion_frame_failed:" + ",".join(sub.reasons))
    else:
        try:
            gaps = np.sqrt(((frame.points - sub.points) ** 2).sum(axis=1))
            disjoint = bool(
                np.any(gaps > frame.ball_radius + sub.ball_radius)
            )
        except InputError:
            notes.append("degenerate_companion_balls")
    return FrameCheckReport(
        tuples_checked=tuples,
        height_threshold=threshold,
        min_height=float(heights.min(initial=math.inf)),
        height_violations=violations,
        disjoint=disjoint,
        notes=tuple(notes),
    )


@dataclass(frozen=True)
class HeightBoundCheck:
    """Both sides of the distance-versus-height comparison for one tuple."""

    lhs: float
    rhs: float
    passed: bool
    volume_ratio: float
    volume_bound: float
    volume_passed: bool


def dist_vs_hmin_bound(x, z, frame: SecantFrame, ys) -> HeightBoundCheck:
    """Check dist(z, aff{x, y_1..y_n}) <= (2/delta)^n h_min(x, z, y_1..y_n).

    Also checks the companion volume comparison: the face opposite the
    lowest vertex has at most (2/delta)^n times the volume of the face
    opposite z.
    """
    x = _as_vector(x)
    z = _as_vector(z, x.shape[0])
    ys = np.asarray(ys, dtype=np.float64).reshape(-1, x.shape[0])
    n = ys.shape[0]
    factor = (2.0 / frame.delta) ** n

    lhs = dist_to_affine(z, affine_hull(np.vstack([x[None, :], ys])))
    verts = np.vstack([x[None, :], z[None, :], ys])
    heights = [
        dist_to_affine(verts[i], affine_hull(np.delete(verts, i, axis=0)))
        for i in range(verts.shape[0])
    ]
    h = min(heights)
    rhs = factor * h

    lowest = int(np.argmin(heights))
    vol_lowest = simplex_volume(np.delete(verts, lowest, axis=0))
    vol_z = simplex_volume(np.delete(verts, 1, axis=0))
    ratio = vol_lowest / vol_z if vol_z > 0.0 else math.inf
    return HeightBoundCheck(
        lhs=lhs,
        rhs=rhs,
        passed=lhs <= rhs,
        volume_ratio=ratio,
        volume_bound=factor,
        volume_passed=ratio <= factor,
    )
