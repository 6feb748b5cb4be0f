"""Numerical verification of the inequality chain tying flatness to curvature.

Each check computes both sides of one inequality at full precision and
records them exactly; a report passes only if lhs <= rhs in every
non-skipped case.  Constants are assembled from measured frame data
("empirical" mode) or from the closed-form guarantees ("theoretical"
mode); empirical constants are the default since the closed-form ones are
astronomically loose on concrete data.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .beta import ScaleConfig, beta2, beta2_centered, beta_p
from .cloudio import measure_hash
from .core import (
    DiscreteMeasure,
    InputError,
    SpatialIndex,
    _as_vector,
    affine_hull,
    dist_to_affine,
    h_min,
    simplex_volume,
)
from .curvature import curv_exhaustive, tuple_integrand, _weight_products
from .secant import SecantConfig, SecantFailure, find_secant_frame, theoretical_constants

VOLUME_IDENTITY_RTOL = 1e-9


@dataclass(frozen=True)
class CaseRecord:
    label: str
    lhs: float
    rhs: float
    constant: float = math.nan
    skipped: bool = False
    reason: str = ""

    @property
    def margin(self) -> float:
        if self.skipped:
            return math.nan
        if self.lhs == 0.0:
            return math.inf
        return self.rhs / self.lhs

    @property
    def passed(self) -> bool:
        return self.skipped or self.lhs <= self.rhs

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "constant": self.constant,
            "margin": self.margin,
            "passed": self.passed,
            "skipped": self.skipped,
            "reason": self.reason,
        }


@dataclass(frozen=True)
class InequalityReport:
    name: str
    cases: tuple[CaseRecord, ...]
    inputs: dict = field(default_factory=dict)

    @property
    def checked(self) -> tuple[CaseRecord, ...]:
        return tuple(c for c in self.cases if not c.skipped)

    @property
    def passed(self) -> bool:
        # a report with nothing checked establishes nothing
        return len(self.checked) > 0 and all(c.passed for c in self.checked)

    @property
    def pass_count(self) -> int:
        return sum(1 for c in self.checked if c.passed)

    @property
    def total(self) -> int:
        return len(self.checked)

    @property
    def worst_case(self) -> CaseRecord | None:
        checked = self.checked
        if not checked:
            return None
        return min(checked, key=lambda c: c.margin)

    def to_dict(self) -> dict:
        worst = self.worst_case
        return {
            "name": self.name,
            "passed": self.passed,
            "pass_count": self.pass_count,
            "total": self.total,
            "worst_case": worst.to_dict() if worst else None,
            "cases": [c.to_dict() for c in self.cases],
            "inputs": self.inputs,
        }


def _localized_tuple_sum(
    x: np.ndarray,
    z_pts: np.ndarray,
    z_w: np.ndarray,
    y_lists: list[np.ndarray],
    y_weights: list[np.ndarray],
    alpha: float,
    chunk: int = 1 << 16,
) -> float:
    """sum over z and (y_1..y_n) of w_z * prod(w_y) * integrand(x; z, y...).

    The integrand is the curvature integrand with p = 2 and the given
    alpha, whose diameter exponent is n(n+1) + 2 + 2 alpha.
    """
    sizes = [pts.shape[0] for pts in y_lists]
    if z_pts.shape[0] == 0 or any(s == 0 for s in sizes):
        return 0.0
    combos = np.stack(
        [g.ravel() for g in np.meshgrid(*[np.arange(s) for s in sizes], indexing="ij")],
        axis=1,
    )
    terms = []
    kz = z_pts.shape[0]
    for start in range(0, combos.shape[0], max(1, chunk // kz)):
        block = combos[start : start + max(1, chunk // kz)]
        y_block = np.stack(
            [y_lists[i][block[:, i]] for i in range(len(y_lists))], axis=1
        )
        wy_block = _weight_products(
            np.stack([y_weights[i][block[:, i]] for i in range(len(y_lists))], axis=1)
        ) if len(y_lists) > 1 else y_weights[0][block[:, 0]]
        # cross every y combo with every z
        b = block.shape[0]
        coords = np.empty((b * kz, len(y_lists) + 1, x.shape[0]))
        coords[:, 0, :] = np.repeat(z_pts[None, :, :], b, axis=0).reshape(-1, x.shape[0])
        coords[:, 1:, :] = np.repeat(y_block, kz, axis=0)
        coeff = (np.repeat(wy_block, kz) * np.tile(z_w, b))
        terms.append(coeff * tuple_integrand(x, coords, 2.0, alpha))
    return math.fsum(itertools.chain.from_iterable(terms))


def _chain_constant(n: int, delta: float, r: float, ball_masses, mode: str, c2: float) -> float:
    """The proof-chain constant in front of the localized tuple sum.

    Composes the averaging factor over the frame's product balls (measured
    masses in empirical mode, the guaranteed C2 r^n per ball in
    theoretical mode), the (2/delta)^(2n) distance-to-height factor, and
    2^(n^2+n+2) from bounding tuple diameters by 2r.
    """
    diam_factor = 2.0 ** (n * n + n + 2)
    spread = (2.0 / delta) ** (2 * n)
    if mode == "empirical":
        averaging = r ** (n * n) / float(np.prod(np.asarray(ball_masses)))
    else:
        averaging = 1.0 / c2**n
    return spread * diam_factor * averaging


def check_beta_vs_curv(
    mu: DiscreteMeasure,
    x,
    cfg: SecantConfig,
    scales: ScaleConfig,
    mode: str = "empirical",
    index: SpatialIndex | None = None,
) -> InequalityReport:
    """Per-scale check: centered beta^2 <= C * localized curvature sum.

    At each ladder radius a secant frame is built; the right-hand side
    sums the p = 2, alpha = 0 curvature integrand over tuples with z in
    B(x, r) and y_i among the in-ball atoms of the i-th frame ball, scaled
    by the chain constant.  Scales whose frame construction fails are
    skipped with the reason recorded.
    """
    index = index or mu.index
    x = _as_vector(x, mu.ambient_dim)
    n = mu.intrinsic_dim
    delta_t, eta_t, c2 = theoretical_constants(cfg)
    cases = []
    for r in scales.radii():
        r = float(r)
        ball_idx = index.query(x, r)
        mass = float(mu.weights[ball_idx].sum())
        if mass < cfg.lam * r**n:
            cases.append(
                CaseRecord(f"r={r:.6g}", math.nan, math.nan, skipped=True,
                           reason="lower_mass")
            )
            continue
        lhs = beta2_centered(mu, x, r, index).objective
        if lhs == 0.0:
            # in-ball support lies on an n-plane through x: the bound is
            # 0 <= 0 whatever the constant
            cases.append(CaseRecord(f"r={r:.6g}", 0.0, 0.0, 0.0))
            continue
        frame = find_secant_frame(mu, x, r, cfg, mode, index)
        if isinstance(frame, SecantFailure):
            cases.append(
                CaseRecord(f"r={r:.6g}", math.nan, math.nan, skipped=True,
                           reason="frame:" + ",".join(frame.reasons))
            )
            continue
        if frame.delta <= 0.0:
            cases.append(
                CaseRecord(f"r={r:.6g}", math.nan, math.nan, skipped=True,
                           reason="degenerate_frame")
            )
            continue
        z_pts = mu.points[ball_idx]
        z_w = mu.weights[ball_idx]
        y_lists, y_weights = [], []
        for p in frame.points:
            d2 = ((z_pts - p) ** 2).sum(axis=1)
            inside = d2 <= frame.ball_radius**2
            y_lists.append(z_pts[inside])
            y_weights.append(z_w[inside])
        total = _localized_tuple_sum(x, z_pts, z_w, y_lists, y_weights, alpha=0.0)
        delta = frame.delta if mode == "empirical" else delta_t
        constant = _chain_constant(n, delta, r, frame.masses, mode, c2)
        cases.append(CaseRecord(f"r={r:.6g}", lhs, constant * total, constant))
    return InequalityReport(
        name="beta_vs_curvature",
        cases=tuple(cases),
        inputs={
            "measure_hash": measure_hash(mu),
            "center": [float(v) for v in x],
            "mode": mode,
            "config": vars(cfg) | {"delta": delta_t, "eta": eta_t, "c2": c2},
            "scales": vars(scales),
        },
    )


def check_jones_vs_curv(
    mu: DiscreteMeasure,
    x,
    alpha: float,
    cfg: SecantConfig,
    mode: str = "empirical",
    max_scales: int = 8,
    index: SpatialIndex | None = None,
) -> InequalityReport:
    """Chain check: the dyadic Jones sum against curvature at unit scale.

    The ladder uses ratio delta/3 with the theoretical delta of the
    configuration, the spacing under which the per-scale product regions
    are pairwise disjoint, so the localized sums embed side by side into
    the unit-ball tuple integral.  lhs sums centered beta^2 / r^(2 alpha);
    rhs is the worst per-scale chain constant times 2^(2 alpha) times the
    exhaustive curvature at radius 1.
    """
    index = index or mu.index
    x = _as_vector(x, mu.ambient_dim)
    n = mu.intrinsic_dim
    delta_t, eta_t, c2 = theoretical_constants(cfg)
    ratio = delta_t / 3.0
    lhs = 0.0
    constants = []
    details = []
    frames = []
    for j in range(max_scales):
        r = ratio**j
        ball_idx = index.query(x, r)
        if ball_idx.size <= n:
            details.append({"r": r, "skipped": True, "reason": "too_few_atoms"})
            break
        mass = float(mu.weights[ball_idx].sum())
        if mass < cfg.lam * r**n:
            details.append({"r": r, "skipped": True, "reason": "lower_mass"})
            continue
        term = beta2_centered(mu, x, r, index).objective / r ** (2.0 * alpha)
        if term == 0.0:
            details.append({"r": r, "term": 0.0})
            continue
        frame = find_secant_frame(mu, x, r, cfg, mode, index)
        if isinstance(frame, SecantFailure):
            details.append(
                {"r": r, "skipped": True, "reason": "frame:" + ",".join(frame.reasons)}
            )
            continue
        if frame.delta <= 0.0:
            details.append({"r": r, "skipped": True, "reason": "degenerate_frame"})
            continue
        lhs += term
        delta = frame.delta if mode == "empirical" else delta_t
        constants.append(_chain_constant(n, delta, r, frame.masses, mode, c2))
        details.append({"r": r, "term": term})
        frames.append(frame)

    disjoint = True
    for f1, f2 in itertools.combinations(frames, 2):
        gaps = np.sqrt(((f1.points - f2.points) ** 2).sum(axis=1))
        if not np.any(gaps > f1.ball_radius + f2.ball_radius):
            disjoint = False
    if not constants and lhs == 0.0:
        cases = (CaseRecord(f"alpha={alpha:.3g}", 0.0, 0.0, 0.0),)
    elif not constants:
        cases = (CaseRecord("chain", math.nan, math.nan, skipped=True,
                            reason="no usable scales"),)
    else:
        constant = max(constants) * 2.0 ** (2.0 * alpha)
        curv = curv_exhaustive(mu, x, 1.0, 2.0, alpha, index)
        cases = (CaseRecord(f"alpha={alpha:.3g}", lhs, constant * curv.value, constant),)
    return InequalityReport(
        name="jones_vs_curvature",
        cases=cases,
        inputs={
            "measure_hash": measure_hash(mu),
            "center": [float(v) for v in x],
            "alpha": alpha,
            "mode": mode,
            "ratio": ratio,
            "scales_disjoint": disjoint,
            "config": vars(cfg) | {"delta": delta_t, "eta": eta_t, "c2": c2},
            "per_scale": details,
        },
    )


def holder_sum_inequality(
    betas: np.ndarray, radii: np.ndarray, p: float, alpha: float, log_weight: float
) -> tuple[float, float, float]:
    """Both sides of the weighted Holder bound on a beta profile.

    lhs = sum beta_j^2 D, rhs = C * (sum (beta_j / r_j^alpha)^p D)^(2/p)
    with C = (sum r_j^(2 p alpha / (p-2)) D)^((p-2)/p) and D the constant
    log-measure weight of one dyadic step.  Returns (lhs, rhs, C).
    """
    if p <= 2.0:
        raise InputError("the Holder bound needs p > 2")
    b = np.asarray(betas, dtype=np.float64)
    r = np.asarray(radii, dtype=np.float64)
    d = float(log_weight)
    lhs = float((b**2).sum()) * d
    c = float((r ** (2.0 * p * alpha / (p - 2.0))).sum() * d) ** ((p - 2.0) / p)
    rhs = c * float(((b / r**alpha) ** p).sum() * d) ** (2.0 / p)
    return lhs, rhs, c


def check_holder_chain(
    mu: DiscreteMeasure,
    x,
    p: float,
    alpha: float,
    scales: ScaleConfig | None = None,
    index: SpatialIndex | None = None,
    seed: int = 0,
) -> InequalityReport:
    """Holder bound on the real beta_2 profile, plus the termwise bounds.

    Checks, on the ladder profile of the measure at x: the weighted
    Holder comparison for the given p > 2; beta_2^2 <= beta_q^q termwise
    for q in {1, 1.5}; and the moment bound
    beta_2 <= (mu(B)/r^n)^(1/2 - 1/p) beta_p termwise for the given p.
    """
    if p <= 2.0:
        raise InputError("p must exceed 2")
    if not 0.0 < alpha <= 1.0:
        raise InputError("alpha must lie in (0, 1]")
    scales = scales or ScaleConfig(r0=0.5, ratio=0.5, count=8)
    index = index or mu.index
    x = _as_vector(x, mu.ambient_dim)
    n = mu.intrinsic_dim
    radii = scales.radii()
    betas2 = np.array([beta2(mu, x, float(r), index).value for r in radii])
    log_weight = math.log(1.0 / scales.ratio)

    cases = []
    lhs, rhs, c = holder_sum_inequality(betas2, radii, p, alpha, log_weight)
    cases.append(CaseRecord("holder_sum", lhs, rhs, c))

    for q in (1.0, 1.5):
        for r, b2 in zip(radii, betas2):
            bq = beta_p(mu, x, float(r), q, index, seed=seed)
            cases.append(
                CaseRecord(f"low_p_termwise q={q} r={r:.6g}", b2**2, bq.objective)
            )
    for r, b2 in zip(radii, betas2):
        bp = beta_p(mu, x, float(r), p, index, seed=seed)
        mass = float(mu.weights[index.query(x, float(r))].sum())
        moment = (mass / float(r) ** n) ** (0.5 - 1.0 / p)
        cases.append(
            CaseRecord(f"moment_bound r={r:.6g}", b2, moment * bp.value, moment)
        )
    return InequalityReport(
        name="holder_chain",
        cases=tuple(cases),
        inputs={
            "measure_hash": measure_hash(mu),
            "center": [float(v) for v in x],
            "p": p,
            "alpha": alpha,
            "seed": seed,
            "scales": vars(scales),
        },
    )


def check_volume_identity(
    trials: int, max_dim: int, seed: int, ambient_dim: int = 5
) -> InequalityReport:
    """Random-simplex check of height * face volume = dim * volume.

    For every vertex w of a (k+1)-simplex:
    dist(w, aff(others)) * Vol_k(others) = (k+1) * Vol_{k+1}(simplex),
    verified to relative 1e-9; in particular the identity holds at the
    lowest vertex, where the height is h_min.
    """
    if max_dim + 1 > ambient_dim:
        raise InputError("need ambient_dim >= max_dim + 1")
    rng = np.random.default_rng(seed)
    cases = []
    for k in range(1, max_dim + 1):
        worst = 0.0
        for _ in range(trials):
            verts = rng.standard_normal((k + 2, ambient_dim))
            vol_full = simplex_volume(verts)
            target = (k + 1) * vol_full
            for i in range(verts.shape[0]):
                face = np.delete(verts, i, axis=0)
                lhs = dist_to_affine(verts[i], affine_hull(face)) * simplex_volume(face)
                dev = abs(lhs - target) / max(abs(lhs), abs(target), 1e-300)
                worst = max(worst, dev)
            hm = h_min(verts)
            heights = [
                dist_to_affine(verts[i], affine_hull(np.delete(verts, i, axis=0)))
                for i in range(verts.shape[0])
            ]
            lowest = int(np.argmin(heights))
            lhs = hm * simplex_volume(np.delete(verts, lowest, axis=0))
            dev = abs(lhs - target) / max(abs(lhs), abs(target), 1e-300)
            worst = max(worst, dev)
        cases.append(CaseRecord(f"k={k}", worst, VOLUME_IDENTITY_RTOL))
    return InequalityReport(
        name="volume_identity",
        cases=tuple(cases),
        inputs={"trials": trials, "max_dim": max_dim, "seed": seed,
                "ambient_dim": ambient_dim},
    )
