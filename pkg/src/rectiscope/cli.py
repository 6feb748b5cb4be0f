"""Command-line interface.

Subcommands: generate, beta, curv, jones, secant, density, chop, verify,
report.  Options may come from a JSON config file (--config); explicit
flags win over config values, which win over built-in defaults.  Runs are
reproducible: identical config and seed give byte-identical outputs, so
no output file contains wall-clock data (timing goes to stderr).

Exit codes: 0 success, 1 usage error, 2 input error, 3 budget exceeded,
4 verification failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from ._parallel import map_ordered
from .beta import ScaleConfig, beta2, beta2_centered, beta_p, jones_function
from .cloudio import format_float, load_measure, measure_hash, write_binary, write_csv
from .core import BudgetError, DiscreteMeasure, InputError
from .curvature import curv_exhaustive, curv_monte_carlo, curv_profile
from .density import chop, density_profile
from .generators import GeneratorSpec, generate
from .secant import (
    SecantConfig,
    SecantFailure,
    find_secant_frame,
    theoretical_constants,
    verify_frame_conclusions,
)
from .verify import (
    check_beta_vs_curv,
    check_holder_chain,
    check_jones_vs_curv,
    check_volume_identity,
)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_VERIFY = 4


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Union of all run parameters; the JSON config mirrors these fields."""

    input: str = ""
    output: str = ""
    outdir: str = ""
    summary: str = ""
    report: str = ""
    format: str = "csv"
    n: int = 1
    m: int = 2
    p: float = 2.0
    alpha: float = 0.0
    r: float = 1.0
    r0: float = 1.0
    ratio: float = 0.5
    scales: int = 12
    seed: int = 42
    samples: int = 100_000
    method: str = "auto"
    strategy: str = "annulus_stratified"
    budget: int = 10**8
    centers: str = "all"
    centered: bool = False
    variant: str = "uncentered"
    dini_gamma: float | None = None
    lam: float = 1.0
    c0: float = 2.0
    k: int | None = None
    mode: str = "empirical"
    x_index: int = 0
    suite: str = "all"
    kind: str = "plane"
    count: int = 256
    level: int = 3
    weights: str = "uniform"
    noise: float = 0.01
    graph_alpha: float = 0.5
    depth: int = 20
    with_curv: bool = False

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def resolve(cls, file_values: dict, cli_values: dict) -> "RunConfig":
        fields = {f.name: f for f in dataclasses.fields(cls)}
        merged = {}
        for key, value in file_values.items():
            if key not in fields:
                raise InputError(f"config: unknown field {key!r}")
            merged[key] = value
        for key, value in cli_values.items():
            if value is not None:
                merged[key] = value
        try:
            return cls(**merged)
        except TypeError as exc:
            raise InputError(f"config: {exc}") from None


def _load_config_file(path: str | None) -> dict:
    if not path:
        return {}
    try:
        raw = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"config: {exc}") from None
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InputError(f"config: line {exc.lineno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise InputError("config: top level must be an object")
    return data


def _resolve(args: argparse.Namespace) -> RunConfig:
    cli_values = {
        k: v
        for k, v in vars(args).items()
        if k not in ("func", "config", "command")
    }
    return RunConfig.resolve(_load_config_file(args.config), cli_values)


def _json_ready(obj):
    if isinstance(obj, dict):
        return {k: _json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_ready(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_json_ready(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, float) and (math.isnan(obj) or math.isinf(obj)):
        return str(obj)
    return obj


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(_json_ready(payload), sort_keys=True, indent=2)
    path.write_text(text + "\n")


def _write_summary(cfg: RunConfig, command: str, outputs: list[str],
                   extra: dict | None = None) -> None:
    target = cfg.summary or (cfg.output + ".summary.json" if cfg.output else "")
    if not target:
        return
    payload = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "rectiscope", "version": __version__},
        "command": command,
        "config": cfg.to_dict(),
        "outputs": outputs,
    }
    if extra:
        payload.update(extra)
    _write_json(Path(target), payload)


def _write_table(path: Path, header: list[str], rows: list[list]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    for row in rows:
        lines.append(
            ",".join(
                format_float(v) if isinstance(v, float) else str(v) for v in row
            )
        )
    path.write_text("\n".join(lines) + "\n")


def _select_centers(cfg: RunConfig, mu: DiscreteMeasure) -> list[int]:
    spec = cfg.centers
    if spec == "all":
        return list(range(mu.count))
    if spec.startswith("sample:"):
        try:
            k = int(spec.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad centers selector {spec!r}")
        if k < 1:
            raise UsageError("sample size must be >= 1")
        rng = np.random.default_rng(cfg.seed)
        k = min(k, mu.count)
        return sorted(rng.permutation(mu.count)[:k].tolist())
    if spec.startswith("file:"):
        path = spec.split(":", 1)[1]
        try:
            lines = Path(path).read_text().split()
        except OSError as exc:
            raise InputError(f"centers file: {exc}") from None
        try:
            idx = [int(tok) for tok in lines]
        except ValueError as exc:
            raise InputError(f"centers file: {exc}") from None
        bad = [i for i in idx if not 0 <= i < mu.count]
        if bad:
            raise InputError(f"centers file: index {bad[0]} out of range")
        return idx
    raise UsageError(f"bad centers selector {spec!r}: use all, sample:K, or file:PATH")


def _require_input(cfg: RunConfig) -> DiscreteMeasure:
    if not cfg.input:
        raise UsageError("--input is required for this command")
    return load_measure(cfg.input, cfg.n)


def _scale_config(cfg: RunConfig) -> ScaleConfig:
    return ScaleConfig(r0=cfg.r0, ratio=cfg.ratio, count=cfg.scales)


def _secant_config(cfg: RunConfig, mu: DiscreteMeasure) -> SecantConfig:
    if cfg.k is None:
        raise UsageError(
            "the frame-constant exponent --k has no default; pass it "
            "explicitly (it is echoed in every report)"
        )
    return SecantConfig(
        lam=cfg.lam, c0=cfg.c0, k_exponent=cfg.k, n=mu.intrinsic_dim,
        m=mu.ambient_dim,
    )


# ---------------------------------------------------------------- commands


def _cmd_generate(args) -> int:
    cfg = _resolve(args)
    if not cfg.output:
        raise UsageError("--output is required")
    spec = GeneratorSpec(
        kind=cfg.kind,
        n=cfg.n,
        m=cfg.m,
        count=cfg.count,
        level=cfg.level,
        seed=cfg.seed,
        weight_scheme=cfg.weights,
        alpha=cfg.graph_alpha,
        noise=cfg.noise,
    )
    mu = generate(spec)
    out = Path(cfg.output)
    if cfg.format == "binary":
        write_binary(mu, out)
    elif cfg.format == "csv":
        write_csv(mu, out)
    else:
        raise UsageError(f"unknown format {cfg.format!r}")
    _write_summary(cfg, "generate", [str(out)],
                   {"measure_hash": measure_hash(mu), "atoms": mu.count})
    return EXIT_OK


def _beta_like(args, default_variant: str | None = None) -> int:
    cfg = _resolve(args)
    mu = _require_input(cfg)
    if not cfg.output:
        raise UsageError("--output is required")
    scales = _scale_config(cfg)
    centers = _select_centers(cfg, mu)
    variant = cfg.variant
    if default_variant is None and cfg.centered:
        variant = "centered"
    if variant == "centered" and cfg.p != 2.0:
        raise UsageError("the centered variant is only defined for p = 2")
    index = mu.index

    def one(center: int):
        x = mu.points[center]
        radii = scales.radii()
        rows = []
        partial = 0.0
        for r in radii:
            r = float(r)
            if cfg.p == 2.0:
                res = (
                    beta2_centered(mu, x, r, index)
                    if variant == "centered"
                    else beta2(mu, x, r, index)
                )
            else:
                res = beta_p(mu, x, r, cfg.p, index, seed=cfg.seed)
            denom = r
            if cfg.dini_gamma is not None:
                if cfg.alpha != 1.0:
                    raise InputError("--dini-gamma requires --alpha 1")
                denom = r * math.log(1.0 / r) ** (-cfg.dini_gamma)
            partial += res.value**2 / denom ** (2.0 * cfg.alpha)
            rows.append([center, r, res.value, partial])
        return rows

    tables = map_ordered(one, centers)
    rows = [row for table in tables for row in table]
    out = Path(cfg.output)
    _write_table(out, ["center_index", "r", "beta", "jones_partial"], rows)
    _write_summary(cfg, args.command, [str(out)],
                   {"measure_hash": measure_hash(mu), "centers": len(centers)})
    return EXIT_OK


def _cmd_beta(args) -> int:
    return _beta_like(args)


def _cmd_jones(args) -> int:
    return _beta_like(args, default_variant="uncentered")


def _cmd_curv(args) -> int:
    cfg = _resolve(args)
    mu = _require_input(cfg)
    if not cfg.output:
        raise UsageError("--output is required")
    centers = _select_centers(cfg, mu)
    index = mu.index
    n = mu.intrinsic_dim

    def one(center: int):
        x = mu.points[center]
        k = index.query(x, cfg.r).size
        exhaustive_ok = k ** (n + 1) <= cfg.budget
        if cfg.method == "exhaustive" or (cfg.method == "auto" and exhaustive_ok):
            est = curv_exhaustive(mu, x, cfg.r, cfg.p, cfg.alpha, index, cfg.budget)
        elif cfg.method in ("auto", "mc"):
            est = curv_monte_carlo(
                mu, x, cfg.r, cfg.p, cfg.alpha, cfg.samples, cfg.seed,
                strategy=cfg.strategy, index=index, stream=center,
            )
        else:
            raise UsageError(f"unknown method {cfg.method!r}")
        return [center, cfg.r, est.value, est.std_error, est.method,
                est.tuples_evaluated]

    rows = map_ordered(one, centers)
    out = Path(cfg.output)
    _write_table(
        out, ["center_index", "r", "value", "std_error", "method", "tuples"], rows
    )
    _write_summary(cfg, "curv", [str(out)],
                   {"measure_hash": measure_hash(mu), "centers": len(centers)})
    return EXIT_OK


def _cmd_secant(args) -> int:
    cfg = _resolve(args)
    mu = _require_input(cfg)
    if not 0 <= cfg.x_index < mu.count:
        raise InputError(f"x-index {cfg.x_index} out of range")
    scfg = _secant_config(cfg, mu)
    delta, eta, c2 = theoretical_constants(scfg)
    x = mu.points[cfg.x_index]
    result = find_secant_frame(mu, x, cfg.r, scfg, cfg.mode)
    payload: dict = {
        "schema_version": SCHEMA_VERSION,
        "command": "secant",
        "config": cfg.to_dict(),
        "measure_hash": measure_hash(mu),
        "theoretical": {"delta": delta, "eta": eta, "c2": c2,
                        "k_exponent": cfg.k},
    }
    if isinstance(result, SecantFailure):
        payload["frame"] = None
        payload["failure"] = {"reasons": list(result.reasons)}
    else:
        check = verify_frame_conclusions(result, mu, seed=cfg.seed)
        payload["frame"] = {
            "center": result.center,
            "scale": result.scale,
            "points": result.points,
            "point_indices": list(result.point_indices),
            "delta": result.delta,
            "eta": result.eta,
            "ball_radius": result.ball_radius,
            "masses": result.masses,
            "mode": result.mode,
        }
        payload["conclusions"] = {
            "tuples_checked": check.tuples_checked,
            "height_threshold": check.height_threshold,
            "min_height": check.min_height,
            "height_violations": check.height_violations,
            "disjoint": check.disjoint,
            "notes": list(check.notes),
            "passed": check.passed,
        }
    out = Path(cfg.output or "secant_frame.json")
    _write_json(out, payload)
    return EXIT_OK


def _cmd_density(args) -> int:
    cfg = _resolve(args)
    mu = _require_input(cfg)
    if not cfg.output:
        raise UsageError("--output is required")
    scales = _scale_config(cfg)
    centers = _select_centers(cfg, mu)
    index = mu.index

    def one(center: int):
        prof = density_profile(mu, mu.points[center], scales, index)
        return [
            [center, float(r), float(q)] for r, q in zip(prof.radii, prof.ratios)
        ], prof.upper_est, prof.lower_est

    results = map_ordered(one, centers)
    rows = [row for table, _, _ in results for row in table]
    out = Path(cfg.output)
    _write_table(out, ["center_index", "r", "ratio"], rows)
    upper = max((u for _, u, _ in results), default=0.0)
    lower = min((l for _, _, l in results), default=0.0)
    _write_summary(cfg, "density", [str(out)], {
        "measure_hash": measure_hash(mu),
        "upper_regularity_estimate": upper,
        "lower_ratio_estimate": lower,
        "note": "finite-scale estimates; not limit densities",
    })
    return EXIT_OK


def _cmd_chop(args) -> int:
    cfg = _resolve(args)
    mu = _require_input(cfg)
    if not cfg.output:
        raise UsageError("--output is required")
    chopped = chop(mu, cfg.k, depth=cfg.depth)
    out = Path(cfg.output)
    write_csv(chopped, out)
    _write_summary(cfg, "chop", [str(out)], {
        "measure_hash": measure_hash(mu),
        "chopped_hash": measure_hash(chopped),
        "kept_atoms": chopped.count,
        "kept_mass": chopped.total_mass,
        "total_mass": mu.total_mass,
    })
    return EXIT_OK


_SUITES = ("all", "beta-curv", "jones-curv", "holder", "volume")


def _cmd_verify(args) -> int:
    cfg = _resolve(args)
    if cfg.suite not in _SUITES:
        raise UsageError(f"unknown suite {cfg.suite!r}; choose from {_SUITES}")
    wanted = list(_SUITES[1:]) if cfg.suite == "all" else [cfg.suite]
    reports = []
    mu = None
    if any(s != "volume" for s in wanted):
        mu = _require_input(cfg)
    for suite in wanted:
        if suite == "volume":
            reports.append(check_volume_identity(1000, 4, cfg.seed))
            continue
        assert mu is not None
        x = mu.points[cfg.x_index]
        if suite == "beta-curv":
            reports.append(
                check_beta_vs_curv(mu, x, _secant_config(cfg, mu),
                                   _scale_config(cfg), cfg.mode)
            )
        elif suite == "jones-curv":
            reports.append(
                check_jones_vs_curv(mu, x, cfg.alpha, _secant_config(cfg, mu),
                                    cfg.mode)
            )
        elif suite == "holder":
            p = cfg.p if cfg.p > 2.0 else 3.0
            alpha = cfg.alpha if 0.0 < cfg.alpha <= 1.0 else 0.5
            reports.append(
                check_holder_chain(mu, x, p, alpha, _scale_config(cfg), seed=cfg.seed)
            )
    passed = all(r.passed for r in reports)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "config": cfg.to_dict(),
        "passed": passed,
        "reports": [r.to_dict() for r in reports],
    }
    if mu is not None:
        payload["measure_hash"] = measure_hash(mu)
    out = Path(cfg.report or "verify_report.json")
    _write_json(out, payload)
    for r in reports:
        status = "pass" if r.passed else "FAIL"
        print(f"{r.name}: {status} ({r.pass_count}/{r.total})")
    return EXIT_OK if passed else EXIT_VERIFY


def _cmd_report(args) -> int:
    from .report import profile_figure  # deferred: pulls in matplotlib

    cfg = _resolve(args)
    mu = _require_input(cfg)
    outdir = Path(cfg.outdir or "report_out")
    outdir.mkdir(parents=True, exist_ok=True)
    scales = _scale_config(cfg)
    centers = _select_centers(cfg, mu)
    index = mu.index
    radii = [float(r) for r in scales.radii()]

    def one(center: int):
        x = mu.points[center]
        jones, prof = jones_function(
            mu, x, cfg.alpha, scales, variant=cfg.variant, index=index
        )
        dens = density_profile(mu, x, scales, index)
        partials = np.cumsum(prof.values**2 / prof.radii ** (2.0 * cfg.alpha))
        curv_values = None
        if cfg.with_curv:
            cprof = curv_profile(
                mu, x, cfg.p, cfg.alpha, scales, method=cfg.method,
                samples=cfg.samples, seed=cfg.seed, tuple_budget=cfg.budget,
                index=index,
            )
            curv_values = [float(v) for v in cprof.values]
        return {
            "beta": [float(v) for v in prof.values],
            "jones_partial": [float(v) for v in partials],
            "density": [float(v) for v in dens.ratios],
            "curv": curv_values,
            "jones": jones,
        }

    results = dict(zip(centers, map_ordered(one, centers)))

    quantities = ["beta", "jones_partial", "density"] + (
        ["curv"] if cfg.with_curv else []
    )
    rows = []
    for center in centers:
        data = results[center]
        for name in quantities:
            for r, v in zip(radii, data[name]):
                rows.append([center, r, name, float(v)])
    table_path = outdir / "profiles.csv"
    _write_table(table_path, ["center_index", "r", "quantity", "value"], rows)

    outputs = [str(table_path)]
    figures = {
        "beta": ("beta_profiles.png", "beta", "flatness profiles"),
        "jones_partial": ("jones_partials.png", "partial sum",
                          "Jones partial sums"),
        "density": ("density_profiles.png", "mass ratio", "density profiles"),
    }
    if cfg.with_curv:
        figures["curv"] = ("curv_profile.png", "curvature", "curvature profiles")
    for name, (fname, ylabel, title) in figures.items():
        path = outdir / fname
        profile_figure(
            path, radii, {c: results[c][name] for c in centers}, ylabel, title
        )
        outputs.append(str(path))

    summary = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "rectiscope", "version": __version__},
        "command": "report",
        "config": cfg.to_dict(),
        "measure_hash": measure_hash(mu),
        "outputs": outputs,
        "jones": {str(c): results[c]["jones"] for c in centers},
    }
    _write_json(outdir / "summary.json", summary)
    return EXIT_OK


# ----------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_common(sub, *names):
    sub.add_argument("--config", default=None, help="JSON config file")
    flags = {
        "input": lambda: sub.add_argument("--input", default=None),
        "output": lambda: sub.add_argument("--output", default=None),
        "n": lambda: sub.add_argument("--n", type=int, default=None),
        "p": lambda: sub.add_argument("--p", type=float, default=None),
        "alpha": lambda: sub.add_argument("--alpha", type=float, default=None),
        "r": lambda: sub.add_argument("--r", type=float, default=None),
        "scalecfg": lambda: (
            sub.add_argument("--scales", type=int, default=None),
            sub.add_argument("--ratio", type=float, default=None),
            sub.add_argument("--r0", type=float, default=None),
        ),
        "seed": lambda: sub.add_argument("--seed", type=int, default=None),
        "centers": lambda: sub.add_argument("--centers", default=None),
        "secantcfg": lambda: (
            sub.add_argument("--lambda", dest="lam", type=float, default=None),
            sub.add_argument("--c0", type=float, default=None),
            sub.add_argument("--k", type=int, default=None),
            sub.add_argument("--mode", choices=["theoretical", "empirical"],
                             default=None),
        ),
    }
    for name in names:
        flags[name]()


def build_parser() -> _Parser:
    parser = _Parser(prog="rectiscope", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    g = subs.add_parser("generate", help="write a synthetic cloud")
    _add_common(g, "output", "n", "seed")
    g.add_argument("--kind", default=None)
    g.add_argument("--m", type=int, default=None)
    g.add_argument("--count", type=int, default=None)
    g.add_argument("--level", type=int, default=None)
    g.add_argument("--weights", choices=["uniform", "area"], default=None)
    g.add_argument("--noise", type=float, default=None)
    g.add_argument("--graph-alpha", dest="graph_alpha", type=float, default=None)
    g.add_argument("--format", choices=["csv", "binary"], default=None)
    g.set_defaults(func=_cmd_generate)

    b = subs.add_parser("beta", help="flatness numbers over dyadic scales")
    _add_common(b, "input", "output", "n", "p", "alpha", "scalecfg", "seed",
                "centers")
    b.add_argument("--centered", action="store_const", const=True, default=None)
    b.set_defaults(func=_cmd_beta)

    j = subs.add_parser("jones", help="Jones square function profiles")
    _add_common(j, "input", "output", "n", "alpha", "scalecfg", "seed", "centers")
    j.add_argument("--variant", choices=["centered", "uncentered"], default=None)
    j.add_argument("--dini-gamma", dest="dini_gamma", type=float, default=None)
    j.set_defaults(func=_cmd_jones, p=None)

    c = subs.add_parser("curv", help="pointwise curvature estimates")
    _add_common(c, "input", "output", "n", "p", "alpha", "r", "seed", "centers")
    c.add_argument("--method", choices=["auto", "exhaustive", "mc"], default=None)
    c.add_argument("--samples", type=int, default=None)
    c.add_argument("--budget", type=int, default=None)
    c.add_argument("--strategy", choices=["uniform", "annulus_stratified"],
                   default=None)
    c.set_defaults(func=_cmd_curv)

    s = subs.add_parser("secant", help="construct and check a secant frame")
    _add_common(s, "input", "output", "n", "r", "seed", "secantcfg")
    s.add_argument("--x-index", dest="x_index", type=int, default=None)
    s.set_defaults(func=_cmd_secant)

    d = subs.add_parser("density", help="finite-scale density profiles")
    _add_common(d, "input", "output", "n", "scalecfg", "seed", "centers")
    d.set_defaults(func=_cmd_density)

    ch = subs.add_parser("chop", help="restrict to the upper-regular part")
    _add_common(ch, "input", "output", "n", "seed")
    ch.add_argument("--k", type=int, default=None)
    ch.add_argument("--depth", type=int, default=None)
    ch.set_defaults(func=_cmd_chop)

    v = subs.add_parser("verify", help="run inequality suites")
    _add_common(v, "input", "n", "p", "alpha", "scalecfg", "seed", "secantcfg")
    v.add_argument("--suite", default=None)
    v.add_argument("--report", default=None)
    v.add_argument("--x-index", dest="x_index", type=int, default=None)
    v.set_defaults(func=_cmd_verify)

    rp = subs.add_parser("report", help="tables plus figures for a cloud")
    _add_common(rp, "input", "n", "p", "alpha", "scalecfg", "seed", "centers")
    rp.add_argument("--outdir", default=None)
    rp.add_argument("--variant", choices=["centered", "uncentered"], default=None)
    rp.add_argument("--with-curv", dest="with_curv", action="store_const",
                    const=True, default=None)
    rp.add_argument("--method", choices=["auto", "exhaustive", "mc"], default=None)
    rp.add_argument("--samples", type=int, default=None)
    rp.add_argument("--budget", type=int, default=None)
    rp.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    started = time.monotonic()
    try:
        args = parser.parse_args(argv)
        code = args.func(args)
    except UsageError as exc:
        print(f"rectiscope: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"rectiscope: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetError as exc:
        print(f"rectiscope: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except OSError as exc:
        print(f"rectiscope: i/o error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    elapsed = time.monotonic() - started
    print(f"rectiscope: done in {elapsed:.2f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
