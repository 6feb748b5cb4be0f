"""Inequality-chain verification on fixtures and synthetic profiles."""

import math

import numpy as np
import pytest

from rectiscope import (
    GeneratorSpec,
    ScaleConfig,
    SecantConfig,
    beta2_centered,
    check_beta_vs_curv,
    check_holder_chain,
    check_jones_vs_curv,
    check_volume_identity,
    curv_exhaustive,
    density_profile,
    generate,
    holder_sum_inequality,
)


def fixture_lambda(mu, x, scales):
    """A lower-mass constant that the measure actually satisfies."""
    prof = density_profile(mu, x, scales)
    return 0.9 * float(prof.ratios.min())


def circle_fixture(count=100):
    return generate(GeneratorSpec("circle", n=1, m=2, count=count,
                                  weight_scheme="area"))


def test_volume_identity_random_simplices():
    report = check_volume_identity(trials=100, max_dim=3, seed=5)
    assert report.passed
    for case in report.cases:
        assert case.lhs < 1e-9


def test_volume_identity_right_triangle():
    # 1/sqrt(2) * sqrt(2) == 2 * (1/2) for the unit right triangle
    from rectiscope import affine_hull, dist_to_affine, simplex_volume

    verts = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    height = dist_to_affine(verts[0], affine_hull(verts[1:]))
    assert height * simplex_volume(verts[1:]) == pytest.approx(
        2.0 * simplex_volume(verts)
    )


def test_holder_sum_inequality_on_random_profiles(rng):
    log_weight = math.log(2.0)
    for _ in range(200):
        count = int(rng.integers(2, 12))
        radii = 0.5 ** np.arange(count)
        betas = rng.random(count) * rng.choice([1e-3, 1.0, 10.0])
        for p in (3.0, 4.0):
            for alpha in (0.3, 0.5):
                lhs, rhs, _ = holder_sum_inequality(betas, radii, p, alpha,
                                                    log_weight)
                assert lhs <= rhs * (1.0 + 1e-12)


def test_holder_sum_zero_profile():
    lhs, rhs, _ = holder_sum_inequality(
        np.zeros(5), 0.5 ** np.arange(5), 3.0, 0.3, math.log(2.0)
    )
    assert lhs == 0.0 and rhs == 0.0


def test_holder_chain_on_graph_fixture():
    mu = generate(GeneratorSpec("holder_graph", n=1, m=2, count=256, seed=4,
                                alpha=0.5))
    x = mu.points[128]
    report = check_holder_chain(mu, x, p=3.0, alpha=0.3,
                                scales=ScaleConfig(r0=0.25, ratio=0.5, count=5))
    assert report.passed
    assert report.inputs["measure_hash"]


def test_beta_vs_curv_zero_on_flat_support():
    mu = generate(GeneratorSpec("plane", n=1, m=2, count=120, seed=6))
    x = mu.points[60]
    scales = ScaleConfig(r0=0.25, ratio=0.5, count=2)
    lam = fixture_lambda(mu, x, scales)
    cfg = SecantConfig(lam=lam, c0=100.0, k_exponent=2, n=1, m=2)
    report = check_beta_vs_curv(mu, x, cfg, scales)
    assert report.passed
    for case in report.checked:
        assert case.lhs == 0.0 and case.rhs == 0.0


def test_beta_vs_curv_passes_on_circle():
    mu = circle_fixture()
    x = mu.points[0]
    scales = ScaleConfig(r0=0.5, ratio=0.5, count=4)
    lam = fixture_lambda(mu, x, scales)
    cfg = SecantConfig(lam=lam, c0=100.0, k_exponent=2, n=1, m=2)
    report = check_beta_vs_curv(mu, x, cfg, scales)
    assert report.total == 4
    assert report.passed, report.to_dict()


def test_beta_vs_curv_full_ball_domain_also_bounds():
    # enlarging the tuple domain only grows the nonnegative right side
    mu = circle_fixture()
    x = mu.points[0]
    scales = ScaleConfig(r0=0.5, ratio=0.5, count=3)
    lam = fixture_lambda(mu, x, scales)
    cfg = SecantConfig(lam=lam, c0=100.0, k_exponent=2, n=1, m=2)
    report = check_beta_vs_curv(mu, x, cfg, scales)
    for case, r in zip(report.checked, scales.radii()):
        full = curv_exhaustive(mu, x, float(r), 2.0, 0.0).value
        lhs = beta2_centered(mu, x, float(r)).objective
        assert lhs <= case.constant * full * (1.0 + 1e-12)
        assert case.constant * full >= case.rhs * (1.0 - 1e-12)


def test_theoretical_constant_dominates_empirical():
    mu = circle_fixture(200)
    x = mu.points[0]
    scales = ScaleConfig(r0=0.5, ratio=0.5, count=3)
    lam = fixture_lambda(mu, x, scales)
    cfg = SecantConfig(lam=lam, c0=100.0, k_exponent=2, n=1, m=2)
    emp = check_beta_vs_curv(mu, x, cfg, scales, mode="empirical")
    theo = check_beta_vs_curv(mu, x, cfg, scales, mode="theoretical")
    emp_cases = {c.label: c for c in emp.checked}
    for case in theo.checked:
        if case.label in emp_cases:
            assert case.constant >= emp_cases[case.label].constant


def test_jones_vs_curv_on_circle():
    mu = circle_fixture()
    x = mu.points[0]
    scales = ScaleConfig(r0=0.5, ratio=0.5, count=4)
    lam = fixture_lambda(mu, x, scales)
    cfg = SecantConfig(lam=lam, c0=100.0, k_exponent=2, n=1, m=2)
    for alpha in (0.0, 0.5):
        report = check_jones_vs_curv(mu, x, alpha, cfg)
        assert report.passed, report.to_dict()
        assert report.inputs["scales_disjoint"] is True


def test_jones_vs_curv_zero_on_flat_support():
    mu = generate(GeneratorSpec("plane", n=1, m=2, count=120, seed=6))
    x = mu.points[60]
    scales = ScaleConfig(r0=0.25, ratio=0.5, count=2)
    lam = fixture_lambda(mu, x, scales)
    cfg = SecantConfig(lam=lam, c0=100.0, k_exponent=2, n=1, m=2)
    report = check_jones_vs_curv(mu, x, 0.0, cfg)
    case = report.checked[0]
    assert case.lhs == 0.0 and case.rhs == 0.0
    assert report.passed


def test_reports_embed_recomputation_inputs():
    mu = circle_fixture()
    x = mu.points[0]
    scales = ScaleConfig(r0=0.5, ratio=0.5, count=2)
    lam = fixture_lambda(mu, x, scales)
    cfg = SecantConfig(lam=lam, c0=100.0, k_exponent=2, n=1, m=2)
    report = check_beta_vs_curv(mu, x, cfg, scales)
    data = report.to_dict()
    assert "measure_hash" in data["inputs"]
    assert data["inputs"]["config"]["lam"] == lam
    assert data["inputs"]["config"]["k_exponent"] == 2
    assert all("lhs" in c for c in data["cases"])


def test_report_requires_a_checked_case():
    from rectiscope.verify import CaseRecord, InequalityReport

    empty = InequalityReport("nothing", (CaseRecord("skip", 0, 0, skipped=True,
                                                    reason="x"),))
    assert not empty.passed
