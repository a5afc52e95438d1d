"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest -v -s tests/test_acceptance.py` to see the per-criterion
lines; the random suites are fully seeded and deterministic.
"""

import math

import numpy as np
import pytest

from coneangles import (
    Generated,
    HalfspaceCone,
    Ray,
    SecondOrder,
    Subspace,
    ToleranceConfig,
    c0,
    c0_oracle,
    c_angle,
    certify_projection,
    check_sum_closedness,
    check_trivial_intersection,
    dichotomy_check,
    direct_beta_estimate,
    direct_gamma_estimate,
    dual,
    estimate_rate,
    intersect,
    is_linear_subspace,
    is_trivial,
    member,
    nonclosedness_probe,
    polar,
    polar_intersection_witness,
    project,
    run_cyclic,
    theoretical_rate,
)
from conftest import decided_pair, random_atom, random_pointed_generated, unit

ACFG = ToleranceConfig(multistarts=16, max_iters=4000, rng_seed=97)
S2 = math.sqrt(2.0) / 2.0


def report(num, ok, text):
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {text}")
    assert ok, f"criterion {num}: {text}"


def close(a, b, tol):
    return abs(a - b) <= tol


def test_criterion_1_quadrant_vs_halfplane():
    k1 = Generated([[1, 0], [0, 1]])
    k2 = HalfspaceCone([[1, 1]])
    k1o, k2o, k2plus = polar(k1), polar(k2), dual(k2)
    checks = [
        close(c0(k1, k2, ACFG).value, 0.7071067812, 1e-6),
        close(c_angle(k1, k2, ACFG).value, 0.7071067812, 1e-6),
        close(c0(k1o, k2plus, ACFG).value, 1.0, 1e-6),
        close(c_angle(k1o, k2plus, ACFG).value, 0.0, 1e-6),
        close(c0(k1o, k2o, ACFG).value, 0.0, 1e-6),
    ]
    report(1, all(checks),
           "quadrant/halfplane corpus: c0, c, polar and dual variants")


def test_criterion_2_ice_cream_vs_line():
    k = SecondOrder(3)
    m = Subspace([[1, 0, -1]])
    ko, mperp, kplus = polar(k), polar(m), dual(k)
    w = unit([-1.0, 0.0, -1.0])
    checks = [
        close(c0(k, m, ACFG).value, 1.0, 1e-6),
        close(c_angle(k, m, ACFG).value, 0.0, 1e-6),
        close(c0(ko, mperp, ACFG).value, 1.0, 1e-6),
        close(c_angle(ko, mperp, ACFG).value, 0.0, 1e-6),
        member(ko, w, cfg=ACFG),
        member(mperp, w, cfg=ACFG),
        member(kplus, -w, cfg=ACFG),
        member(mperp, -w, cfg=ACFG),
    ]
    for t in (0.0, 1.0, 10.0, 100.0):
        (_, d), = nonclosedness_probe(k, m, [0, 1, 0], [t],
                                      direction=[1, 0, -1], cfg=ACFG)
        checks.append(close(d, (math.sqrt(t * t + 1.0) - t) / math.sqrt(2.0), 1e-4))
    report(2, all(checks),
           "ice-cream cone vs line corpus: angles, polar witnesses, distance profile")


def test_criterion_3_wedge_vs_axis():
    k = Generated([[1, 0], [1, 1]])
    m = Subspace([[1, 0]])
    ko, mperp = polar(k), polar(m)
    checks = [
        close(c0(k, m, ACFG).value, 1.0, 1e-6),
        close(c_angle(k, m, ACFG).value, 0.0, 1e-6),
        close(c0(ko, mperp, ACFG).value, 1.0, 1e-6),
        close(c_angle(ko, mperp, ACFG).value, 0.7071067812, 1e-6),
    ]
    report(3, all(checks), "wedge vs axis corpus: primal and polar angle values")


def test_criterion_4_ray_and_wedge_families():
    checks = []
    c_ray, d_ray = Ray([1, 0]), Ray([-1, 0])
    checks.append(close(c0(c_ray, d_ray, ACFG).value, 0.0, 1e-6))
    checks.append(close(c_angle(c_ray, d_ray, ACFG).value, 0.0, 1e-6))
    c45 = Ray([1, 1])
    checks.append(close(c0(Ray([1, 0]), c45, ACFG).value, S2, 1e-6))
    checks.append(close(c_angle(Ray([1, 0]), c45, ACFG).value, S2, 1e-6))
    u = Generated([[1, 0], [0, 1]])
    v = Generated([[-1, 0], [-1, 1]])
    checks.append(close(c0(c_ray, d_ray, ACFG).value, 0.0, 1e-6))
    checks.append(close(c0(u, v, ACFG).value, S2, 1e-6))
    checks.append(close(c_angle(u, v, ACFG).value, S2, 1e-6))
    report(4, all(checks), "ray/wedge family corpus: enlargement cases")


@pytest.fixture(scope="module")
def oracle_suite():
    rng = np.random.default_rng(20250808)
    rows = []
    for i in range(200):
        dim = 3 if i % 10 == 0 else 2
        kinds = ("ray", "generated", "halfspace", "subspace", "soc")
        a = random_atom(rng, dim, ACFG, kinds)
        b = random_atom(rng, dim, ACFG, kinds)
        value = c0(a, b, ACFG).value
        oracle = c0_oracle(a, b, 2000, ACFG)
        rows.append({"C": a, "D": b, "dim": dim, "value": value, "oracle": oracle})
    return rows


def test_criterion_5_identity_suite(oracle_suite):
    failures = []
    used = 0
    for row in oracle_suite:
        v = row["value"]
        if v <= 0.05:
            continue
        used += 1
        beta_identity = math.sqrt(2.0 - 2.0 * v)
        if abs((1.0 - beta_identity ** 2 / 2.0) - v) > 1e-9:
            failures.append("identity form")
        bhat = direct_beta_estimate(row["C"], row["D"], 2000, ACFG)
        ghat = direct_gamma_estimate(row["C"], row["D"], 2000, ACFG,
                                     beta_estimate=bhat)
        if abs(bhat - beta_identity) > 5e-3:
            failures.append(f"beta direct {bhat} vs {beta_identity}")
        if abs(ghat - beta_identity / 2.0) > 5e-3:
            failures.append(f"gamma direct {ghat} vs {beta_identity / 2.0}")
    report(5, not failures and used >= 100,
           f"beta/gamma identities vs sampled estimates on {used} pairs with c0 > 0.05"
           + (f"; failures: {failures[:3]}" if failures else ""))


def test_criterion_6_oracle_agreement(oracle_suite):
    devs = [abs(r["value"] - r["oracle"]) for r in oracle_suite]
    worst = max(devs)
    report(6, worst <= 2e-3,
           f"power vs brute-force sweep on 200 pairs, worst deviation {worst:.2e}")


def test_criterion_7_projection_suite():
    rng = np.random.default_rng(1234)
    worst_moreau = 0.0
    cert_failures = 0
    for _ in range(1000):
        dim = int(rng.integers(2, 7))
        cone = random_atom(rng, dim, ACFG)
        x = rng.normal(size=dim) * rng.choice([0.3, 1.0, 6.0])
        p = project(cone, x, ACFG)
        q = project(polar(cone), x, ACFG)
        scale = 1.0 + float(np.linalg.norm(x))
        worst_moreau = max(worst_moreau,
                           float(np.linalg.norm(x - p - q)) / scale,
                           abs(float(p @ q)) / scale ** 2)
        if not certify_projection(cone, x, p, ACFG).passed:
            cert_failures += 1
    report(7, worst_moreau <= 1e-9 and cert_failures == 0,
           f"1000 Moreau splits, worst scaled residual {worst_moreau:.2e}, "
           f"certificate failures {cert_failures}")


def test_criterion_8_equivalence_battery():
    rng = np.random.default_rng(5678)
    # the sampled triviality route gets the full iteration budget so that
    # slowly converging (near-tangent) polyhedral meets still resolve
    deep = ToleranceConfig(multistarts=ACFG.multistarts, rng_seed=ACFG.rng_seed)
    disagreements = 0
    equivalence_failures = 0
    for i in range(200):
        dim = 3 if i % 3 == 0 else 2
        a, b = decided_pair(rng, dim, ACFG)
        votes = [r.holds for r in check_sum_closedness(a, b, ACFG)]
        if any(votes) != all(votes):
            disagreements += 1
        v = c0(a, b, ACFG).value
        trivial = is_trivial(intersect([a, b]), deep)
        if (v < 1.0 - 1e-6) != trivial:
            equivalence_failures += 1
    report(8, disagreements == 0 and equivalence_failures == 0,
           f"five closedness conditions agree on 200 pairs "
           f"(disagreements {disagreements}); c0 < 1 iff trivial intersection "
           f"(failures {equivalence_failures})")


def test_criterion_9_dichotomy_suite():
    rng = np.random.default_rng(9012)
    failures = []
    for _ in range(100):
        k1 = random_pointed_generated(rng, 3, ACFG)
        if is_linear_subspace(k1, ACFG):
            failures.append("generator drew a subspace")
            continue
        k2 = random_atom(rng, 3, ACFG)
        branch = dichotomy_check(k1, k2, ACFG)
        if branch == "primal_one":
            trivial, w = check_trivial_intersection(k1, k2, ACFG)
            ok = (not trivial and w is not None
                  and abs(np.linalg.norm(w) - 1.0) < 1e-7
                  and member(k1, w, cfg=ACFG) and member(k2, w, cfg=ACFG))
        else:
            w1, w2 = polar_intersection_witness(k1, k2, ACFG)
            ok = (abs(np.linalg.norm(w1) - 1.0) < 1e-7
                  and member(polar(k1), w1, cfg=ACFG)
                  and member(dual(k2), w1, cfg=ACFG)
                  and member(dual(k1), w2, cfg=ACFG)
                  and member(polar(k2), w2, cfg=ACFG))
        if not ok:
            failures.append(branch)
    report(9, not failures,
           "100 dichotomy checks returned branches with re-validated witnesses"
           + (f"; failures {failures[:3]}" if failures else ""))


def test_criterion_10_cyclic_rate():
    c_cone, d_cone = Ray([1, 0]), Ray([1, 1])
    g = theoretical_rate(c_cone, d_cone, ACFG)
    trace = run_cyclic(c_cone, d_cone, [1, 0], ACFG)
    rate = estimate_rate(trace, ACFG)
    ratios = [trace.errors[i + 1] / trace.errors[i]
              for i in range(len(trace.errors) - 1) if trace.errors[i] > 1e-12]
    checks = [
        close(g, S2, 1e-9),
        close(rate, 0.5, 0.02),
        max(ratios) <= 0.505,
    ]
    report(10, all(checks),
           f"cyclic rate {rate:.4f} vs bound {g * g:.4f}, max ratio {max(ratios):.4f}")
