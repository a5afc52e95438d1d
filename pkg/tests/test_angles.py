import math

import numpy as np
import pytest

from coneangles import (
    Generated,
    HalfspaceCone,
    IdentityNotApplicable,
    Ray,
    SecondOrder,
    Subspace,
    beta,
    c0,
    c0_oracle,
    c_angle,
    certify_principal,
    direct_beta_estimate,
    direct_gamma_estimate,
    gamma,
    is_trivial,
    intersect,
    member,
    polar,
    principal_vectors,
    sample_members,
    UnsupportedDimension,
)
from conftest import random_atom, unit

S2 = math.sqrt(2.0) / 2.0
QUADRANT = Generated([[1, 0], [0, 1]])
HALFPLANE = HalfspaceCone([[1, 1]])


def test_c0_examples(cfg):
    assert abs(c0(QUADRANT, HALFPLANE, cfg).value - S2) < 1e-9
    assert abs(c0(SecondOrder(3), Subspace([[1, 0, -1]]), cfg).value - 1.0) < 1e-9
    assert c0(Ray([1, 0]), Ray([0, 1]), cfg).value == 0.0
    assert abs(c0(Ray([1, 0]), Ray([1, 1]), cfg).value - S2) < 1e-12


def test_c0_report_fields(cfg):
    rep = c0(QUADRANT, HALFPLANE, cfg)
    assert rep.kind == "c0"
    assert 0.0 <= rep.value <= 1.0
    assert abs(rep.beta - math.sqrt(2.0 - 2.0 * rep.value)) < 1e-12
    assert abs(rep.gamma - rep.beta / 2.0) < 1e-12
    x, y = rep.pair
    assert abs(np.linalg.norm(x) - 1) < 1e-9 and abs(np.linalg.norm(y) - 1) < 1e-9


def test_c0_degenerate_flag(cfg):
    from coneangles import Zero

    rep = c0(Zero(2), Ray([1, 0]), cfg)
    assert rep.value == 0.0 and rep.degenerate
    rep = c0(Ray([1, 0]), Ray([-1, 0]), cfg)
    assert rep.value == 0.0 and not rep.degenerate


def test_c0_oracle_examples(cfg):
    assert abs(c0_oracle(QUADRANT, HALFPLANE, 720, cfg) - S2) < 5e-3
    assert c0_oracle(Ray([1, 0]), Ray([-1, 0]), 720, cfg) == 0.0
    assert abs(c0_oracle(QUADRANT, QUADRANT, 720, cfg) - 1.0) < 1e-6


def test_c0_oracle_guards():
    e5 = np.eye(5)
    with pytest.raises(UnsupportedDimension):
        c0_oracle(Ray(e5[0]), Ray(e5[1]), 100)
    with pytest.raises(ValueError):
        c0_oracle(Ray([1, 0]), Ray([0, 1]), 4)


def test_c_angle_examples(cfg):
    assert abs(c_angle(SecondOrder(3), Subspace([[1, 0, -1]]), cfg).value) < 1e-9
    wedge_polar = polar(Generated([[1, 0], [1, 1]]))
    axis_perp = polar(Subspace([[1, 0]]))
    assert abs(c_angle(wedge_polar, axis_perp, cfg).value - S2) < 1e-9
    rep = c_angle(Ray([1, 0]), Ray([0, 1]), cfg)
    assert rep.value == 0.0 and rep.kind == "c"


def test_beta_gamma_examples(cfg):
    want = math.sqrt(2.0 - math.sqrt(2.0))
    assert abs(beta(QUADRANT, HALFPLANE, cfg) - want) < 1e-9
    assert abs(gamma(QUADRANT, HALFPLANE, cfg) - want / 2.0) < 1e-9
    assert beta(Ray([1, 0]), Ray([1, 0]), cfg) == 0.0
    assert gamma(Ray([1, 0]), Ray([1, 0]), cfg) == 0.0
    with pytest.raises(IdentityNotApplicable):
        beta(Ray([1, 0]), Ray([-1, 0]), cfg)


def test_principal_vectors_golden_pair(cfg):
    rep = principal_vectors(QUADRANT, HALFPLANE, cfg)
    x, y = rep.pair
    assert abs(rep.value - S2) < 1e-9
    assert np.allclose(x, [0, 1], atol=1e-8)
    assert np.allclose(y, [-S2, S2], atol=1e-8)
    assert rep.certificate.passed


def test_principal_vectors_common_ray(cfg):
    rep = principal_vectors(SecondOrder(3), Subspace([[1, 0, -1]]), cfg)
    x, y = rep.pair
    assert abs(rep.value - 1.0) < 1e-9
    target = unit([-1, 0, 1])
    assert min(np.linalg.norm(x - target), np.linalg.norm(x + target)) < 1e-6
    assert np.linalg.norm(x - y) < 1e-8


def test_principal_vectors_zero_case(cfg):
    rep = principal_vectors(Ray([1, 0]), Ray([-1, 0]), cfg)
    assert rep.value == 0.0
    assert np.allclose(rep.pair[0], 0) and np.allclose(rep.pair[1], 0)
    assert rep.certificate.passed


def test_certify_principal_rejects_suboptimal(cfg):
    cert = certify_principal(QUADRANT, HALFPLANE,
                             np.array([1.0, 0.0]), np.array([-S2, S2]), cfg)
    assert not cert.passed
    assert cert.polar_residual_1 > 1e-3


def test_c0_symmetry_and_negation(cfg):
    rng = np.random.default_rng(41)
    for _ in range(15):
        dim = int(rng.integers(2, 4))
        a = random_atom(rng, dim, cfg)
        b = random_atom(rng, dim, cfg)
        v = c0(a, b, cfg).value
        assert abs(v - c0(b, a, cfg).value) <= 1e-6
        from coneangles import negate

        assert abs(v - c0(negate(a), negate(b), cfg).value) <= 1e-6


def test_c0_scaling_invariance(cfg):
    rng = np.random.default_rng(43)
    for _ in range(10):
        gens = rng.normal(size=(3, 3))
        a = Generated(gens)
        a3 = Generated(3.0 * gens)
        b = random_atom(rng, 3, cfg)
        assert abs(c0(a, b, cfg).value - c0(a3, b, cfg).value) <= 1e-9


def test_c_at_most_c0(cfg):
    rng = np.random.default_rng(47)
    for _ in range(12):
        dim = int(rng.integers(2, 4))
        a = random_atom(rng, dim, cfg)
        b = random_atom(rng, dim, cfg)
        assert c_angle(a, b, cfg).value <= c0(a, b, cfg).value + 1e-6


def test_common_membership_forces_value_one(cfg):
    rng = np.random.default_rng(53)
    hits = 0
    for _ in range(40):
        dim = int(rng.integers(2, 4))
        a = random_atom(rng, dim, cfg)
        b = random_atom(rng, dim, cfg)
        x = rng.normal(size=dim)
        if np.linalg.norm(x) > 1e-6 and member(a, x, cfg=cfg) and member(b, x, cfg=cfg):
            hits += 1
            assert c0(a, b, cfg).value >= 1.0 - 1e-6
    assert hits >= 1  # the draw must actually exercise the property


def test_bilinear_bound(cfg):
    rng = np.random.default_rng(59)
    for _ in range(8):
        dim = int(rng.integers(2, 4))
        a = random_atom(rng, dim, cfg)
        b = random_atom(rng, dim, cfg)
        v = c0(a, b, cfg).value
        ma = sample_members(a, 40, cfg)
        mb = sample_members(b, 40, cfg)
        if ma.shape[0] and mb.shape[0]:
            assert float(np.max(ma @ mb.T)) <= v + 1e-6


def test_identity_against_direct_estimates_dim2(cfg):
    rng = np.random.default_rng(61)
    checked = 0
    while checked < 8:
        a = random_atom(rng, 2, cfg)
        b = random_atom(rng, 2, cfg)
        v = c0(a, b, cfg).value
        if v <= 0.05:
            continue
        checked += 1
        bid = math.sqrt(2.0 - 2.0 * v)
        assert abs((1.0 - bid * bid / 2.0) - v) <= 1e-9
        bhat = direct_beta_estimate(a, b, 2000, cfg)
        ghat = direct_gamma_estimate(a, b, 2000, cfg)
        assert abs(bhat - bid) <= 5e-3
        assert abs(ghat - bid / 2.0) <= 5e-3


def test_triviality_dichotomy_of_value_one(cfg):
    rng = np.random.default_rng(67)
    for _ in range(12):
        dim = int(rng.integers(2, 4))
        a = random_atom(rng, dim, cfg, kinds=("ray", "generated", "halfspace", "subspace"))
        b = random_atom(rng, dim, cfg, kinds=("ray", "generated", "halfspace", "subspace"))
        v = c0(a, b, cfg).value
        if v < 1.0 - 1e-3 or v > 1.0 - 1e-7:  # outside the gray band only
            assert (v < 1.0 - 1e-6) == is_trivial(intersect([a, b]), cfg)
