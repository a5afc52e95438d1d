import math

import numpy as np
import pytest

from coneangles import (
    Generated,
    HalfspaceCone,
    IterationLimit,
    Neg,
    Ray,
    SecondOrder,
    Subspace,
    ToleranceConfig,
    certify_projection,
    distance,
    dykstra,
    nnls,
    polar,
    project,
)
from coneangles._batch import project_rows
from conftest import random_atom, unit


def test_project_soc_example(cfg):
    p = project(SecondOrder(3), [0, 1, 0], cfg)
    assert np.allclose(p, [0, 0.5, 0.5], atol=1e-12)
    # characterization residuals vanish analytically
    x = np.array([0.0, 1.0, 0.0])
    assert abs((x - p) @ p) < 1e-12
    assert np.allclose(x - p, [0, 0.5, -0.5])


def test_project_ray_example(cfg):
    assert np.allclose(project(Ray([1, 0]), [-3, 4], cfg), [0, 0])


def test_project_polar_soc_is_moreau_complement(cfg):
    x = np.array([0.0, 1.0, 0.0])
    p = project(polar(SecondOrder(3)), x, cfg)
    assert np.allclose(p, [0, 0.5, -0.5], atol=1e-12)
    # independent route: direct projection onto the negated cone
    q = -project(SecondOrder(3), -x, cfg)
    assert np.allclose(p, q, atol=1e-12)


def test_nnls_small_cases():
    A = np.array([[1.0, 1.0], [0.0, 1.0]])
    lam = nnls(A, np.array([2.0, 1.0]))
    assert np.allclose(A @ lam, [2, 1], atol=1e-10)
    lam = nnls(np.array([[1.0], [0.0]]), np.array([-3.0, 4.0]))
    assert np.allclose(lam, [0.0])


def test_generated_projection_matches_face_enumeration(cfg):
    # two independent polyhedral projectors: active-set NNLS vs face scan
    rng = np.random.default_rng(17)
    for _ in range(150):
        dim = int(rng.integers(2, 6))
        m = int(rng.integers(1, 7))
        cone = Generated(rng.normal(size=(m, dim)))
        x = rng.normal(size=dim) * rng.choice([0.3, 1.0, 5.0])
        p_nnls = project(cone, x, cfg)
        p_face = project_rows(cone, x[None, :], cfg, method="faces")[0]
        assert np.linalg.norm(p_nnls - p_face) < 1e-9


def test_dykstra_examples(cfg):
    quadrant = Generated([[1, 0], [0, 1]])
    assert np.allclose(dykstra([quadrant, quadrant], [-1, 2], cfg), [0, 2], atol=1e-9)
    p = dykstra([quadrant, HalfspaceCone([[1, 1]])], [3, 1], cfg)
    assert np.linalg.norm(p) < 1e-8
    p = dykstra([SecondOrder(3), Subspace([unit([1, 0, -1])])], [1, 0, -1], cfg)
    assert np.linalg.norm(p) < 1e-6


def test_dykstra_iteration_limit():
    tight = ToleranceConfig(max_iters=2)
    with pytest.raises(IterationLimit):
        dykstra([Generated([[1, 0], [0, 1]]), HalfspaceCone([[1, 1]])],
                [37.0, 11.0], tight)


def test_distance_examples(cfg):
    want = (math.sqrt(101.0) - 10.0) / math.sqrt(2.0)
    assert abs(distance(SecondOrder(3), [-10, 1, 10], cfg) - want) < 1e-10
    assert distance(Generated([[1, 0], [0, 1]]), [1, 1], cfg) < 1e-12
    assert abs(distance(Ray([1, 0]), [0, 5], cfg) - 5.0) < 1e-12


def test_certificates(cfg):
    cert = certify_projection(SecondOrder(3), [0, 1, 0], [0, 0.5, 0.5], cfg)
    assert cert.passed
    cert = certify_projection(Ray([1, 0]), [-3, 4], [0, 0], cfg)
    assert cert.passed
    # wrong claimed projection: inside the cone and orthogonal, but the
    # residual x - p points into the cone
    cert = certify_projection(Generated([[1, 0], [0, 1]]), [1, 1], [1, 0], cfg)
    assert not cert.passed
    assert cert.membership_residual < 1e-12
    assert cert.orthogonality_residual < 1e-12
    assert cert.polar_residual > 0.5


def test_moreau_identity_random(cfg):
    rng = np.random.default_rng(23)
    for _ in range(120):
        dim = int(rng.integers(2, 7))
        cone = random_atom(rng, dim, cfg)
        x = rng.normal(size=dim) * rng.choice([0.5, 1.0, 10.0])
        p = project(cone, x, cfg)
        q = project(polar(cone), x, cfg)
        scale = 1.0 + np.linalg.norm(x)
        assert np.linalg.norm(x - p - q) <= 1e-9 * scale
        assert abs(p @ q) <= 1e-9 * scale * scale


def test_projection_properties_random(cfg):
    rng = np.random.default_rng(29)
    for _ in range(60):
        dim = int(rng.integers(2, 7))
        cone = random_atom(rng, dim, cfg)
        x = rng.normal(size=dim) * rng.choice([0.5, 2.0])
        y = rng.normal(size=dim)
        p = project(cone, x, cfg)
        # idempotence
        assert np.linalg.norm(project(cone, p, cfg) - p) <= 1e-9 * (1 + np.linalg.norm(x))
        # nonexpansiveness
        q = project(cone, y, cfg)
        assert np.linalg.norm(p - q) <= np.linalg.norm(x - y) + 1e-9
        # positive homogeneity
        lam = float(rng.uniform(0.2, 5.0))
        assert np.linalg.norm(project(cone, lam * x, cfg) - lam * p) <= 1e-9 * (1 + lam * np.linalg.norm(x))


def test_certificate_passes_on_true_projections(cfg):
    rng = np.random.default_rng(31)
    for _ in range(60):
        dim = int(rng.integers(2, 7))
        cone = random_atom(rng, dim, cfg)
        x = rng.normal(size=dim)
        cert = certify_projection(cone, x, project(cone, x, cfg), cfg)
        assert cert.passed


def test_neg_node_projection(cfg):
    cone = Neg(SecondOrder(3))
    x = np.array([0.0, 1.0, 0.0])
    assert np.allclose(project(cone, x, cfg), -project(SecondOrder(3), -x, cfg))
