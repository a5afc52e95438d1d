"""Executable checkers for the structural results on cone pairs:
intersection triviality, sufficient conditions for closedness of sums,
polar-intersection witnesses, and the primal/polar dichotomy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .angles import c0, common_direction, direct_beta_estimate
from .cones import (
    DEFAULT_CONFIG,
    ConeExpr,
    ToleranceConfig,
    dual,
    is_linear_subspace,
    member,
    negate,
    polar,
    seed_directions,
)
from .errors import (
    DichotomyFailure,
    DimensionMismatch,
    HypothesisViolated,
    SignConditionViolated,
    UnsupportedDimension,
    WitnessNotFound,
)
from .projections import distance

PRIMAL_ONE = "primal_one"
POLAR_ONE = "polar_one"


@dataclass
class ConditionReport:
    """One numeric sufficient condition for closedness of K1 + K2."""

    condition_id: str
    holds: bool
    numeric_value: float
    conclusion_sum_closed: bool


def check_trivial_intersection(K1: ConeExpr, K2: ConeExpr,
                               cfg: ToleranceConfig = DEFAULT_CONFIG
                               ) -> Tuple[bool, Optional[np.ndarray]]:
    """(True, None) when K1 & K2 = {0}; otherwise (False, common witness)."""
    if K1.dim != K2.dim:
        raise DimensionMismatch("cones live in different dimensions")
    witness = common_direction(K1, K2, cfg)
    return witness is None, witness


def _sup_composition(C: ConeExpr, D: ConeExpr, cfg: ToleranceConfig) -> float:
    """Estimate sup over unit x of <P_C x, P_D P_C x> by iterating the
    composition map from multiple starts (batched) and keeping the running
    maximum of the objective along every trajectory."""
    from ._batch import project_rows

    stacks = [seed_directions(C), seed_directions(D), np.eye(C.dim),
              cfg.rng().normal(size=(max(8, cfg.multistarts // 4), C.dim))]
    z = np.vstack([s for s in stacks if s.size])
    norms = np.linalg.norm(z, axis=1)
    z = z[norms > cfg.tol_zero] / norms[norms > cfg.tol_zero, None]
    best = 0.0
    prev = np.full(len(z), -1.0)
    stable = np.zeros(len(z), dtype=int)
    for _ in range(cfg.max_iters):
        if len(z) == 0:
            break
        pz = project_rows(C, z, cfg, method="nnls")
        qz = project_rows(D, pz, cfg, method="nnls")
        vals = np.einsum("ij,ij->i", pz, qz)
        if vals.size:
            best = max(best, float(np.max(vals)))
        nq = np.linalg.norm(qz, axis=1)
        stable = np.where(np.abs(vals - prev) <= cfg.tol_iter, stable + 1, 0)
        prev = vals
        keep = (nq > 1e-9) & (stable < 5)
        z = qz[keep] / nq[keep, None]
        prev = prev[keep]
        stable = stable[keep]
    return min(max(best, 0.0), 1.0)


def _beta_resolution(dim: int) -> int:
    return {1: 8, 2: 2880, 3: 180, 4: 48}[dim]


def check_sum_closedness(K1: ConeExpr, K2: ConeExpr,
                         cfg: ToleranceConfig = DEFAULT_CONFIG,
                         one_threshold: float = 1e-6) -> List[ConditionReport]:
    """Evaluate the five sufficient conditions for closedness of K1 + K2.

    All five are equivalent in finite dimension; each is evaluated
    numerically on (K1, -K2) with thresholds matched to the resolution of
    its estimator, and the conclusion is that the sum is closed iff at
    least one condition holds (sufficiency only).
    """
    if K1.dim != K2.dim:
        raise DimensionMismatch("cones live in different dimensions")
    if K1.dim > 4:
        raise UnsupportedDimension(
            "the sampled closedness conditions support dim <= 4")
    nk2 = negate(K2)
    v = c0(K1, nk2, cfg).value
    s = _sup_composition(K1, nk2, cfg)
    res = _beta_resolution(K1.dim)
    beta_hat = direct_beta_estimate(K1, nk2, res, cfg)
    # sampled minima sit above the true distance by up to a few grid
    # spacings, so the positivity cut must clear that noise floor
    spacing = (2.0 * np.pi if K1.dim == 2 else np.pi) / res
    beta_cut = max(float(np.sqrt(2.0 * one_threshold)), 4.0 * spacing)
    # triviality of K1 & (-K2) decided through the common-direction search,
    # which never projects onto the intersection and so cannot stall on
    # tangential contact
    trivial = common_direction(K1, nk2, cfg) is None
    gamma_hat = beta_hat / 2.0
    holds = [
        ("c0_lt_1", v < 1.0 - one_threshold, v),
        ("sup_proj_lt_1", s < 1.0 - one_threshold, s),
        ("sphere_dist_pos", beta_hat > beta_cut, beta_hat),
        ("gamma_pos", gamma_hat > beta_cut / 2.0, gamma_hat),
        ("trivial_intersection", trivial, 1.0 if trivial else 0.0),
    ]
    closed = any(h for _, h, _ in holds)
    return [ConditionReport(cid, h, val, closed) for cid, h, val in holds]


def nonclosedness_probe(K1: ConeExpr, K2: ConeExpr, z, t_grid: Sequence[float],
                        direction=None,
                        cfg: ToleranceConfig = DEFAULT_CONFIG
                        ) -> List[Tuple[float, float]]:
    """Distance profile t -> d_K1(z - t m) along a generator direction m of
    K2.  A profile decreasing to zero with no attainment evidences that
    K1 + K2 is not closed at z."""
    zv = np.asarray(z, dtype=float)
    if zv.shape[0] != K1.dim or K1.dim != K2.dim:
        raise DimensionMismatch("probe point and cones disagree on dim")
    if direction is None:
        if K2.kind == "ray":
            direction = K2.direction
        elif K2.kind == "subspace" and K2.basis.shape[0]:
            direction = K2.basis[0]
        elif K2.kind == "generated":
            direction = K2.generators[0]
        else:
            raise ValueError("supply an explicit generator direction for K2")
    m = np.asarray(direction, dtype=float)
    return [(float(t), distance(K1, zv - float(t) * m, cfg)) for t in t_grid]


def polar_intersection_witness(K1: ConeExpr, K2: ConeExpr,
                               cfg: ToleranceConfig = DEFAULT_CONFIG
                               ) -> Tuple[np.ndarray, np.ndarray]:
    """Nonzero witnesses of polar(K1) & dual(K2) and dual(K1) & polar(K2).

    Requires K1 not a linear subspace and K1 & K2 = {0}; under these
    hypotheses the witnesses exist, so a failed search is a numerical
    error and raises WitnessNotFound rather than returning silently.
    """
    if is_linear_subspace(K1, cfg):
        raise HypothesisViolated("K1 must not be a linear subspace")
    trivial, _ = check_trivial_intersection(K1, K2, cfg)
    if not trivial:
        raise HypothesisViolated("K1 and K2 must intersect only at 0")
    p1 = polar(K1)
    d2 = dual(K2)
    w = common_direction(p1, d2, cfg)
    if w is None:
        raise WitnessNotFound(
            "polar-intersection witness search failed numerically")
    if not (member(p1, w, cfg=cfg) and member(d2, w, cfg=cfg)):
        raise WitnessNotFound("witness failed membership re-validation")
    w2 = -w
    if not (member(dual(K1), w2, cfg=cfg) and member(polar(K2), w2, cfg=cfg)):
        raise WitnessNotFound("negated witness failed membership re-validation")
    return w, w2


def dichotomy_check(K1: ConeExpr, K2: ConeExpr,
                    cfg: ToleranceConfig = DEFAULT_CONFIG) -> str:
    """Which side of the dichotomy certifies: a common direction of the
    cones themselves (primal_one) or of polar(K1) and dual(K2) (polar_one).

    Requires K1 not a linear subspace.  Exactly the returned branch is
    certified numerically; if neither certifies, the numerical failure is
    surfaced loudly as DichotomyFailure.
    """
    if is_linear_subspace(K1, cfg):
        raise HypothesisViolated("K1 must not be a linear subspace")
    if common_direction(K1, K2, cfg) is not None:
        return PRIMAL_ONE
    if common_direction(polar(K1), dual(K2), cfg) is not None:
        return POLAR_ONE
    raise DichotomyFailure("neither branch certified a unit witness")


def ivt_orthogonal_point(u, x, y) -> Tuple[float, np.ndarray]:
    """Point t x + (1-t) y orthogonal to u, for <x,u> > 0 > <y,u>."""
    uv = np.asarray(u, dtype=float)
    xv = np.asarray(x, dtype=float)
    yv = np.asarray(y, dtype=float)
    xu = float(xv @ uv)
    yu = float(yv @ uv)
    if not (xu > 0.0 and yu < 0.0):
        raise SignConditionViolated("need <x,u> > 0 and <y,u> < 0")
    t = yu / (yu - xu)
    z = t * xv + (1.0 - t) * yv
    return t, z
