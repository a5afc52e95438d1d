"""Metric projection onto cone expressions.

Atoms have closed-form projectors (finitely generated cones go through an
active-set nonnegative least-squares solve), polar nodes use the Moreau
decomposition, and intersections run Dykstra's algorithm over the part
projectors, except for the cone-meets-one-halfspace pattern which uses an
exact dual-path solve that tangential contact cannot stall.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .cones import (
    DEFAULT_CONFIG,
    ConeExpr,
    Generated,
    ToleranceConfig,
    as_point,
    seed_directions,
)
from .errors import DimensionMismatch, IterationLimit


@dataclass
class ProjectionCertificate:
    """Residuals of the closed-convex-cone projection characterization:
    p in K, x - p orthogonal to p, and x - p in the polar of K."""

    membership_residual: float
    orthogonality_residual: float
    polar_residual: float
    passed: bool


def nnls(A: np.ndarray, b: np.ndarray, tol: float = 1e-12,
         max_iters: Optional[int] = None) -> np.ndarray:
    """Solve  min ||A @ lam - b||  subject to lam >= 0.

    Lawson-Hanson active set with a Bland-style (smallest index) entering
    rule.  An index whose insertion makes no progress (a degenerate
    boundary case) is barred from re-entering, which breaks the numerical
    cycles that plain Lawson-Hanson can fall into at machine precision.
    """
    m = A.shape[1]
    if max_iters is None:
        max_iters = 10 * m + 50
    lam = np.zeros(m)
    passive = np.zeros(m, dtype=bool)
    banned = np.zeros(m, dtype=bool)
    resid = b.copy()
    w = A.T @ resid
    tol_w = tol * max(1.0, float(np.linalg.norm(b)))
    for _ in range(max_iters):
        candidates = np.flatnonzero(~passive & ~banned & (w > tol_w))
        if candidates.size == 0:
            return lam
        entered = candidates[0]
        passive[entered] = True
        for _ in range(2 * m + 10):
            idx = np.flatnonzero(passive)
            if idx.size == 0:
                lam = np.zeros(m)
                break
            z = np.zeros(m)
            sol, *_ = np.linalg.lstsq(A[:, idx], b, rcond=None)
            z[idx] = sol
            if np.all(z[idx] > tol):
                lam = z
                break
            # step toward z, dropping the first variable that hits zero
            neg = idx[z[idx] <= tol]
            denom = lam[neg] - z[neg]
            safe = denom > tol
            if not np.any(safe):
                passive[neg[0]] = False
                continue
            alpha = float(np.min(lam[neg][safe] / denom[safe]))
            lam = lam + alpha * (z - lam)
            drop = passive & (lam <= tol)
            lam[drop] = 0.0
            passive[drop] = False
        if lam[entered] <= tol:
            passive[entered] = False
            banned[entered] = True
        resid = b - A @ lam
        w = A.T @ resid
    raise IterationLimit("active-set NNLS exceeded its iteration budget")


def _project_generated(cone: Generated, x: np.ndarray,
                       cfg: ToleranceConfig) -> np.ndarray:
    lam = nnls(cone.generators.T, x, tol=cfg.tol_zero)
    return cone.generators.T @ lam


def _project_soc(cone, x: np.ndarray) -> np.ndarray:
    c = cone.to_canonical(x)
    z, t = c[:-1], float(c[-1])
    nz = float(np.linalg.norm(z))
    if nz <= t:
        return x
    if nz <= -t:
        return np.zeros_like(x)
    s = 0.5 * (nz + t)
    out = np.concatenate([z * (s / nz), [s]])
    return cone.from_canonical(out)


def project(cone: ConeExpr, x, cfg: ToleranceConfig = DEFAULT_CONFIG,
            tol: Optional[float] = None) -> np.ndarray:
    """Metric projection of x onto the cone.

    `tol` overrides the iterative stopping tolerance of any nested solver
    (intersections); closed-form atoms ignore it.
    """
    p = as_point(x, cone.dim)
    if float(np.linalg.norm(p)) <= cfg.tol_zero:
        return np.zeros(cone.dim)
    kind = cone.kind
    if kind == "zero":
        return np.zeros(cone.dim)
    if kind == "ray":
        lam = max(0.0, float(p @ cone.direction))
        return lam * cone.direction
    if kind == "subspace":
        return cone.basis.T @ (cone.basis @ p)
    if kind == "soc":
        return _project_soc(cone, p)
    if kind == "generated":
        return _project_generated(cone, p, cfg)
    if kind == "halfspace":
        # Moreau: the polar of a halfspace cone is generated by its normals.
        return p - project(_halfspace_polar(cone), p, cfg)
    if kind == "neg":
        return -project(cone.inner, -p, cfg, tol)
    if kind == "polar":
        return p - project(cone.inner, p, cfg, tol)
    if kind == "intersect":
        split = split_single_halfspace(cone.parts)
        if split is not None:
            other, normal = split
            return _project_with_halfspace(other, normal, p, cfg, tol)
        return dykstra(cone.parts, p, cfg, tol)
    raise TypeError(f"unknown cone kind {kind!r}")


def _halfspace_polar(cone) -> Generated:
    cached = getattr(cone, "_polar_generated", None)
    if cached is None:
        cached = Generated(cone.normals)
        cone._polar_generated = cached
    return cached


def split_single_halfspace(parts):
    """Match an intersection of exactly two parts where one is a halfspace
    cone with a single normal: (other_part, normal) or None."""
    if len(parts) != 2:
        return None
    for i in (0, 1):
        part = parts[i]
        if part.kind == "halfspace" and part.normals.shape[0] == 1:
            return parts[1 - i], part.normals[0]
    return None


# Dual-path cap: beyond this multiplier the halfspace constraint is treated
# as asymptotically active (tangential contact, multiplier not attained)
# and the projection is Richardson-extrapolated along the smooth 1/mu tail.
_MU_CAP = 1e6


def _project_with_halfspace(other, normal, x, cfg, tol=None) -> np.ndarray:
    """Project onto other & {p : <normal, p> <= 0} through the dual path
    p(mu) = P_other(x - mu normal), which is immune to the tangential
    geometries that stall Dykstra."""
    inner_tol = None if tol is None else max(tol * 0.02, 1e-14)
    p = project(other, x, cfg, inner_tol)
    scale = 1.0 + float(np.linalg.norm(x))
    if float(normal @ p) <= 1e-13 * scale:
        return p
    mu_cap = _MU_CAP * scale
    lo, hi = 0.0, scale
    capped = True
    for _ in range(64):
        if hi > mu_cap:
            break
        p = project(other, x - hi * normal, cfg, inner_tol)
        if float(normal @ p) <= 0.0:
            capped = False
            break
        lo, hi = hi, 2.0 * hi
    if capped:
        p1 = project(other, x - mu_cap * normal, cfg, inner_tol)
        p2 = project(other, x - 2.0 * mu_cap * normal, cfg, inner_tol)
        return 2.0 * p2 - p1
    for _ in range(90):
        mid = 0.5 * (lo + hi)
        p = project(other, x - mid * normal, cfg, inner_tol)
        if float(normal @ p) > 0.0:
            lo = mid
        else:
            hi = mid
    return project(other, x - hi * normal, cfg, inner_tol)


def dykstra(parts: Sequence[ConeExpr], x, cfg: ToleranceConfig = DEFAULT_CONFIG,
            tol: Optional[float] = None) -> np.ndarray:
    """Project onto the intersection of `parts` by Dykstra's algorithm.

    One correction term per part; stops when the largest displacement over
    a full cycle drops below tol * (1 + ||x||).
    """
    parts = list(parts)
    if not parts:
        raise ValueError("dykstra needs at least one part")
    p = as_point(x, parts[0].dim)
    for part in parts:
        if part.dim != p.shape[0]:
            raise DimensionMismatch("dykstra parts and point disagree on dim")
    if tol is None:
        tol = cfg.tol_iter
    # nested solvers must resolve finer than this level's stopping rule
    inner_tol = max(tol * 0.02, 1e-14)
    scale = tol * (1.0 + float(np.linalg.norm(p)))
    y = p.copy()
    corrections = [np.zeros_like(p) for _ in parts]
    for _ in range(cfg.max_iters):
        max_step = 0.0
        for i, part in enumerate(parts):
            shifted = y + corrections[i]
            y_new = project(part, shifted, cfg, inner_tol)
            corrections[i] = shifted - y_new
            max_step = max(max_step, float(np.linalg.norm(y_new - y)))
            y = y_new
        if max_step <= scale:
            return y
    raise IterationLimit("Dykstra exceeded max_iters without converging")


def distance(cone: ConeExpr, x, cfg: ToleranceConfig = DEFAULT_CONFIG) -> float:
    """d_K(x) = ||x - P_K(x)||."""
    p = as_point(x, cone.dim)
    return float(np.linalg.norm(p - project(cone, p, cfg)))


def sample_members(cone: ConeExpr, count: int = 64,
                   cfg: ToleranceConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Deterministic unit members obtained by projecting probe directions."""
    rng = cfg.rng()
    seeds = seed_directions(cone)
    probes = rng.normal(size=(count, cone.dim))
    stacked = np.vstack([seeds, probes]) if seeds.size else probes
    members = []
    for d in stacked:
        nd = float(np.linalg.norm(d))
        if nd <= cfg.tol_zero:
            continue
        m = project(cone, d / nd, cfg)
        nm = float(np.linalg.norm(m))
        if nm > 1e-9:
            members.append(m / nm)
        if len(members) >= count:
            break
    if not members:
        return np.zeros((0, cone.dim))
    return np.array(members)


def _polar_probes(cone: ConeExpr, cfg: ToleranceConfig) -> np.ndarray:
    if cone.kind == "ray":
        return cone.direction[None, :]
    if cone.kind == "generated":
        return cone.generators
    if cone.kind == "subspace":
        return np.vstack([cone.basis, -cone.basis]) if cone.basis.size else np.zeros((0, cone.dim))
    if cone.kind == "zero":
        return np.zeros((0, cone.dim))
    return sample_members(cone, 64, cfg)


def certify_projection(cone: ConeExpr, x, p,
                       cfg: ToleranceConfig = DEFAULT_CONFIG) -> ProjectionCertificate:
    """Check the three projection conditions for a claimed projection p."""
    xv = as_point(x, cone.dim)
    pv = as_point(p, cone.dim)
    membership = distance(cone, pv, cfg)
    orthogonality = abs(float((xv - pv) @ pv))
    probes = _polar_probes(cone, cfg)
    if probes.shape[0]:
        polar_resid = max(0.0, float(np.max(probes @ (xv - pv))))
    else:
        polar_resid = 0.0
    slack = cfg.tol_feas * (1.0 + float(np.linalg.norm(xv)))
    passed = max(membership, orthogonality, polar_resid) <= slack
    return ProjectionCertificate(membership, orthogonality, polar_resid, passed)
