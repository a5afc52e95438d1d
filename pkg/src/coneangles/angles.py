"""Minimal-angle and angle solvers with principal-vector certificates.

`c0` computes the cosine of the minimal angle between two cones (sup of
<x, y> over the unit-ball sections) by closed forms where available and a
multistart projection power iteration otherwise.  `c_angle` reduces the
angle of a cone pair to a minimal angle of polar-trimmed sections.
`c0_oracle` is an independent brute-force sphere sweep used for
cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from ._batch import member_directions, proj_norm2_rows, project_rows, sphere_grid_chunks
from .cones import (
    DEFAULT_CONFIG,
    ConeExpr,
    Generated,
    HalfspaceCone,
    Ray,
    Subspace,
    ToleranceConfig,
    Zero,
    intersect,
    member,
    polar,
    seed_directions,
)
from .errors import (
    DimensionMismatch,
    IdentityNotApplicable,
    IterationLimit,
    UnsupportedDimension,
)
from .projections import project


@dataclass(eq=False)
class PrincipalCertificate:
    """Residuals of the necessary conditions for a principal pair."""

    polar_residual_1: float
    polar_residual_2: float
    projection_identity_residuals: list
    boundary_violations: int
    passed: bool


@dataclass(eq=False)
class AngleReport:
    """Result of an angle computation.

    value is the cosine in [0, 1]; beta and gamma are derived through the
    identities value = 1 - beta^2/2 = 1 - 2 gamma^2 whenever value is
    meaningfully positive (NaN otherwise).
    """

    value: float
    kind: str
    pair: Optional[Tuple[np.ndarray, np.ndarray]]
    beta: float
    gamma: float
    method: str
    iterations: int
    certificate: Optional[PrincipalCertificate] = None
    degenerate: bool = False


def _make_report(value, kind, pair, method, iterations, cfg,
                 degenerate=False) -> AngleReport:
    value = min(max(float(value), 0.0), 1.0)
    if value > cfg.tol_feas:
        beta_val = math.sqrt(max(0.0, 2.0 - 2.0 * value))
        gamma_val = beta_val / 2.0
    else:
        beta_val = gamma_val = float("nan")
    return AngleReport(value, kind, pair, beta_val, gamma_val, method,
                       iterations, degenerate=degenerate)


def _quick_trivial(cone: ConeExpr) -> bool:
    # closed-form-only triviality; never samples, may miss composite cases
    if cone.kind == "zero":
        return True
    if cone.kind == "subspace":
        return cone.basis.shape[0] == 0
    if cone.kind == "neg":
        return _quick_trivial(cone.inner)
    if cone.kind == "intersect":
        return any(_quick_trivial(p) for p in cone.parts)
    return False


def _zero_pair(dim: int):
    return (np.zeros(dim), np.zeros(dim))


_SCAN_RESOLUTION = {1: 2, 2: 64, 3: 14, 4: 8}


def _scan_starts(C: ConeExpr, D: ConeExpr, cfg: ToleranceConfig,
                 top: int = 12) -> np.ndarray:
    """Best directions of a coarse whole-sphere scan, ranked by one
    alternating step; guards the local iteration against missing the
    global basin."""
    from ._batch import sphere_grid

    grid = sphere_grid(C.dim, _SCAN_RESOLUTION[C.dim])
    px = project_rows(C, grid, cfg, method="nnls")
    nx = np.linalg.norm(px, axis=1)
    keep = nx > _COLLAPSE
    if not np.any(keep):
        return np.zeros((0, C.dim))
    x = px[keep] / nx[keep, None]
    grid = grid[keep]
    py = project_rows(D, x, cfg, method="nnls")
    ny = np.linalg.norm(py, axis=1)
    keep2 = ny > _COLLAPSE
    if not np.any(keep2):
        return np.zeros((0, C.dim))
    vals = np.einsum("ij,ij->i", x[keep2], py[keep2] / ny[keep2, None])
    order = np.argsort(-vals, kind="stable")[:top]
    return grid[keep2][order]


def _start_directions(C: ConeExpr, D: ConeExpr, cfg: ToleranceConfig) -> np.ndarray:
    dim = C.dim
    rows = [seed_directions(C), seed_directions(D), np.eye(dim), -np.eye(dim),
            cfg.rng().normal(size=(cfg.multistarts, dim))]
    if dim <= 4:
        rows.append(_scan_starts(C, D, cfg))
    stacked = np.vstack([r for r in rows if r.size])
    norms = np.linalg.norm(stacked, axis=1)
    keep = norms > cfg.tol_zero
    return stacked[keep] / norms[keep, None]


# A projected iterate below this norm is treated as a collapse to zero:
# nested projectors are accurate to ~1e-9, so normalizing anything smaller
# would manufacture a junk direction, while the true objective such a start
# could still contribute is bounded by the same tiny norm.
_COLLAPSE = 1e-7


def _polish_pair(C: ConeExpr, D: ConeExpr, y: np.ndarray, cfg: ToleranceConfig):
    """Continue the alternating iteration from y until the step reaches
    tol_iter or stops shrinking (tangential optima crawl sublinearly).
    Returns (x, y, value) or None if the trajectory collapses to zero."""
    best_step = np.inf
    since_improved = 0
    x = None
    val = 0.0
    for _ in range(4000):
        px = project(C, y, cfg)
        nx = float(np.linalg.norm(px))
        if nx <= _COLLAPSE:
            return None
        x = px / nx
        py = project(D, x, cfg)
        ny = float(np.linalg.norm(py))
        if ny <= _COLLAPSE:
            return None
        y_new = py / ny
        val = float(x @ y_new)
        step = float(np.linalg.norm(y_new - y))
        y = y_new
        if step <= cfg.tol_iter:
            break
        if step <= 0.5 * best_step:
            best_step = step
            since_improved = 0
        else:
            since_improved += 1
            if since_improved > 200:
                break
    return x, y, val


def _power_c0(C: ConeExpr, D: ConeExpr, cfg: ToleranceConfig):
    """Multistart power iteration for sup <x, y> over unit-ball sections.

    Each start alternates x <- normalize(P_C y), y <- normalize(P_D x);
    the objective <x, y> is nondecreasing along the iteration.  A start
    finishes when the objective is stationary (three consecutive changes
    below tol_iter and a small step, or a long stationary stretch for the
    sublinear tangential geometries).  A start whose projection collapses
    to 0 terminates with objective 0.  The winning trajectory is polished
    before reporting.  Returns (value, pair, iterations, all_zero).
    """
    starts = _start_directions(C, D, cfg)
    n = starts.shape[0]
    y_cur = starts.copy()
    val_prev = np.full(n, -np.inf)
    stable = np.zeros(n, dtype=int)
    finished = np.zeros(n, dtype=bool)
    zero_hit = np.zeros(n, dtype=bool)
    out_val = np.zeros(n)
    out_x = np.zeros_like(starts)
    out_y = np.zeros_like(starts)
    out_it = np.zeros(n, dtype=int)
    converged = np.zeros(n, dtype=bool)

    for it in range(1, cfg.max_iters + 1):
        idx = np.flatnonzero(~finished)
        if idx.size == 0:
            break
        yi = y_cur[idx]
        px = project_rows(C, yi, cfg, method="nnls")
        nx = np.linalg.norm(px, axis=1)
        dead = nx <= _COLLAPSE
        if np.any(dead):
            rows = idx[dead]
            finished[rows] = True
            converged[rows] = True
            zero_hit[rows] = True
            out_it[rows] = it
        live = idx[~dead]
        if live.size == 0:
            continue
        x = px[~dead] / nx[~dead, None]
        py = project_rows(D, x, cfg, method="nnls")
        ny = np.linalg.norm(py, axis=1)
        dead_y = ny <= _COLLAPSE
        if np.any(dead_y):
            rows = live[dead_y]
            finished[rows] = True
            converged[rows] = True
            zero_hit[rows] = True
            out_it[rows] = it
        live2 = live[~dead_y]
        if live2.size == 0:
            continue
        x = x[~dead_y]
        y_new = py[~dead_y] / ny[~dead_y, None]
        vals = np.einsum("ij,ij->i", x, y_new)
        steps = np.linalg.norm(y_new - y_cur[live2], axis=1)
        is_stable = np.abs(vals - val_prev[live2]) <= cfg.tol_iter
        stable[live2] = np.where(is_stable, stable[live2] + 1, 0)
        val_prev[live2] = vals
        y_cur[live2] = y_new
        done = ((stable[live2] >= 3) & (steps <= 1e-6)) | (stable[live2] >= 40)
        rows = live2[done]
        if rows.size:
            finished[rows] = True
            converged[rows] = True
            out_val[rows] = vals[done]
            out_x[rows] = x[done]
            out_y[rows] = y_new[done]
            out_it[rows] = it

    if not np.any(converged):
        raise IterationLimit("no power-iteration start converged")
    cand = np.flatnonzero(converged)
    best_val = float(np.max(out_val[cand]))
    near = cand[out_val[cand] >= best_val - 1e-12]
    # deterministic tie-break: lexicographically smallest x among the winners
    order = sorted(near, key=lambda i: (tuple(np.round(out_x[i], 9)),
                                        tuple(np.round(out_y[i], 9))))
    win = order[0]
    pair = (out_x[win].copy(), out_y[win].copy())
    if best_val > cfg.tol_feas:
        polished = _polish_pair(C, D, out_y[win], cfg)
        if polished is not None and polished[2] >= best_val - 1e-12:
            pair = (polished[0], polished[1])
            best_val = polished[2]
    all_zero = bool(np.all(zero_hit[cand]))
    return best_val, pair, int(out_it[win]), all_zero


def c0(C: ConeExpr, D: ConeExpr, cfg: ToleranceConfig = DEFAULT_CONFIG) -> AngleReport:
    """Cosine of the minimal angle between two cones, with principal pair.

    Closed forms cover ray/ray, ray/cone and subspace/subspace instances;
    everything else runs the multistart power iteration.
    """
    if C.dim != D.dim:
        raise DimensionMismatch("cones live in different dimensions")
    dim = C.dim
    if _quick_trivial(C) or _quick_trivial(D):
        rep = _make_report(0.0, "c0", _zero_pair(dim), "closed_form", 0, cfg,
                           degenerate=True)
        return rep

    if C.kind == "ray" and D.kind == "ray":
        val = float(C.direction @ D.direction)
        pair = (C.direction.copy(), D.direction.copy()) if val > 0 else _zero_pair(dim)
        return _make_report(val, "c0", pair, "closed_form", 0, cfg)

    if C.kind == "ray" or D.kind == "ray":
        swap = D.kind == "ray"
        ray, other = (D, C) if swap else (C, D)
        p = project(other, ray.direction, cfg)
        val = float(np.linalg.norm(p))
        if val <= cfg.tol_feas:
            return _make_report(0.0, "c0", _zero_pair(dim), "closed_form", 0, cfg)
        q = p / val
        pair = (q, ray.direction.copy()) if swap else (ray.direction.copy(), q)
        return _make_report(val, "c0", pair, "closed_form", 0, cfg)

    if C.kind == "subspace" and D.kind == "subspace":
        u, s, vh = np.linalg.svd(C.basis @ D.basis.T)
        val = float(s[0])
        x = C.basis.T @ u[:, 0]
        y = D.basis.T @ vh[0]
        if tuple(np.round(-x, 12)) < tuple(np.round(x, 12)):
            x, y = -x, -y
        return _make_report(val, "c0", (x, y), "closed_form", 0, cfg)

    val, pair, iterations, all_zero = _power_c0(C, D, cfg)
    degenerate = False
    if all_zero and val <= cfg.tol_feas:
        # every start collapsed; distinguish a genuinely trivial operand
        # from merely orthogonal cones before raising the flag
        from .cones import is_trivial

        try:
            degenerate = is_trivial(C, cfg) or is_trivial(D, cfg)
        except UnsupportedDimension:
            degenerate = False
    return _make_report(val, "c0", pair, "power", iterations, cfg,
                        degenerate=degenerate)


def c0_oracle(C: ConeExpr, D: ConeExpr, resolution: int,
              cfg: ToleranceConfig = DEFAULT_CONFIG) -> float:
    """Brute-force estimate of c0 by a deterministic sphere sweep.

    Every grid direction is projected onto D; the nonzero projections are
    exact unit members y of D, and the candidate value for each is
    ||P_C y||.  Runs resolution**(dim-1) directions, dim <= 4.
    """
    if C.dim != D.dim:
        raise DimensionMismatch("cones live in different dimensions")
    if C.dim > 4:
        raise UnsupportedDimension("oracle sweep supports dim <= 4")
    if resolution < 8:
        raise ValueError("oracle resolution must be at least 8")
    best = 0.0
    dtype = np.float32 if C.dim >= 3 else np.float64
    for chunk in sphere_grid_chunks(C.dim, resolution, dtype=dtype):
        members = member_directions(D, chunk, cfg, tol=1e-9)
        if members.shape[0] == 0:
            continue
        cand = float(np.sqrt(np.max(proj_norm2_rows(C, members, cfg))))
        best = max(best, cand)
    return min(max(best, 0.0), 1.0)


def common_direction(K1: ConeExpr, K2: ConeExpr,
                     cfg: ToleranceConfig = DEFAULT_CONFIG) -> Optional[np.ndarray]:
    """A unit vector in K1 & K2 \\ {0}, or None when the intersection is {0}.

    A minimal-angle cosine conclusively below 1 settles triviality (finite
    dimension); otherwise candidate directions are polished by normalized
    alternating projections and accepted only if both memberships validate.
    """
    try:
        rep = c0(K1, K2, cfg)
    except IterationLimit:
        rep = None
    if rep is not None and rep.value < 1.0 - 1e-3:
        return None
    starts = []
    if rep is not None and rep.pair is not None:
        x, y = rep.pair
        starts.extend([x, y, x + y])
    for seeds in (seed_directions(K1), seed_directions(K2)):
        starts.extend(seeds)
    starts.append(cfg.rng().normal(size=K1.dim))
    for start in starts:
        z = np.asarray(start, dtype=float)
        n = float(np.linalg.norm(z))
        if n <= cfg.tol_zero:
            continue
        z = z / n
        for _ in range(2000):
            z_new = project(K2, project(K1, z, cfg), cfg)
            n = float(np.linalg.norm(z_new))
            if n <= 1e-13:
                z = None
                break
            z_new = z_new / n
            step = float(np.linalg.norm(z_new - z))
            z = z_new
            if step <= cfg.tol_iter:
                break
        if z is None:
            continue
        if member(K1, z, cfg=cfg) and member(K2, z, cfg=cfg):
            return z
    return None


def _meet_is_ray(K1: ConeExpr, K2: ConeExpr, w: np.ndarray,
                 cfg: ToleranceConfig) -> bool:
    """Sampled check that K1 & K2 is exactly the ray along w.

    Samples intersection directions by normalized alternating projections
    from a coarse grid (never projecting onto the intersection itself, so
    tangential contact cannot stall the check) and accepts the ray only if
    every validated sample lies along w.
    """
    if K1.dim > 4:
        return False
    from ._batch import sphere_grid

    resolution = {1: 2, 2: 48, 3: 16, 4: 8}[K1.dim]
    starts = np.vstack([sphere_grid(K1.dim, resolution), w[None, :]])
    z = starts.copy()
    try:
        for _ in range(400):
            z = project_rows(K1, z, cfg)
            norms = np.linalg.norm(z, axis=1)
            keep = norms > 1e-12
            if not np.any(keep):
                return False
            z = z[keep] / norms[keep, None]
            z = project_rows(K2, z, cfg)
            norms = np.linalg.norm(z, axis=1)
            keep = norms > 1e-12
            if not np.any(keep):
                return False
            z = z[keep] / norms[keep, None]
        members = [m for m in z
                   if member(K1, m, tol=1e-6, cfg=cfg)
                   and member(K2, m, tol=1e-6, cfg=cfg)]
    except IterationLimit:
        return False
    if not members:
        return False
    members = np.array(members)
    along = members @ w
    resid = np.linalg.norm(members - along[:, None] * w[None, :], axis=1)
    return bool(np.all(along > 0.99) and np.all(resid <= 1e-3))


def _trim_2d(K1: ConeExpr, K2: ConeExpr, w: np.ndarray,
             cfg: ToleranceConfig) -> ConeExpr:
    """Exact polar trim of a planar intersection that is not a single ray.

    A closed convex cone in the plane whose sphere section is connected
    around w is classified by angular membership bisection into a line,
    wedge, halfplane or the whole plane, and the polar follows in closed
    form.
    """
    def inside(theta: float) -> bool:
        d = np.array([math.cos(theta), math.sin(theta)])
        return member(K1, d, tol=1e-9, cfg=cfg) and member(K2, d, tol=1e-9, cfg=cfg)

    base = math.atan2(w[1], w[0])

    def extent(sign: float) -> float:
        lo, hi = 0.0, None
        t = math.pi / 180.0
        while t <= math.pi + 1e-12:
            if inside(base + sign * t):
                lo = t
            else:
                hi = t
                break
            t += math.pi / 180.0
        if hi is None:
            return math.pi
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if inside(base + sign * mid):
                lo = mid
            else:
                hi = mid
        return lo

    opposite_in = inside(base + math.pi)
    plus = extent(1.0)
    minus = extent(-1.0)
    span = plus + minus
    # a proper convex cone's sphere section is an arc of length at most pi
    if span >= math.pi + 1e-7:
        return Zero(2)  # the meet is the whole plane, polar is {0}
    if span >= math.pi - 1e-7:
        # halfplane: polar is the ray of the outward normal
        edge = np.array([math.cos(base + plus), math.sin(base + plus)])
        n = np.array([-edge[1], edge[0]])
        if float(n @ w) > 0:
            n = -n
        return Ray(n)
    if opposite_in and span <= 1e-7:
        return polar(Subspace([w]))  # the meet is the line through w
    e_plus = np.array([math.cos(base + plus), math.sin(base + plus)])
    e_minus = np.array([math.cos(base - minus), math.sin(base - minus)])
    return polar(Generated([e_plus, e_minus]))


def c_angle(K1: ConeExpr, K2: ConeExpr,
            cfg: ToleranceConfig = DEFAULT_CONFIG) -> AngleReport:
    """Cosine of the angle: minimal angle after trimming both cones by the
    polar of their intersection.

    The trim is simplified structurally whenever the intersection can be
    identified: {0} gives the whole space, a single ray gives one
    halfspace (whose sections admit the robust dual-path projector), and
    any planar intersection is classified exactly by angular bisection.
    Remaining cases carry a generic polar node served by nested Dykstra,
    which can hit its iteration budget on tangentially touching cones.
    """
    if K1.dim != K2.dim:
        raise DimensionMismatch("cones live in different dimensions")
    w = common_direction(K1, K2, cfg)
    if w is None:
        trim = Subspace(np.eye(K1.dim))  # polar of {0} is the whole space
    elif _meet_is_ray(K1, K2, w, cfg):
        trim = HalfspaceCone([w])
    elif K1.dim == 2:
        trim = _trim_2d(K1, K2, w, cfg)
    else:
        trim = polar(intersect([K1, K2]))
    rep = c0(intersect([K1, trim]), intersect([K2, trim]), cfg)
    return replace(rep, kind="c")


def beta(C: ConeExpr, D: ConeExpr, cfg: ToleranceConfig = DEFAULT_CONFIG) -> float:
    """Distance between the unit-sphere sections, via beta = sqrt(2 - 2 c0).

    Only defined when c0 is positive; use `direct_beta_estimate` for a
    sampled diagnostic.
    """
    rep = c0(C, D, cfg)
    if rep.value <= cfg.tol_feas:
        raise IdentityNotApplicable("beta/gamma identities need c0 > 0")
    return math.sqrt(max(0.0, 2.0 - 2.0 * rep.value))


def gamma(C: ConeExpr, D: ConeExpr, cfg: ToleranceConfig = DEFAULT_CONFIG) -> float:
    """Normalized-gap infimum; equals beta / 2."""
    return beta(C, D, cfg) / 2.0


def direct_beta_estimate(C: ConeExpr, D: ConeExpr, resolution: int,
                         cfg: ToleranceConfig = DEFAULT_CONFIG) -> float:
    """Sampled estimate of the sphere-section distance d(C & S, D & S).

    In dim 2 the estimate is the plain pairwise minimum over both member
    grids.  In higher dimensions the pairwise grid is too large, so the
    sweep minimizes, over the sampled members y of one cone, the exact
    point-to-section distance sqrt(2 - 2 ||P y||) of the other cone (valid
    while the projection is nonzero, which covers every pair with positive
    c0).
    """
    if C.dim > 4:
        raise UnsupportedDimension("direct estimates support dim <= 4")
    if C.dim == 2:
        grid = np.concatenate(list(sphere_grid_chunks(2, resolution)))
        mc = member_directions(C, grid, cfg, tol=1e-9)
        md = member_directions(D, grid, cfg, tol=1e-9)
        if mc.shape[0] == 0 or md.shape[0] == 0:
            return float("inf")
        best = -1.0
        rows_per_block = max(1, (1 << 20) // md.shape[0])
        for start in range(0, mc.shape[0], rows_per_block):
            block = mc[start:start + rows_per_block]
            best = max(best, float(np.max(block @ md.T)))
        return math.sqrt(max(0.0, 2.0 - 2.0 * best))
    best = 0.0
    seen = False
    for chunk in sphere_grid_chunks(D.dim, resolution, dtype=np.float32):
        members = member_directions(D, chunk, cfg, tol=1e-9)
        if members.shape[0] == 0:
            continue
        seen = True
        best = max(best, float(np.sqrt(np.max(proj_norm2_rows(C, members, cfg)))))
    if not seen:
        return float("inf")
    return math.sqrt(max(0.0, 2.0 - 2.0 * min(best, 1.0)))


def direct_gamma_estimate(C: ConeExpr, D: ConeExpr, resolution: int,
                          cfg: ToleranceConfig = DEFAULT_CONFIG,
                          beta_estimate: Optional[float] = None) -> float:
    """Sampled estimate of inf ||x - y|| / (||x|| + ||y||) over the cones.

    For fixed unit directions the ratio ||s x - y|| / (s + 1) is minimized
    at equal norms (s = 1), so the infimum over the cones reduces to half
    the sphere-section distance; the sampling happens in the directions.
    A precomputed `beta_estimate` (same resolution) skips the sweep.
    """
    if beta_estimate is None:
        beta_estimate = direct_beta_estimate(C, D, resolution, cfg)
    return beta_estimate / 2.0


def principal_vectors(C: ConeExpr, D: ConeExpr,
                      cfg: ToleranceConfig = DEFAULT_CONFIG) -> AngleReport:
    """c0 with the achieving pair and a certificate of the necessary
    conditions attached.  A zero angle cosine yields the zero pair."""
    rep = c0(C, D, cfg)
    if rep.value <= cfg.tol_feas or rep.pair is None:
        pair = _zero_pair(C.dim)
    else:
        pair = rep.pair
    cert = certify_principal(C, D, pair[0], pair[1], cfg)
    return replace(rep, pair=pair, certificate=cert)


def certify_principal(C: ConeExpr, D: ConeExpr, xbar, ybar,
                      cfg: ToleranceConfig = DEFAULT_CONFIG) -> PrincipalCertificate:
    """Check the polar-membership and projection-identity conditions of a
    claimed principal pair, plus boundary probes along the polar shifts."""
    x = np.asarray(xbar, dtype=float)
    y = np.asarray(ybar, dtype=float)
    inner = float(x @ y)
    v = y - inner * x
    w = x - inner * y
    # d to the polar cone equals the norm of the projection onto the cone
    res1 = float(np.linalg.norm(project(C, v, cfg))) if np.linalg.norm(v) > 0 else 0.0
    res2 = float(np.linalg.norm(project(D, w, cfg))) if np.linalg.norm(w) > 0 else 0.0
    pc, pd = polar(C), polar(D)
    identity_residuals = []
    for lam in (0.5, 1.0, 2.0):
        identity_residuals.append(
            float(np.linalg.norm(lam * v - project(pc, x + lam * v, cfg))))
        identity_residuals.append(
            float(np.linalg.norm(lam * w - project(pd, y + lam * w, cfg))))
    violations = 0
    unit_pair = (abs(np.linalg.norm(x) - 1.0) <= 10 * cfg.tol_feas
                 and abs(np.linalg.norm(y) - 1.0) <= 10 * cfg.tol_feas)
    if unit_pair and abs(inner) < 1.0 - 1e-6:
        for alpha in (0.1, 1.0, 10.0):
            if member(C, x + alpha * v, cfg=cfg):
                violations += 1
            if member(D, y + alpha * w, cfg=cfg):
                violations += 1
    residuals = [res1, res2] + identity_residuals
    passed = max(residuals) <= cfg.tol_feas and violations == 0
    return PrincipalCertificate(res1, res2, identity_residuals, violations, passed)
