"""Vectorized helpers: deterministic sphere grids and row-batched projectors.

The batched polyhedral projector enumerates cone faces (all generator
subsets up to the ambient dimension) instead of running the active-set
solver, which keeps the brute-force sweeps independent of the main
projection path and fast enough for fine grids.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterator, Optional, Sequence

import numpy as np

from .cones import ConeExpr, Generated, ToleranceConfig
from .errors import DimensionMismatch, IterationLimit, UnsupportedDimension

_MAX_FACES = 512


def sphere_grid(dim: int, resolution: int) -> np.ndarray:
    """Deterministic grid of resolution**(dim-1) unit directions, dim <= 4."""
    return np.concatenate(list(sphere_grid_chunks(dim, resolution)), axis=0)


def sphere_grid_chunks(dim: int, resolution: int, chunk_size: int = 262144,
                       dtype=np.float64) -> Iterator[np.ndarray]:
    """Yield the sphere grid in row chunks to bound memory."""
    if dim > 4:
        raise UnsupportedDimension("sphere sweeps support dim <= 4")
    if resolution < 2:
        raise ValueError("resolution too small")
    if dim == 1:
        yield np.array([[1.0], [-1.0]], dtype=dtype)
        return
    if dim == 2:
        ang = 2.0 * np.pi * np.arange(resolution) / resolution
        pts = np.column_stack([np.cos(ang), np.sin(ang)]).astype(dtype)
        for start in range(0, len(pts), chunk_size):
            yield pts[start:start + chunk_size]
        return
    phi = 2.0 * np.pi * np.arange(resolution) / resolution
    cphi, sphi = np.cos(phi), np.sin(phi)
    theta = np.pi * (np.arange(resolution) + 0.5) / resolution
    if dim == 3:
        rows_per_theta = resolution
        thetas_per_chunk = max(1, chunk_size // rows_per_theta)
        for start in range(0, resolution, thetas_per_chunk):
            th = theta[start:start + thetas_per_chunk]
            st, ct = np.sin(th)[:, None], np.cos(th)[:, None]
            x = (st * cphi[None, :]).ravel()
            y = (st * sphi[None, :]).ravel()
            z = np.broadcast_to(ct, (len(th), resolution)).ravel()
            yield np.column_stack([x, y, z]).astype(dtype)
        return
    # dim == 4: two polar angles and one azimuth
    rows_per_pair = resolution
    pairs = [(t1, t2) for t1 in theta for t2 in theta]
    pairs_per_chunk = max(1, chunk_size // rows_per_pair)
    for start in range(0, len(pairs), pairs_per_chunk):
        block = pairs[start:start + pairs_per_chunk]
        out = np.empty((len(block) * resolution, 4))
        for i, (t1, t2) in enumerate(block):
            s1, c1 = np.sin(t1), np.cos(t1)
            s2, c2 = np.sin(t2), np.cos(t2)
            sl = slice(i * resolution, (i + 1) * resolution)
            out[sl, 0] = s1 * s2 * cphi
            out[sl, 1] = s1 * s2 * sphi
            out[sl, 2] = s1 * c2
            out[sl, 3] = c1
        yield out.astype(dtype)


def _face_data(cone: Generated):
    """Cached padded face stacks: pseudo-inverses, orthonormal bases and
    generator blocks for every linearly independent generator subset up to
    the ambient dimension.  None when the face count would blow up."""
    cached = getattr(cone, "_face_cache", None)
    if cached is not None:
        return cached if cached != () else None
    g = cone.generators
    m, n = g.shape
    kmax = min(m, n)
    total = sum(_n_choose_k(m, k) for k in range(1, kmax + 1))
    if total > _MAX_FACES:
        cone._face_cache = ()
        return None
    pinvs, qs, gens = [], [], []
    for k in range(1, kmax + 1):
        for idx in combinations(range(m), k):
            sub = g[list(idx)]
            u, s, vh = np.linalg.svd(sub, full_matrices=False)
            if s[-1] <= 1e-10:
                continue  # dependent subset; a smaller face covers it
            pad = np.zeros((kmax, n))
            pad[:k] = np.linalg.pinv(sub.T)
            pinvs.append(pad)
            pad = np.zeros((kmax, n))
            pad[:k] = vh
            qs.append(pad)
            pad = np.zeros((kmax, n))
            pad[:k] = sub
            gens.append(pad)
    data = {"pinv": np.array(pinvs), "q": np.array(qs), "gen": np.array(gens)}
    cone._face_cache = data
    return data


def _n_choose_k(m: int, k: int) -> int:
    out = 1
    for i in range(k):
        out = out * (m - i) // (i + 1)
    return out


def _flat_faces(cone: Generated, dt):
    """Slot-major flattening of the face stacks, cached per dtype: column
    block j holds coefficient slot j of every face, so the per-face
    reductions below run over contiguous 2-d blocks."""
    data = _face_data(cone)
    if data is None:
        return None
    key = f"_flat_{np.dtype(dt).name}"
    cached = getattr(cone, key, None)
    if cached is None:
        f, kmax, d = data["pinv"].shape
        pinv_slots = data["pinv"].transpose(1, 0, 2).reshape(kmax * f, d)
        q_slots = data["q"].transpose(1, 0, 2).reshape(kmax * f, d)
        cached = (np.ascontiguousarray(pinv_slots.astype(dt)),
                  np.ascontiguousarray(q_slots.astype(dt)),
                  f, kmax)
        setattr(cone, key, cached)
    return cached


def _face_s2(cone: Generated, ys: np.ndarray):
    """Per row: squared norm of the span projection on every feasible face
    (-inf where infeasible), plus slot-major coefficients (n, kmax, f)."""
    pinv_flat, q_flat, f, kmax = _flat_faces(cone, ys.dtype)
    n = ys.shape[0]
    lam = (ys @ pinv_flat.T).reshape(n, kmax, f)
    low = lam[:, 0, :].copy()
    for j in range(1, kmax):
        np.minimum(low, lam[:, j, :], out=low)
    r = (ys @ q_flat.T).reshape(n, kmax, f)
    s2 = np.square(r[:, 0, :])
    for j in range(1, kmax):
        s2 += np.square(r[:, j, :])
    s2[low < -1e-7] = -np.inf
    return s2, lam


def _project_rows_generated(cone: Generated, ys: np.ndarray,
                            cfg: ToleranceConfig, method: str) -> np.ndarray:
    data = _face_data(cone) if method == "faces" else None
    if data is None:
        from .projections import project

        return np.asarray([project(cone, y, cfg) for y in ys], dtype=ys.dtype)
    s2, lam = _face_s2(cone, ys)
    fbest = np.argmax(s2, axis=1)
    rows = np.arange(ys.shape[0])
    improves = np.isfinite(s2[rows, fbest]) & (s2[rows, fbest] > 0)
    out = np.zeros_like(ys)
    if np.any(improves):
        sel = rows[improves]
        lam_win = np.clip(lam[sel, :, fbest[improves]], 0.0, None)
        gen_win = data["gen"][fbest[improves]].astype(ys.dtype, copy=False)
        out[sel] = np.einsum("nk,nkd->nd", lam_win, gen_win)
    return out


def proj_norm2_rows(cone: ConeExpr, ys: np.ndarray, cfg: ToleranceConfig) -> np.ndarray:
    """||P_K y||^2 per row, without materializing the projections.

    Uses the orthogonality of cone projections (<y - P y, P y> = 0), so
    polar/halfspace norms come from complements of the inner squared norm.
    Falls back to full projections for intersections.
    """
    ys = np.atleast_2d(np.asarray(ys))
    dt = ys.dtype if ys.dtype in (np.float32, np.float64) else np.float64
    ys = ys.astype(dt, copy=False)
    kind = cone.kind
    if kind == "zero":
        return np.zeros(ys.shape[0], dtype=dt)
    if kind == "ray":
        u = cone.direction.astype(dt, copy=False)
        return np.square(np.maximum(ys @ u, 0.0))
    if kind == "subspace":
        if cone.basis.shape[0] == 0:
            return np.zeros(ys.shape[0], dtype=dt)
        basis = cone.basis.astype(dt, copy=False)
        return np.square(ys @ basis.T).sum(axis=1)
    if kind == "soc":
        rot = None if cone.rotation is None else cone.rotation.astype(dt, copy=False)
        c = ys if rot is None else ys @ rot
        z, t = c[:, :-1], c[:, -1]
        nz = np.linalg.norm(z, axis=1)
        ny2 = np.square(c).sum(axis=1)
        s = 0.5 * (nz + t)
        out = np.where(nz <= t, ny2, 2.0 * np.square(np.maximum(s, 0.0)))
        return out.astype(dt, copy=False)
    if kind == "generated":
        if _face_data(cone) is None:
            proj = _project_rows_generated(cone, ys, cfg, "nnls")
            return np.square(proj).sum(axis=1)
        s2, _ = _face_s2(cone, ys)
        return np.maximum(s2.max(axis=1), 0.0)
    if kind == "halfspace":
        gen = getattr(cone, "_polar_generated_batch", None)
        if gen is None:
            gen = Generated(cone.normals)
            cone._polar_generated_batch = gen
        ny2 = np.square(ys).sum(axis=1)
        return np.maximum(ny2 - proj_norm2_rows(gen, ys, cfg), 0.0)
    if kind == "neg":
        return proj_norm2_rows(cone.inner, -ys, cfg)
    if kind == "polar":
        ny2 = np.square(ys).sum(axis=1)
        return np.maximum(ny2 - proj_norm2_rows(cone.inner, ys, cfg), 0.0)
    proj = project_rows(cone, ys, cfg, tol=1e-9)
    return np.square(proj).sum(axis=1)


def project_rows(cone: ConeExpr, ys: np.ndarray, cfg: ToleranceConfig,
                 tol: Optional[float] = None, method: str = "faces") -> np.ndarray:
    """Project each row of ys onto the cone.

    `method` selects the polyhedral backend: "faces" enumerates cone faces
    (default, fully vectorized), "nnls" loops the active-set solver so the
    result follows the exact same code path as the scalar projector.
    float32 input stays float32 through the closed-form paths (the fine
    sphere sweeps run there); iterative paths compute in float64.
    """
    ys = np.atleast_2d(np.asarray(ys))
    if ys.dtype not in (np.float32, np.float64):
        ys = ys.astype(float)
    if ys.shape[1] != cone.dim:
        raise DimensionMismatch("batch rows disagree with cone dim")
    dt = ys.dtype
    kind = cone.kind
    if kind == "zero":
        return np.zeros_like(ys)
    if kind == "ray":
        u = cone.direction.astype(dt, copy=False)
        lam = np.maximum(ys @ u, 0.0)
        return lam[:, None] * u[None, :]
    if kind == "subspace":
        if cone.basis.shape[0] == 0:
            return np.zeros_like(ys)
        basis = cone.basis.astype(dt, copy=False)
        return (ys @ basis.T) @ basis
    if kind == "soc":
        rot = None if cone.rotation is None else cone.rotation.astype(dt, copy=False)
        c = ys if rot is None else ys @ rot
        z, t = c[:, :-1], c[:, -1]
        nz = np.linalg.norm(z, axis=1)
        out = c.copy()
        inside = nz <= t
        flat = nz <= -t
        middle = ~(inside | flat)
        out[flat] = 0.0
        if np.any(middle):
            s = 0.5 * (nz[middle] + t[middle])
            scale = np.divide(s, nz[middle], out=np.zeros_like(s),
                              where=nz[middle] > 0)
            out[np.ix_(middle, np.arange(cone.dim - 1))] = z[middle] * scale[:, None]
            out[middle, -1] = s
        return out if rot is None else out @ rot.T
    if kind == "generated":
        return _project_rows_generated(cone, ys, cfg, method)
    if kind == "halfspace":
        gen = getattr(cone, "_polar_generated_batch", None)
        if gen is None:
            gen = Generated(cone.normals)
            cone._polar_generated_batch = gen
        return ys - project_rows(gen, ys, cfg, tol, method)
    if kind == "neg":
        return -project_rows(cone.inner, -ys, cfg, tol, method)
    if kind == "polar":
        return ys - project_rows(cone.inner, ys, cfg, tol, method)
    if kind == "intersect":
        from .projections import split_single_halfspace

        ys64 = ys.astype(np.float64, copy=False)
        split = split_single_halfspace(cone.parts)
        if split is not None:
            other, normal = split
            out = _project_rows_with_halfspace(other, normal, ys64, cfg, tol, method)
        else:
            out = dykstra_rows(cone.parts, ys64, cfg, tol=tol, method=method)
        return out.astype(dt, copy=False)
    raise TypeError(f"unknown cone kind {kind!r}")


_MU_CAP = 1e6


def _project_rows_with_halfspace(other, normal, ys, cfg, tol, method) -> np.ndarray:
    """Row-batched dual-path projection onto other & {<normal, .> <= 0};
    mirrors the scalar version, including the Richardson-extrapolated
    branch for tangential (multiplier-runaway) rows."""
    inner_tol = None if tol is None else max(tol * 0.02, 1e-14)
    out = project_rows(other, ys, cfg, inner_tol, method)
    scale = 1.0 + np.linalg.norm(ys, axis=1)
    viol = out @ normal > 1e-13 * scale
    if not np.any(viol):
        return out
    sub = ys[viol]
    sub_scale = scale[viol]
    lo = np.zeros(len(sub))
    hi = sub_scale.copy()
    mu_cap = _MU_CAP * sub_scale
    open_rows = np.ones(len(sub), dtype=bool)
    for _ in range(64):
        if not np.any(open_rows & (hi <= mu_cap)):
            break
        trial = np.flatnonzero(open_rows & (hi <= mu_cap))
        p = project_rows(other, sub[trial] - hi[trial, None] * normal,
                         cfg, inner_tol, method)
        ok = p @ normal <= 0.0
        closed = trial[ok]
        open_rows[closed] = False
        grow = trial[~ok]
        lo[grow] = hi[grow]
        hi[grow] *= 2.0
    capped = open_rows  # constraint active only asymptotically
    if np.any(capped):
        rows = np.flatnonzero(capped)
        p1 = project_rows(other, sub[rows] - mu_cap[rows, None] * normal,
                          cfg, inner_tol, method)
        p2 = project_rows(other, sub[rows] - 2.0 * mu_cap[rows, None] * normal,
                          cfg, inner_tol, method)
        res = np.zeros_like(sub)
        res[rows] = 2.0 * p2 - p1
    else:
        res = np.zeros_like(sub)
    finite = np.flatnonzero(~capped)
    if finite.size:
        flo, fhi = lo[finite], hi[finite]
        for _ in range(90):
            mid = 0.5 * (flo + fhi)
            p = project_rows(other, sub[finite] - mid[:, None] * normal,
                             cfg, inner_tol, method)
            gt = p @ normal > 0.0
            flo[gt] = mid[gt]
            fhi[~gt] = mid[~gt]
        res[finite] = project_rows(other, sub[finite] - fhi[:, None] * normal,
                                   cfg, inner_tol, method)
    out[viol] = res
    return out


def dykstra_rows(parts: Sequence[ConeExpr], ys: np.ndarray, cfg: ToleranceConfig,
                 tol: Optional[float] = None, method: str = "faces") -> np.ndarray:
    """Row-batched Dykstra iteration over the part projectors.

    Rows are frozen one by one as their per-cycle displacement meets the
    stopping rule; nested projectors run at a tighter tolerance so the
    outer stopping rule stays resolvable.
    """
    ys = np.atleast_2d(np.asarray(ys, dtype=float))
    if tol is None:
        tol = cfg.tol_iter
    inner_tol = max(tol * 0.02, 1e-14)
    scale = tol * (1.0 + np.linalg.norm(ys, axis=1))
    y = ys.copy()
    corrections = [np.zeros_like(ys) for _ in parts]
    active = np.arange(len(ys))
    for _ in range(cfg.max_iters):
        if active.size == 0:
            return y
        max_step = np.zeros(active.size)
        for i, part in enumerate(parts):
            shifted = y[active] + corrections[i][active]
            y_new = project_rows(part, shifted, cfg, inner_tol, method)
            corrections[i][active] = shifted - y_new
            max_step = np.maximum(max_step, np.linalg.norm(y_new - y[active], axis=1))
            y[active] = y_new
        active = active[max_step > scale[active]]
    raise IterationLimit("batched Dykstra exceeded max_iters")


def member_directions(cone: ConeExpr, grid: np.ndarray, cfg: ToleranceConfig,
                      tol: Optional[float] = None,
                      method: str = "faces") -> np.ndarray:
    """Unit members of the cone obtained by projecting grid directions.

    Projections below norm 0.5 are dropped.  Grid points adjacent to any
    true member direction project with norm close to 1, so nothing is
    lost, while normalizing small projections would amplify the batch
    projector's near-ridge error (~sqrt(eps) of the working precision)
    into junk directions.
    """
    proj = project_rows(cone, grid, cfg, tol=tol, method=method)
    norms = np.linalg.norm(proj, axis=1)
    keep = norms > 0.5
    if not np.any(keep):
        return np.zeros((0, cone.dim))
    return proj[keep] / norms[keep, None]
