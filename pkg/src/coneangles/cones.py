"""Closed convex cones as a small expression language.

Atoms (zero cone, ray, subspace, finitely generated cone, halfspace cone,
second-order cone) combine through negation, polarity and intersection.
Every expression denotes a nonempty closed convex cone in R^dim, and all
values are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionMismatch, UnsupportedDimension, ZeroDirection


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical knobs shared by projectors, solvers and checkers.

    tol_zero is the treat-as-zero threshold, tol_feas the membership and
    certificate slack, tol_iter the iterative stopping tolerance.
    """

    tol_zero: float = 1e-12
    tol_feas: float = 1e-9
    tol_iter: float = 1e-10
    max_iters: int = 20000
    multistarts: int = 64
    rng_seed: int = 0

    def __post_init__(self):
        lo = min(self.tol_feas, self.tol_iter)
        hi = max(self.tol_feas, self.tol_iter)
        if not (0.0 < self.tol_zero <= lo and hi < 1.0):
            raise ValueError("tolerances must satisfy 0 < tol_zero <= tol_feas, tol_iter < 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")
        if self.multistarts < 1:
            raise ValueError("multistarts must be positive")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.rng_seed)


DEFAULT_CONFIG = ToleranceConfig()


def as_point(x, dim: Optional[int] = None) -> np.ndarray:
    """Validate and convert a coordinate sequence into a float vector."""
    p = np.asarray(x, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("a point must be a nonempty 1-d coordinate sequence")
    if not np.all(np.isfinite(p)):
        raise ValueError("point coordinates must be finite")
    if dim is not None and p.shape[0] != dim:
        raise DimensionMismatch(f"point has dim {p.shape[0]}, expected {dim}")
    return p


def _unit(v: np.ndarray, tol: float) -> np.ndarray:
    n = float(np.linalg.norm(v))
    if n <= tol:
        raise ZeroDirection("direction has norm below tol_zero")
    return v / n


def _unit_rows(rows, dim_hint=None, tol=1e-12) -> np.ndarray:
    mat = np.atleast_2d(np.asarray(rows, dtype=float))
    if mat.size == 0:
        raise ZeroDirection("expected at least one vector")
    if not np.all(np.isfinite(mat)):
        raise ValueError("vectors must be finite")
    if dim_hint is not None and mat.shape[1] != dim_hint:
        raise DimensionMismatch("vector dimensions disagree")
    return np.array([_unit(row, tol) for row in mat])


class ConeExpr:
    """Base class; every instance denotes a closed convex cone in R^dim."""

    kind = "abstract"

    def __init__(self, dim: int):
        if int(dim) < 1:
            raise ValueError("dim must be a positive integer")
        self.dim = int(dim)

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim})"


class Zero(ConeExpr):
    """The cone {0}."""

    kind = "zero"


class Ray(ConeExpr):
    """Nonnegative multiples of a single direction, stored unit length."""

    kind = "ray"

    def __init__(self, direction, tol: float = 1e-12):
        d = as_point(direction)
        super().__init__(d.shape[0])
        self.direction = _unit(d, tol)
        self.direction.setflags(write=False)

    def __repr__(self):
        return f"Ray({np.array2string(self.direction, precision=6)})"


class Subspace(ConeExpr):
    """Linear span of the given vectors; basis stored orthonormal.

    An empty basis is allowed and denotes {0}; dim must then be passed
    explicitly.
    """

    kind = "subspace"

    def __init__(self, basis, dim: Optional[int] = None, tol: float = 1e-12):
        mat = np.atleast_2d(np.asarray(basis, dtype=float))
        if mat.size == 0:
            if dim is None:
                raise ValueError("empty basis needs an explicit dim")
            super().__init__(dim)
            self.basis = np.zeros((0, self.dim))
        else:
            if not np.all(np.isfinite(mat)):
                raise ValueError("basis vectors must be finite")
            super().__init__(mat.shape[1])
            # SVD orthonormalization also drops linearly dependent vectors.
            u, s, vh = np.linalg.svd(mat, full_matrices=False)
            rank = int(np.sum(s > max(tol, s[0] * 1e-12))) if s.size else 0
            if rank == 0:
                raise ZeroDirection("basis vectors are numerically zero")
            self.basis = vh[:rank]
        self.basis.setflags(write=False)
        if dim is not None and self.dim != int(dim):
            raise DimensionMismatch("basis dimension disagrees with dim")

    def __repr__(self):
        return f"Subspace(rank={self.basis.shape[0]}, dim={self.dim})"


class Generated(ConeExpr):
    """Closed conical hull of finitely many nonzero generators (unit rows)."""

    kind = "generated"

    def __init__(self, generators, tol: float = 1e-12):
        self.generators = _unit_rows(generators, tol=tol)
        super().__init__(self.generators.shape[1])
        self.generators.setflags(write=False)

    def __repr__(self):
        return f"Generated(m={self.generators.shape[0]}, dim={self.dim})"


class HalfspaceCone(ConeExpr):
    """{x : <a_i, x> <= 0 for every stored normal a_i} (unit rows)."""

    kind = "halfspace"

    def __init__(self, normals, tol: float = 1e-12):
        self.normals = _unit_rows(normals, tol=tol)
        super().__init__(self.normals.shape[1])
        self.normals.setflags(write=False)

    def __repr__(self):
        return f"HalfspaceCone(m={self.normals.shape[0]}, dim={self.dim})"


class SecondOrder(ConeExpr):
    """Ice-cream cone {(z, t) : ||z|| <= t}, optionally rotated.

    The canonical axis is the last coordinate.  With a rotation Q the cone
    is Q @ K_canonical, i.e. x is a member iff Q.T @ x is canonical-member.
    """

    kind = "soc"

    def __init__(self, dim: int, rotation=None, tol: float = 1e-9):
        super().__init__(dim)
        if self.dim < 2:
            raise ValueError("second-order cone needs dim >= 2")
        if rotation is None:
            self.rotation = None
        else:
            q = np.asarray(rotation, dtype=float)
            if q.shape != (self.dim, self.dim):
                raise DimensionMismatch("rotation must be dim x dim")
            if np.max(np.abs(q.T @ q - np.eye(self.dim))) > tol:
                raise ValueError("rotation must be orthogonal")
            self.rotation = q
            self.rotation.setflags(write=False)

    def axis(self) -> np.ndarray:
        e = np.zeros(self.dim)
        e[-1] = 1.0
        return e if self.rotation is None else self.rotation @ e

    def to_canonical(self, x: np.ndarray) -> np.ndarray:
        return x if self.rotation is None else self.rotation.T @ x

    def from_canonical(self, x: np.ndarray) -> np.ndarray:
        return x if self.rotation is None else self.rotation @ x


class Neg(ConeExpr):
    """-K for an inner cone K."""

    kind = "neg"

    def __init__(self, inner: ConeExpr):
        super().__init__(inner.dim)
        self.inner = inner


class Polar(ConeExpr):
    """K^polar = {u : <x, u> <= 0 for all x in K}."""

    kind = "polar"

    def __init__(self, inner: ConeExpr):
        super().__init__(inner.dim)
        self.inner = inner


class Intersect(ConeExpr):
    """Intersection of finitely many cones of one dimension."""

    kind = "intersect"

    def __init__(self, parts: Sequence[ConeExpr]):
        parts = list(parts)
        if not parts:
            raise ValueError("intersection needs at least one part")
        dim = parts[0].dim
        for p in parts:
            if p.dim != dim:
                raise DimensionMismatch("intersection parts have mixed dims")
        super().__init__(dim)
        self.parts = tuple(parts)


ATOM_KINDS = ("zero", "ray", "subspace", "generated", "halfspace", "soc")


def make_ray(direction, cfg: ToleranceConfig = DEFAULT_CONFIG) -> Ray:
    """Ray along `direction`, normalized to unit length."""
    return Ray(direction, tol=cfg.tol_zero)


def negate(cone: ConeExpr) -> ConeExpr:
    """-K, rewritten structurally where the atom allows it."""
    if cone.kind == "zero":
        return cone
    if cone.kind == "ray":
        return Ray(-cone.direction)
    if cone.kind == "subspace":
        return cone
    if cone.kind == "generated":
        return Generated(-cone.generators)
    if cone.kind == "halfspace":
        return HalfspaceCone(-cone.normals)
    if cone.kind == "neg":
        return cone.inner
    if cone.kind == "polar":
        # -(K^polar) = (-K)^polar
        return polar(negate(cone.inner))
    if cone.kind == "intersect":
        return Intersect([negate(p) for p in cone.parts])
    return Neg(cone)


def polar(cone: ConeExpr) -> ConeExpr:
    """The polar cone, rewritten in closed form whenever the kind allows.

    Intersections have no structural rewrite; they are wrapped in a Polar
    node whose projector goes through the Moreau decomposition.
    """
    if cone.kind == "zero":
        return Subspace(np.eye(cone.dim))
    if cone.kind == "ray":
        return HalfspaceCone([cone.direction])
    if cone.kind == "generated":
        return HalfspaceCone(cone.generators)
    if cone.kind == "halfspace":
        if cone.normals.shape[0] == 1:
            return Ray(cone.normals[0])
        return Generated(cone.normals)
    if cone.kind == "subspace":
        return _orthocomplement(cone)
    if cone.kind == "soc":
        return Neg(cone)
    if cone.kind == "neg":
        return negate(polar(cone.inner))
    if cone.kind == "polar":
        return cone.inner
    return Polar(cone)


def dual(cone: ConeExpr) -> ConeExpr:
    """Positive dual cone, -(K^polar)."""
    return negate(polar(cone))


def intersect(parts: Sequence[ConeExpr]) -> ConeExpr:
    """Intersection, flattening nested intersections and dropping full spaces."""
    flat = []
    for p in parts:
        if p.kind == "intersect":
            flat.extend(p.parts)
        else:
            flat.append(p)
    kept = [p for p in flat if not _is_full_space(p)]
    if not kept:
        kept = flat[:1]
    if len(kept) == 1:
        return kept[0]
    return Intersect(kept)


def _is_full_space(cone: ConeExpr) -> bool:
    return cone.kind == "subspace" and cone.basis.shape[0] == cone.dim


def _orthocomplement(sub: Subspace) -> Subspace:
    b = sub.basis
    if b.shape[0] == 0:
        return Subspace(np.eye(sub.dim))
    if b.shape[0] == sub.dim:
        return Subspace([], dim=sub.dim)
    # rows of vh beyond the rank span the orthogonal complement
    _, _, vh = np.linalg.svd(b, full_matrices=True)
    return Subspace(vh[b.shape[0]:])


def member(cone: ConeExpr, x, tol: Optional[float] = None,
           cfg: ToleranceConfig = DEFAULT_CONFIG) -> bool:
    """Membership test; closed form for atoms, projection distance otherwise."""
    if tol is None:
        tol = cfg.tol_feas
    p = as_point(x, cone.dim)
    nx = float(np.linalg.norm(p))
    slack = tol * (1.0 + nx)
    if cone.kind == "zero":
        return nx <= slack
    if cone.kind == "ray":
        lam = float(p @ cone.direction)
        return lam >= -slack and np.linalg.norm(p - lam * cone.direction) <= slack
    if cone.kind == "subspace":
        resid = p - cone.basis.T @ (cone.basis @ p)
        return float(np.linalg.norm(resid)) <= slack
    if cone.kind == "halfspace":
        return float(np.max(cone.normals @ p)) <= tol * max(1.0, nx)
    if cone.kind == "soc":
        c = cone.to_canonical(p)
        return float(np.linalg.norm(c[:-1])) <= float(c[-1]) + slack
    if cone.kind == "neg":
        return member(cone.inner, -p, tol, cfg)
    # generated cones and composites: metric projection distance
    from .projections import distance

    return distance(cone, p, cfg) <= slack


def seed_directions(cone: ConeExpr) -> np.ndarray:
    """Deterministic unit directions worth probing for a cone (not
    necessarily members; callers project them first)."""
    rows = []
    if cone.kind == "ray":
        rows.append(cone.direction)
    elif cone.kind == "subspace":
        rows.extend(cone.basis)
        rows.extend(-cone.basis)
    elif cone.kind == "generated":
        rows.extend(cone.generators)
    elif cone.kind == "halfspace":
        rows.extend(-cone.normals)
    elif cone.kind == "soc":
        ax = cone.axis()
        rows.append(ax)
        for i in range(cone.dim - 1):
            e = np.zeros(cone.dim)
            e[i] = 1.0
            b = cone.from_canonical(e)
            rows.append((b + ax) / np.sqrt(2.0))
            rows.append((-b + ax) / np.sqrt(2.0))
    elif cone.kind == "neg":
        rows.extend(-seed_directions(cone.inner))
    elif cone.kind == "polar":
        rows.extend(-seed_directions(cone.inner))
    elif cone.kind == "intersect":
        for part in cone.parts:
            rows.extend(seed_directions(part))
    if not rows:
        return np.zeros((0, cone.dim))
    return np.array(rows)


_SAMPLING_DIM_LIMIT = 4
# Decision margin for sampled triviality/linearity probes: a nontrivial cone
# always yields a projected sphere direction of norm close to 1 at the grid
# resolutions used here, so the gap to this threshold is large.
_DECISION_NORM = 1e-3


def _sampling_grid(dim: int) -> np.ndarray:
    from ._batch import sphere_grid

    resolution = {1: 2, 2: 64, 3: 32, 4: 12}[dim]
    return sphere_grid(dim, resolution)


def _alternating_members(parts, dim: int, cfg: ToleranceConfig,
                         cycles: int = 400):
    """Best surviving direction of unnormalized alternating projections
    through the parts, started from a sphere grid: (norms, rows).

    Iterates are Fejer monotone with respect to every common point, so a
    start aligned with a common direction keeps norm close to 1, while a
    trivial intersection drives every start to 0 geometrically; nothing
    ever projects onto the intersection itself, so tangential contact
    cannot stall the sweep.
    """
    from ._batch import project_rows

    z = _sampling_grid(dim)
    alive = np.arange(len(z))
    out = np.zeros_like(z)
    for _ in range(cycles):
        if alive.size == 0:
            break
        prev = z[alive].copy()
        cur = prev
        for part in parts:
            cur = project_rows(part, cur, cfg, tol=1e-9)
        z[alive] = cur
        norms = np.linalg.norm(cur, axis=1)
        dead = norms < 1e-6
        settled = np.linalg.norm(cur - prev, axis=1) <= 1e-10
        out[alive] = cur
        alive = alive[~(dead | settled)]
    norms = np.linalg.norm(out, axis=1)
    return norms, out


def is_trivial(cone: ConeExpr, cfg: ToleranceConfig = DEFAULT_CONFIG) -> bool:
    """True iff the cone is {0}.

    Atoms are decided in closed form; halfspace cones and polar nodes
    project a deterministic sphere grid, and intersections run the
    stall-free alternating-projections sweep (dim <= 4).
    """
    if cone.kind == "zero":
        return True
    if cone.kind in ("ray", "generated", "soc"):
        return False
    if cone.kind == "subspace":
        return cone.basis.shape[0] == 0
    if cone.kind == "neg":
        return is_trivial(cone.inner, cfg)
    if cone.dim > _SAMPLING_DIM_LIMIT:
        raise UnsupportedDimension(
            f"sampled triviality check supports dim <= {_SAMPLING_DIM_LIMIT}")
    from ._batch import project_rows

    if cone.kind == "intersect":
        norms, rows = _alternating_members(cone.parts, cone.dim, cfg, cycles=2000)
        best = int(np.argmax(norms))
        # Fejer floor: a unit common direction keeps its best-aligned grid
        # start above ~0.78 in norm forever, so a small maximum is proof of
        # triviality regardless of convergence speed
        if norms[best] < 0.5:
            return True
        candidate = rows[best] / norms[best]
        if all(member(part, candidate, tol=1e-6, cfg=cfg) for part in cone.parts):
            return False
        from .errors import IterationLimit

        raise IterationLimit("triviality sweep undecided within its budget")
    grid = _sampling_grid(cone.dim)
    proj = project_rows(cone, grid, cfg, tol=1e-8)
    return float(np.max(np.linalg.norm(proj, axis=1))) < _DECISION_NORM


def is_linear_subspace(cone: ConeExpr, cfg: ToleranceConfig = DEFAULT_CONFIG) -> bool:
    """True iff the cone denotes a linear subspace (possibly {0}).

    Closed form for atoms; composites probe projections of +-basis
    directions and require each found member's negation to be a member
    (dim <= 4).
    """
    if cone.kind in ("zero", "subspace"):
        return True
    if cone.kind == "ray":
        return False
    if cone.kind == "soc":
        return False
    if cone.kind == "generated":
        return all(member(cone, -g, cfg=cfg) for g in cone.generators)
    if cone.kind == "neg":
        return is_linear_subspace(cone.inner, cfg)
    if cone.dim > _SAMPLING_DIM_LIMIT:
        raise UnsupportedDimension(
            f"sampled linearity check supports dim <= {_SAMPLING_DIM_LIMIT}")
    from ._batch import project_rows

    probes = np.vstack([np.eye(cone.dim), -np.eye(cone.dim), _sampling_grid(cone.dim)])
    proj = project_rows(cone, probes, cfg, tol=1e-8)
    norms = np.linalg.norm(proj, axis=1)
    members = proj[norms > _DECISION_NORM]
    if members.size == 0:
        return True  # only {0} was found, and {0} is a subspace
    return all(member(cone, -m, tol=1e-6, cfg=cfg) for m in members)
