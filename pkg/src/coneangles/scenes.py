"""Scene files: named cones and points in one fixed dimension (JSON)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from .cones import (
    ConeExpr,
    Generated,
    HalfspaceCone,
    Ray,
    SecondOrder,
    Subspace,
    Zero,
    as_point,
    dual,
    intersect,
    negate,
    polar,
)
from .errors import ConeGeometryError

SCENE_KINDS = ("ray", "subspace", "generated", "halfspace", "soc", "zero",
               "neg", "polar", "dual", "intersect")


class SceneParseError(ConeGeometryError):
    """The scene document is malformed."""


class NameResolutionError(ConeGeometryError):
    """A referenced cone or point name does not exist."""


@dataclass
class Scene:
    dim: int
    cones: Dict[str, ConeExpr]
    points: Dict[str, np.ndarray] = field(default_factory=dict)

    def cone(self, name: str) -> ConeExpr:
        try:
            return self.cones[name]
        except KeyError:
            raise NameResolutionError(f"unknown cone {name!r}") from None

    def point(self, name: str) -> np.ndarray:
        try:
            return self.points[name]
        except KeyError:
            raise NameResolutionError(f"unknown point {name!r}") from None


def parse_scene(doc: dict) -> Scene:
    """Build a Scene from a decoded JSON document."""
    if not isinstance(doc, dict) or "dim" not in doc or "cones" not in doc:
        raise SceneParseError("scene needs 'dim' and 'cones' entries")
    try:
        dim = int(doc["dim"])
    except (TypeError, ValueError):
        raise SceneParseError("'dim' must be an integer") from None
    if dim < 1:
        raise SceneParseError("'dim' must be positive")
    raw = doc["cones"]
    if not isinstance(raw, dict):
        raise SceneParseError("'cones' must be a name -> entry mapping")
    cones: Dict[str, ConeExpr] = {}
    building: set = set()

    def resolve(ref):
        if isinstance(ref, str):
            if ref in cones:
                return cones[ref]
            if ref in raw:
                return build(ref)
            raise NameResolutionError(f"unknown cone reference {ref!r}")
        if isinstance(ref, dict):
            return from_entry(ref)
        raise SceneParseError("cone references must be names or objects")

    def from_entry(entry: dict) -> ConeExpr:
        kind = entry.get("kind")
        if kind not in SCENE_KINDS:
            raise SceneParseError(f"unknown cone kind {kind!r}")
        try:
            if kind == "zero":
                return Zero(dim)
            if kind == "ray":
                return Ray(as_point(entry["direction"], dim))
            if kind == "subspace":
                basis = entry["basis"]
                return Subspace(basis, dim=dim)
            if kind == "generated":
                return Generated(entry["generators"])
            if kind == "halfspace":
                return HalfspaceCone(entry["normals"])
            if kind == "soc":
                rotation = entry.get("rotation")
                return SecondOrder(dim, rotation=rotation)
            if kind == "neg":
                return negate(resolve(entry["of"]))
            if kind == "polar":
                return polar(resolve(entry["of"]))
            if kind == "dual":
                return dual(resolve(entry["of"]))
            return intersect([resolve(p) for p in entry["parts"]])
        except KeyError as exc:
            raise SceneParseError(f"cone kind {kind!r} is missing field {exc}") from None
        except (ValueError, ConeGeometryError) as exc:
            if isinstance(exc, (SceneParseError, NameResolutionError)):
                raise
            raise SceneParseError(str(exc)) from None

    def build(name: str) -> ConeExpr:
        if name in building:
            raise SceneParseError(f"cyclic cone reference through {name!r}")
        building.add(name)
        expr = from_entry(raw[name])
        building.discard(name)
        if expr.dim != dim:
            raise SceneParseError(f"cone {name!r} has dim {expr.dim}, scene is {dim}")
        cones[name] = expr
        return expr

    for name in raw:
        if name not in cones:
            build(name)
    points: Dict[str, np.ndarray] = {}
    for name, coords in (doc.get("points") or {}).items():
        try:
            points[name] = as_point(coords, dim)
        except (ValueError, ConeGeometryError) as exc:
            raise SceneParseError(f"bad point {name!r}: {exc}") from None
    return Scene(dim, cones, points)


def load_scene(path: str) -> Scene:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SceneParseError(f"cannot read scene: {exc}") from None
    return parse_scene(doc)


def cone_to_entry(expr: ConeExpr) -> dict:
    """Inverse of the parser (composites are inlined, names are not kept)."""
    kind = expr.kind
    if kind == "zero":
        return {"kind": "zero"}
    if kind == "ray":
        return {"kind": "ray", "direction": expr.direction.tolist()}
    if kind == "subspace":
        return {"kind": "subspace", "basis": expr.basis.tolist()}
    if kind == "generated":
        return {"kind": "generated", "generators": expr.generators.tolist()}
    if kind == "halfspace":
        return {"kind": "halfspace", "normals": expr.normals.tolist()}
    if kind == "soc":
        out = {"kind": "soc"}
        if expr.rotation is not None:
            out["rotation"] = expr.rotation.tolist()
        return out
    if kind == "neg":
        return {"kind": "neg", "of": cone_to_entry(expr.inner)}
    if kind == "polar":
        return {"kind": "polar", "of": cone_to_entry(expr.inner)}
    if kind == "intersect":
        return {"kind": "intersect", "parts": [cone_to_entry(p) for p in expr.parts]}
    raise TypeError(f"cannot serialize cone kind {kind!r}")


def scene_to_doc(scene: Scene) -> dict:
    doc = {"dim": scene.dim,
           "cones": {name: cone_to_entry(c) for name, c in scene.cones.items()}}
    if scene.points:
        doc["points"] = {name: p.tolist() for name, p in scene.points.items()}
    return doc


def expr_equal(a: ConeExpr, b: ConeExpr, tol: float = 1e-12) -> bool:
    """Structural equality of two cone expressions (field by field)."""
    if a.kind != b.kind or a.dim != b.dim:
        return False
    if a.kind == "zero":
        return True
    if a.kind == "ray":
        return bool(np.allclose(a.direction, b.direction, atol=tol))
    if a.kind == "subspace":
        return a.basis.shape == b.basis.shape and bool(
            np.allclose(a.basis, b.basis, atol=tol))
    if a.kind == "generated":
        return a.generators.shape == b.generators.shape and bool(
            np.allclose(a.generators, b.generators, atol=tol))
    if a.kind == "halfspace":
        return a.normals.shape == b.normals.shape and bool(
            np.allclose(a.normals, b.normals, atol=tol))
    if a.kind == "soc":
        if (a.rotation is None) != (b.rotation is None):
            return False
        return a.rotation is None or bool(np.allclose(a.rotation, b.rotation, atol=tol))
    if a.kind in ("neg", "polar"):
        return expr_equal(a.inner, b.inner, tol)
    if a.kind == "intersect":
        return len(a.parts) == len(b.parts) and all(
            expr_equal(p, q, tol) for p, q in zip(a.parts, b.parts))
    return False


def scene_equal(a: Scene, b: Scene) -> bool:
    if a.dim != b.dim or set(a.cones) != set(b.cones) or set(a.points) != set(b.points):
        return False
    for name in a.cones:
        if not expr_equal(a.cones[name], b.cones[name]):
            return False
    for name in a.points:
        if not np.allclose(a.points[name], b.points[name], atol=1e-12):
            return False
    return True
