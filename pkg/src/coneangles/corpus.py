"""Built-in corpus of worked cone pairs with known closed-form answers.

Each case carries a scene plus expectations (quantity, expected value,
tolerance, and a short justification).  The CLI `corpus` command runs all
of them and fails when any computed value drifts outside tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List

import numpy as np

from .angles import c0, c_angle
from .cones import (
    DEFAULT_CONFIG,
    Generated,
    HalfspaceCone,
    Ray,
    SecondOrder,
    Subspace,
    ToleranceConfig,
    dual,
    member,
    polar,
)
from .scenes import Scene
from .theorems import nonclosedness_probe

HALF_SQRT2 = math.sqrt(2.0) / 2.0


@dataclass
class Expectation:
    label: str
    quantity: str  # "c0" | "c" | "member" | "probe"
    args: dict
    expected: float
    tol: float
    note: str


@dataclass
class CorpusCase:
    id: str
    scene: Scene
    expectations: List[Expectation] = field(default_factory=list)


def _quadrant_vs_halfplane() -> CorpusCase:
    k1 = Generated([[1.0, 0.0], [0.0, 1.0]])
    k2 = HalfspaceCone([[1.0, 1.0]])
    scene = Scene(2, {
        "K1": k1, "K2": k2,
        "K1o": polar(k1), "K2o": polar(k2), "K2plus": dual(k2),
    })
    e = [
        Expectation("c0(K1,K2)", "c0", {"a": "K1", "b": "K2"}, HALF_SQRT2, 1e-6,
                    "widest pair is e2 against (-1,1)/sqrt2: cosine 45 deg"),
        Expectation("c(K1,K2)", "c", {"a": "K1", "b": "K2"}, HALF_SQRT2, 1e-6,
                    "intersection is {0}, so the angle equals the minimal angle"),
        Expectation("c0(K1o,K2plus)", "c0", {"a": "K1o", "b": "K2plus"}, 1.0, 1e-6,
                    "the dual ray (-1,-1)/sqrt2 lies inside the polar quadrant"),
        Expectation("c(K1o,K2plus)", "c", {"a": "K1o", "b": "K2plus"}, 0.0, 1e-6,
                    "after trimming by the polar of the common ray both sections are {0}"),
        Expectation("c0(K1o,K2o)", "c0", {"a": "K1o", "b": "K2o"}, 0.0, 1e-6,
                    "the nonpositive quadrant makes no positive inner product with the (1,1) ray"),
    ]
    return CorpusCase("quadrant_vs_halfplane", scene, e)


def _ice_cream_vs_line() -> CorpusCase:
    k = SecondOrder(3)
    m = Subspace([[1.0, 0.0, -1.0]])
    w = np.array([-1.0, 0.0, -1.0]) / math.sqrt(2.0)
    scene = Scene(3, {
        "K": k, "M": m,
        "Ko": polar(k), "Mperp": polar(m), "Kplus": dual(k),
    }, points={"z": np.array([0.0, 1.0, 0.0])})
    e = [
        Expectation("c0(K,M)", "c0", {"a": "K", "b": "M"}, 1.0, 1e-6,
                    "the line meets the ice-cream cone along the ray through (-1,0,1)"),
        Expectation("c(K,M)", "c", {"a": "K", "b": "M"}, 0.0, 1e-6,
                    "trimmed sections are the orthogonal rays through (1,0,1) and (1,0,-1)"),
        Expectation("c0(Ko,Mperp)", "c0", {"a": "Ko", "b": "Mperp"}, 1.0, 1e-6,
                    "polar cone and orthogonal plane share the ray through (-1,0,-1)"),
        Expectation("c(Ko,Mperp)", "c", {"a": "Ko", "b": "Mperp"}, 0.0, 1e-6,
                    "trimmed sections are orthogonal rays through (1,0,-1) and (1,0,1)"),
        Expectation("member(Ko,w)", "member", {"cone": "Ko", "point": w},
                    1.0, 0.5, "w = (-1,0,-1)/sqrt2 satisfies w3 <= -|(w1,w2)|"),
        Expectation("member(Mperp,w)", "member", {"cone": "Mperp", "point": w},
                    1.0, 0.5, "w has equal first and last coordinates"),
        Expectation("member(Kplus,-w)", "member", {"cone": "Kplus", "point": -w},
                    1.0, 0.5, "-w = (1,0,1)/sqrt2 lies on the cone boundary"),
        Expectation("member(Mperp,-w)", "member", {"cone": "Mperp", "point": -w},
                    1.0, 0.5, "the orthogonal plane is symmetric"),
    ]
    for t in (0.0, 1.0, 10.0, 100.0):
        e.append(Expectation(
            f"probe(t={t:g})", "probe",
            {"cone": "K", "other": "M", "z": np.array([0.0, 1.0, 0.0]),
             "direction": np.array([1.0, 0.0, -1.0]), "t": t},
            (math.sqrt(t * t + 1.0) - t) / math.sqrt(2.0), 1e-4,
            "distance of (-t,1,t) to the ice-cream cone is (sqrt(t^2+1)-t)/sqrt2"))
    return CorpusCase("ice_cream_vs_line_r3", scene, e)


def _wedge_vs_axis() -> CorpusCase:
    k = Generated([[1.0, 0.0], [1.0, 1.0]])
    m = Subspace([[1.0, 0.0]])
    scene = Scene(2, {"K": k, "M": m, "Ko": polar(k), "Mperp": polar(m)})
    e = [
        Expectation("c0(K,M)", "c0", {"a": "K", "b": "M"}, 1.0, 1e-6,
                    "the x-axis ray is shared by wedge and line"),
        Expectation("c(K,M)", "c", {"a": "K", "b": "M"}, 0.0, 1e-6,
                    "trimming by the polar of the shared x-axis ray collapses "
                    "the wedge section to {0}"),
        Expectation("c0(Ko,Mperp)", "c0", {"a": "Ko", "b": "Mperp"}, 1.0, 1e-6,
                    "polar wedge and vertical line share the ray through (0,-1)"),
        Expectation("c(Ko,Mperp)", "c", {"a": "Ko", "b": "Mperp"}, HALF_SQRT2, 1e-6,
                    "trimmed sections are the wedge between (-1,0),(-1,1) and the up ray"),
    ]
    return CorpusCase("wedge_vs_axis_r2", scene, e)


def _opposite_rays() -> CorpusCase:
    scene = Scene(2, {
        "C": Ray([1.0, 0.0]), "D": Ray([-1.0, 0.0]),
        "U": Generated([[1.0, 0.0], [0.0, 1.0]]),
        "V": Generated([[-1.0, 0.0], [0.0, -1.0]]),
    })
    e = [
        Expectation("c0(C,D)", "c0", {"a": "C", "b": "D"}, 0.0, 1e-6,
                    "opposite rays have nonpositive inner products"),
        Expectation("c(C,D)", "c", {"a": "C", "b": "D"}, 0.0, 1e-6,
                    "trivial intersection keeps the angle equal to the minimal angle"),
        Expectation("c0(U,V)", "c0", {"a": "U", "b": "V"}, 0.0, 1e-6,
                    "opposite quadrants have nonpositive inner products"),
        Expectation("c(U,V)", "c", {"a": "U", "b": "V"}, 0.0, 1e-6,
                    "same value after the trivial-intersection reduction"),
    ]
    return CorpusCase("opposite_rays_r2", scene, e)


def _diagonal_rays() -> CorpusCase:
    scene = Scene(2, {"C": Ray([1.0, 0.0]), "D": Ray([1.0, 1.0])})
    e = [
        Expectation("c0(C,D)", "c0", {"a": "C", "b": "D"}, HALF_SQRT2, 1e-6,
                    "unit rays 45 degrees apart"),
        Expectation("c(C,D)", "c", {"a": "C", "b": "D"}, HALF_SQRT2, 1e-6,
                    "trivial intersection, so angle = minimal angle"),
    ]
    return CorpusCase("diagonal_rays_r2", scene, e)


def _rays_vs_wedges() -> CorpusCase:
    scene = Scene(2, {
        "C": Ray([1.0, 0.0]), "D": Ray([-1.0, 0.0]),
        "U": Generated([[1.0, 0.0], [0.0, 1.0]]),
        "V": Generated([[-1.0, 0.0], [-1.0, 1.0]]),
    })
    e = [
        Expectation("c0(C,D)", "c0", {"a": "C", "b": "D"}, 0.0, 1e-6,
                    "opposite rays"),
        Expectation("c(C,D)", "c", {"a": "C", "b": "D"}, 0.0, 1e-6,
                    "angle equals minimal angle for a trivial intersection"),
        Expectation("c0(U,V)", "c0", {"a": "U", "b": "V"}, HALF_SQRT2, 1e-6,
                    "widest pair is e2 against (-1,1)/sqrt2"),
        Expectation("c(U,V)", "c", {"a": "U", "b": "V"}, HALF_SQRT2, 1e-6,
                    "the enlarged pair still meets only at the apex"),
    ]
    return CorpusCase("rays_vs_wedges_r2", scene, e)


def all_cases() -> List[CorpusCase]:
    return [
        _quadrant_vs_halfplane(),
        _ice_cream_vs_line(),
        _wedge_vs_axis(),
        _opposite_rays(),
        _diagonal_rays(),
        _rays_vs_wedges(),
    ]


def evaluate_expectation(case: CorpusCase, exp: Expectation,
                         cfg: ToleranceConfig) -> float:
    scene = case.scene
    if exp.quantity == "c0":
        return c0(scene.cone(exp.args["a"]), scene.cone(exp.args["b"]), cfg).value
    if exp.quantity == "c":
        return c_angle(scene.cone(exp.args["a"]), scene.cone(exp.args["b"]), cfg).value
    if exp.quantity == "member":
        cone = scene.cone(exp.args["cone"])
        if exp.args.get("polar_of"):
            cone = polar(cone)
        return 1.0 if member(cone, exp.args["point"], cfg=cfg) else 0.0
    if exp.quantity == "probe":
        cone = scene.cone(exp.args["cone"])
        other = scene.cone(exp.args["other"])
        rows = nonclosedness_probe(cone, other, exp.args["z"], [exp.args["t"]],
                                   direction=exp.args["direction"], cfg=cfg)
        return rows[0][1]
    raise ValueError(f"unknown corpus quantity {exp.quantity!r}")


def run_corpus(cfg: ToleranceConfig = DEFAULT_CONFIG) -> List[dict]:
    """Evaluate every expectation; returns one result row per expectation."""
    rows = []
    for case in all_cases():
        for exp in case.expectations:
            computed = evaluate_expectation(case, exp, cfg)
            rows.append({
                "case": case.id,
                "label": exp.label,
                "expected": exp.expected,
                "computed": computed,
                "tol": exp.tol,
                "ok": abs(computed - exp.expected) <= exp.tol,
                "note": exp.note,
            })
    return rows
