"""Two-set cyclic projections with convergence-rate comparison.

Supports cone pairs and common-anchor translated cone pairs; the
theoretical per-cycle rate bound is the squared cosine of the angle
between the (translated) cones.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Union

import numpy as np

from .angles import c_angle
from .cones import DEFAULT_CONFIG, ConeExpr, ToleranceConfig, as_point
from .errors import DimensionMismatch, InsufficientData
from .projections import project


@dataclass(eq=False)
class TranslatedSet:
    """A translated cone, base + anchor; projection shifts through the anchor."""

    base: ConeExpr
    anchor: np.ndarray

    def __post_init__(self):
        self.anchor = as_point(self.anchor, self.base.dim)

    @property
    def dim(self) -> int:
        return self.base.dim

    def project(self, x, cfg: ToleranceConfig = DEFAULT_CONFIG) -> np.ndarray:
        p = as_point(x, self.dim)
        return self.anchor + project(self.base, p - self.anchor, cfg)


def translated(base: Union[ConeExpr, TranslatedSet], anchor=None) -> TranslatedSet:
    if isinstance(base, TranslatedSet):
        return base
    if anchor is None:
        anchor = np.zeros(base.dim)
    return TranslatedSet(base, anchor)


@dataclass(eq=False)
class Trace:
    """Iterate record of a cyclic-projections run.

    `iterates` starts with x0; `errors[k]` is the distance of the iterate
    after cycle k+1 from the anchor point, so consecutive error ratios are
    per-cycle contraction factors (the first cycle maps the start into the
    second set, after which the squared-cosine bound applies).
    """

    iterates: List[np.ndarray]
    errors: List[float]
    limit_estimate: np.ndarray
    converged: bool


def run_cyclic(C: Union[ConeExpr, TranslatedSet], D: Union[ConeExpr, TranslatedSet],
               x0, cfg: ToleranceConfig = DEFAULT_CONFIG) -> Trace:
    """Iterate x <- P_D(P_C(x)) from x0 and record per-cycle errors.

    Stops when the anchored error falls below tol_iter, when a cycle no
    longer moves the iterate (fixed point reached), or at max_iters (the
    partial trace is then flagged as nonconverged).
    """
    cs = translated(C)
    ds = translated(D)
    if cs.dim != ds.dim:
        raise DimensionMismatch("sets live in different dimensions")
    if np.linalg.norm(cs.anchor - ds.anchor) > cfg.tol_zero * (1 + np.linalg.norm(cs.anchor)):
        raise ValueError("cyclic projections needs a common anchor")
    anchor = cs.anchor
    x = as_point(x0, cs.dim)
    iterates = [x.copy()]
    errors: List[float] = []
    converged = False
    for _ in range(cfg.max_iters):
        x_next = ds.project(cs.project(x, cfg), cfg)
        iterates.append(x_next.copy())
        err = float(np.linalg.norm(x_next - anchor))
        errors.append(err)
        moved = float(np.linalg.norm(x_next - x))
        x = x_next
        if err <= cfg.tol_iter or moved <= cfg.tol_zero * (1.0 + err):
            converged = True
            break
    return Trace(iterates, errors, iterates[-1].copy(), converged)


def theoretical_rate(C: Union[ConeExpr, TranslatedSet],
                     D: Union[ConeExpr, TranslatedSet],
                     cfg: ToleranceConfig = DEFAULT_CONFIG) -> float:
    """Cosine of the angle between the (un-translated) cones; the per-cycle
    error contraction is bounded by its square."""
    cs = translated(C)
    ds = translated(D)
    return c_angle(cs.base, ds.base, cfg).value


def estimate_rate(trace: Trace, cfg: ToleranceConfig = DEFAULT_CONFIG) -> float:
    """Geometric mean of consecutive error ratios over the last half of the
    usable (above-noise) errors; needs at least five of them."""
    errs = [e for e in trace.errors if e > cfg.tol_zero]
    if len(errs) < 5:
        raise InsufficientData("need at least 5 errors above tol_zero")
    tail = errs[len(errs) // 2:]
    if len(tail) < 2:
        tail = errs[-2:]
    ratios = np.array(tail[1:]) / np.array(tail[:-1])
    rate = float(np.exp(np.mean(np.log(ratios))))
    return min(max(rate, 0.0), 1.0)
