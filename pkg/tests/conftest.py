"""Shared fixtures: seeded random cone generators for the property suites.

Random finitely generated cones use 2-5 unit generators sampled uniformly
on the sphere and are rejected when the generators positively span the
whole space, which keeps the pointed (interesting) cases dominant.  Pair
generators for the decision suites resample until the instance is clearly
on one side of the decision threshold, so the suites never test inside
the numerical gray band.
"""

import numpy as np
import pytest

from coneangles import (
    Generated,
    HalfspaceCone,
    Ray,
    SecondOrder,
    Subspace,
    ToleranceConfig,
    c0,
    common_direction,
    is_trivial,
    negate,
    polar,
)


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def random_unit(rng, dim):
    return unit(rng.normal(size=dim))


def random_pointed_generated(rng, dim, cfg, max_tries=50):
    for _ in range(max_tries):
        m = int(rng.integers(2, 6))
        cone = Generated([random_unit(rng, dim) for _ in range(m)])
        if dim > 4:
            return cone  # the sampled pointedness probe only covers dim <= 4
        # pointed iff the polar has a nonzero element
        if not is_trivial(polar(cone), cfg):
            return cone
    raise RuntimeError("could not draw a pointed generated cone")


def random_atom(rng, dim, cfg, kinds=("ray", "generated", "halfspace", "subspace", "soc")):
    kind = rng.choice(list(kinds))
    if kind == "ray":
        return Ray(random_unit(rng, dim))
    if kind == "generated":
        return random_pointed_generated(rng, dim, cfg)
    if kind == "halfspace":
        m = int(rng.integers(1, 3))
        return HalfspaceCone([random_unit(rng, dim) for _ in range(m)])
    if kind == "subspace":
        k = int(rng.integers(1, dim))
        return Subspace([random_unit(rng, dim) for _ in range(k)])
    return SecondOrder(dim)


def decided_pair(rng, dim, cfg, kinds=("ray", "generated", "halfspace", "subspace"),
                 max_tries=80):
    """A random pair that is clearly decidable: either c0 is safely below 1
    (margin 0.02) for both the pair and its negated-second version, or the
    relevant intersection carries a validated common direction."""
    for _ in range(max_tries):
        a = random_atom(rng, dim, cfg, kinds)
        b = random_atom(rng, dim, cfg, kinds)
        ok = True
        for second in (b, negate(b)):
            v = c0(a, second, cfg).value
            if v > 0.98 and common_direction(a, second, cfg) is None:
                ok = False
                break
        if ok:
            return a, b
    raise RuntimeError("could not draw a decidable pair")


@pytest.fixture(scope="session")
def cfg():
    return ToleranceConfig(multistarts=16, max_iters=4000, rng_seed=20240801)
