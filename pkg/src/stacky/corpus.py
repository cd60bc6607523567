"""Named stacky polytopes used by the test suite and the ``random-polygon`` command."""

from __future__ import annotations

import math
import os
import random
from fractions import Fraction
from math import gcd

from .abgroup import FGAbelianGroup
from .intlinalg import Matrix
from .polytope import HPolytope
from .quotient import StackyPolytope, wps


def _free(normals, offsets):
    r = len(normals[0])
    beta = Matrix.from_columns(normals, r)
    return StackyPolytope.from_matrix(FGAbelianGroup.free(r), beta, offsets)


def interval():
    return _free([(1,), (-1,)], [0, 1])


def simplex():
    return _free([(1, 0), (0, 1), (-1, -1)], [0, 0, 1])


def square():
    return _free([(1, 0), (0, 1), (-1, 0), (0, -1)], [0, 0, 1, 1])


def truncated_simplex():
    return _free([(1, 0), (0, 1), (-1, -1), (-1, 0), (0, -1)], [0, 0, 3, 2, 2])


def cube():
    e = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    return _free(e + [tuple(-x for x in v) for v in e], [0, 0, 0, 1, 1, 1])


def simplex_times_interval():
    return _free([(1, 0, 0), (0, 1, 0), (-1, -1, 0), (0, 0, 1), (0, 0, -1)], [0, 0, 1, 0, 1])


def cube_with_duplicate():
    sp = cube()
    normals = list(sp.normals) + [sp.normals[0]]
    return _free(normals, list(sp.offsets) + [sp.offsets[0]])


def labelled_simplex():
    """The 2-simplex with ``beta(e_3) = (-2, -2)``: label 2 on the long facet."""
    return _free([(1, 0), (0, 1), (-2, -2)], [0, 0, 2])


def square_with_label():
    return _free([(3, 0), (0, 1), (-1, 0), (0, -1)], [0, 0, 1, 1])


def gerby_simplex():
    """P^2 with an extra ``Z/2`` factor in ``N`` hit by the third generator."""
    N = FGAbelianGroup.from_invariants(2, [2])
    beta = Matrix([[0, 0, 1], [1, 0, -1], [0, 1, -1]])
    return StackyPolytope.from_matrix(N, beta, [0, 0, 1])


def random_polygon(rng: random.Random, max_facets: int = 8) -> StackyPolytope:
    """A random simple lattice polygon with primitive normals and at most ``max_facets`` facets."""
    dirs = sorted({(a, b) for a in range(-3, 4) for b in range(-3, 4)
                   if (a, b) != (0, 0) and gcd(a, b) == 1})
    while True:
        m = rng.randint(3, max_facets)
        chosen = sorted(rng.sample(dirs, m), key=lambda v: math.atan2(v[1], v[0]))
        offsets = [Fraction(rng.randint(1, 6)) for _ in chosen]
        P = HPolytope(chosen, offsets, 2)
        cert = P.lp("bounded")
        if not (cert.feasible and cert.bounded):
            continue
        Q, _ = P.irredundant()
        if Q.nfacets < 3:
            continue
        normals = [tuple(int(x) for x in n) for n in Q.normals]
        return _free(normals, list(Q.offsets))


def seed_from_env(default: int = 0) -> int:
    value = os.environ.get("STACKY_SEED")
    return int(value) if value not in (None, "") else default


def random_polygons(count: int = 10, seed: int = 20240607, max_facets: int = 8) -> list:
    rng = random.Random(seed)
    return [random_polygon(rng, max_facets) for _ in range(count)]


NAMED = {
    "interval": interval,
    "simplex": simplex,
    "square": square,
    "truncated_simplex": truncated_simplex,
    "cube": cube,
    "simplex_times_interval": simplex_times_interval,
    "P(1,2,3)": lambda: wps([1, 2, 3]),
    "P(1,1,2)": lambda: wps([1, 1, 2]),
}


def standard_corpus(seed: int = 20240607) -> dict:
    """The fixed corpus plus ten seeded random polygons."""
    out = {name: build() for name, build in NAMED.items()}
    for i, sp in enumerate(random_polygons(10, seed)):
        out[f"polygon_{i}"] = sp
    return out
