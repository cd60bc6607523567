"""
Rational polyhedra in H-representation.

An :class:`HPolytope` is ``{x : <x, n_a> >= -c_a for all a}``.  The
V-representation (vertices, recession rays, lineality) is always derived,
never input; it is computed by the double description method on the
homogenized cone ``{(x, t) : <x, n_a> + c_a t >= 0, t >= 0}``.

Facet indices are 0-based here.  A :class:`StrataFamily` is a family of
index sets used for face families of polytopes and cone families of fans.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from itertools import combinations
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

from .errors import DimensionMismatch, EmptyPolytope, UnboundedPolytope
from .intlinalg import LPCertificate, Matrix, lp_check, vectors_rank


def _frac_vec(v):
    return tuple(Fraction(x) for x in v)


class StrataFamily:
    """An immutable family of subsets of ``{0, ..., d-1}``."""

    __slots__ = ("sets", "d")

    def __init__(self, sets: Iterable[Iterable[int]], d: int):
        object.__setattr__(self, "sets", frozenset(frozenset(s) for s in sets))
        object.__setattr__(self, "d", d)
        for s in self.sets:
            if any(not 0 <= a < d for a in s):
                raise ValueError(f"index set {sorted(s)} out of range for d={d}")

    def __setattr__(self, name, value):
        raise AttributeError("StrataFamily is immutable")

    @classmethod
    def downward_closure(cls, sets: Iterable[Iterable[int]], d: int) -> "StrataFamily":
        out = set()
        for s in sets:
            s = tuple(sorted(s))
            for k in range(len(s) + 1):
                out.update(frozenset(c) for c in combinations(s, k))
        return cls(out, d)

    def __contains__(self, item):
        return frozenset(item) in self.sets

    def __iter__(self):
        return iter(self.sorted())

    def __len__(self):
        return len(self.sets)

    def __eq__(self, other):
        if not isinstance(other, StrataFamily):
            return NotImplemented
        return self.d == other.d and self.sets == other.sets

    def __hash__(self):
        return hash((self.d, self.sets))

    def __repr__(self):
        return f"StrataFamily({[list(s) for s in self.sorted()]}, d={self.d})"

    def sorted(self) -> list:
        """Sets as sorted tuples, ordered by size then lexicographically."""
        return sorted((tuple(sorted(s)) for s in self.sets), key=lambda s: (len(s), s))

    def is_subset_closed(self) -> bool:
        return all(s - {a} in self.sets for s in self.sets for a in s)

    def maximal(self) -> list:
        return [s for s in self.sorted()
                if not any(set(s) < other for other in self.sets)]

    def difference(self, other: "StrataFamily") -> list:
        return sorted((tuple(sorted(s)) for s in self.sets - other.sets), key=lambda s: (len(s), s))


@dataclass(frozen=True)
class VRepresentation:
    points: tuple
    rays: tuple
    lineality: tuple

    @property
    def is_empty(self) -> bool:
        return not self.points

    @property
    def is_bounded(self) -> bool:
        return not self.rays and not self.lineality


def _int_row(v):
    den = reduce(lcm, (Fraction(x).denominator for x in v), 1)
    return tuple(int(Fraction(x) * den) for x in v)


def _prim(v):
    g = reduce(gcd, v, 0)
    return tuple(x // g for x in v) if g > 1 else tuple(v)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def double_description(A: Matrix, b: Sequence) -> VRepresentation:
    """V-representation of ``{x : A x >= b}``."""
    n = A.ncols
    # homogenized constraints on (x, t); t >= 0 goes first
    cons = [tuple([0] * n + [1])]
    cons += [_int_row(tuple(A.row(i)) + (-Fraction(b[i]),)) for i in range(A.nrows)]
    dim = n + 1
    lineality = [tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)]
    rays = []  # (vector, zero-set bitmask)
    for k, a in enumerate(cons):
        bit = 1 << k
        lin_idx = next((i for i, l in enumerate(lineality) if _dot(a, l)), None)
        if lin_idx is not None:
            l = lineality.pop(lin_idx)
            al = _dot(a, l)
            if al < 0:
                l, al = tuple(-x for x in l), -al
            lineality = [_prim(tuple(al * x - _dot(a, lp) * y for x, y in zip(lp, l)))
                         for lp in lineality]
            new_rays = []
            for r, z in rays:
                ar = _dot(a, r)
                r2 = _prim(tuple(al * x - ar * y for x, y in zip(r, l)))
                new_rays.append((r2, z | bit))
            # l is zero on every earlier constraint
            new_rays.append((l, (bit - 1)))
            rays = new_rays
            continue
        pos, neg, zero = [], [], []
        for i, (r, z) in enumerate(rays):
            ar = _dot(a, r)
            if ar > 0:
                pos.append((i, r, z, ar))
            elif ar < 0:
                neg.append((i, r, z, ar))
            else:
                zero.append((r, z | bit))
        if not neg:
            rays = [(r, z) for _, r, z, _ in pos] + zero
            continue
        combined = []
        for ip, rp, zp, ap in pos:
            for in_, rn, zn, an in neg:
                common = zp & zn
                # combinatorial adjacency test
                if any((zo & common) == common for io, (_, zo) in enumerate(rays)
                       if io != ip and io != in_):
                    continue
                new = _prim(tuple(ap * x - an * y for x, y in zip(rn, rp)))
                combined.append((new, common | bit))
        rays = [(r, z) for _, r, z, _ in pos] + zero + combined
    points, rec = [], []
    for r, _ in rays:
        if r[-1] > 0:
            points.append(tuple(Fraction(x, r[-1]) for x in r[:-1]))
        else:
            rec.append(r[:-1])
    return VRepresentation(tuple(sorted(set(points))), tuple(sorted(set(rec))),
                           tuple(l[:-1] for l in lineality))


@dataclass(frozen=True)
class Face:
    """Data for ``P_I = {x in P : <x, n_a> = -c_a for a in I}``."""

    indices: tuple
    empty: bool
    dim: Optional[int]
    point: Optional[tuple]
    directions: tuple
    certificate: LPCertificate


@dataclass(frozen=True)
class SimplicityResult:
    simple: bool
    offending_vertex: Optional[tuple] = None
    facets_at_vertex: tuple = ()

    def __bool__(self):
        return self.simple


class HPolytope:
    """``{x in Q^dim : <x, normals[a]> >= -offsets[a]}``."""

    def __init__(self, normals: Sequence[Sequence], offsets: Sequence, dim: Optional[int] = None):
        normals = tuple(_frac_vec(n) for n in normals)
        offsets = _frac_vec(offsets)
        if dim is None:
            if not normals:
                raise ValueError("dim is required for a polytope without facets")
            dim = len(normals[0])
        if len(normals) != len(offsets):
            raise DimensionMismatch(f"{len(normals)} normals but {len(offsets)} offsets")
        for n in normals:
            if len(n) != dim:
                raise DimensionMismatch(f"normal {n} does not live in dimension {dim}")
            if not any(n):
                raise ValueError("facet normals must be nonzero")
        self.normals = normals
        self.offsets = offsets
        self.dim = dim

    @classmethod
    def from_inequalities(cls, A, b, dim=None) -> "HPolytope":
        """Build from ``A x >= b``."""
        if isinstance(A, Matrix):
            dim, A = A.ncols, A.rows
        return cls(A, [-Fraction(x) for x in b], dim)

    def __repr__(self):
        return f"HPolytope(d={len(self.normals)}, dim={self.dim})"

    @property
    def nfacets(self) -> int:
        return len(self.normals)

    @property
    def A(self) -> Matrix:
        return Matrix(self.normals, self.dim)

    @property
    def b(self) -> tuple:
        return tuple(-c for c in self.offsets)

    def slack(self, x) -> tuple:
        return tuple(_dot(n, x) + c for n, c in zip(self.normals, self.offsets))

    def contains(self, x) -> bool:
        return all(s >= 0 for s in self.slack(x))

    def tight(self, x) -> frozenset:
        return frozenset(a for a, s in enumerate(self.slack(x)) if s == 0)

    @cached_property
    def vrep(self) -> VRepresentation:
        return double_description(self.A, self.b)

    def lp(self, mode="feasible") -> LPCertificate:
        return lp_check(self.A, self.b, mode)

    def vertices(self) -> list:
        """Sorted exact vertex list.  Raises on empty or unbounded input."""
        cert = self.lp("bounded")
        if not cert.feasible:
            raise EmptyPolytope("polytope is empty")
        if not cert.bounded:
            raise UnboundedPolytope(f"polytope is unbounded along {cert.direction}")
        return list(self.vrep.points)

    def vertex_facets(self) -> dict:
        return {v: self.tight(v) for v in self.vertices()}

    def face(self, I: Iterable[int]) -> Face:
        I = tuple(sorted(set(I)))
        if any(not 0 <= a < self.nfacets for a in I):
            raise IndexError(f"face index set {I} out of range")
        A, b = self.A, list(self.b)
        rows = list(A.rows)
        for a in I:
            rows.append(tuple(-x for x in self.normals[a]))
            b.append(self.offsets[a])
        cert = lp_check(Matrix(rows, self.dim), b)
        if not cert.feasible:
            return Face(I, True, None, None, (), cert)
        on = [v for v in self.vrep.points if all(self.slack(v)[a] == 0 for a in I)]
        rays = [r for r in self.vrep.rays if all(_dot(self.normals[a], r) == 0 for a in I)]
        base = on[0]
        dirs = [tuple(x - y for x, y in zip(v, base)) for v in on[1:]] + list(rays)
        dirs += list(self.vrep.lineality)
        basis = _row_basis(dirs, self.dim)
        return Face(I, False, len(basis), base, tuple(basis), cert)

    def is_simple(self) -> SimplicityResult:
        for v, tight in self.vertex_facets().items():
            if len(tight) != self.dim:
                return SimplicityResult(False, v, tuple(sorted(tight)))
        return SimplicityResult(True)

    def facet_sets_of_faces(self) -> StrataFamily:
        """``{I : P_I nonempty}``: every subset of a vertex's tight set."""
        return StrataFamily.downward_closure(self.vertex_facets().values(), self.nfacets)

    def face_lattice(self) -> list:
        """Nonempty faces of a bounded polytope as ``(vertex set, tight index set)`` pairs.

        Faces are intersections of facet-vertex sets; the tight set of a face is
        the set of inequalities active on all its vertices (its relative interior).
        """
        vf = self.vertex_facets()
        verts = frozenset(vf)
        by_facet = [frozenset(v for v in verts if a in vf[v]) for a in range(self.nfacets)]
        faces = {verts}
        frontier = [verts]
        while frontier:
            nxt = []
            for F in frontier:
                for S in by_facet:
                    G = F & S
                    if G and G not in faces:
                        faces.add(G)
                        nxt.append(G)
            frontier = nxt
        out = []
        for F in faces:
            tight = frozenset(range(self.nfacets))
            for v in F:
                tight &= vf[v]
            out.append((F, tight))
        return sorted(out, key=lambda ft: (len(ft[1]), sorted(ft[1])))

    def face_tight_sets(self) -> StrataFamily:
        """Index sets of active inequalities over all points of the polytope."""
        return StrataFamily((t for _, t in self.face_lattice()), self.nfacets)

    def facet_dimension(self, a: int) -> int:
        """Dimension of ``P_{a}``; -1 if empty."""
        vr = self.vrep
        if vr.is_empty:
            return -1
        on = [v for v in vr.points if self.slack(v)[a] == 0]
        if not on:
            return -1
        rays = [r for r in vr.rays if _dot(self.normals[a], r) == 0]
        dirs = [tuple(x - y for x, y in zip(v, on[0])) for v in on[1:]] + rays + list(vr.lineality)
        return vectors_rank(dirs, self.dim) if dirs else 0

    def irredundant(self):
        """Drop inequalities that do not define distinct facets.

        Returns ``(polytope, removed)``; among inequalities defining the same
        facet the lowest index is kept.
        """
        vr = self.vrep
        if vr.is_empty:
            raise EmptyPolytope("polytope is empty")
        kept, removed, seen = [], [], {}
        for a in range(self.nfacets):
            if self.facet_dimension(a) != self.dim - 1:
                removed.append(a)
                continue
            key = (frozenset(v for v in vr.points if self.slack(v)[a] == 0),
                   frozenset(r for r in vr.rays if _dot(self.normals[a], r) == 0))
            if key in seen:
                removed.append(a)
                continue
            seen[key] = a
            kept.append(a)
        P = HPolytope([self.normals[a] for a in kept], [self.offsets[a] for a in kept], self.dim)
        return P, removed

    def is_subset_of(self, other: "HPolytope") -> bool:
        if self.dim != other.dim:
            raise DimensionMismatch("polytopes live in different dimensions")
        vr = self.vrep
        if vr.is_empty:
            return True
        return (all(other.contains(v) for v in vr.points)
                and all(_dot(n, r) >= 0 for r in vr.rays for n in other.normals)
                and all(_dot(n, l) == 0 for l in vr.lineality for n in other.normals))

    def equal_as_sets(self, other: "HPolytope") -> bool:
        return self.is_subset_of(other) and other.is_subset_of(self)


def _row_basis(vectors, dim):
    basis = []
    for v in vectors:
        if vectors_rank(basis + [v], dim) > len(basis):
            basis.append(v)
    return basis


def equal_as_sets(P: HPolytope, Q: HPolytope) -> bool:
    return P.equal_as_sets(Q)


def vertices(P: HPolytope) -> list:
    return P.vertices()


def face(P: HPolytope, I) -> Face:
    return P.face(I)


def is_simple(P: HPolytope) -> SimplicityResult:
    return P.is_simple()


def facet_sets_of_faces(P: HPolytope) -> StrataFamily:
    return P.facet_sets_of_faces()


def irredundant(P: HPolytope):
    return P.irredundant()


__all__ = [
    "HPolytope", "StrataFamily", "Face", "SimplicityResult", "VRepresentation",
    "double_description", "vertices", "face", "is_simple", "facet_sets_of_faces",
    "equal_as_sets", "irredundant",
]

