"""Brute-force reference computations.

Nothing here imports the algorithms under test: linear algebra is redone with
plain ``Fraction`` Gaussian elimination and determinants, and every answer is
obtained by exhaustive enumeration over small search spaces.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from itertools import combinations, product
from math import gcd


# ---------------------------------------------------------------------------
# elementary exact linear algebra


def det(rows):
    """Determinant by Fraction elimination."""
    A = [[Fraction(x) for x in r] for r in rows]
    n = len(A)
    out = Fraction(1)
    for i in range(n):
        p = next((k for k in range(i, n) if A[k][i] != 0), None)
        if p is None:
            return Fraction(0)
        if p != i:
            A[i], A[p] = A[p], A[i]
            out = -out
        out *= A[i][i]
        for k in range(i + 1, n):
            f = A[k][i] / A[i][i]
            if f:
                A[k] = [x - f * y for x, y in zip(A[k], A[i])]
    return out


def rank(rows, ncols=None):
    A = [[Fraction(x) for x in r] for r in rows]
    if not A:
        return 0
    ncols = len(A[0]) if ncols is None else ncols
    r = 0
    for c in range(ncols):
        p = next((k for k in range(r, len(A)) if A[k][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        for k in range(len(A)):
            if k != r and A[k][c]:
                f = A[k][c] / A[r][c]
                A[k] = [x - f * y for x, y in zip(A[k], A[r])]
        r += 1
    return r


def solve_square(rows, rhs):
    """Unique solution of a square system, or None if singular."""
    n = len(rows)
    A = [[Fraction(x) for x in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    for i in range(n):
        p = next((k for k in range(i, n) if A[k][i] != 0), None)
        if p is None:
            return None
        A[i], A[p] = A[p], A[i]
        piv = A[i][i]
        A[i] = [x / piv for x in A[i]]
        for k in range(n):
            if k != i and A[k][i]:
                f = A[k][i]
                A[k] = [x - f * y for x, y in zip(A[k], A[i])]
    return tuple(A[i][n] for i in range(n))


def null_vector(rows, n):
    """A nonzero kernel vector of an ``(n-1) x n`` matrix of rank ``n-1`` (generalized cross product)."""
    v = []
    for j in range(n):
        minor = [[r[k] for k in range(n) if k != j] for r in rows]
        v.append((-1) ** j * det(minor))
    return tuple(v)


# ---------------------------------------------------------------------------
# integer invariants


def determinantal_invariants(rows, ncols):
    """Invariant factors via gcds of k x k minors: ``d_k = D_k / D_(k-1)``."""
    m = len(rows)
    prev = 1
    out = []
    for k in range(1, min(m, ncols) + 1):
        g = 0
        for R in combinations(range(m), k):
            for C in combinations(range(ncols), k):
                g = gcd(g, int(det([[rows[i][j] for j in C] for i in R])))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def cokernel_oracle(rows, ncols):
    """``(free_rank, torsion)`` of ``Z^m / (column span)`` for an ``m x ncols`` matrix."""
    m = len(rows)
    diag = determinantal_invariants(rows, ncols)
    return m - len(diag), [x for x in diag if x > 1]


def torsion_count(invariants, n):
    """``#{x : n x = 0}`` in ``prod Z/m_i``."""
    out = 1
    for m in invariants:
        out *= gcd(n, m)
    return out


def count_homs_to_Z(free_rank, torsion, bound):
    """Enumerate ``Hom(Z^f + sum Z/m_i, Z)`` with generator images in ``[-bound, bound]``."""
    count = 0
    for images in product(range(-bound, bound + 1), repeat=len(torsion) + free_rank):
        ok = all(m * x == 0 for m, x in zip(torsion, images))
        count += ok
    return count


# ---------------------------------------------------------------------------
# polytopes


def brute_vertices(normals, offsets, r):
    """Vertices of ``{x : <x, n_a> >= -c_a}`` by solving every r-subset of facets."""
    normals = [tuple(Fraction(x) for x in n) for n in normals]
    offsets = [Fraction(c) for c in offsets]
    if r == 0:
        return [()]
    out = set()
    for S in combinations(range(len(normals)), r):
        x = solve_square([normals[a] for a in S], [-offsets[a] for a in S])
        if x is None:
            continue
        if all(sum(xi * ni for xi, ni in zip(x, n)) >= -c for n, c in zip(normals, offsets)):
            out.add(x)
    return sorted(out)


def tight_set(x, normals, offsets):
    return frozenset(a for a, (n, c) in enumerate(zip(normals, offsets))
                     if sum(Fraction(xi) * ni for xi, ni in zip(x, n)) == -Fraction(c))


def brute_face_family(normals, offsets, r):
    """``{I : P_I nonempty}`` for a polytope: each nonempty face of a polytope has a vertex."""
    verts = brute_vertices(normals, offsets, r)
    tights = [tight_set(v, normals, offsets) for v in verts]
    d = len(normals)
    out = set()
    for k in range(d + 1):
        for I in combinations(range(d), k):
            if any(set(I) <= t for t in tights):
                out.add(I)
    return out


def level_vertices(weights, tau):
    """Basic feasible solutions of ``{s >= 0, W s = tau}`` for ``W`` of full row rank ``k``."""
    k, d = len(weights), len(weights[0]) if weights else 0
    out = set()
    for J in combinations(range(d), k):
        sJ = solve_square([[weights[i][j] for j in J] for i in range(k)], tau)
        if sJ is None or any(x < 0 for x in sJ):
            continue
        s = [Fraction(0)] * d
        for j, x in zip(J, sJ):
            s[j] = x
        out.add(tuple(s))
    return sorted(out)


def level_zero_sets(weights, tau):
    """Zero-coordinate sets realized on ``{s >= 0, W s = tau}``, via barycenters of vertex subsets.

    A point with zero set exactly ``I`` exists iff the barycenter of the
    vertices vanishing on ``I`` has zero set exactly ``I``.
    """
    verts = level_vertices(weights, tau)
    d = len(weights[0])
    out = set()
    for k in range(d + 1):
        for I in combinations(range(d), k):
            on = [v for v in verts if all(v[a] == 0 for a in I)]
            if not on:
                continue
            bary = [sum(v[a] for v in on) / len(on) for a in range(d)]
            if {a for a in range(d) if bary[a] == 0} == set(I):
                out.add(I)
    return out


def lp_oracle(A, b):
    """``(feasible, bounded)`` for ``{x : A x >= b}`` when ``A`` has full column rank.

    A pointed polyhedron is nonempty iff it has a vertex; it is bounded iff its
    recession cone ``{A x >= 0}`` has no extreme ray.
    """
    n = len(A[0])
    assert rank(A, n) == n
    feasible = False
    for S in combinations(range(len(A)), n):
        x = solve_square([A[i] for i in S], [b[i] for i in S])
        if x is not None and all(sum(Fraction(a) * xi for a, xi in zip(row, x)) >= bi
                                 for row, bi in zip(A, b)):
            feasible = True
            break
    if not feasible:
        return False, None
    if n == 1:
        pos = any(row[0] > 0 for row in A)
        neg = any(row[0] < 0 for row in A)
        return True, pos and neg
    for S in combinations(range(len(A)), n - 1):
        sub = [A[i] for i in S]
        if rank(sub, n) < n - 1:
            continue
        v = null_vector(sub, n)
        for sign in (1, -1):
            w = [sign * x for x in v]
            if all(sum(Fraction(a) * wi for a, wi in zip(row, w)) >= 0 for row in A):
                return True, False
    return True, True


# ---------------------------------------------------------------------------
# stabilizers


def brute_stabilizer(free_rank, torsion, beta_dg_rows, off):
    """Enumerate ``{g in Hom(DG, T) : g(beta_dg e^a) = 0 for a in off}``.

    ``DG = Z/m_1 + ... + Z/m_t + Z^f`` with rows of ``beta_dg`` in that order.
    A character is ``theta`` in ``(Q/Z)^f`` plus ``a_i`` in ``Z/m_i``.  The
    free part of every stabilizer element lies in ``(1/E) Z^f`` where ``E`` is
    ``lcm(m_i)`` times a nonzero maximal minor of the weights off ``I``.
    Returns the multiset of element orders, or None when no such minor exists.
    """
    t = len(torsion)
    W = [beta_dg_rows[t + j] for j in range(free_rank)]
    M = reduce(lambda x, y: x * y // gcd(x, y), torsion, 1)
    E = M
    if free_rank:
        minor = None
        for S in combinations(off, free_rank):
            D = det([[W[j][a] for a in S] for j in range(free_rank)])
            if D:
                minor = abs(int(D))
                break
        if minor is None:
            return None
        E = M * minor
    orders = []
    for free_part in product(range(E), repeat=free_rank):
        for tors_part in product(*(range(m) for m in torsion)):
            ok = True
            for a in off:
                val = sum(Fraction(x, E) * W[j][a] for j, x in enumerate(free_part))
                val += sum(Fraction(y, m) * beta_dg_rows[i][a] for i, (y, m) in enumerate(zip(tors_part, torsion)))
                if val.denominator != 1:
                    ok = False
                    break
            if ok:
                den = reduce(lambda x, y: x * y // gcd(x, y),
                             [Fraction(x, E).denominator for x in free_part]
                             + [Fraction(y, m).denominator for y, m in zip(tors_part, torsion)], 1)
                orders.append(den)
    return orders


def counts_from_orders(orders, n):
    """``#{g : n g = 0}`` from a list of element orders."""
    return sum(1 for o in orders if n % o == 0)
