"""
Exact integer and rational linear algebra.

Everything here works on :class:`Matrix`, a small immutable row-major
container holding Python ints or :class:`fractions.Fraction` values.
Integer algorithms (Smith and Hermite normal forms, lattice kernels,
integer solving) require int entries; the rational helpers accept either.

The linear-programming helper :func:`lp_check` decides feasibility and
boundedness of ``{x : A x >= b}`` by exact Fourier-Motzkin elimination and
returns checkable certificates (a witness point, a Farkas combination, or a
recession direction).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

from .errors import DimensionMismatch, LPTooLarge

MAX_LP_VARIABLES = 12


class Matrix:
    """Immutable matrix with exact entries.

    ``Matrix(rows, ncols)`` takes a sequence of row sequences; ``ncols`` is only
    needed when there are no rows.
    """

    __slots__ = ("rows", "nrows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Sequence] = (), ncols: Optional[int] = None):
        rows = tuple(tuple(r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(rows[0])
        if ncols < 0:
            raise ValueError("negative dimension")
        for r in rows:
            if len(r) != ncols:
                raise DimensionMismatch(f"ragged row of length {len(r)}, expected {ncols}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(((1 if i == j else 0) for j in range(n)) for i in range(n)) if n else cls((), 0)

    @classmethod
    def zeros(cls, m: int, n: int) -> "Matrix":
        return cls(((0,) * n for _ in range(m)), n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int) -> "Matrix":
        columns = [tuple(c) for c in columns]
        for c in columns:
            if len(c) != nrows:
                raise DimensionMismatch("column length does not match nrows")
        return cls((tuple(c[i] for c in columns) for i in range(nrows)), len(columns))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def T(self) -> "Matrix":
        return Matrix(zip(*self.rows), self.nrows) if self.nrows else Matrix((() for _ in range(self.ncols)), 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i: int) -> tuple:
        return self.rows[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list:
        return [self.col(j) for j in range(self.ncols)]

    def select_columns(self, idx: Iterable[int]) -> "Matrix":
        idx = list(idx)
        return Matrix((tuple(r[j] for j in idx) for r in self.rows), len(idx))

    def select_rows(self, idx: Iterable[int]) -> "Matrix":
        return Matrix((self.rows[i] for i in idx), self.ncols)

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.nrows != other.nrows:
            raise DimensionMismatch("hstack needs equal row counts")
        return Matrix((a + b for a, b in zip(self.rows, other.rows)), self.ncols + other.ncols)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.ncols:
            raise DimensionMismatch("vstack needs equal column counts")
        return Matrix(self.rows + other.rows, self.ncols)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
            cols = other.T.rows
            return Matrix(
                (tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows),
                other.ncols,
            )
        v = tuple(other)
        if len(v) != self.ncols:
            raise DimensionMismatch(f"cannot apply {self.shape} matrix to vector of length {len(v)}")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.rows)

    def __neg__(self):
        return Matrix((tuple(-a for a in r) for r in self.rows), self.ncols)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.shape, self.rows)))
        return self._hash

    def __repr__(self):
        return f"Matrix({[list(r) for r in self.rows]!r}, ncols={self.ncols})"

    def tolist(self) -> list:
        return [list(r) for r in self.rows]

    def is_integral(self) -> bool:
        return all(isinstance(a, int) or (isinstance(a, Fraction) and a.denominator == 1)
                   for r in self.rows for a in r)


def as_int_matrix(M) -> Matrix:
    if not isinstance(M, Matrix):
        M = Matrix(M)
    rows = []
    for r in M.rows:
        out = []
        for a in r:
            if isinstance(a, Fraction):
                if a.denominator != 1:
                    raise ValueError("matrix has non-integer entries")
                a = a.numerator
            out.append(int(a))
        rows.append(out)
    return Matrix(rows, M.ncols)


@dataclass(frozen=True)
class SNFDecomposition:
    """``U @ M @ V == D`` with ``U``, ``V`` unimodular and ``D`` in Smith form."""

    U: Matrix
    D: Matrix
    V: Matrix

    @property
    def diagonal(self) -> tuple:
        return tuple(self.D[i, i] for i in range(min(self.D.shape)))

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal if x != 0)


def _swap_rows(A, i, j):
    A[i], A[j] = A[j], A[i]


def _swap_cols(A, i, j):
    for r in A:
        r[i], r[j] = r[j], r[i]


def _add_row(A, dst, src, q):
    # row_dst += q * row_src
    rd, rs = A[dst], A[src]
    for c in range(len(rd)):
        rd[c] += q * rs[c]


def _add_col(A, dst, src, q):
    for r in A:
        r[dst] += q * r[src]


def snf(M) -> SNFDecomposition:
    """Smith normal form by elementary row/column operations.

    The pivot at each stage is the nonzero entry of least absolute value in the
    remaining block, ties broken by smallest (row, column).
    """
    M = as_int_matrix(M)
    t, s = M.shape
    A = M.tolist()
    U = Matrix.identity(t).tolist()
    V = Matrix.identity(s).tolist()

    for k in range(min(t, s)):
        while True:
            best = None
            for i in range(k, t):
                for j in range(k, s):
                    a = A[i][j]
                    if a and (best is None or abs(a) < best[0]):
                        best = (abs(a), i, j)
            if best is None:
                return _finish_snf(A, U, V, t, s)
            _, pi, pj = best
            if pi != k:
                _swap_rows(A, k, pi)
                _swap_rows(U, k, pi)
            if pj != k:
                _swap_cols(A, k, pj)
                _swap_cols(V, k, pj)
            p = A[k][k]
            clean = True
            for i in range(k + 1, t):
                if A[i][k]:
                    q = A[i][k] // p
                    _add_row(A, i, k, -q)
                    _add_row(U, i, k, -q)
                    if A[i][k]:
                        clean = False
            for j in range(k + 1, s):
                if A[k][j]:
                    q = A[k][j] // p
                    _add_col(A, j, k, -q)
                    _add_col(V, j, k, -q)
                    if A[k][j]:
                        clean = False
            if not clean:
                continue
            bad = next((i for i in range(k + 1, t)
                        for j in range(k + 1, s) if A[i][j] % p), None)
            if bad is None:
                break
            _add_row(A, k, bad, 1)
            _add_row(U, k, bad, 1)
        if A[k][k] < 0:
            A[k] = [-a for a in A[k]]
            U[k] = [-a for a in U[k]]
    return _finish_snf(A, U, V, t, s)


def _finish_snf(A, U, V, t, s):
    return SNFDecomposition(Matrix(U, t), Matrix(A, s), Matrix(V, s))


def hnf(M):
    """Row-style Hermite normal form: returns ``(H, U)`` with ``U @ M == H``.

    Pivots are positive, entries above a pivot are reduced into ``[0, pivot)``
    and zero rows sit at the bottom.
    """
    M = as_int_matrix(M)
    t, s = M.shape
    A = M.tolist()
    U = Matrix.identity(t).tolist()
    pr = 0
    for j in range(s):
        if pr >= t:
            break
        while True:
            nz = [(abs(A[i][j]), i) for i in range(pr, t) if A[i][j]]
            if not nz:
                break
            _, i0 = min(nz)
            if i0 != pr:
                _swap_rows(A, pr, i0)
                _swap_rows(U, pr, i0)
            p = A[pr][j]
            done = True
            for i in range(pr + 1, t):
                if A[i][j]:
                    q = A[i][j] // p
                    _add_row(A, i, pr, -q)
                    _add_row(U, i, pr, -q)
                    if A[i][j]:
                        done = False
            if done:
                break
        if pr < t and A[pr][j]:
            if A[pr][j] < 0:
                A[pr] = [-a for a in A[pr]]
                U[pr] = [-a for a in U[pr]]
            p = A[pr][j]
            for i in range(pr):
                q = A[i][j] // p
                if q:
                    _add_row(A, i, pr, -q)
                    _add_row(U, i, pr, -q)
            pr += 1
    return Matrix(A, s), Matrix(U, t)


def lattice_basis(vectors: Sequence[Sequence[int]], dim: int) -> Matrix:
    """Canonical (Hermite) basis of the lattice spanned by ``vectors``, as rows."""
    if not vectors:
        return Matrix((), dim)
    H, _ = hnf(Matrix(vectors, dim))
    return Matrix((r for r in H.rows if any(r)), dim)


def kernel_basis(M) -> Matrix:
    """Saturated Z-basis of ``{x : M x = 0}``, returned as the columns of a matrix.

    The basis is put in Hermite form so the answer does not depend on the
    reduction path.
    """
    M = as_int_matrix(M)
    dec = snf(M)
    k = dec.rank
    s = M.ncols
    vecs = [dec.V.col(j) for j in range(k, s)]
    B = lattice_basis(vecs, s)
    return Matrix.from_columns(B.rows, s)


def cokernel_invariants(M):
    """``(free_rank, torsion)`` of ``Z^rows / im(M)``, torsion as a divisibility chain."""
    M = as_int_matrix(M)
    diag = snf(M).diagonal
    nonzero = [x for x in diag if x]
    return M.nrows - len(nonzero), [x for x in nonzero if x > 1]


def solve_int(M, b) -> Optional[tuple]:
    """Integer solution of ``M x = b`` or ``None``.

    Among all solutions the one returned is reduced against the Hermite basis of
    the kernel, which makes it independent of the Smith reduction path.
    """
    M = as_int_matrix(M)
    b = tuple(int(x) for x in b)
    if len(b) != M.nrows:
        raise DimensionMismatch("right-hand side has wrong length")
    dec = snf(M)
    c = dec.U @ b
    diag = dec.diagonal
    y = [0] * M.ncols
    for i, ci in enumerate(c):
        di = diag[i] if i < len(diag) else 0
        if di == 0:
            if ci != 0:
                return None
        else:
            if ci % di:
                return None
            y[i] = ci // di
    x = list(dec.V @ y)
    K = kernel_basis(M)
    for kv in (K.col(j) for j in range(K.ncols)):
        piv = next(i for i, a in enumerate(kv) if a)
        q = x[piv] // kv[piv]
        if q:
            x = [xi - q * ki for xi, ki in zip(x, kv)]
    return tuple(x)


def det(M) -> Fraction | int:
    """Determinant by fraction-free elimination (Bareiss) for integer input."""
    if M.nrows != M.ncols:
        raise DimensionMismatch("determinant of a non-square matrix")
    n = M.nrows
    if n == 0:
        return 1
    A = [[Fraction(a) for a in r] for r in M.rows]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if A[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if sw is None:
                return 0
            A[k], A[sw] = A[sw], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) / prev
        prev = A[k][k]
    out = sign * A[n - 1][n - 1]
    return int(out) if out.denominator == 1 else out


def rref(M):
    """Reduced row echelon form over Q: returns (rows, pivot_columns)."""
    A = [[Fraction(a) for a in r] for r in M.rows]
    pivots = []
    pr = 0
    for j in range(M.ncols):
        sel = next((i for i in range(pr, len(A)) if A[i][j] != 0), None)
        if sel is None:
            continue
        A[pr], A[sel] = A[sel], A[pr]
        p = A[pr][j]
        A[pr] = [a / p for a in A[pr]]
        for i in range(len(A)):
            if i != pr and A[i][j] != 0:
                f = A[i][j]
                A[i] = [a - f * b for a, b in zip(A[i], A[pr])]
        pivots.append(j)
        pr += 1
        if pr == len(A):
            break
    return A[:pr], pivots


def rank(M) -> int:
    if not isinstance(M, Matrix):
        M = Matrix(M)
    if M.nrows == 0 or M.ncols == 0:
        return 0
    return len(rref(M)[1])


def vectors_rank(vectors: Sequence[Sequence], dim: int) -> int:
    if not vectors:
        return 0
    return rank(Matrix(vectors, dim))


def solve_rational(M, b) -> Optional[tuple]:
    """A rational solution of ``M x = b`` (free variables set to 0) or ``None``."""
    if len(b) != M.nrows:
        raise DimensionMismatch("right-hand side has wrong length")
    aug = Matrix((tuple(r) + (bi,) for r, bi in zip(M.rows, b)), M.ncols + 1)
    R, piv = rref(aug)
    if M.ncols in piv:
        return None
    x = [Fraction(0)] * M.ncols
    for row, j in zip(R, piv):
        x[j] = row[-1]
    return tuple(x)


def primitive(v: Sequence) -> tuple:
    """Scale a rational vector to the primitive integer vector on the same ray."""
    v = [Fraction(a) for a in v]
    den = reduce(lcm, (a.denominator for a in v), 1)
    ints = [int(a * den) for a in v]
    g = reduce(gcd, ints, 0)
    return tuple(a // g for a in ints) if g else tuple(ints)


# ---------------------------------------------------------------------------
# Linear programming by Fourier-Motzkin elimination


@dataclass(frozen=True)
class LPCertificate:
    """Outcome of :func:`lp_check` on ``{x : A x >= b}``.

    ``witness`` is a feasible point when ``feasible``; otherwise ``farkas`` holds
    ``y >= 0`` with ``y A = 0`` and ``y b > 0``.  In ``bounded`` mode, ``bounded``
    is set and an unbounded system carries a primitive integer ``direction``
    with ``A direction >= 0``.
    """

    feasible: bool
    witness: Optional[tuple] = None
    farkas: Optional[tuple] = None
    bounded: Optional[bool] = None
    direction: Optional[tuple] = None

    def verify(self, A: Matrix, b: Sequence) -> bool:
        b = [Fraction(x) for x in b]
        if self.feasible:
            ok = all(v >= bi for v, bi in zip(A @ self.witness, b))
        else:
            y = self.farkas
            ok = (all(yi >= 0 for yi in y)
                  and all(sum(yi * A[i, j] for i, yi in enumerate(y)) == 0 for j in range(A.ncols))
                  and sum(yi * bi for yi, bi in zip(y, b)) > 0)
        if ok and self.bounded is False:
            d = self.direction
            ok = any(d) and all(v >= 0 for v in A @ d)
        return ok


def _normalize_constraint(coeffs, rhs):
    scale = next((abs(c) for c in coeffs if c), None)
    if scale is None:
        return None
    return tuple(c / scale for c in coeffs), rhs / scale


def _fourier_motzkin(A, b):
    """Run elimination; returns (stages, final) where each constraint is
    ``(coeffs, rhs, multipliers)`` meaning ``coeffs . x >= rhs``."""
    m, n = A.shape
    cons = []
    for i in range(m):
        mult = tuple(Fraction(1) if k == i else Fraction(0) for k in range(m))
        cons.append((tuple(Fraction(a) for a in A.row(i)), Fraction(b[i]), mult))
    stages = []
    for j in range(n):
        stages.append(cons)
        pos = [c for c in cons if c[0][j] > 0]
        neg = [c for c in cons if c[0][j] < 0]
        nxt = [c for c in cons if c[0][j] == 0]
        pair = _equality_pair(pos, neg)
        if pair is not None:
            cons = _prune(nxt + _substitute(pos, neg, pair, j))
            continue
        for p in pos:
            for q in neg:
                lp, lq = -q[0][j], p[0][j]
                coeffs = tuple(lp * x + lq * y for x, y in zip(p[0], q[0]))
                rhs = lp * p[1] + lq * q[1]
                mult = tuple(lp * x + lq * y for x, y in zip(p[2], q[2]))
                nxt.append((coeffs, rhs, mult))
        cons = _prune(nxt)
    return stages, cons


def _equality_pair(pos, neg):
    """Find ``p >= r`` and ``-p >= -r`` (an implicit equality) among the rows."""
    keys = {}
    for q in neg:
        keys.setdefault(_normalize_constraint(q[0], q[1]), q)
    for p in pos:
        d, r = _normalize_constraint(p[0], p[1])
        q = keys.get((tuple(-x for x in d), -r))
        if q is not None:
            return p, q
    return None


def _substitute(pos, neg, pair, j):
    # Eliminate x_j with an equality: adding a multiple of either copy keeps
    # the Farkas multipliers nonnegative.
    p, q = pair
    out = []
    for c in pos + neg:
        if c is p or c is q:
            continue
        e = q if c[0][j] > 0 else p
        f = -c[0][j] / e[0][j]
        coeffs = tuple(x + f * y for x, y in zip(c[0], e[0]))
        mult = tuple(x + f * y for x, y in zip(c[2], e[2]))
        out.append((coeffs, c[1] + f * e[1], mult))
    return out


def _prune(cons):
    # Keep the tightest copy of each parallel constraint; trivial rows only
    # survive when they are contradictions.
    best = {}
    out = []
    for c in cons:
        key = _normalize_constraint(c[0], c[1])
        if key is None:
            if c[1] > 0:
                out.append(c)
            continue
        direction, rhs = key
        if direction not in best or rhs > best[direction][0]:
            best[direction] = (rhs, c)
    out.extend(v[1] for v in best.values())
    return out


def _bounds(cons, j, x):
    lo = hi = None
    for coeffs, rhs, _ in cons:
        a = coeffs[j]
        if a == 0:
            continue
        rest = rhs - sum(coeffs[k] * x[k] for k in range(j + 1, len(coeffs)))
        v = rest / a
        if a > 0:
            lo = v if lo is None or v > lo else lo
        else:
            hi = v if hi is None or v < hi else hi
    return lo, hi


def _feasibility(A, b) -> LPCertificate:
    n = A.ncols
    stages, final = _fourier_motzkin(A, b)
    for coeffs, rhs, mult in final:
        if all(c == 0 for c in coeffs) and rhs > 0:
            return LPCertificate(feasible=False, farkas=mult)
    x = [Fraction(0)] * n
    for j in reversed(range(n)):
        lo, hi = _bounds(stages[j], j, x)
        x[j] = lo if lo is not None else (hi if hi is not None else Fraction(0))
    return LPCertificate(feasible=True, witness=tuple(x))


def lp_check(A, b, mode: str = "feasible") -> LPCertificate:
    """Exact feasibility / boundedness test for ``{x : A x >= b}``."""
    if not isinstance(A, Matrix):
        A = Matrix(A)
    b = tuple(Fraction(x) for x in b)
    if len(b) != A.nrows:
        raise DimensionMismatch(f"{A.nrows} constraints but {len(b)} right-hand sides")
    if mode not in ("feasible", "bounded"):
        raise ValueError(f"unknown mode {mode!r}")
    n = A.ncols
    if n > MAX_LP_VARIABLES:
        raise LPTooLarge(f"{n} variables exceed the Fourier-Motzkin limit of {MAX_LP_VARIABLES}")
    cert = _feasibility(A, b)
    if mode == "feasible":
        return cert
    if not cert.feasible:
        return LPCertificate(feasible=False, farkas=cert.farkas, bounded=True)
    direction = recession_direction(A)
    return LPCertificate(feasible=True, witness=cert.witness,
                         bounded=direction is None, direction=direction)


def recession_direction(A: Matrix) -> Optional[tuple]:
    """A nonzero primitive ``y`` with ``A y >= 0``, or ``None`` if only ``y = 0`` works."""
    n = A.ncols
    zero = (Fraction(0),) * A.nrows
    for i in range(n):
        for sign in (1, -1):
            e = tuple(sign if k == i else 0 for k in range(n))
            sub = _feasibility(A.vstack(Matrix([e], n)), zero + (Fraction(1),))
            if sub.feasible:
                return primitive(sub.witness)
    return None
