"""
Finitely generated abelian groups given by presentation matrices.

A group is ``coker(P: Z^s -> Z^t)``; elements are written in the ``t``
ambient generators.  Homomorphisms are recorded by an integer lift between
the ambient free modules.

The Gale dual of ``beta: Z^d -> N`` is computed from the mapping cone of a
chain-map lift of ``beta`` between two-term free resolutions, dualized, and
its first cohomology taken.  The result is stored in Smith-canonical form:
torsion generators first, then free generators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import prod
from typing import Optional, Sequence

from .intlinalg import (
    Matrix,
    as_int_matrix,
    cokernel_invariants,
    hnf,
    kernel_basis,
    lattice_basis,
    rank,
    snf,
    solve_int,
)


def _is_divisibility_chain(torsion):
    return all(b % a == 0 for a, b in zip(torsion, torsion[1:]))


@dataclass(frozen=True)
class FGAbelianGroup:
    presentation: Matrix

    def __post_init__(self):
        object.__setattr__(self, "presentation", as_int_matrix(self.presentation))

    @classmethod
    def from_invariants(cls, free_rank: int, torsion: Sequence[int] = ()) -> "FGAbelianGroup":
        torsion = [int(x) for x in torsion]
        if free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        if any(x <= 1 for x in torsion):
            raise ValueError(f"torsion factors must exceed 1, got {torsion}")
        if not _is_divisibility_chain(torsion):
            raise ValueError(f"torsion factors {torsion} do not form a divisibility chain")
        n = len(torsion)
        t = n + free_rank
        rows = [[torsion[i] if (i == j and i < n) else 0 for j in range(n)] for i in range(t)]
        return cls(Matrix(rows, n))

    @classmethod
    def free(cls, n: int) -> "FGAbelianGroup":
        return cls(Matrix.zeros(n, 0))

    @property
    def ngens(self) -> int:
        return self.presentation.nrows

    @cached_property
    def _invariants(self):
        return cokernel_invariants(self.presentation)

    @property
    def free_rank(self) -> int:
        return self._invariants[0]

    @property
    def torsion(self) -> tuple:
        return tuple(self._invariants[1])

    @property
    def invariants(self) -> tuple:
        return (self.free_rank, self.torsion)

    @property
    def order(self) -> Optional[int]:
        """Group order, ``None`` when infinite."""
        return prod(self.torsion) if self.free_rank == 0 else None

    def is_free(self) -> bool:
        return not self.torsion

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @cached_property
    def _smith(self):
        return snf(self.presentation)

    def canonical_map(self) -> Matrix:
        """Matrix ``Q`` sending ambient coordinates to canonical ones.

        Canonical coordinates are ``(torsion part..., free part...)``; the torsion
        entries are meaningful modulo the matching invariant factor.
        """
        dec = self._smith
        diag = dec.diagonal
        keep = [i for i in range(self.ngens) if i >= len(diag) or diag[i] != 1]
        return dec.U.select_rows(keep)

    def canonical_section(self) -> Matrix:
        """Inverse direction of :meth:`canonical_map`: canonical generators in ambient coordinates."""
        dec = self._smith
        diag = dec.diagonal
        Uinv = _unimodular_inverse(dec.U)
        keep = [i for i in range(self.ngens) if i >= len(diag) or diag[i] != 1]
        return Uinv.select_columns(keep)

    def canonical(self) -> "FGAbelianGroup":
        return FGAbelianGroup.from_invariants(self.free_rank, self.torsion)

    def contains(self, v: Sequence[int]) -> bool:
        """Whether the ambient vector ``v`` is zero in the group."""
        return solve_int(self.presentation, v) is not None

    def reduce(self, v: Sequence[int]) -> tuple:
        """Canonical coordinates of ``v`` with torsion parts reduced."""
        c = self.canonical_map() @ tuple(v)
        tors = self.torsion
        return tuple(x % tors[i] if i < len(tors) else x for i, x in enumerate(c))

    def describe(self) -> str:
        parts = [f"Z/{m}" for m in self.torsion]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


def _unimodular_inverse(U: Matrix) -> Matrix:
    n = U.nrows
    cols = [solve_int(U, tuple(1 if i == j else 0 for i in range(n))) for j in range(n)]
    return Matrix.from_columns(cols, n)


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism given by a lift ``Z^{t_src} -> Z^{t_tgt}`` of ambient generators."""

    source: FGAbelianGroup
    target: FGAbelianGroup
    lift: Matrix

    def __post_init__(self):
        lift = as_int_matrix(self.lift)
        object.__setattr__(self, "lift", lift)
        if lift.shape != (self.target.ngens, self.source.ngens):
            raise ValueError(
                f"lift has shape {lift.shape}, expected {(self.target.ngens, self.source.ngens)}")

    def is_well_defined(self) -> bool:
        """Relations of the source must land in the relations of the target."""
        image = self.lift @ self.source.presentation
        return all(self.target.contains(image.col(j)) for j in range(image.ncols))

    def __call__(self, v):
        return self.lift @ tuple(v)


def dual_pairing(N: FGAbelianGroup) -> Matrix:
    """Rows form a basis of ``Hom(N, Z)``, written as functionals on the ambient generators."""
    K = kernel_basis(N.presentation.T)
    return K.T


def dual(N: FGAbelianGroup) -> FGAbelianGroup:
    """``Hom(N, Z)``: free of rank ``free_rank(N)``.  See :func:`dual_pairing` for the basis."""
    return FGAbelianGroup.free(dual_pairing(N).nrows)


def free_resolution(N: FGAbelianGroup) -> Matrix:
    """Injective ``R: Z^k -> Z^t`` with ``coker(R) = N`` (a two-term free resolution)."""
    dec = N._smith
    k = dec.rank
    PV = N.presentation @ dec.V
    return PV.select_columns(range(k))


def ext1(N: FGAbelianGroup) -> FGAbelianGroup:
    """``Ext^1(N, Z)``, the cokernel of the transposed resolution matrix."""
    R = free_resolution(N)
    return FGAbelianGroup(R.T)


def image_lattice(N: FGAbelianGroup):
    """``(Lambda, proj)`` with ``Lambda = N / torsion`` free and ``proj`` the quotient map."""
    dec = N._smith
    k = dec.rank
    proj = dec.U.select_rows(range(k, N.ngens))
    Lam = FGAbelianGroup.free(proj.nrows)
    return Lam, GroupHom(N, Lam, proj)


@dataclass(frozen=True)
class CompactAbelianGroup:
    """``Hom(D, T)`` for a finitely generated ``D``: a torus times a finite group."""

    torus_rank: int
    component_group: tuple = ()

    @property
    def component_order(self) -> int:
        return prod(self.component_group)

    def describe(self) -> str:
        parts = []
        if self.torus_rank:
            parts.append(f"T^{self.torus_rank}")
        parts.extend(f"Z/{m}" for m in self.component_group)
        return " x ".join(parts) if parts else "1"


def hom_to_circle(D: FGAbelianGroup) -> CompactAbelianGroup:
    return CompactAbelianGroup(D.free_rank, D.torsion)


@dataclass(frozen=True)
class GaleData:
    """Gale dual ``DG(beta)`` and ``beta_dg: (Z^d)^dual -> DG(beta)``.

    ``dg`` is in canonical form (torsion generators, then free ones) and
    ``beta_dg`` lifts into those coordinates: torsion rows are reduced modulo
    their invariant factor, the free rows are in Hermite form.
    """

    beta: GroupHom
    dg: FGAbelianGroup
    beta_dg: GroupHom
    resolution: Matrix
    cone_presentation: Matrix
    finite_cokernel: bool = True
    notes: tuple = field(default=())

    @property
    def d(self) -> int:
        return self.beta.source.ngens

    @property
    def weights(self) -> Matrix:
        """Free part of ``beta_dg`` (``rank x d``); column ``a`` is the weight of ``e^a``."""
        n = len(self.dg.torsion)
        return self.beta_dg.lift.select_rows(range(n, self.dg.ngens))

    @property
    def characters(self) -> tuple:
        """Torsion part of ``beta_dg`` as ``(modulus, row)`` pairs."""
        L = self.beta_dg.lift
        return tuple((m, L.row(i)) for i, m in enumerate(self.dg.torsion))


def gale_dual(beta: GroupHom) -> GaleData:
    """Compute ``DG(beta)`` for ``beta: Z^d -> N``.

    ``Z^d`` carries its identity resolution and ``N`` the two-term resolution
    ``0 -> Z^k -R-> Z^t -> N -> 0``.  The cone differential in degree one is
    ``(e, f) -> R f - B e``; dualizing, ``DG = coker([-B | R]^T)`` and
    ``beta_dg(e^a)`` is the class of ``(e^a, 0)``.
    """
    N = beta.target
    d = beta.source.ngens
    if beta.source.presentation.ncols != 0 or beta.source.free_rank != d:
        raise ValueError("beta must be defined on a free module Z^d")
    B = beta.lift
    R = free_resolution(N)
    k = R.ncols
    cone = (-B).hstack(R)
    pres = cone.T
    D = FGAbelianGroup(pres)
    dec = snf(pres)
    diag = dec.diagonal
    keep = [i for i in range(d + k) if i >= len(diag) or diag[i] != 1]
    ntors = len(D.torsion)
    tors_rows = [i for i in keep if i < len(diag) and diag[i] > 1]
    free_rows = [i for i in keep if i >= len(diag) or diag[i] == 0]
    assert len(tors_rows) == ntors
    U = dec.U
    tors = [tuple(x % D.torsion[n] for x in U.row(i)[:d]) for n, i in enumerate(tors_rows)]
    free = Matrix((U.row(i)[:d] for i in free_rows), d)
    Hf, _ = hnf(free)
    lift = Matrix(tors + list(Hf.rows), d)
    dg = D.canonical()
    bdg = GroupHom(FGAbelianGroup.free(d), dg, lift)
    finite = cokernel_invariants(B.hstack(N.presentation))[0] == 0
    notes = () if finite else ("coker(beta) is infinite: not a stacky datum; beta^dual need not be injective",)
    return GaleData(beta, dg, bdg, R, pres, finite, notes)


@dataclass(frozen=True)
class GaleCertificate:
    passed: bool
    failing_stage: Optional[str]
    checks: tuple

    def as_dict(self):
        return {"passed": self.passed, "failing_stage": self.failing_stage,
                "checks": [{"stage": s, "passed": ok, "detail": det} for s, ok, det in self.checks]}


def kernel_of_map(lift: Matrix, target: FGAbelianGroup) -> Matrix:
    """Hermite basis (rows) of ``{x in Z^n : lift x = 0 in target}``."""
    n = lift.ncols
    big = lift.hstack(target.presentation)
    K = kernel_basis(big)
    gens = [K.col(j)[:n] for j in range(K.ncols)]
    return lattice_basis([g for g in gens if any(g)], n)


def verify_gale_sequence(g: GaleData) -> GaleCertificate:
    """Exactness of ``0 -> N^dual -> (Z^d)^dual -> DG -> Ext^1(N, Z) -> 0``."""
    N = g.beta.target
    d = g.d
    Y = dual_pairing(N)
    beta_dual = Y @ g.beta.lift  # rows: images of a basis of N^dual in (Z^d)^dual
    checks = []
    inj = rank(beta_dual) == beta_dual.nrows if beta_dual.nrows else True
    checks.append(("beta_dual_injective", inj, f"rank {rank(beta_dual)} of {beta_dual.nrows}"))

    ker = kernel_of_map(g.beta_dg.lift, g.dg)
    im = lattice_basis([r for r in beta_dual.rows if any(r)], d)
    mid = ker == im
    checks.append(("middle_exact", mid, f"ker rank {ker.nrows}, im rank {im.nrows}"))

    coker = FGAbelianGroup(g.beta_dg.lift.hstack(g.dg.presentation))
    e = ext1(N)
    end = coker.invariants == e.invariants
    checks.append(("cokernel_is_ext1", end, f"coker {coker.describe()}, Ext^1 {e.describe()}"))

    failing = next((s for s, ok, _ in checks if not ok), None)
    return GaleCertificate(failing is None, failing, tuple(checks))
