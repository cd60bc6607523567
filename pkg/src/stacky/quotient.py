"""
Stacky polytopes and their symplectic quotient data.

A :class:`StackyPolytope` is a group ``N``, a map ``beta: Z^d -> N`` and
offsets ``c``.  Its polytope is cut out by ``<x, n_a> >= -c_a`` where ``n_a``
is the image of ``beta(e_a)`` in the free quotient of ``N``.  From it we build the
quotient data ``(G, rho, tau)``: ``G = Hom(DG(beta), T)``, weights ``w^a``
read from the free part of ``beta_dg`` and the level ``tau = sum c_a w^a``.

Moment-map values carry a global factor of pi; every value stored here is
divided by pi so the whole pipeline stays rational.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd, prod
from typing import Optional, Sequence

from .abgroup import (
    CompactAbelianGroup,
    FGAbelianGroup,
    GaleData,
    GroupHom,
    gale_dual,
    hom_to_circle,
    image_lattice,
)
from .errors import (
    EmptyOrUnboundedPolytope,
    EmptyPolytope,
    InvalidStackyPolytope,
    NotFreeError,
    NotRegularValue,
    RankDeficientRho,
    StratumNotInFamily,
)
from .intlinalg import (
    Matrix,
    cokernel_invariants,
    kernel_basis,
    lp_check,
    rank,
    solve_rational,
    vectors_rank,
)
from .polytope import HPolytope, StrataFamily

STRICT = "strict"
LENIENT = "lenient"


@dataclass(frozen=True)
class StackyPolytope:
    N: FGAbelianGroup
    beta: GroupHom
    offsets: tuple

    def __post_init__(self):
        object.__setattr__(self, "offsets", tuple(Fraction(c) for c in self.offsets))
        if len(self.offsets) != self.d:
            raise ValueError(f"{self.d} facets but {len(self.offsets)} offsets")
        if self.beta.target != self.N:
            raise ValueError("beta must map into N")

    @classmethod
    def from_matrix(cls, N: FGAbelianGroup, beta, offsets) -> "StackyPolytope":
        beta = beta if isinstance(beta, Matrix) else Matrix(beta, len(offsets))
        d = beta.ncols
        return cls(N, GroupHom(FGAbelianGroup.free(d), N, beta), tuple(offsets))

    @property
    def d(self) -> int:
        return self.beta.source.ngens

    @property
    def r(self) -> int:
        return self.N.free_rank

    @cached_property
    def lattice_projection(self) -> Matrix:
        return image_lattice(self.N)[1].lift

    @cached_property
    def normals(self) -> tuple:
        """``nbar_a`` in coordinates of ``Lambda = Z^r``."""
        img = self.lattice_projection @ self.beta.lift
        return tuple(img.col(a) for a in range(self.d))

    @cached_property
    def polytope(self) -> HPolytope:
        return HPolytope(self.normals, self.offsets, self.r)

    @cached_property
    def gale(self) -> GaleData:
        return gale_dual(self.beta)

    def cokernel(self):
        return cokernel_invariants(self.beta.lift.hstack(self.N.presentation))

    def canonicalized(self) -> "StackyPolytope":
        """Same datum with ``N`` rewritten as ``Z/t_1 + ... + Z^r`` (torsion first)."""
        Q = self.N.canonical_map()
        tors = self.N.torsion
        B = Q @ self.beta.lift
        rows = [tuple(x % tors[i] for x in row) if i < len(tors) else row
                for i, row in enumerate(B.rows)]
        Nc = self.N.canonical()
        return StackyPolytope.from_matrix(Nc, Matrix(rows, self.d), self.offsets)


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class ConditionVerdict:
    condition: str
    passed: bool
    message: str = ""
    witness: Optional[dict] = None


@dataclass(frozen=True)
class ValidationReport:
    mode: str
    verdicts: tuple
    warnings: tuple = ()

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def verdict(self, condition: str) -> ConditionVerdict:
        return next(v for v in self.verdicts if v.condition == condition)

    def failures(self) -> list:
        return [v for v in self.verdicts if not v.passed]


def _one_based(idx):
    return [a + 1 for a in sorted(idx)]


def validate(sp: StackyPolytope, mode: str = STRICT) -> ValidationReport:
    """Check simplicity, facet normals and finiteness of ``coker(beta)``."""
    if mode not in (STRICT, LENIENT):
        raise ValueError(f"unknown validation mode {mode!r}")
    warnings = []
    free, tors = sp.cokernel()
    if free == 0:
        coker = ConditionVerdict("finite_cokernel", True, f"coker(beta) has order {prod(tors)}")
    else:
        coker = ConditionVerdict("finite_cokernel", False, f"coker(beta) has free rank {free}",
                                 {"free_rank": free, "torsion": list(tors)})

    zero = [a for a, n in enumerate(sp.normals) if not any(n)]
    if zero:
        normals = ConditionVerdict(
            "facet_normals", False, f"facet {zero[0] + 1} has zero normal", {"zero_normals": _one_based(zero)})
        simple = ConditionVerdict("simple", False, "not checked: zero facet normal")
        return ValidationReport(mode, (simple, normals, coker))

    P = sp.polytope
    cert = P.lp("bounded")
    if not cert.feasible:
        msg = "polytope is empty"
        wit = {"farkas": list(cert.farkas)}
    elif not cert.bounded:
        msg = "polytope is unbounded"
        wit = {"direction": list(cert.direction)}
    else:
        msg = None
    if msg:
        simple = ConditionVerdict("simple", False, msg, wit)
        normals = ConditionVerdict("facet_normals", False, "not checked: " + msg)
        return ValidationReport(mode, (simple, normals, coker))

    Q, removed = P.irredundant()
    if not removed:
        normals = ConditionVerdict("facet_normals", True, "every inequality defines its own facet")
    else:
        text = ", ".join(f"facet {a + 1} redundant" for a in removed)
        wit = {"redundant": _one_based(removed)}
        if mode == STRICT:
            normals = ConditionVerdict("facet_normals", False, text, wit)
        else:
            normals = ConditionVerdict("facet_normals", True, "lenient: " + text, wit)
            warnings.append(text)

    kept = [a for a in range(sp.d) if a not in removed]
    res = Q.is_simple()
    if res.simple:
        simple = ConditionVerdict("simple", True, f"every vertex lies on exactly {sp.r} facets")
    else:
        facets = [kept[a] for a in res.facets_at_vertex]
        simple = ConditionVerdict(
            "simple", False,
            f"vertex {_fmt_point(res.offending_vertex)} lies on {len(facets)} facets, expected {sp.r}",
            {"vertex": list(res.offending_vertex), "facets": _one_based(facets)})
    return ValidationReport(mode, (simple, normals, coker), tuple(warnings))


def _fmt_point(v):
    return "(" + ", ".join(str(x) for x in v) + ")"


def require_valid(sp: StackyPolytope, mode: str = STRICT) -> ValidationReport:
    report = validate(sp, mode)
    if not report.passed:
        msg = "; ".join(v.message for v in report.failures())
        raise InvalidStackyPolytope(f"not a stacky polytope: {msg}", report)
    return report


# ---------------------------------------------------------------------------
# quotient data


@dataclass(frozen=True)
class QuotientData:
    """``(G, rho, tau)`` in pi-units.

    ``weights`` is ``k x d`` (column ``a`` is ``w^a``), ``characters`` lists the
    torsion components of ``rho`` as ``(modulus, row)``.  ``dg`` and ``beta_dg``
    hold the full Gale dual used for stabilizers.
    """

    group: CompactAbelianGroup
    weights: Matrix
    tau: tuple
    characters: tuple = ()
    dg: Optional[FGAbelianGroup] = None
    beta_dg: Optional[Matrix] = None
    offsets: Optional[tuple] = None
    strata: Optional[StrataFamily] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "tau", tuple(Fraction(t) for t in self.tau))
        if self.dg is None:
            object.__setattr__(self, "dg", FGAbelianGroup.free(self.weights.nrows))
        if self.beta_dg is None:
            object.__setattr__(self, "beta_dg", self.weights)
        if len(self.tau) != self.weights.nrows:
            raise ValueError("tau must have one entry per weight row")

    @classmethod
    def from_weights(cls, weights, tau, offsets=None, strata=None) -> "QuotientData":
        """Torus data ``G = T^k`` acting with the given integer weights."""
        W = weights if isinstance(weights, Matrix) else Matrix(weights)
        return cls(CompactAbelianGroup(W.nrows, ()), W, tuple(tau),
                   offsets=None if offsets is None else tuple(Fraction(c) for c in offsets),
                   strata=strata)

    @property
    def d(self) -> int:
        return self.weights.ncols

    @property
    def k(self) -> int:
        return self.weights.nrows

    def weight(self, a: int) -> tuple:
        return self.weights.col(a)

    def moment(self, s) -> tuple:
        """``mu`` in pi-units evaluated on ``s_a = |z_a|^2``."""
        return tuple(sum(Fraction(w) * x for w, x in zip(row, s)) for row in self.weights.rows)


def quotient_data(sp: StackyPolytope, mode: str = STRICT) -> QuotientData:
    require_valid(sp, mode)
    g = sp.gale
    W = g.weights
    tau = tuple(sum(Fraction(w) * c for w, c in zip(row, sp.offsets)) for row in W.rows)
    return QuotientData(
        group=hom_to_circle(g.dg),
        weights=W,
        tau=tau,
        characters=g.characters,
        dg=g.dg,
        beta_dg=g.beta_dg.lift,
        offsets=sp.offsets,
        strata=sp.polytope.facet_sets_of_faces(),
    )


def f_tau(sp: StackyPolytope, mode: str = STRICT) -> StrataFamily:
    """Zero-coordinate sets of the level set, read off the face lattice of the polytope."""
    require_valid(sp, mode)
    return sp.polytope.facet_sets_of_faces()


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class RegularValueCertificate:
    passed: bool
    witness: Optional[tuple] = None
    reason: str = ""
    strata_checked: int = 0


def check_regular_value(qd: QuotientData, family: StrataFamily) -> RegularValueCertificate:
    """For every stratum ``I`` the weights off ``I`` must span and the stabilizer be finite."""
    k = qd.k
    for I in family.sorted():
        off = [a for a in range(qd.d) if a not in I]
        r = vectors_rank([qd.weight(a) for a in off], k)
        if r < k:
            return RegularValueCertificate(
                False, I, f"weights off {list(I)} span a space of dimension {r} < {k}", len(family))
        if not stabilizer_group(qd, I).is_finite():
            return RegularValueCertificate(False, I, f"infinite stabilizer at {list(I)}", len(family))
    return RegularValueCertificate(True, None, "all strata have finite stabilizers", len(family))


@dataclass(frozen=True)
class ProperCertificate:
    passed: bool
    witness: Optional[tuple] = None
    direction: Optional[tuple] = None
    farkas: Optional[tuple] = None
    reason: str = ""


def level_system(qd: QuotientData):
    """``(A, b)`` with ``{s : A s >= b}`` the moment level ``{s >= 0, W s = tau}``."""
    d = qd.d
    rows = [tuple(1 if i == a else 0 for i in range(d)) for a in range(d)]
    b = [Fraction(0)] * d
    for row, t in zip(qd.weights.rows, qd.tau):
        rows.append(tuple(row))
        b.append(t)
        rows.append(tuple(-x for x in row))
        b.append(-t)
    return Matrix(rows, d), b


def check_proper(qd: QuotientData) -> ProperCertificate:
    """Nonempty and compact moment level, i.e. the moment map is proper."""
    A, b = level_system(qd)
    cert = lp_check(A, b, "bounded")
    if not cert.feasible:
        return ProperCertificate(False, farkas=cert.farkas, reason="tau is not in the weight cone")
    witness = cert.witness
    c = qd.offsets
    if c is not None and all(x >= 0 for x in c) and qd.moment(c) == qd.tau:
        witness = c
    if not cert.bounded:
        return ProperCertificate(False, witness, cert.direction, reason="moment level is unbounded")
    return ProperCertificate(True, witness, reason="moment level is nonempty and compact")


def level_polytope(qd: QuotientData) -> HPolytope:
    """The moment level ``{s >= 0, W s = tau}`` as a (lower dimensional) polytope in ``Q^d``."""
    A, b = level_system(qd)
    return HPolytope.from_inequalities(A, b)


def slice_chart(qd: QuotientData):
    """``(base, basis)`` with the slice ``{W s = tau}`` equal to ``base + span(basis columns)``."""
    K = kernel_basis(qd.weights)
    base = None
    if qd.offsets is not None and qd.moment(qd.offsets) == qd.tau:
        base = qd.offsets
    if base is None:
        base = solve_rational(qd.weights, qd.tau)
    if base is None:
        raise EmptyPolytope("the affine slice W s = tau is empty")
    return tuple(Fraction(x) for x in base), K


def delta_tau(qd: QuotientData) -> HPolytope:
    """The moment level in coordinates ``y`` on the slice: ``s = base + K y``."""
    base, K = slice_chart(qd)
    normals, offsets = [], []
    for a in range(qd.d):
        row = K.row(a)
        if any(row):
            normals.append(row)
            offsets.append(base[a])
        elif base[a] < 0:
            raise EmptyPolytope(f"coordinate {a + 1} is forced negative on the slice")
    return HPolytope(normals, offsets, K.ncols)


def embedded_polytope(sp: StackyPolytope) -> HPolytope:
    """The polytope embedded in ``Q^d`` as the points ``(<x, n_a> + c_a)_a``.

    Written as ``{s >= 0}`` intersected with the affine span ``c + im(N)``, the
    latter cut out by the left kernel of the normal matrix.
    """
    d = sp.d
    Nmat = Matrix(sp.normals, sp.r)
    L = kernel_basis(Nmat.T).T
    rows = [tuple(1 if i == a else 0 for i in range(d)) for a in range(d)]
    b = [Fraction(0)] * d
    for row in L.rows:
        t = sum(x * c for x, c in zip(row, sp.offsets))
        rows.append(tuple(row))
        b.append(t)
        rows.append(tuple(-x for x in row))
        b.append(-t)
    return HPolytope.from_inequalities(Matrix(rows, d), b)


def embed_point(sp: StackyPolytope, eta) -> tuple:
    """``eta -> (<eta, nbar_a> + c_a)_a``."""
    return tuple(sum(Fraction(x) * n for x, n in zip(eta, sp.normals[a])) + sp.offsets[a]
                 for a in range(sp.d))


# ---------------------------------------------------------------------------
# stabilizers


@dataclass(frozen=True)
class StabilizerReport:
    stratum: tuple
    invariants: tuple
    order: Optional[int]
    free_rank: int = 0

    @property
    def trivial(self) -> bool:
        return self.order == 1


def stabilizer_group(qd: QuotientData, I) -> FGAbelianGroup:
    """Character group of the stabilizer: ``DG / <beta_dg(e^a) : a not in I>``."""
    off = [a for a in range(qd.d) if a not in set(I)]
    pres = qd.dg.presentation.hstack(qd.beta_dg.select_columns(off))
    return FGAbelianGroup(pres)


def stabilizer(qd: QuotientData, I, family: Optional[StrataFamily] = None) -> StabilizerReport:
    family = family if family is not None else qd.strata
    I = tuple(sorted(set(I)))
    if family is not None and I not in family:
        raise StratumNotInFamily(f"stratum {[a + 1 for a in I]} is not in the level-set family")
    grp = stabilizer_group(qd, I)
    return StabilizerReport(I, grp.torsion, grp.order, grp.free_rank)


def stabilizers(qd: QuotientData, family: Optional[StrataFamily] = None) -> list:
    family = family if family is not None else qd.strata
    return [stabilizer(qd, I, family) for I in family.sorted()]


# ---------------------------------------------------------------------------
# constructors


def from_torus_quotient(k: int, rho, c: Sequence) -> StackyPolytope:
    """Stacky polytope of ``C^d //_tau T^k`` for weights ``rho`` (``k x d``) and offsets ``c``."""
    rho = rho if isinstance(rho, Matrix) else Matrix(rho, len(c))
    if rho.nrows != k:
        raise ValueError(f"rho has {rho.nrows} rows, expected {k}")
    if rho.ncols != len(c):
        raise ValueError(f"rho has {rho.ncols} columns but {len(c)} offsets were given")
    if rank(rho) != k:
        raise RankDeficientRho(f"rho has rank {rank(rho)} < {k}")
    d = rho.ncols
    N = FGAbelianGroup(rho.T)
    sp = StackyPolytope.from_matrix(N, Matrix.identity(d) if d else Matrix.zeros(0, 0), c)
    cert = sp.polytope.lp("bounded")
    if not cert.feasible or not cert.bounded:
        raise EmptyOrUnboundedPolytope("the polytope of the torus quotient is empty or unbounded")
    qd = QuotientData.from_weights(rho, [sum(Fraction(x) * ci for x, ci in zip(row, c)) for row in rho.rows], c)
    reg = check_regular_value(qd, sp.polytope.face_tight_sets())
    if not reg.passed:
        raise NotRegularValue(f"tau is not a regular value: {reg.reason}")
    require_valid(sp, STRICT)
    return sp


def wps(weights: Sequence[int]) -> StackyPolytope:
    """Weighted projective space ``P(w)``: offsets ``(0, ..., 0, 1/w_d)`` so that ``tau = 1``."""
    w = [int(x) for x in weights]
    if not w or any(x < 1 for x in w):
        raise ValueError("weights must be positive integers")
    c = [Fraction(0)] * (len(w) - 1) + [Fraction(1, w[-1])]
    return from_torus_quotient(1, Matrix([w]), c)


# ---------------------------------------------------------------------------
# labelled polytopes


@dataclass(frozen=True)
class LabelledPolytope:
    polytope: HPolytope
    primitive_normals: tuple
    labels: tuple


def to_labelled(sp: StackyPolytope) -> LabelledPolytope:
    """Split ``beta(e_a) = m_a nu_a`` with ``nu_a`` primitive in ``N``."""
    if not sp.N.is_free():
        raise NotFreeError(f"N = {sp.N.describe()} has torsion; labels need a free N")
    labels, prims, offs = [], [], []
    for n, c in zip(sp.normals, sp.offsets):
        m = reduce(gcd, n, 0)
        if m == 0:
            raise InvalidStackyPolytope("zero facet normal has no label")
        labels.append(m)
        prims.append(tuple(x // m for x in n))
        offs.append(c / m)
    P = HPolytope(prims, offs, sp.r)
    return LabelledPolytope(P, tuple(prims), tuple(labels))
