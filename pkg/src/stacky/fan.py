"""
Stacky fans, normal fans of stacky polytopes and irrelevant-ideal strata.

Cones are stored combinatorially as sets of ray indices; the geometry is
carried by the ray generators.  The irrelevant-ideal generator of a cone is
the product of the variables off the cone, stored as that index set.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Optional

from .abgroup import FGAbelianGroup, GroupHom, gale_dual, image_lattice
from .errors import InvalidFan
from .intlinalg import Matrix, cokernel_invariants, primitive, vectors_rank
from .polytope import StrataFamily
from .quotient import STRICT, StackyPolytope, f_tau, quotient_data, require_valid


@dataclass(frozen=True)
class StackyFan:
    N: FGAbelianGroup
    beta: GroupHom
    cones: StrataFamily

    @classmethod
    def from_matrix(cls, N: FGAbelianGroup, beta, cones: Iterable[Iterable[int]], d: Optional[int] = None):
        beta = beta if isinstance(beta, Matrix) else Matrix(beta, d)
        d = beta.ncols
        fam = StrataFamily.downward_closure(list(cones) + [()], d)
        return cls(N, GroupHom(FGAbelianGroup.free(d), N, beta), fam)

    @property
    def d(self) -> int:
        return self.beta.source.ngens

    @property
    def r(self) -> int:
        return self.N.free_rank

    @cached_property
    def rays(self) -> tuple:
        """``nbar_a`` in coordinates of ``Lambda = Z^r``."""
        proj = image_lattice(self.N)[1].lift
        img = proj @ self.beta.lift
        return tuple(img.col(a) for a in range(self.d))

    def maximal_cones(self) -> list:
        return self.cones.maximal()


@dataclass(frozen=True)
class FanCheck:
    condition: str
    passed: bool
    message: str = ""
    witness: Optional[dict] = None


@dataclass(frozen=True)
class FanValidationReport:
    verdicts: tuple
    complete: Optional[bool] = None

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def verdict(self, condition: str) -> FanCheck:
        return next(v for v in self.verdicts if v.condition == condition)

    def failures(self) -> list:
        return [v for v in self.verdicts if not v.passed]


def normal_fan(sp: StackyPolytope, mode: str = STRICT) -> StackyFan:
    """One cone per nonempty face: the set of facets containing it."""
    require_valid(sp, mode)
    cones = sp.polytope.face_tight_sets()
    return StackyFan(sp.N, sp.beta, cones)


def validate_fan(sf: StackyFan) -> FanValidationReport:
    verdicts = []
    r = sf.r
    bad = next((c for c in sf.cones.sorted() if vectors_rank([sf.rays[a] for a in c], r) < len(c)), None)
    if bad is None:
        verdicts.append(FanCheck("simplicial", True, "every cone has independent generators"))
    else:
        verdicts.append(FanCheck("simplicial", False,
                                 f"cone {[a + 1 for a in bad]} has dependent generators",
                                 {"cone": [a + 1 for a in bad]}))

    zero = [a for a, v in enumerate(sf.rays) if not any(v)]
    missing = [a for a in range(sf.d) if (a,) not in sf.cones]
    seen, dup = {}, None
    for a, v in enumerate(sf.rays):
        if not any(v):
            continue
        key = primitive(v)
        if key in seen:
            dup = (seen[key], a)
            break
        seen[key] = a
    if zero:
        verdicts.append(FanCheck("rays", False, f"ray {zero[0] + 1} has zero generator",
                                 {"zero_rays": [a + 1 for a in zero]}))
    elif missing:
        verdicts.append(FanCheck("rays", False, f"ray {missing[0] + 1} is not a cone of the fan",
                                 {"missing_rays": [a + 1 for a in missing]}))
    elif dup:
        verdicts.append(FanCheck("rays", False, f"rays {dup[0] + 1} and {dup[1] + 1} coincide",
                                 {"duplicate_rays": [a + 1 for a in dup]}))
    else:
        verdicts.append(FanCheck("rays", True, "each generator spans its own ray"))

    free, tors = cokernel_invariants(sf.beta.lift.hstack(sf.N.presentation))
    if free:
        verdicts.append(FanCheck("finite_cokernel", False, f"coker(beta) has free rank {free}",
                                 {"free_rank": free}))
    else:
        verdicts.append(FanCheck("finite_cokernel", True, "coker(beta) is finite"))
    complete = _looks_complete(sf) if all(v.passed for v in verdicts[:2]) else None
    return FanValidationReport(tuple(verdicts), complete)


def _looks_complete(sf: StackyFan) -> bool:
    # pseudomanifold test: full-dimensional maximal cones, each wall in exactly two
    r = sf.r
    top = [frozenset(c) for c in sf.cones.maximal()]
    if r == 0:
        return True
    if not top or any(len(c) != r for c in top):
        return False
    walls = {}
    for c in top:
        for a in c:
            walls.setdefault(c - {a}, []).append(c)
    return all(len(v) == 2 for v in walls.values())


def require_valid_fan(sf: StackyFan) -> FanValidationReport:
    report = validate_fan(sf)
    if not report.passed:
        raise InvalidFan("not a stacky fan: " + "; ".join(v.message for v in report.failures()), report)
    return report


@dataclass(frozen=True)
class MonomialGeneratorSet:
    """Complements of cones: ``all`` has one per cone, ``minimal`` one per maximal cone."""

    d: int
    all: tuple
    minimal: tuple

    def vanishing_locus_contains(self, I) -> bool:
        """Whether points with zero set ``I`` lie in ``V(J)``: every generator meets ``I``."""
        I = set(I)
        return all(I & set(g) for g in self.minimal)


def irrelevant_generators(sf: StackyFan) -> MonomialGeneratorSet:
    require_valid_fan(sf)
    full = set(range(sf.d))
    every = tuple(tuple(sorted(full - set(c))) for c in sf.cones.sorted())
    minimal = tuple(tuple(sorted(full - set(c))) for c in sorted(sf.cones.maximal()))
    return MonomialGeneratorSet(sf.d, every, minimal)


def admissible_family(sf: StackyFan) -> StrataFamily:
    """Zero sets ``I`` outside the irrelevant locus: some generator avoids ``I``."""
    gens = irrelevant_generators(sf)
    out = []
    for k in range(sf.d + 1):
        for I in combinations(range(sf.d), k):
            if not gens.vanishing_locus_contains(I):
                out.append(I)
    return StrataFamily(out, sf.d)


@dataclass(frozen=True)
class EquivalenceCertificate:
    passed: bool
    families_equal: bool
    only_in_level_set: tuple
    only_in_fan: tuple
    shared_data: dict
    mismatches: tuple = ()


def correspondence_check(sp: StackyPolytope, mode: str = STRICT) -> EquivalenceCertificate:
    """Combinatorial witness that the polytope and fan stacks agree.

    The level-set family must equal the fan's admissible family, and both
    sides must produce the same Gale dual, weights and level from ``(N, beta)``.
    """
    fam = f_tau(sp, mode)
    qd = quotient_data(sp, mode)
    sf = normal_fan(sp, mode)
    adm = admissible_family(sf)
    only_level = tuple(fam.difference(adm))
    only_fan = tuple(adm.difference(fam))

    g = gale_dual(sf.beta)
    fan_tau = tuple(sum(Fraction(w) * c for w, c in zip(row, sp.offsets)) for row in g.weights.rows)
    mismatches = []
    if (sf.N, sf.beta) != (sp.N, sp.beta):
        mismatches.append("N/beta")
    if g.dg.invariants != qd.dg.invariants:
        mismatches.append("DG invariants")
    if g.weights != qd.weights:
        mismatches.append("weights")
    if fan_tau != qd.tau:
        mismatches.append("tau")
    shared = {
        "dg": g.dg.invariants,
        "weights": g.weights,
        "tau": fan_tau,
    }
    ok = not only_level and not only_fan and not mismatches
    return EquivalenceCertificate(ok, not only_level and not only_fan, only_level, only_fan,
                                  shared, tuple(mismatches))
