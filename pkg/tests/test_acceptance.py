"""Acceptance run: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
Every criterion is an exact check; the time limits are wall-clock.
"""

import json
import os
import random
import sys
import time

import pytest

sys.path.insert(0, os.path.dirname(__file__))

import generators  # noqa: E402
import oracles  # noqa: E402
from stacky import cli, corpus  # noqa: E402
from stacky.abgroup import FGAbelianGroup, gale_dual, verify_gale_sequence  # noqa: E402
from stacky.document import parse  # noqa: E402
from stacky.fan import admissible_family, correspondence_check, normal_fan  # noqa: E402
from stacky.intlinalg import Matrix, snf  # noqa: E402
from stacky.polytope import StrataFamily  # noqa: E402
from stacky.quotient import (  # noqa: E402
    QuotientData,
    check_proper,
    check_regular_value,
    delta_tau,
    embedded_polytope,
    f_tau,
    from_torus_quotient,
    level_polytope,
    quotient_data,
    slice_chart,
    stabilizers,
    validate,
    wps,
)


def _timed(fn):
    t0 = time.perf_counter()
    ok, detail = fn()
    return ok, detail, time.perf_counter() - t0


# ---------------------------------------------------------------------------


def criterion_1():
    """Weighted projective spaces: G = T^1, weights w, tau = 1, N = Z^2."""
    for w in ([1, 2, 3], [1, 1, 2]):
        doc = parse(json.dumps({"kind": "wps", "weights": w}))
        report = cli.run("quotient-data", doc)
        body = report.body
        if report.exit_code != 0:
            return False, f"P{tuple(w)}: exit {report.exit_code}"
        if body["group"] != {"torus_rank": 1, "component_group": [], "description": "T^1"}:
            return False, f"P{tuple(w)}: G = {body['group']}"
        if body["weights"] != [w] or body["tau"] != ["1/1"]:
            return False, f"P{tuple(w)}: weights {body['weights']}, tau {body['tau']}"
        N = doc.to_stacky_polytope().N
        quotient = FGAbelianGroup(Matrix([[x] for x in w], 1))
        if N.invariants != (2, ()) or quotient.invariants != (2, ()):
            return False, f"P{tuple(w)}: N = {N.describe()}"
    return True, "P(1,2,3), P(1,1,2): G = T^1, w exact, tau = 1, N = Z^2"


def criterion_2():
    """Gale-sequence exactness on 200 seeded random beta."""
    betas = generators.random_betas(200, seed=20240607)
    torsion_seen = 0
    for i, beta in enumerate(betas):
        g = gale_dual(beta)
        cert = verify_gale_sequence(g)
        if not cert.passed:
            return False, f"beta #{i}: stage {cert.failing_stage}"
        if g.dg.free_rank != beta.source.ngens - beta.target.free_rank:
            return False, f"beta #{i}: rank {g.dg.free_rank}"
        torsion_seen += bool(beta.target.torsion)
    return True, f"200 maps exact ({torsion_seen} with torsion in N)"


def criterion_3():
    """f_tau = admissible family of the normal fan, with shared (N, beta, DG, weights, tau)."""
    items = corpus.standard_corpus()
    for name, sp in items.items():
        cert = correspondence_check(sp)
        if not cert.passed:
            return False, f"{name}: level-only {cert.only_in_level_set}, fan-only {cert.only_in_fan}, {cert.mismatches}"
        # second route: the zero sets of the moment level itself
        qd = quotient_data(sp)
        level = oracles.level_zero_sets(qd.weights.rows, qd.tau)
        if set(admissible_family(normal_fan(sp))) != level:
            return False, f"{name}: admissible family differs from level-set zero sets"
    return True, f"{len(items)} corpus data agree"


def criterion_4():
    """Moment level equals the embedded polytope N eta + c, as sets."""
    items = corpus.standard_corpus()
    for name, sp in items.items():
        qd = quotient_data(sp)
        if not level_polytope(qd).equal_as_sets(embedded_polytope(sp)):
            return False, f"{name}: level polytope and embedded polytope differ"
        base, K = slice_chart(qd)
        image = sorted(tuple(b + sum(K[a, j] * y[j] for j in range(K.ncols)) for a, b in enumerate(base))
                       for y in delta_tau(qd).vertices())
        if image != oracles.level_vertices(qd.weights.rows, qd.tau):
            return False, f"{name}: slice vertices differ from basic feasible solutions"
    return True, f"{len(items)} corpus data: identical vertex sets"


def criterion_5():
    """Regular value and properness; the two counterexamples fail with their witnesses."""
    items = corpus.standard_corpus()
    for name, sp in items.items():
        qd = quotient_data(sp)
        if not check_regular_value(qd, f_tau(sp)).passed:
            return False, f"{name}: not regular"
        if not check_proper(qd).passed:
            return False, f"{name}: not proper"
    fam = StrataFamily([I for I in f_tau(corpus.simplex()) if 2 not in I], 2)
    reg = check_regular_value(QuotientData.from_weights([[1, 1]], [1]), fam)
    if reg.passed or reg.witness != (0, 1):
        return False, f"dropped facet: {reg}"
    prop = check_proper(QuotientData.from_weights([[1, -1]], [0]))
    if prop.passed or prop.direction != (1, 1):
        return False, f"w = (1,-1): {prop}"
    return True, f"{len(items)} pass; counterexamples fail at I = {{1,2}} and along (1,1)"


def _oracle_agrees(qd, report):
    off = [a for a in range(qd.d) if a not in report.stratum]
    orders = oracles.brute_stabilizer(qd.dg.free_rank, qd.dg.torsion, qd.beta_dg.rows, off)
    if orders is None or len(orders) != report.order:
        return False
    return all(oracles.counts_from_orders(orders, n) == oracles.torsion_count(report.invariants, n)
               for n in range(1, report.order + 1))


def criterion_6():
    """Stabilizers of P(1,1,2) and P(1,1,1), checked against brute-force enumeration."""
    qd = quotient_data(wps([1, 1, 2]))
    reports = stabilizers(qd)
    for s in reports:
        expected = (2,) if s.stratum == (0, 1) else ()
        if s.invariants != expected or not _oracle_agrees(qd, s):
            return False, f"P(1,1,2) at {[a + 1 for a in s.stratum]}: {s.invariants}"
    qd = quotient_data(wps([1, 1, 1]))
    for s in stabilizers(qd):
        if not s.trivial or not _oracle_agrees(qd, s):
            return False, f"P(1,1,1) at {[a + 1 for a in s.stratum]}: {s.invariants}"
    return True, "P(1,1,2): Z/2 only at {1,2}; P(1,1,1): all trivial"


def criterion_7():
    """SNF on 500 matrices; vertices vs r-subsets; shape of every f_tau."""
    rng = random.Random(7)
    for i in range(500):
        m, n = rng.randint(1, 6), rng.randint(1, 6)
        M = Matrix([[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)], n)
        dec = snf(M)
        if dec.U @ M @ dec.V != dec.D:
            return False, f"matrix #{i}: U M V != D"
        if abs(oracles.det(dec.U.rows)) != 1 or abs(oracles.det(dec.V.rows)) != 1:
            return False, f"matrix #{i}: not unimodular"
        diag = [x for x in dec.diagonal if x]
        if any(b % a for a, b in zip(diag, diag[1:])):
            return False, f"matrix #{i}: divisibility chain broken"
    items = corpus.standard_corpus()
    for name, sp in items.items():
        if sp.polytope.vertices() != oracles.brute_vertices(sp.normals, sp.offsets, sp.r):
            return False, f"{name}: vertices differ from r-subset enumeration"
        fam = f_tau(sp)
        if not fam.is_subset_closed() or () not in fam:
            return False, f"{name}: f_tau not subset-closed"
        if any(len(m) != sp.r for m in fam.maximal()):
            return False, f"{name}: maximal stratum of wrong size"
    return True, f"500 SNF; {len(items)} polytopes"


def criterion_8():
    """from_torus_quotient after quotient_data is the identity on torus-quotient data."""
    items = corpus.standard_corpus()
    checked = skipped = 0
    for name, sp in items.items():
        qd = quotient_data(sp)
        if not qd.dg.is_free():
            skipped += 1  # G disconnected: not a torus quotient
            continue
        back = from_torus_quotient(qd.k, qd.weights, sp.offsets)
        qb = quotient_data(back)
        same = (validate(back).passed and f_tau(back) == f_tau(sp) and qb.dg.invariants == qd.dg.invariants
                and qb.weights == qd.weights and qb.tau == qd.tau)
        if not same:
            return False, f"{name}: round trip changed the data"
        checked += 1
    return True, f"{checked} round trips exact ({skipped} with disconnected G excluded)"


CRITERIA = [
    (1, "weighted projective reproduction", criterion_1, 1.0),
    (2, "Gale-sequence exactness", criterion_2, 10.0),
    (3, "level-set strata = fan strata", criterion_3, 5.0),
    (4, "moment level = embedded polytope", criterion_4, 5.0),
    (5, "regular value and properness", criterion_5, None),
    (6, "stabilizers", criterion_6, None),
    (7, "oracle suites", criterion_7, 30.0),
    (8, "torus-quotient round trip", criterion_8, None),
]


def _line(num, title, ok, detail, elapsed, limit):
    within = limit is None or elapsed < limit
    verdict = "PASS" if ok and within else "FAIL"
    budget = f" (limit {limit:.0f}s)" if limit else ""
    return verdict, f"[{verdict}] criterion {num}: {title}: {detail} in {elapsed:.2f}s{budget}"


@pytest.mark.parametrize("num,title,fn,limit", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(num, title, fn, limit, capsys):
    ok, detail, elapsed = _timed(fn)
    verdict, line = _line(num, title, ok, detail, elapsed, limit)
    with capsys.disabled():
        print("\n" + line)
    assert verdict == "PASS", line


if __name__ == "__main__":
    failed = 0
    for num, title, fn, limit in CRITERIA:
        ok, detail, elapsed = _timed(fn)
        verdict, line = _line(num, title, ok, detail, elapsed, limit)
        failed += verdict != "PASS"
        print(line)
    sys.exit(1 if failed else 0)
