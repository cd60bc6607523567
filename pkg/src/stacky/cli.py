"""Command-line front end: ``stacky <command> [--strict|--lenient] [--approx] <file|->``."""

from __future__ import annotations

import argparse
import random
import sys
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Optional

from . import corpus
from .document import (
    POLYTOPE_KINDS,
    InputDocument,
    ReportDocument,
    document_from_polytope,
    format_rational,
    parse,
    serialize,
    serialize_report,
)
from .errors import (
    EmptyOrUnboundedPolytope,
    InputError,
    InvalidFan,
    InvalidStackyPolytope,
    LPTooLarge,
    NotFreeError,
    NotRegularValue,
    RankDeficientRho,
    SchemaError,
)
from .fan import (
    admissible_family,
    correspondence_check,
    irrelevant_generators,
    normal_fan,
    validate_fan,
)
from .intlinalg import Matrix
from .quotient import (
    LENIENT,
    STRICT,
    check_proper,
    quotient_data,
    stabilizers,
    to_labelled,
    validate,
)

COMMANDS = ("validate", "quotient-data", "fan", "correspond", "stabilizers", "labelled", "wps")
EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2


def jsonable(x):
    """Exact JSON form: Fractions become ``"p/q"``, 0-based data is left alone."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, Matrix):
        return [jsonable(r) for r in x.rows]
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _sets(family):
    return [[a + 1 for a in I] for I in family]


def _verdicts(report):
    return [{"condition": v.condition, "passed": v.passed, "message": v.message,
             "witness": jsonable(v.witness)} for v in report.verdicts]


def _approx(x, digits=20) -> str:
    x = Fraction(x)
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(x.numerator) / Decimal(x.denominator))


def _quotient_body(qd) -> dict:
    proper = check_proper(qd)
    return {
        "dg": {"free_rank": qd.dg.free_rank, "torsion": list(qd.dg.torsion)},
        "group": {"torus_rank": qd.group.torus_rank,
                  "component_group": list(qd.group.component_group),
                  "description": qd.group.describe()},
        "weights": jsonable(qd.weights),
        "characters": [{"modulus": m, "row": list(row)} for m, row in qd.characters],
        "tau": jsonable(qd.tau),
        "f_tau": _sets(qd.strata.sorted()),
        "proper": {"passed": proper.passed, "reason": proper.reason,
                   "witness": jsonable(proper.witness)},
    }


def _stabilizer_body(qd) -> list:
    return [{"stratum": [a + 1 for a in s.stratum], "invariants": list(s.invariants),
             "order": s.order} for s in stabilizers(qd)]


def _fan_body(sf) -> dict:
    report = validate_fan(sf)
    body = {
        "rays": [list(v) for v in sf.rays],
        "cones": _sets(sf.cones.sorted()),
        "maximal_cones": _sets(sorted(sf.maximal_cones())),
        "fan_validation": _verdicts(report),
        "complete": report.complete,
        "passed": report.passed,
    }
    if report.passed:
        gens = irrelevant_generators(sf)
        body["irrelevant_generators"] = _sets(gens.minimal)
        body["admissible_family"] = _sets(admissible_family(sf).sorted())
    return body


def _polytope(doc: InputDocument, command: str):
    if doc.kind not in POLYTOPE_KINDS:
        raise SchemaError(f"command {command} needs a polytope document, got kind {doc.kind}", "$.kind")
    return doc.to_stacky_polytope()


def _dispatch(command: str, doc: InputDocument, mode: str) -> dict:
    if command == "validate":
        if doc.kind == "stacky_fan":
            return _fan_body(doc.to_stacky_fan())
        sp = _polytope(doc, command)
        report = validate(sp, mode)
        return {"mode": mode, "passed": report.passed, "validation": _verdicts(report),
                "warnings": list(report.warnings)}

    if command == "fan":
        if doc.kind == "stacky_fan":
            return _fan_body(doc.to_stacky_fan())
        return _fan_body(normal_fan(_polytope(doc, command), mode))

    if command == "wps" and doc.kind != "wps":
        raise SchemaError(f"command wps needs a wps document, got kind {doc.kind}", "$.kind")

    sp = _polytope(doc, command)
    if command in ("quotient-data", "wps"):
        qd = quotient_data(sp, mode)
        body = _quotient_body(qd)
        if command == "wps":
            body["polytope"] = document_from_polytope(sp).to_dict()
            body["stabilizers"] = _stabilizer_body(qd)
        body["passed"] = body["proper"]["passed"]
        return body

    if command == "stabilizers":
        qd = quotient_data(sp, mode)
        return {"passed": True, "stabilizers": _stabilizer_body(qd)}

    if command == "correspond":
        cert = correspondence_check(sp, mode)
        return {
            "passed": cert.passed,
            "families_equal": cert.families_equal,
            "only_in_level_set": _sets(cert.only_in_level_set),
            "only_in_fan": _sets(cert.only_in_fan),
            "mismatches": list(cert.mismatches),
            "shared": {"dg": {"free_rank": cert.shared_data["dg"][0],
                              "torsion": list(cert.shared_data["dg"][1])},
                       "weights": jsonable(cert.shared_data["weights"]),
                       "tau": jsonable(cert.shared_data["tau"])},
        }

    if command == "labelled":
        validate_report = validate(sp, mode)
        if not validate_report.passed:
            raise InvalidStackyPolytope("not a stacky polytope", validate_report)
        lp = to_labelled(sp)
        return {"passed": True, "labels": list(lp.labels),
                "primitive_normals": [list(n) for n in lp.primitive_normals],
                "offsets": jsonable(lp.polytope.offsets)}

    raise SchemaError(f"unknown command {command}", "$")


def _add_approx(body: dict) -> None:
    approx = {}
    for key in ("tau", "offsets"):
        if key in body:
            approx[key] = [_approx(x) for x in body[key]]
    body["approx"] = approx


def run(command: str, doc: InputDocument, mode: str = STRICT, approx: bool = False) -> ReportDocument:
    """Run ``command``; mathematical failures become exit code 1 with a witness."""
    try:
        body = _dispatch(command, doc, mode)
    except InvalidStackyPolytope as exc:
        body = {"passed": False, "error": str(exc), "validation": _verdicts(exc.report)}
    except InvalidFan as exc:
        body = {"passed": False, "error": str(exc), "fan_validation": _verdicts(exc.report)}
    except (NotFreeError, RankDeficientRho, NotRegularValue, EmptyOrUnboundedPolytope) as exc:
        body = {"passed": False, "error": str(exc), "error_type": type(exc).__name__}
    if approx:
        _add_approx(body)
    body = jsonable(body)
    return ReportDocument(command, EXIT_OK if body["passed"] else EXIT_FAILED, body)


def input_error_report(command: str, exc: Exception) -> ReportDocument:
    body = {"passed": False, "error": getattr(exc, "message", str(exc)), "error_type": type(exc).__name__}
    path = getattr(exc, "path", None)
    if path:
        body["path"] = path
    return ReportDocument(command, EXIT_INPUT, body)


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stacky", description="Stacky polytopes, fans and their quotient data.")
    p.add_argument("command", choices=COMMANDS + ("random-polygon",))
    g = p.add_mutually_exclusive_group()
    g.add_argument("--strict", dest="mode", action="store_const", const=STRICT)
    g.add_argument("--lenient", dest="mode", action="store_const", const=LENIENT)
    p.add_argument("--approx", action="store_true", help="add decimal renderings (informational)")
    p.add_argument("--max-facets", type=int, default=8, help="random-polygon only")
    p.add_argument("input", nargs="?", help="input document, or - for stdin")
    p.set_defaults(mode=STRICT)
    return p


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_intermixed_args(argv)
    out = sys.stdout

    if args.command == "random-polygon":
        seed = corpus.seed_from_env()
        sp = corpus.random_polygon(random.Random(seed), max(3, args.max_facets))
        out.write(serialize(document_from_polytope(sp)))
        print(f"stacky: random polygon with seed {seed}", file=sys.stderr)
        return EXIT_OK

    if args.input is None:
        print(f"stacky: {args.command} needs an input file (or -)", file=sys.stderr)
        return EXIT_INPUT
    try:
        doc = parse(_read(args.input))
        report = run(args.command, doc, args.mode, args.approx)
    except OSError as exc:
        report = input_error_report(args.command, exc)
    except (InputError, LPTooLarge) as exc:
        report = input_error_report(args.command, exc)

    if report.exit_code == EXIT_INPUT:
        where = f" at {report.body['path']}" if "path" in report.body else ""
        print(f"stacky: input error{where}: {report.body['error']}", file=sys.stderr)
    elif report.exit_code == EXIT_FAILED:
        print(f"stacky: {args.command} failed: {report.body.get('error') or _first_failure(report.body)}",
              file=sys.stderr)
    out.write(serialize_report(report))
    return report.exit_code


def _first_failure(body: dict) -> str:
    for key in ("validation", "fan_validation"):
        for v in body.get(key, ()):
            if not v["passed"]:
                return v["message"]
    if body.get("mismatches"):
        return "mismatch in " + ", ".join(body["mismatches"])
    if body.get("only_in_level_set") or body.get("only_in_fan"):
        return "strata families differ"
    return "check did not pass"


if __name__ == "__main__":
    sys.exit(main())
