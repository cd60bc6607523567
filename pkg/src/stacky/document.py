"""
Input and report documents.

Documents are JSON.  The canonical serialization is UTF-8 with sorted keys,
two-space indentation, integers unquoted and rationals written as ``"p/q"``
strings in lowest terms with ``q > 0``.  Facet and ray indices are 1-based in
documents and 0-based everywhere else; conversion happens here only.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional

from .abgroup import FGAbelianGroup
from .errors import RangeError, RationalFormatError, SchemaError
from .fan import StackyFan
from .intlinalg import Matrix
from .quotient import StackyPolytope, from_torus_quotient, wps

SCHEMA_VERSION = 1
KINDS = ("stacky_polytope", "stacky_fan", "torus_quotient", "wps")
POLYTOPE_KINDS = ("stacky_polytope", "torus_quotient", "wps")

_RATIONAL = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(-?\d+)\s*)?$")


def format_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(value, path: str = "") -> Fraction:
    if isinstance(value, bool):
        raise RationalFormatError("expected a rational, got a boolean", path)
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise RationalFormatError(f"expected a \"p/q\" string, got {type(value).__name__}", path)
    m = _RATIONAL.match(value)
    if not m:
        raise RationalFormatError(f"cannot read {value!r} as \"p/q\"", path)
    p = int(m.group(1))
    q = int(m.group(2)) if m.group(2) is not None else 1
    if q <= 0:
        raise RationalFormatError(f"denominator of {value!r} must be positive", path)
    x = Fraction(p, q)
    if x.denominator != q:
        raise RationalFormatError(f"{value!r} is not in lowest terms", path)
    return x


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _int(value, path):
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"expected an integer, got {json.dumps(value)}", path)
    return value


def _list(value, path):
    if not isinstance(value, list):
        raise SchemaError(f"expected an array, got {type(value).__name__}", path)
    return value


def _int_matrix(value, path, ncols=None):
    rows = _list(value, path)
    out = []
    for i, row in enumerate(rows):
        row = _list(row, f"{path}[{i}]")
        out.append([_int(x, f"{path}[{i}][{j}]") for j, x in enumerate(row)])
        if ncols is None:
            ncols = len(out[0])
        if len(out[-1]) != ncols:
            raise SchemaError(f"row has {len(out[-1])} entries, expected {ncols}", f"{path}[{i}]")
    return out


@dataclass(frozen=True)
class InputDocument:
    kind: str
    schema_version: int = SCHEMA_VERSION
    N: Optional[tuple] = None          # (free_rank, torsion)
    beta: Optional[tuple] = None       # t x d integer rows
    offsets: Optional[tuple] = None    # Fractions
    cones: Optional[tuple] = None      # 0-based ray index tuples
    rho: Optional[tuple] = None        # k x d integer rows
    weights: Optional[tuple] = None

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "schema_version": self.schema_version}
        if self.N is not None:
            out["N"] = {"free_rank": self.N[0], "torsion": list(self.N[1])}
        if self.beta is not None:
            out["beta"] = [list(r) for r in self.beta]
        if self.offsets is not None:
            out["offsets"] = [format_rational(c) for c in self.offsets]
        if self.cones is not None:
            out["cones"] = [[a + 1 for a in c] for c in self.cones]
        if self.rho is not None:
            out["rho"] = [list(r) for r in self.rho]
        if self.weights is not None:
            out["weights"] = list(self.weights)
        return out

    @property
    def d(self) -> int:
        if self.kind == "wps":
            return len(self.weights)
        if self.kind == "torus_quotient":
            return len(self.offsets)
        return len(self.beta[0]) if self.beta else 0

    def group(self) -> FGAbelianGroup:
        return FGAbelianGroup.from_invariants(self.N[0], self.N[1])

    def beta_matrix(self) -> Matrix:
        t = self.N[0] + len(self.N[1])
        d = len(self.beta[0]) if self.beta else (len(self.offsets) if self.offsets is not None else 0)
        return Matrix(self.beta, d) if self.beta else Matrix.zeros(t, d)

    def to_stacky_polytope(self) -> StackyPolytope:
        if self.kind == "stacky_polytope":
            return StackyPolytope.from_matrix(self.group(), self.beta_matrix(), self.offsets)
        if self.kind == "torus_quotient":
            rho = Matrix(self.rho, len(self.offsets))
            return from_torus_quotient(rho.nrows, rho, self.offsets)
        if self.kind == "wps":
            return wps(self.weights)
        raise SchemaError(f"a {self.kind} document does not describe a stacky polytope", "$.kind")

    def to_stacky_fan(self) -> StackyFan:
        if self.kind != "stacky_fan":
            raise SchemaError(f"a {self.kind} document does not describe a stacky fan", "$.kind")
        return StackyFan.from_matrix(self.group(), self.beta_matrix(), self.cones)


def document_from_polytope(sp: StackyPolytope) -> InputDocument:
    """Canonical ``stacky_polytope`` document for ``sp``."""
    c = sp.canonicalized()
    return InputDocument(
        kind="stacky_polytope",
        N=(c.N.free_rank, tuple(c.N.torsion)),
        beta=tuple(tuple(r) for r in c.beta.lift.rows),
        offsets=c.offsets,
    )


def parse(text) -> InputDocument:
    """Parse and validate an input document."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SchemaError(f"input is not UTF-8: {exc}")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    return parse_object(raw)


def parse_object(raw) -> InputDocument:
    if not isinstance(raw, dict):
        raise SchemaError("document must be an object", "$")
    version = raw.get("schema_version", SCHEMA_VERSION)
    if _int(version, "$.schema_version") != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version {version}", "$.schema_version")
    kind = raw.get("kind")
    if kind not in KINDS:
        raise SchemaError(f"kind must be one of {', '.join(KINDS)}", "$.kind")
    allowed = {
        "stacky_polytope": {"N", "beta", "offsets"},
        "stacky_fan": {"N", "beta", "cones"},
        "torus_quotient": {"rho", "offsets"},
        "wps": {"weights"},
    }[kind]
    extra = set(raw) - allowed - {"kind", "schema_version"}
    if extra:
        raise SchemaError(f"unexpected field(s) {sorted(extra)} for kind {kind}", "$")
    missing = allowed - set(raw)
    if missing:
        raise SchemaError(f"missing field(s) {sorted(missing)} for kind {kind}", "$")

    if kind == "wps":
        w = [_int(x, f"$.weights[{i}]") for i, x in enumerate(_list(raw["weights"], "$.weights"))]
        if not w:
            raise SchemaError("weights must be nonempty", "$.weights")
        for i, x in enumerate(w):
            if x < 1:
                raise RangeError(f"weight {x} must be a positive integer", f"$.weights[{i}]")
        return InputDocument(kind=kind, weights=tuple(w))

    if kind == "torus_quotient":
        offsets = _offsets(raw["offsets"])
        rho = _int_matrix(raw["rho"], "$.rho", len(offsets))
        if not rho:
            raise SchemaError("rho needs at least one row", "$.rho")
        return InputDocument(kind=kind, rho=tuple(map(tuple, rho)), offsets=offsets)

    N = _group(raw["N"])
    t = N[0] + len(N[1])
    if kind == "stacky_polytope":
        offsets = _offsets(raw["offsets"])
        d = len(offsets)
    else:
        d = None
    beta = _int_matrix(raw["beta"], "$.beta", d)
    if len(beta) != t:
        raise SchemaError(f"beta has {len(beta)} rows but N has {t} generators", "$.beta")
    if kind == "stacky_polytope":
        if t == 0 and d:
            raise SchemaError("beta cannot have columns when N = 0", "$.beta")
        return InputDocument(kind=kind, N=N, beta=tuple(map(tuple, beta)), offsets=offsets)

    d = len(beta[0]) if beta else 0
    cones = []
    for i, cone in enumerate(_list(raw["cones"], "$.cones")):
        idx = [_int(a, f"$.cones[{i}][{j}]") for j, a in enumerate(_list(cone, f"$.cones[{i}]"))]
        for j, a in enumerate(idx):
            if not 1 <= a <= d:
                raise RangeError(f"ray index {a} outside 1..{d}", f"$.cones[{i}][{j}]")
        if len(set(idx)) != len(idx):
            raise SchemaError("repeated ray index", f"$.cones[{i}]")
        cones.append(tuple(sorted(a - 1 for a in idx)))
    return InputDocument(kind=kind, N=N, beta=tuple(map(tuple, beta)), cones=tuple(cones))


def _offsets(value):
    return tuple(parse_rational(x, f"$.offsets[{i}]") for i, x in enumerate(_list(value, "$.offsets")))


def _group(value):
    if not isinstance(value, dict):
        raise SchemaError("N must be an object with free_rank and torsion", "$.N")
    extra = set(value) - {"free_rank", "torsion"}
    if extra:
        raise SchemaError(f"unexpected field(s) {sorted(extra)}", "$.N")
    free = _int(value.get("free_rank"), "$.N.free_rank")
    if free < 0:
        raise RangeError("free_rank must be nonnegative", "$.N.free_rank")
    tors = [_int(x, f"$.N.torsion[{i}]") for i, x in enumerate(_list(value.get("torsion", []), "$.N.torsion"))]
    for i, x in enumerate(tors):
        if x <= 1:
            raise SchemaError(f"torsion factor {x} must exceed 1", f"$.N.torsion[{i}]")
    for i in range(1, len(tors)):
        if tors[i] % tors[i - 1]:
            raise SchemaError(f"torsion factors {tors} do not form a divisibility chain", "$.N.torsion")
    return (free, tuple(tors))


def serialize(doc: InputDocument) -> str:
    return canonical_json(doc.to_dict())


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class ReportDocument:
    command: str
    exit_code: int
    body: dict

    def to_dict(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "command": self.command,
                "exit_code": self.exit_code, "units": "pi", "report": self.body}

    @property
    def passed(self) -> bool:
        return self.exit_code == 0


def serialize_report(report: ReportDocument) -> str:
    return canonical_json(report.to_dict())


def parse_report(text: str) -> ReportDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    if not isinstance(raw, dict) or not {"command", "exit_code", "report"} <= set(raw):
        raise SchemaError("report must have command, exit_code and report fields", "$")
    return ReportDocument(raw["command"], _int(raw["exit_code"], "$.exit_code"), raw["report"])
