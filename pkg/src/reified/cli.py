"""Batch command line front end.

Every command reads one JSON document (a file path, or ``-`` for stdin)
and writes a JSON document holding the result and a provenance block.
Exit status is 0 on success, 1 on a domain error (reported by class name)
and 2 when the input does not parse against the command's schema.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
from fractions import Fraction
from typing import Any, Callable

from reified import __version__
from reified import cover as cov
from reified import disc, division, stone, tate, values, witt
from reified.errors import ReifiedError
from reified.poly import Poly
from reified.values import Magnitude, Value

PRECISION_ENV = "REIFIED_PRECISION"
DEFAULT_PRECISION = 20


class SchemaError(Exception):
    pass


class Node:
    """A JSON value together with its path, for error positions."""

    def __init__(self, value: Any, path: str = "$"):
        self.value = value
        self.path = path

    def __getitem__(self, key) -> Node:
        v = self.value
        if isinstance(key, int):
            if not isinstance(v, list) or key >= len(v):
                raise SchemaError(f"{self.path}: missing item {key}")
            return Node(v[key], f"{self.path}[{key}]")
        if not isinstance(v, dict) or key not in v:
            raise SchemaError(f"{self.path}: missing key {key!r}")
        return Node(v[key], f"{self.path}.{key}")

    def get(self, key, default=None) -> Node:
        if isinstance(self.value, dict) and key in self.value:
            return self[key]
        return Node(default, f"{self.path}.{key}")

    def has(self, key) -> bool:
        return isinstance(self.value, dict) and key in self.value

    def items(self) -> list[Node]:
        if not isinstance(self.value, list):
            raise SchemaError(f"{self.path}: expected a list")
        return [self[i] for i in range(len(self.value))]

    def conv(self, fn: Callable, what: str):
        try:
            return fn(self.value)
        except SchemaError:
            raise
        except (KeyError, TypeError, ValueError, ZeroDivisionError, AttributeError) as exc:
            raise SchemaError(f"{self.path}: expected {what} ({exc})") from None


# -- input decoding -------------------------------------------------------------

def field_of(doc: Node) -> disc.BaseField:
    return doc.get("field", {"mode": "padic", "p": 2, "group": "Q"}).conv(disc.BaseField.from_json, "a base field")


def mag_of(node: Node, p: int) -> Magnitude:
    return node.conv(lambda v: Magnitude.from_json(v, p), "a magnitude")


def value_of(node: Node, p: int) -> Value:
    return node.conv(lambda v: Value.from_json(v, p), "a value")


def poly_of(node: Node) -> Poly:
    return node.conv(Poly.from_json, "a coefficient list")


def point_of(K: disc.BaseField, node: Node) -> disc.DiscPoint:
    if node.conv(lambda v: v.get("type"), "a point object") == "type4":
        disc.type4_point()
    return node.conv(lambda v: disc.point_from_json(K, v), "a disc point")


def subspace_of(K: disc.BaseField, node: Node) -> disc.RationalSubspace:
    f0 = poly_of(node.get("f0", ["1/1"]))
    params = [poly_of(n) for n in node["params"].items()]
    scales = [mag_of(n, K.p) for n in node["scales"].items()]
    if len(params) != len(scales):
        raise SchemaError(f"{node.path}: need one scale per parameter")
    return disc.RationalSubspace(K, f0, params, scales)


def fraction_of(node: Node) -> Fraction:
    return node.conv(lambda v: Fraction(v), "a rational")


def int_of(node: Node) -> int:
    def conv(v):
        if isinstance(v, bool) or not isinstance(v, int):
            raise TypeError(f"{v!r} is not an integer")
        return v
    return node.conv(conv, "an integer")


def witt_of(node: Node, p: int) -> witt.WittVector:
    def conv(v):
        M = v.get("M")
        M = None if M is None else Fraction(M)
        return witt.WittVector(p, tuple(witt.PerfectElement.from_json(p, c, M) for c in v["coords"]), M)
    return node.conv(conv, "a Witt vector")


def perfect_of(node: Node, p: int) -> witt.PerfectElement:
    return node.conv(lambda v: witt.PerfectElement.from_json(p, v), "a perfect element")


def laurent_of(node: Node) -> dict:
    return node.conv(lambda v: tate.laurent_clean({int(k): Fraction(c) for k, c in v.items()}), "a Laurent polynomial")


def encode_laurent(a: dict) -> dict:
    return {str(n): values.format_fraction(c) for n, c in sorted(a.items())}


def precision_default(p: int) -> Magnitude:
    raw = os.environ.get(PRECISION_ENV, str(DEFAULT_PRECISION))
    try:
        k = int(raw)
    except ValueError:
        raise SchemaError(f"${PRECISION_ENV}: expected an integer, got {raw!r}") from None
    return Magnitude.ppow(-k, p)


# -- commands ---------------------------------------------------------------------
# each command maps (document, seed) to a pair (parse, run): parsing may raise
# SchemaError, running may raise ReifiedError

def _lattice(doc: Node) -> stone.FiniteLattice:
    elements = doc["elements"].conv(list, "a list of elements")
    leq = doc.get("leq", []).conv(lambda v: [tuple(pair) for pair in v], "a list of pairs")
    for i, pair in enumerate(leq):
        if len(pair) != 2:
            raise SchemaError(f"{doc.path}.leq[{i}]: expected a pair")
    zero, one = doc["zero"].value, doc["one"].value
    return lambda: stone.validate_lattice(elements, leq, zero, one)


def cmd_lattice_validate(doc, seed):
    build = _lattice(doc)

    def run():
        D = build()
        return {"valid": True, "elements": list(D.elements),
                "meet": {f"{a},{b}": D.meet[a, b] for a in D.elements for b in D.elements},
                "join": {f"{a},{b}": D.join[a, b] for a in D.elements for b in D.elements}}
    return run


def cmd_lattice_spec(doc, seed):
    build = _lattice(doc)

    def run():
        sp = stone.spec_space(build())
        return {"prime_filters": [sorted(F) for F in sp.filters], "space": sp.space.to_json(),
                "patch": [sorted(U) for U in stone.patch_sets(sp.space)]}
    return run


def cmd_lattice_stone(doc, seed):
    build = _lattice(doc)
    return lambda: stone.stone_roundtrip(build()).to_json()


def cmd_lattice_spectralify(doc, seed):
    X = doc.conv(stone.space_from_json, "a finite space")

    def run():
        r = stone.spectralify(X)
        out = r.to_json()
        out["input_t0"] = X.is_t0()
        out["sober"] = r.space.is_sober()
        return out
    return run


def cmd_value_cmp(doc, seed):
    p = int_of(doc.get("p", 2))
    x, y = value_of(doc["x"], p), value_of(doc["y"], p)
    return lambda: {"cmp": values.value_cmp(x, y).name}


def cmd_value_mul(doc, seed):
    p = int_of(doc.get("p", 2))
    x, y = value_of(doc["x"], p), value_of(doc["y"], p)
    return lambda: {"product": values.value_mul(x, y).to_json()}


def cmd_value_retract(doc, seed):
    K = field_of(doc)
    x = point_of(K, doc["point"])
    polys = [poly_of(n) for n in doc["polys"].items()]

    def run():
        r = values.retract(x)
        return {"values": [x(P).to_json() for P in polys], "retracted": [r(P).to_json() for P in polys]}
    return run


def cmd_value_axioms(doc, seed):
    K = field_of(doc)
    x = point_of(K, doc["point"])
    items = [poly_of(n) for n in doc["items"].items()]
    scales = [mag_of(n, K.p) for n in doc.get("scales", [{"c": "1/1", "e": "0/1"}]).items()]

    def run():
        t = values.order_tuple_of(x, items, scales, zero=Poly(), one=Poly.const(1))
        bad = values.check_axioms(t)
        return {"violations": [v.to_json() for v in bad], "entries": len(t.entries),
                "kernel": [repr(a) for a in values.kernel_of(t)]}
    return run


def cmd_point_classify(doc, seed):
    K = field_of(doc)
    x = point_of(K, doc["point"])
    return lambda: {"type": disc.classify(x)}


def cmd_point_eval(doc, seed):
    K = field_of(doc)
    x = point_of(K, doc["point"])
    P = poly_of(doc["poly"])
    return lambda: {"value": x(P).to_json()}


def cmd_subspace_member(doc, seed):
    K = field_of(doc)
    x = point_of(K, doc["point"])
    U = subspace_of(K, doc["subspace"])
    return lambda: {"member": disc.member(x, U)}


def cmd_subspace_intersect(doc, seed):
    K = field_of(doc)
    U, V = subspace_of(K, doc["U"]), subspace_of(K, doc["V"])
    return lambda: {"subspace": disc.intersect(U, V).to_json()}


def _params_scales(doc, K):
    params = [poly_of(n) for n in doc["params"].items()]
    scales = [mag_of(n, K.p) for n in doc["scales"].items()]
    if len(params) != len(scales):
        raise SchemaError(f"{doc.path}: need one scale per parameter")
    return params, scales


def _witnesses(doc, K, seed, keep=lambda x: True):
    if doc.has("witnesses"):
        return [point_of(K, n) for n in doc["witnesses"].items()]
    count = int_of(doc.get("witness_count", 100))
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        x = disc.random_point(K, rng)
        if keep(x):
            out.append(x)
    return out


def cmd_cover_refine(doc, seed):
    K = field_of(doc)
    pieces = [subspace_of(K, n) for n in doc["cover"].items()]
    covered = lambda x: any(disc.member(x, U) for U in pieces)
    W = _witnesses(doc, K, seed, covered)
    return lambda: cov.refine_to_standard_rational(K, pieces, W).to_json()


def cmd_cover_laurent_const(doc, seed):
    K = field_of(doc)
    params, scales = _params_scales(doc, K)
    return lambda: cov.laurent_constant(K, params, scales, seed=seed).to_json()


def cmd_cover_units_to_laurent(doc, seed):
    K = field_of(doc)
    params, scales = _params_scales(doc, K)
    W = _witnesses(doc, K, seed)
    return lambda: cov.units_to_laurent(cov.StandardRationalCovering(K, params, scales), W).to_json()


def cmd_tate_norm(doc, seed):
    K = field_of(doc)
    s = doc["series"].conv(lambda v: tate.WeightedTateSeries.from_json(K, v), "a weighted series")
    return lambda: tate.gauss_norm(s).to_json()


def cmd_tate_split(doc, seed):
    def conv(v):
        out = {}
        for k, c in v.items():
            i, j = (int(e) for e in k.split(","))
            out[i, j] = Fraction(c)
        return out
    b = doc["terms"].conv(conv, "a map 'i,j' -> coefficient")
    return lambda: tate.laurent_split(b).to_json()


def cmd_cech_check(doc, seed):
    K = field_of(doc)
    q = mag_of(doc["q"], K.p)
    prec = mag_of(doc["precision"], K.p) if doc.has("precision") else precision_default(K.p)
    samples = int_of(doc.get("samples", 50))
    return lambda: tate.cech_check(K, q, prec, samples, seed).to_json()


def cmd_glue(doc, seed):
    K = field_of(doc)
    q = mag_of(doc["q"], K.p)
    tol = mag_of(doc["tol"], K.p) if doc.has("tol") else precision_default(K.p)
    max_iter = int_of(doc.get("max_iter", 30))
    M = [[laurent_of(e) for e in row.items()] for row in doc["matrix"].items()]
    if any(len(row) != len(M) for row in M):
        raise SchemaError(f"{doc.path}.matrix: expected a square matrix")
    return lambda: tate.glue_free_module(K, q, M, tol, max_iter).to_json()


def cmd_divide(doc, seed):
    p = int_of(doc.get("p", 2))
    radii = tuple(mag_of(n, p) for n in doc["radii"].items())
    n = len(radii)
    x = doc["x"].conv(lambda v: division.decode(v, n), "a polynomial map")
    G = [g.conv(lambda v: division.decode(v, n), "a polynomial map") for g in doc["G"].items()]
    order = division.WeightedOrder(radii)

    def run():
        out = division.divide(x, G, order).to_json()
        if x:
            idx, c = division.leading_term(x, order)
            out["leading"] = {"index": list(idx), "coefficient": values.format_fraction(c)}
        return out
    return run


def _witt_pair(doc):
    p = int_of(doc["p"])
    return p, witt_of(doc["a"], p), witt_of(doc["b"], p)


def cmd_witt_add(doc, seed):
    p, a, b = _witt_pair(doc)
    return lambda: (a + b).to_json()


def cmd_witt_mul(doc, seed):
    p, a, b = _witt_pair(doc)
    return lambda: (a * b).to_json()


def cmd_witt_teich(doc, seed):
    p = int_of(doc["p"])
    N = int_of(doc["N"])
    x = perfect_of(doc["x"], p)
    return lambda: witt.teichmuller(x, N).to_json()


def _primitive(doc, p):
    if doc.has("z"):
        return witt_of(doc["z"], p)
    return witt.standard_primitive(p, int_of(doc.get("N", 2)))


def cmd_witt_primitive(doc, seed):
    p = int_of(doc["p"])
    z = _primitive(doc, p)
    return lambda: check_and_digits(z)


def check_and_digits(z):
    out = witt.check_primitive_degree_one(z).to_json()
    out["digits"] = [d.to_json() for d in z.digits()]
    return out


def cmd_witt_theta_eq(doc, seed):
    p = int_of(doc["p"])
    y1, y2 = witt_of(doc["y1"], p), witt_of(doc["y2"], p)
    z = _primitive(doc, p)
    return lambda: {"equal": witt.theta_equal(y1, y2, z.truncate(y1.N) if z.N > y1.N else z)}


def cmd_witt_tilt_add(doc, seed):
    p = int_of(doc["p"])
    xs = [witt_of(n, p) for n in doc["xs"].items()]
    ys = [witt_of(n, p) for n in doc["ys"].items()]
    z = _primitive(doc, p)
    depth = int_of(doc["depth"])
    strict = doc.get("strict", False).conv(bool, "a boolean")
    return lambda: witt.tilt_add(xs, ys, z, depth, strict).to_json()


COMMANDS: dict[str, dict[str, Callable]] = {
    "lattice": {"validate": cmd_lattice_validate, "spec": cmd_lattice_spec,
                "stone": cmd_lattice_stone, "spectralify": cmd_lattice_spectralify},
    "value": {"cmp": cmd_value_cmp, "mul": cmd_value_mul, "retract": cmd_value_retract,
              "axioms": cmd_value_axioms},
    "point": {"classify": cmd_point_classify, "eval": cmd_point_eval},
    "subspace": {"member": cmd_subspace_member, "intersect": cmd_subspace_intersect},
    "cover": {"refine": cmd_cover_refine, "laurent-const": cmd_cover_laurent_const,
              "units-to-laurent": cmd_cover_units_to_laurent},
    "tate": {"norm": cmd_tate_norm, "split": cmd_tate_split},
    "cech": {"check": cmd_cech_check},
    "glue": {None: cmd_glue},
    "divide": {None: cmd_divide},
    "witt": {"add": cmd_witt_add, "mul": cmd_witt_mul, "teich": cmd_witt_teich,
             "primitive": cmd_witt_primitive, "theta-eq": cmd_witt_theta_eq,
             "tilt-add": cmd_witt_tilt_add},
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reified", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    groups = parser.add_subparsers(dest="group", required=True)
    for group, actions in COMMANDS.items():
        if None in actions:
            sub = groups.add_parser(group)
            _common(sub)
            sub.set_defaults(handler=actions[None], command=group)
            continue
        gp = groups.add_parser(group)
        acts = gp.add_subparsers(dest="action", required=True)
        for action, handler in actions.items():
            sub = acts.add_parser(action)
            _common(sub)
            sub.set_defaults(handler=handler, command=f"{group} {action}")
    return parser


def _common(sub):
    sub.add_argument("input", help="JSON input file, or - for stdin")
    sub.add_argument("--format", choices=("json", "human"), default="json")
    sub.add_argument("--seed", type=int, default=0, help="seed for randomized witnesses and samples")


def render_human(obj, prefix="") -> list[str]:
    rows: list[tuple[str, str]] = []

    def walk(o, key):
        if isinstance(o, dict) and o:
            for k in sorted(o):
                walk(o[k], f"{key}.{k}" if key else str(k))
        elif isinstance(o, list) and o and any(isinstance(e, (dict, list)) for e in o):
            for i, e in enumerate(o):
                walk(e, f"{key}[{i}]")
        else:
            rows.append((key, json.dumps(o, sort_keys=True)))

    walk(obj, prefix)
    width = max((len(k) for k, _ in rows), default=0)
    return [f"{k.ljust(width)}  {v}" for k, v in rows]


def emit(doc: dict, fmt: str, stream) -> None:
    if fmt == "json":
        stream.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    else:
        stream.write("\n".join(render_human(doc)) + "\n")


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        raw = sys.stdin.buffer.read() if args.input == "-" else open(args.input, "rb").read()
    except OSError as exc:
        stderr.write(f"error: cannot read {args.input}: {exc.strerror}\n")
        return 2
    provenance = {"command": args.command, "input_sha256": hashlib.sha256(raw).hexdigest(),
                  "version": __version__, "seed": args.seed}
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        stderr.write(f"schema error at line {exc.lineno} column {exc.colno}: {exc.msg}\n")
        return 2
    try:
        run = args.handler(Node(data), args.seed)
    except SchemaError as exc:
        stderr.write(f"schema error at {exc}\n")
        return 2
    except ReifiedError as exc:
        return _domain_error(exc, provenance, args.format, stdout, stderr)
    try:
        result = run()
    except (ReifiedError, ValueError, ArithmeticError) as exc:
        return _domain_error(exc, provenance, args.format, stdout, stderr)
    emit({"result": result, "provenance": provenance}, args.format, stdout)
    return 0


def _domain_error(exc, provenance, fmt, stdout, stderr) -> int:
    err = {"name": type(exc).__name__, "message": str(exc)}
    witness = getattr(exc, "witness", None)
    if witness is not None:
        err["witness"] = _jsonable(witness)
    for attr in ("index", "digit"):
        if hasattr(exc, attr):
            err[attr] = getattr(exc, attr)
    emit({"error": err, "provenance": provenance}, fmt, stdout)
    stderr.write(f"{err['name']}: {err['message']}\n")
    return 1


def _jsonable(w):
    if hasattr(w, "to_json"):
        return w.to_json()
    if isinstance(w, dict):
        return {str(k): _jsonable(v) for k, v in w.items()}
    if isinstance(w, (list, tuple)):
        return [_jsonable(v) for v in w]
    if isinstance(w, Fraction):
        return values.format_fraction(w)
    return w if isinstance(w, (int, str, bool, type(None))) else repr(w)


if __name__ == "__main__":
    sys.exit(main())
