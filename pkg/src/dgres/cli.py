"""Command-line front end: parse a workspace file, run one computation, print JSON.

Exit codes: 0 success, 1 negative verdict, 2 usage or input error,
3 resource limit or inconclusive result.
"""

import argparse
import contextlib
import json
import os
import re
import sys
from fractions import Fraction

from . import __version__
from .constructions import derived_tensor, diagonal_resolution, resolve_morphism
from .criteria import AtPoints, H0Only, WeightBounded, completion_compare, is_etale_at, is_qis
from .dga import koszul
from .dgmod import der_cohomology, perfectness_report
from .dsl import load
from .errors import (DGError, DSLError, PreconditionError, ResourceError, UnsupportedMode)
from .graded import Exact, TruncatedAtOrder, WeightExact, cohomology_dims
from .groebner import Ideal, h0_map_is_iso, h0_presentation
from .homotopy import extension_obstruction, xi_ell
from .poly import GradedRing, Poly

OK, NEGATIVE, USAGE, INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else str(v)
    if isinstance(v, Poly):
        return str(v)
    if isinstance(v, bool) or v is None or isinstance(v, (int, float, str)):
        return v
    return str(v)


def _range(text):
    m = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", text or "")
    if not m:
        raise UsageError(f"expected a range like -4..0, got {text!r}")
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo > hi:
        raise UsageError(f"empty range {text!r}")
    return lo, hi


def _mode(text, ws=None, A=None, at=None):
    if text in (None, "exact"):
        return Exact()
    m = re.fullmatch(r"weight:(\d+)", text)
    if m:
        return WeightExact(int(m.group(1)))
    m = re.fullmatch(r"truncate:(\d+)", text)
    if m:
        point = ws.point(at) if at else None
        if point is not None and A is not None and point.algebra is not A:
            raise UsageError(f"point {at!r} is not on the chosen algebra")
        return TruncatedAtOrder(int(m.group(1)), point)
    raise UsageError(f"unknown mode {text!r} (exact, weight:W or truncate:N)")


def _mode_name(mode):
    return mode.describe() if mode is not None else None


def _algebra_json(A):
    return {
        "generators": [[n, d] for n, d in A.ring.gens_spec],
        "differentials": {n: str(A.dmap[n]) for n in A.names if A.dmap[n].terms},
    }


def _morphism_json(f):
    return {n: str(f.images[n]) for n in f.source.names}


def _problems(rep):
    return [{"generator": n, "problem": msg, "residue": _jsonable(r)} for n, msg, r in rep.problems]


# commands -----------------------------------------------------------------

def cmd_validate(ws, args):
    items = {}
    ok = True
    for name, A in ws.algebras.items():
        rep = A.validate()
        ok = ok and rep.ok
        items[name] = {"kind": "algebra", "ok": rep.ok, "problems": _problems(rep)}
    for name, f in ws.morphisms.items():
        rep = f.validate()
        ok = ok and rep.ok
        items[name] = {"kind": "morphism", "ok": rep.ok, "problems": _problems(rep)}
    for name, p in ws.points.items():
        rep = p.validate()
        ok = ok and rep.ok
        items[name] = {"kind": "point", "ok": rep.ok, "problems": _problems(rep)}
    return {"verdict": ok, "witness": items}, None


def cmd_cohomology(ws, args):
    A = ws.algebra(args.algebra)
    _require_valid(A)
    lo, hi = _range(args.degrees)
    mode = _mode(args.mode, ws, A, args.at)
    dims = cohomology_dims(A, lo, hi, mode)
    return {"dimensions": dims}, mode


def cmd_h0(ws, args):
    A = ws.algebra(args.algebra)
    _require_valid(A)
    ideal = h0_presentation(A)
    return {"witness": {
        "variables": list(ideal.ring.names),
        "relations": [str(g) for g in ideal.gens],
        "groebner_basis": [str(g) for g in ideal.groebner()],
        "quotient_dimension": ideal.quotient_dim(),
    }}, None


def cmd_etale_at(ws, args):
    f = ws.morphism(args.morphism)
    p = _point_on(ws, args.at, f.target)
    _require_valid(f.source, f.target, f, p)
    v = is_etale_at(f, p)
    return {"verdict": v.holds, "witness": {"scope": v.scope, **v.witness}}, None


def cmd_qis(ws, args):
    f = ws.morphism(args.morphism)
    _require_valid(f.source, f.target, f)
    mode_text = args.mode or "points"
    if mode_text == "points":
        if not args.at:
            raise UsageError("points mode needs at least one --at")
        mode = AtPoints([_point_on(ws, a, f.target) for a in args.at], args.order)
        label = f"points:{args.order}"
    elif mode_text == "h0":
        mode, label = H0Only(), "h0"
    else:
        m = re.fullmatch(r"weight:(\d+)", mode_text)
        if not m:
            raise UsageError(f"unknown qis mode {mode_text!r} (points, weight:W or h0)")
        mode, label = WeightBounded(int(m.group(1))), mode_text
    v = is_qis(f, mode)
    wit = dict(v.witness)
    if "weights" in wit:
        wit["weights"] = {w: {n: {"source": a, "target": b, "iso": ok}
                              for n, (a, b, ok) in rep.items()}
                          for w, rep in wit["weights"].items()}
    return {"verdict": v.holds, "witness": {"scope": v.scope, **wit}}, label


def cmd_completion_compare(ws, args):
    f = ws.morphism(args.morphism)
    p = _point_on(ws, args.at, f.target)
    _require_valid(f.source, f.target, f, p)
    v = completion_compare(f, p, args.levels)
    levels = {n: {d: {"source": a, "target": b, "iso": ok} for d, (a, b, ok) in rep.items()}
              for n, rep in v.witness["levels"].items()}
    return {"verdict": v.holds, "witness": {"scope": v.scope, "levels": levels,
                                            "first_failure": v.witness["first_failure"]}}, None


def cmd_perfect_at(ws, args):
    A = ws.algebra(args.algebra)
    p = _point_on(ws, args.at, A)
    _require_valid(A, p)
    lo, hi = _range(args.window)
    rep = perfectness_report(A, p, reliable_from=args.reliable_from)
    return {"verdict": rep.within(lo, hi), "dimensions": rep.dims,
            "witness": {"amplitude": rep.amplitude, "window": [lo, hi],
                        "reliable_from": args.reliable_from}}, None


def cmd_diagonal_resolve(ws, args):
    A = ws.algebra(args.algebra)
    _require_valid(A)
    diag = diagonal_resolution(A, cap=args.cap)
    R = diag.algebra
    cells = {}
    for n, w in diag.witness.items():
        cells[n] = {"cell": diag.names[n][2], "h": str(w["h"]), "g": str(w["g"]),
                    "cap": w["cap"], "corrected": w["corrected"]}
    ok = R.validate().ok and diag.mult.validate().ok
    return {"verdict": ok, "witness": {"resolution": _algebra_json(R), "cells": cells,
                                       "multiplication": _morphism_json(diag.mult)}}, None


def cmd_resolve_morphism(ws, args):
    f = ws.morphism(args.morphism)
    _require_valid(f.source, f.target, f)
    Bp, inc, back = resolve_morphism(f, cap=args.cap)
    h0 = h0_map_is_iso(back)
    ok = Bp.validate().ok and inc.validate().ok and back.validate().ok and h0["iso"]
    return {"verdict": ok, "witness": {"resolution": _algebra_json(Bp),
                                       "inclusion": _morphism_json(inc),
                                       "projection": _morphism_json(back), "h0": h0}}, None


def tor0_presentation(f, g, R, to_b, to_c):
    """h^0(B) (x)_{h^0(A)} h^0(C) as an ideal in the degree-zero variables of R."""
    zero = [(n, 0) for n, d in R.ring.gens_spec if d == 0]
    ring = GradedRing(zero)

    def push(p, h):
        q = h.apply(p)
        return Poly(ring, {tuple(m[R.ring.index[n]] for n, _ in zero): c
                           for m, c in q.terms.items()})

    rels = []
    for h, X in ((to_b, f.target), (to_c, g.target)):
        for g0 in h0_presentation(X).gens:
            lifted = X.ring.coerce(g0)
            rels.append(push(lifted, h))
    A = f.source
    for n, d in A.ring.gens_spec:
        if d == 0:
            rels.append(push(f.images[n], to_b) - push(g.images[n], to_c))
    return Ideal(ring, [r for r in rels if r.terms])


def cmd_derived_tensor(ws, args):
    f = ws.morphism(args.left)
    g = ws.morphism(args.right)
    _require_valid(f.source, f.target, g.target, f, g)
    R, to_b, to_c = derived_tensor(f, g, cap=args.cap)
    classical = tor0_presentation(f, g, R, to_b, to_c)
    h0 = h0_presentation(R)
    a, b, c = len(f.source.names), len(f.target.names), len(g.target.names)
    ok = R.validate().ok and to_b.validate().ok and to_c.validate().ok and h0.same_as(classical)
    return {"verdict": ok, "witness": {
        "algebra": _algebra_json(R),
        "generator_counts": {"source": a, "left": b, "right": c, "total": len(R.names)},
        "h0_groebner_basis": [str(p) for p in h0.groebner()],
        "h0_matches_classical": h0.same_as(classical),
    }}, None


def cmd_koszul(ws, args):
    if not args.section:
        raise UsageError("koszul needs at least one --section")
    A = koszul(args.vars, args.section)
    if A.weights is None:
        raise UnsupportedMode("sections must be weight-homogeneous of positive weight")
    lo, hi = _range(args.degrees)
    dims = {w: cohomology_dims(A, lo, hi, WeightExact(w)) for w in range(args.max_weight + 1)}
    return {"dimensions": dims, "witness": {"algebra": _algebra_json(A)}}, f"weight:0..{args.max_weight}"


def cmd_linearize(ws, args):
    P = ws.morphism(args.morphism)
    _require_valid(P.source, P.target, P)
    base = tuple(b for b in (args.base or "").split(",") if b)
    mode = _mode(args.mode, ws, P.target, args.at)
    dim, reps, _ = der_cohomology(P, -args.ell, base, mode)
    witnesses = []
    for D in reps[:args.limit]:
        xi = xi_ell(P, D, args.ell)
        witnesses.append({"derivation": {n: str(v) for n, v in sorted(D.items())},
                          "morphism": _morphism_json(xi), "valid": xi.validate().ok})
    return {"dimensions": {-args.ell: dim}, "witness": {"classes": witnesses}}, mode


def cmd_obstruction(ws, args):
    h = ws.morphism(args.morphism)
    B = ws.algebra(args.algebra)
    _require_valid(h.source, h.target, h, B)
    mode = _mode(args.mode, ws, h.target, args.at)
    value, ext = extension_obstruction(h, B, args.gen, mode)
    return {"verdict": ext is not None, "witness": {
        "obstruction": str(value),
        "extension": _morphism_json(ext) if ext is not None else None}}, mode


def _require_valid(*objs):
    for obj in objs:
        rep = obj.validate()
        if not rep.ok:
            n, msg, _ = rep.problems[0]
            label = getattr(obj, "name", None) or "input"
            raise UsageError(f"{label} is invalid ({msg}); run validate for details")


def _point_on(ws, name, A):
    if not name:
        raise UsageError("a point is required (--at NAME)")
    p = ws.point(name)
    if p.algebra is not A:
        raise UsageError(f"point {name!r} is not on algebra {A.name!r}")
    return p


COMMANDS = {
    "validate": cmd_validate,
    "cohomology": cmd_cohomology,
    "h0": cmd_h0,
    "etale-at": cmd_etale_at,
    "qis": cmd_qis,
    "completion-compare": cmd_completion_compare,
    "perfect-at": cmd_perfect_at,
    "diagonal-resolve": cmd_diagonal_resolve,
    "resolve-morphism": cmd_resolve_morphism,
    "derived-tensor": cmd_derived_tensor,
    "koszul": cmd_koszul,
    "linearize": cmd_linearize,
    "obstruction": cmd_obstruction,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="aligned text instead of JSON")
    parser = argparse.ArgumentParser(prog="dgres", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, file=True):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if file:
            p.add_argument("file", help="workspace file in the algebra DSL")
        return p

    add("validate", "check degrees, d^2 = 0, morphisms and points")
    p = add("cohomology", "cohomology dimensions of an algebra")
    p.add_argument("--algebra", required=True)
    p.add_argument("--degrees", required=True, help="range a..b")
    p.add_argument("--mode", default="exact", help="exact, weight:W or truncate:N")
    p.add_argument("--at", help="point for truncate mode (default: the origin)")
    p = add("h0", "Groebner presentation of h^0")
    p.add_argument("--algebra", required=True)
    p = add("etale-at", "etale test at a point of the target")
    p.add_argument("--morphism", required=True)
    p.add_argument("--at", required=True)
    p = add("qis", "quasi-isomorphism test in a stated scope")
    p.add_argument("--morphism", required=True)
    p.add_argument("--mode", default="points", help="points, weight:W or h0")
    p.add_argument("--at", action="append", help="point of the target (repeatable)")
    p.add_argument("--order", type=int, default=3, help="completion order for points mode")
    p = add("completion-compare", "compare m-adic truncations level by level")
    p.add_argument("--morphism", required=True)
    p.add_argument("--at", required=True)
    p.add_argument("--levels", type=int, default=3)
    p = add("perfect-at", "fiber cohomology of the Kaehler differentials at a point")
    p.add_argument("--algebra", required=True)
    p.add_argument("--at", required=True)
    p.add_argument("--window", default="-1..0", help="allowed degree range a..b")
    p.add_argument("--reliable-from", type=int, default=None,
                   help="ignore degrees below this (for truncated algebras)")
    p = add("diagonal-resolve", "resolve the multiplication map of an algebra")
    p.add_argument("--algebra", required=True)
    p.add_argument("--cap", type=int, default=8)
    p = add("resolve-morphism", "factor a morphism through a quasi-free extension")
    p.add_argument("--morphism", required=True)
    p.add_argument("--cap", type=int, default=8)
    p = add("derived-tensor", "derived tensor product of two morphisms with a common source")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--cap", type=int, default=8)
    p = add("koszul", "weight-graded cohomology of a Koszul algebra", file=False)
    p.add_argument("--vars", type=int, required=True)
    p.add_argument("--section", action="append", help="polynomial in x1..xN (repeatable)")
    p.add_argument("--degrees", default="-2..0")
    p.add_argument("--max-weight", type=int, default=4)
    p = add("linearize", "derivation cohomology and Xi witnesses along a morphism")
    p.add_argument("--morphism", required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--base", help="comma-separated base generators")
    p.add_argument("--mode", default="exact")
    p.add_argument("--at")
    p.add_argument("--limit", type=int, default=4, help="maximum number of witnesses")
    p = add("obstruction", "obstruction to extending a morphism over one more generator")
    p.add_argument("--morphism", required=True, help="morphism from the smaller algebra")
    p.add_argument("--algebra", required=True, help="the algebra with the extra generator")
    p.add_argument("--gen", required=True)
    p.add_argument("--mode", default="exact")
    p.add_argument("--at")
    return parser


def _inputs(args):
    skip = {"command", "pretty"}
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in skip or v is None:
            continue
        out[k] = os.path.basename(v) if k == "file" else v
    return out


def render_pretty(report):
    """Aligned two-column text: dotted key paths and scalar values."""
    rows = []

    def walk(prefix, v):
        if isinstance(v, dict) and v:
            for k in sorted(v, key=_sort_key):
                walk(f"{prefix}.{k}" if prefix else str(k), v[k])
        elif isinstance(v, list) and v and any(isinstance(x, (dict, list)) for x in v):
            for i, x in enumerate(v):
                walk(f"{prefix}[{i}]", x)
        else:
            rows.append((prefix, json.dumps(v) if not isinstance(v, str) else v))

    walk("", report)
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows) + "\n"


def _sort_key(k):
    try:
        return (0, int(k), "")
    except (TypeError, ValueError):
        return (1, 0, str(k))


RANGE_OPTIONS = ("--degrees", "--window")


def _join_ranges(argv):
    """Let ``--degrees -5..0`` through; argparse would read -5..0 as an option."""
    out = []
    i = 0
    while i < len(argv):
        if argv[i] in RANGE_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def run(argv=None, stdout=None, stderr=None):
    """Run one command; returns the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stderr(stderr), contextlib.redirect_stdout(stdout):
            args = parser.parse_args(_join_ranges(sys.argv[1:] if argv is None else list(argv)))
    except SystemExit as e:
        return USAGE if e.code else OK
    diagnostics = []
    try:
        ws = load(args.file) if hasattr(args, "file") else None
        body, mode = COMMANDS[args.command](ws, args)
    except DSLError as e:
        print(f"error: {e}", file=stderr)
        return USAGE
    except (UsageError, OSError) as e:
        print(f"error: {e}", file=stderr)
        return USAGE
    except (ResourceError, UnsupportedMode) as e:
        print(f"inconclusive: {e}", file=stderr)
        return INCONCLUSIVE
    except (PreconditionError, DGError) as e:
        print(f"error: {e}", file=stderr)
        return USAGE
    report = {"command": args.command, "inputs": _inputs(args),
              "mode": mode if isinstance(mode, str) or mode is None else _mode_name(mode),
              "diagnostics": diagnostics, "version": __version__}
    report.update(body)
    report = _jsonable(report)
    if args.pretty:
        stdout.write(render_pretty(report))
    else:
        stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    verdict = report.get("verdict", True)
    if verdict is None:
        return INCONCLUSIVE
    return OK if verdict else NEGATIVE


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
