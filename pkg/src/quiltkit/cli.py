"""``quiltkit`` command line: JSON in, JSON out.

Exit codes: 0 success, 1 validation violations, 2 a mathematical
precondition failed (the output names the error class), 3 input could not be
read or parsed.  Output is written only after the computation succeeds.

Quilt arguments are JSON files, or ``fixture:NAME`` for a packaged fixture.
Relative paths that do not exist are also looked up in ``$QUILTKIT_FIXTURE_DIR``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import demos
from . import engine as en
from . import fixtures as fx
from . import graded as gr
from . import maslov as ms
from . import quilt as qc
from . import serialize as ser
from . import symplectic as sp
from .errors import InvalidQuilt, QuiltError

FIXTURE_DIR_ENV = "QUILTKIT_FIXTURE_DIR"


class InputError(Exception):
    pass


class Violations(Exception):
    def __init__(self, payload: dict):
        self.payload = payload


def _resolve(path: str) -> Path:
    p = Path(path)
    if p.exists() or p.is_absolute():
        return p
    base = os.environ.get(FIXTURE_DIR_ENV)
    if base and (Path(base) / p).exists():
        return Path(base) / p
    return p


def _read_json(path: str):
    try:
        with open(_resolve(path), encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _parse(fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except QuiltError:
        raise
    except (KeyError, ValueError, TypeError, IndexError, AttributeError) as exc:
        raise InputError(f"{type(exc).__name__}: {exc}") from exc


def _ring(args) -> str | None:
    return None if args.ring is None else {"z": gr.Z, "z2": gr.Z2}[args.ring]


def load_quilt(arg: str, modulus: int | None = None) -> qc.QuiltedSurface:
    if arg.startswith("fixture:"):
        name = arg.split(":", 1)[1]
        if name not in fx.REGISTRY:
            raise InputError(f"unknown fixture {name!r}")
        q = fx.REGISTRY[name]()
        if modulus is not None:
            q = qc.QuiltedSurface(q.patches, q.seams, q.boundary, q.incoming, q.outgoing, modulus)
        return q
    return _parse(ser.quilt_from_json, _read_json(arg), modulus)


def _valid_quilt(arg: str, modulus: int | None) -> qc.QuiltedSurface:
    q = load_quilt(arg, modulus)
    v = qc.validate(q)
    if v:
        raise Violations({"violations": v})
    return q


# ---------------------------------------------------------------- verbs


def cmd_validate(args):
    q = load_quilt(args.quilt, args.modulus)
    v = qc.validate(q)
    out = {"violations": v, "warnings": [] if v else qc.validation_warnings(q)}
    if v:
        raise Violations(out)
    return out


def cmd_ends(args):
    inc, out = qc.ends(_valid_quilt(args.quilt, args.modulus))
    return {"incoming": [ser.end_to_json(e) for e in inc], "outgoing": [ser.end_to_json(e) for e in out]}


def cmd_euler(args):
    per, total = qc.euler(_valid_quilt(args.quilt, args.modulus))
    return {"per_patch": per, "total": total}


def cmd_degree(args):
    q = _valid_quilt(args.quilt, args.modulus)
    return {"degree_shift": qc.degree_shift(q), "modulus": q.modulus}


def cmd_glue(args):
    q = _valid_quilt(args.quilt, args.modulus)
    return ser.quilt_to_json(qc.glue_by_index(q, args.minus, args.plus))


def cmd_shrink(args):
    q = _valid_quilt(args.quilt, args.modulus)
    q2, rec = qc.shrink_strip(q, args.patch, allow_both_boundary=args.allow_both_boundary)
    return {"quilt": ser.quilt_to_json(q2), "shift": ser.shift_to_json(rec)}


def cmd_type(args):
    qs = [_valid_quilt(x, args.modulus) for x in args.quilts]
    types = [qc.combinatorial_type(q) for q in qs]
    out: dict = {"types": types}
    if len(types) > 1:
        out["equal"] = len(set(types)) == 1
    return out


def cmd_maslov(args):
    loop = _parse(ser.loop_from_json, _read_json(args.loop))
    ref = _parse(ser.lagrangian_from_json, _read_json(args.reference)) if args.reference else loop.samples[0]
    return {"maslov": ms.maslov_loop(loop, ref)}


def cmd_kashiwara(args):
    Ls = [_parse(ser.lagrangian_from_json, _read_json(p)) for p in (args.l1, args.l2, args.l3)]
    return {"kashiwara": ms.kashiwara_index(*Ls)}


def cmd_compose(args):
    c01 = _parse(ser.correspondence_from_json, _read_json(args.first))
    c12 = _parse(ser.correspondence_from_json, _read_json(args.second))
    r = sp.compose(c01, c12)
    return {
        "transverse": r.transverse,
        "embedded": r.embedded,
        "kernel_dim": r.kernel_dim,
        "composition": ser.correspondence_to_json(r.composition) if r.composition is not None else None,
    }


def cmd_cohomology(args):
    c = _parse(ser.complex_from_json, _read_json(args.complex), args.modulus, _ring(args))
    h = gr.cohomology(c)
    return {"cohomology": {str(k): {"free": free, "torsion": tors} for k, (free, tors) in sorted(h.items())}}


def cmd_evaluate(args):
    expr = _parse(ser.expression_from_json, _read_json(args.expression), None, args.modulus)
    a = _parse(ser.assignment_from_json, _read_json(args.assignment), None, args.modulus, _ring(args))
    r = en.evaluate(expr, a)
    return {"map": ser.map_to_json(r.map), "sign_exact": r.sign_exact, "degree_shift": qc.degree_shift(r.quilt)}


def cmd_demo(args):
    checks = demos.run(args.name)
    out = {"demo": args.name, "checks": checks}
    if not all(c["pass"] for c in checks):
        raise Violations(out)
    return out


# ---------------------------------------------------------------- driver


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quiltkit", description="Combinatorics and algebra of quilted surfaces.")
    p.add_argument("-o", "--output", help="write JSON here instead of stdout")
    p.add_argument("--ring", choices=("z", "z2"), help="override the coefficient ring")
    p.add_argument("--modulus", type=int, help="override the grading modulus")
    sub = p.add_subparsers(dest="verb", required=True)

    for verb, fn in (("validate", cmd_validate), ("ends", cmd_ends), ("euler", cmd_euler), ("degree", cmd_degree)):
        s = sub.add_parser(verb)
        s.add_argument("quilt")
        s.set_defaults(fn=fn)

    s = sub.add_parser("glue")
    s.add_argument("quilt")
    s.add_argument("--minus", type=int, required=True, help="index of the incoming end")
    s.add_argument("--plus", type=int, required=True, help="index of the outgoing end")
    s.set_defaults(fn=cmd_glue)

    s = sub.add_parser("shrink")
    s.add_argument("quilt")
    s.add_argument("--patch", required=True)
    s.add_argument("--allow-both-boundary", action="store_true")
    s.set_defaults(fn=cmd_shrink)

    s = sub.add_parser("type")
    s.add_argument("quilts", nargs="+")
    s.set_defaults(fn=cmd_type)

    s = sub.add_parser("maslov")
    s.add_argument("loop")
    s.add_argument("--reference")
    s.set_defaults(fn=cmd_maslov)

    s = sub.add_parser("kashiwara")
    for name in ("l1", "l2", "l3"):
        s.add_argument(name)
    s.set_defaults(fn=cmd_kashiwara)

    s = sub.add_parser("compose")
    s.add_argument("first")
    s.add_argument("second")
    s.set_defaults(fn=cmd_compose)

    s = sub.add_parser("cohomology")
    s.add_argument("complex")
    s.set_defaults(fn=cmd_cohomology)

    s = sub.add_parser("evaluate")
    s.add_argument("expression")
    s.add_argument("assignment")
    s.set_defaults(fn=cmd_evaluate)

    s = sub.add_parser("demo")
    s.add_argument("name", choices=demos.DEMOS)
    s.set_defaults(fn=cmd_demo)
    return p


def _emit(payload: dict, output: str | None) -> int:
    text = ser.dumps(payload)
    if output:
        try:
            Path(output).write_text(text, encoding="utf-8")
        except OSError as exc:
            sys.stderr.write(ser.dumps({"error": "IOError", "message": str(exc)}))
            return 3
    else:
        sys.stdout.write(text)
    return 0


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 3
    if args.modulus is not None and (args.modulus <= 0 or args.modulus % 2):
        sys.stderr.write(ser.dumps({"error": "InputError", "message": "modulus must be a positive even integer"}))
        return 3
    try:
        payload = args.fn(args)
    except Violations as v:
        return _emit(v.payload, args.output) or 1
    except InvalidQuilt as exc:
        return _emit({"violations": exc.violations}, args.output) or 1
    except InputError as exc:
        sys.stderr.write(ser.dumps({"error": "InputError", "message": str(exc)}))
        return 3
    except QuiltError as exc:
        return _emit({"error": type(exc).__name__, "message": str(exc)}, args.output) or 2
    except ValueError as exc:
        return _emit({"error": type(exc).__name__, "message": str(exc)}, args.output) or 2
    return _emit(payload, args.output)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
