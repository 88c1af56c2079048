"""Command-line interface.

Subcommands: classify, spectrum, verify, hyp2f1.  Parameters accept
decimal, complex (``-0.5+1j``), or rational ``p/q`` literals; rational
literals switch the computation to exact arithmetic end to end.  The
report goes to stdout (one JSON document per run with --format=json),
diagnostics to stderr.  Exit codes: 0 success/unitarizable, 1 negative
outcome (not unitarizable, divergent series, failed checks), 2 usage or
parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .errors import DivergentAtBoundary, GammaPole, WeightLabError
from .hyp import Hyp2F1Params, hyp2f1
from .modules import ModuleSpec
from .scalars import parse_scalar, to_complex
from .spectrum import full_spectrum
from .tensor import TensorSpec
from .unitarity import classify
from .verify import run_suite

__all__ = ["main", "entry_point"]


def _scalar_arg(text: str):
    try:
        return parse_scalar(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="weightlab",
        description="Weight modules for sl(2, C): unitarity classification and "
                    "discrete spectra of Hilbert tensor products.")
    sub = top.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="classify N(a1, a2) in the unitary dual")
    c.add_argument("--a1", type=_scalar_arg, required=True)
    c.add_argument("--a2", type=_scalar_arg, required=True)
    c.add_argument("--format", choices=("human", "json"), default="human")

    s = sub.add_parser("spectrum", help="discrete spectrum of N(a1,a2) (x) N(a,0)")
    s.add_argument("--a1", type=_scalar_arg, required=True)
    s.add_argument("--a2", type=_scalar_arg, required=True)
    s.add_argument("--a", type=_scalar_arg, required=True)
    s.add_argument("--format", choices=("human", "json"), default="human")

    v = sub.add_parser("verify", help="run a named verification suite")
    v.add_argument("--suite", default="all")
    v.add_argument("--K", type=int, default=None, help="truncation override")
    v.add_argument("--format", choices=("human", "json"), default="human")

    h = sub.add_parser("hyp2f1", help="evaluate 2F1(alpha, beta; gamma; z)")
    h.add_argument("--alpha", type=_scalar_arg, required=True)
    h.add_argument("--beta", type=_scalar_arg, required=True)
    h.add_argument("--gamma", type=_scalar_arg, required=True)
    h.add_argument("--z", type=_scalar_arg, required=True)
    h.add_argument("--format", choices=("human", "json"), default="human")
    return top


def _emit_json(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")


def _scal_json(x):
    if isinstance(x, Fraction):
        return str(x)
    z = to_complex(x)
    return [z.real, z.imag] if z.imag else z.real


def _cmd_classify(args) -> int:
    label = classify(args.a1, args.a2)
    params = {k: _scal_json(v) for k, v in label.params}
    if args.format == "json":
        _emit_json({
            "command": "classify",
            "params": {"a1": _scal_json(args.a1), "a2": _scal_json(args.a2)},
            "entries": [{"kind": label.kind.value, "params": params,
                         "boundary": label.boundary}],
            "diagnostics": [],
        })
    else:
        extra = f" ({', '.join(f'{k}={v}' for k, v in label.params)})" if label.params else ""
        flag = "  [boundary]" if label.boundary else ""
        sys.stdout.write(f"{label.kind.value}{extra}{flag}\n")
    return 0 if label.unitarizable else 1


def _cmd_spectrum(args) -> int:
    try:
        spec = TensorSpec(ModuleSpec(args.a1, args.a2), ModuleSpec(args.a, 0))
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    report = full_spectrum(spec)
    doc = report.to_dict()
    doc = {"command": "spectrum", **doc, "diagnostics": []}
    if args.format == "json":
        _emit_json(doc)
    else:
        if not report.entries and report.hw_lattice is None:
            sys.stdout.write("discrete spectrum: empty\n")
        for e in report.entries:
            sys.stdout.write(
                f"{e.kind}  N({_scal_json(e.b1)}, {_scal_json(e.b2)})  "
                f"n0={e.n0}  xi={_scal_json(e.xi)}  generator={e.generator_kind}\n")
        if report.hw_lattice is not None:
            lat = report.hw_lattice
            sys.stdout.write(
                f"HighestWeight lattice  N({_scal_json(lat.weight_base)} + 2 n0, 0) "
                f"for every n0 <= {lat.n0_max}\n")
        for note in report.excluded:
            sys.stderr.write(f"excluded: {note}\n")
    return 0


def _cmd_verify(args) -> int:
    try:
        results = run_suite(args.suite, args.K)
    except KeyError as exc:
        sys.stderr.write(f"error: {exc.args[0]}\n")
        return 2
    if args.format == "json":
        _emit_json({
            "command": "verify",
            "params": {"suite": args.suite, "K": args.K},
            "entries": [{"name": r.name, "passed": r.passed, "detail": r.detail}
                        for r in results],
            "diagnostics": [],
        })
    else:
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            sys.stdout.write(f"{status}  {r.name}  ({r.detail})\n")
        n_bad = sum(not r.passed for r in results)
        sys.stdout.write(f"{len(results) - n_bad}/{len(results)} checks passed\n")
    return 0 if all(r.passed for r in results) else 1


def _cmd_hyp2f1(args) -> int:
    p = Hyp2F1Params(args.alpha, args.beta, args.gamma)
    try:
        value = hyp2f1(p, args.z)
    except (DivergentAtBoundary, GammaPole, ValueError) as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1
    if args.format == "json":
        _emit_json({
            "command": "hyp2f1",
            "params": {k: _scal_json(getattr(args, k)) for k in ("alpha", "beta", "gamma", "z")},
            "entries": [{"value": _scal_json(value)}],
            "diagnostics": [],
        })
    else:
        sys.stdout.write(f"{value.real:.15g}" +
                         (f" {value.imag:+.15g}i" if value.imag else "") + "\n")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if args.command == "classify":
            return _cmd_classify(args)
        if args.command == "spectrum":
            return _cmd_spectrum(args)
        if args.command == "verify":
            return _cmd_verify(args)
        return _cmd_hyp2f1(args)
    except WeightLabError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
