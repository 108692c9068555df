"""Command line front end.

    bakryemery check --space S.yaml --suite C.yaml [--out F] [--format json|csv]
    bakryemery list-builtins
    bakryemery gen --n 3 --H 0 --mode f_bounded --param 0.2 --seed 42
    bakryemery oracle [--which all|jacobi|dual|sphere|quad]

Exit codes: 0 all pass, 1 violations, 2 precondition failures only, 3 usage or parse errors.
"""

from __future__ import annotations

import argparse
import inspect
import sys

from ..expr import ParseError
from ..oracles import ORACLES, run_oracles
from ..space import BUILTINS, GENERATOR_MODES
from .output import emit_report
from .spec import SpaceSpec, SpecError, build_space, dump_spec, load_spec
from .suite import SuiteError, load_suite, run_suite

EXIT_PASS, EXIT_VIOLATION, EXIT_PRECONDITION, EXIT_USAGE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bakryemery", description="Check weighted comparison inequalities on "
                "rotationally symmetric spaces.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="run a suite of checks on one space")
    c.add_argument("--space", required=True, help="space spec (YAML or JSON)")
    c.add_argument("--suite", required=True, help="suite config (YAML or JSON)")
    c.add_argument("--out", help="output file (default: stdout)")
    c.add_argument("--format", choices=("json", "csv"), default="json")
    c.add_argument("--falsify", action="store_true", help="run checks even when hypotheses fail")
    c.add_argument("--seed", type=_seed, help="override the generator seed")
    c.add_argument("--grid", type=int, help="default radial grid size")
    c.add_argument("--tol-margin", type=float, help="margin floor for absolute checks (e.g. -1e-7)")
    c.add_argument("--timing", action="store_true", help="include wall-clock seconds in JSON output")

    sub.add_parser("list-builtins", help="list builtin spaces and their parameters")

    g = sub.add_parser("gen", help="emit a generated space spec")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--H", type=float, default=0.0)
    g.add_argument("--mode", choices=GENERATOR_MODES, required=True)
    g.add_argument("--param", type=float, required=True, help="k, a or N depending on the mode")
    g.add_argument("--seed", type=_seed, required=True)
    g.add_argument("--name", default=None)
    g.add_argument("--out")

    o = sub.add_parser("oracle", help="cross-check the numerical kernels")
    o.add_argument("--which", choices=("all",) + tuple(ORACLES), default="all")
    return p


def _cmd_check(args) -> int:
    spec = load_spec(args.space)
    suite = load_suite(args.suite)
    if args.tol_margin is not None:
        suite.tolerance["margin_floor"] = args.tol_margin
        suite.tol()
    if args.grid is not None and args.grid < 2:
        raise SpecError("--grid", "must be >= 2")
    reports = run_suite(spec, suite, seed=args.seed, grid=args.grid, falsify=args.falsify or None)
    text = emit_report(reports, args.format, args.out, timing=args.timing)
    if args.out is None:
        sys.stdout.write(text)
    for rep in reports:
        t = f" ({rep.elapsed:.3f}s)" if args.timing and rep.elapsed is not None else ""
        print(f"{rep.theorem_id:14s} {rep.verdict:32s} min_margin={rep.min_margin:.3e}{t}", file=sys.stderr)
    if any(r.n_violations for r in reports):
        return EXIT_VIOLATION
    if any(not r.precondition_ok for r in reports):
        return EXIT_PRECONDITION
    return EXIT_PASS


def _cmd_list() -> int:
    for name in sorted(BUILTINS):
        sig = inspect.signature(BUILTINS[name])
        params = ", ".join(f"{k}={v.default!r}" for k, v in sig.parameters.items())
        print(f"{name}({params})")
    return EXIT_PASS


def _cmd_gen(args) -> int:
    spec = SpaceSpec(args.name or f"generated-{args.mode}-{args.seed}", n=args.n, seed=args.seed,
                     generator={"H": args.H, "mode": args.mode, "param": args.param})
    _, cert = build_space(spec)
    text = dump_spec(spec)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"certificate {cert.describe()} min_slack={cert.overall_min_slack:.3e} valid={cert.valid}",
          file=sys.stderr)
    return EXIT_PASS


def _cmd_oracle(args) -> int:
    rows = run_oracles(args.which)
    for r in rows:
        print(f"{'ok  ' if r.ok else 'FAIL'} {r.name:40s} error={r.error:.3e} tol={r.tolerance:.0e}")
    return EXIT_PASS if all(r.ok for r in rows) else EXIT_VIOLATION


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "check":
            return _cmd_check(args)
        if args.command == "list-builtins":
            return _cmd_list()
        if args.command == "gen":
            return _cmd_gen(args)
        return _cmd_oracle(args)
    except (SpecError, ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SuiteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
