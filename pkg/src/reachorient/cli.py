"""``reach-orient`` command line front-end.

Exit codes: 0 success, 2 parse or parameter error, 3 cap exceeded or
unsupported instance.  Output files are written to a temporary file in the
target directory and renamed into place only on success.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from fractions import Fraction

from . import instances
from .dismember import DEFAULT_ENUM_CAP
from .errors import CapExceeded, GraphError, ParseError, UnsupportedInstance
from .graph_core import score_weighted
from .solvers import DEFAULT_BRUTE_CAP, brute_force, solve_approx, solve_exact

log = logging.getLogger("reachorient")

EXIT_OK, EXIT_USAGE, EXIT_CAP = 0, 2, 3
COMMANDS = ("solve", "score", "gen")


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _nonneg_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return v


def _eps(text: str) -> Fraction:
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError("EPS must be positive")
    return v


def _prob(text: str) -> float:
    v = float(text)
    if not 0 <= v <= 1:
        raise argparse.ArgumentTypeError("probability must lie in [0, 1]")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-i", "--input", metavar="FILE", help="input file (default: stdin)")
    common.add_argument("-o", "--output", metavar="FILE", help="output file (default: stdout)")
    common.add_argument("--seed", type=int, default=0, metavar="S")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="reach-orient", description="Maximum reachability orientation of mixed graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="compute an orientation (default command)")
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="exact solver (default)")
    mode.add_argument("--approx", type=_eps, metavar="EPS", help="(1-EPS)-approximation")
    mode.add_argument("--brute", action="store_true", help="enumerate all orientations")
    s.add_argument("--max-brute-edges", type=_nonneg_int, default=DEFAULT_BRUTE_CAP, metavar="N")
    s.add_argument("--max-dismember", type=_nonneg_int, default=DEFAULT_ENUM_CAP, metavar="N")
    s.add_argument("--parallel", action="store_true", help="solve branches in worker processes")

    sc = sub.add_parser("score", parents=[common], help="score an orientation file")
    sc.add_argument("orientation", nargs="?", metavar="ORIENTATION", help="orientation file")
    sc.add_argument("--orientation", dest="orientation_opt", metavar="FILE")

    g = sub.add_parser("gen", parents=[common], help="write a generated instance")
    g.add_argument("kind", choices=("random", "sat", "lb"))
    g.add_argument("--n", type=_nonneg_int, default=8)
    g.add_argument("--edge-prob", type=_prob, default=0.3)
    g.add_argument("--arc-prob", type=_prob, default=0.2)
    g.add_argument("--weight-max", type=_nonneg_int, default=1)
    g.add_argument("--connected", action="store_true")
    g.add_argument("--acyclic", action="store_true")
    g.add_argument("--dismembered", action="store_true")
    g.add_argument("--q", type=_positive_int, default=1)
    return p


def _read(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="ascii") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise ParseError(f"{path} is not ASCII") from None


def write_atomic(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".reach-orient-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="ascii") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_solve(args) -> int:
    g, w = instances.parse_instance(_read(args.input))
    if args.brute:
        res = brute_force(g, w, cap=args.max_brute_edges)
    elif args.approx is not None:
        res = solve_approx(g, args.approx, w, parallel=args.parallel, max_dismember=args.max_dismember)
    else:
        res = solve_exact(g, w, parallel=args.parallel, max_dismember=args.max_dismember)
    check = score_weighted(res.orientation, w)
    if check != res.value:
        raise AssertionError(f"solver reported {res.value} but the orientation scores {check}")
    log.info("stats %s", json.dumps(res.stats, default=str, sort_keys=True))
    body = instances.serialize_orientation(res.orientation, check)
    if args.output:
        # re-read what we are about to publish
        o2, v2 = instances.parse_orientation(body, g)
        assert v2 == check == score_weighted(o2, w)
        write_atomic(args.output, body)
        print(f"s {check}")
    else:
        sys.stdout.write(body)
    print(f"c mode {res.mode}")
    return EXIT_OK


def cmd_score(args) -> int:
    path = args.orientation or args.orientation_opt
    if path is None:
        raise UsageError("score needs an orientation file")
    g, w = instances.parse_instance(_read(args.input))
    o, claimed = instances.parse_orientation(_read(path), g)
    value = score_weighted(o, w)
    if claimed is not None and claimed != value:
        log.warning("file claims %s, orientation scores %s", claimed, value)
    text = f"s {value}\n"
    if args.output:
        write_atomic(args.output, text)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.kind == "random":
        g, w = instances.gen_random(
            args.n, args.edge_prob, args.arc_prob, args.weight_max, args.seed,
            weight_min=min(1, args.weight_max), connected=args.connected,
            acyclic=args.acyclic, dismembered=args.dismembered,
        )
        notes = [f"random n={args.n} edge_prob={args.edge_prob} arc_prob={args.arc_prob} seed={args.seed}"]
    elif args.kind == "sat":
        sat = instances.parse_dimacs(_read(args.input))
        gr = instances.gen_sat_gadget(sat)
        g, w = gr.instance.graph, gr.instance.weights
        notes = [f"sat gadget: {len(sat.clauses)} clauses, {sat.var_count} variables, |Y|={gr.y_count}"]
    else:
        if args.q > instances.MAX_LB_Q:
            raise UsageError(f"--q must be at most {instances.MAX_LB_Q}")
        wi, (tv, _) = instances.gen_replacement_lb(args.q)
        g, w = wi.graph, wi.weights
        notes = [f"replacement lower bound q={args.q}, T = vertices {' '.join(str(v + 1) for v in tv)}"]
    text = instances.serialize_instance(g, w, notes)
    if instances.parse_instance(text) != (g, tuple(w)):
        raise AssertionError("generated instance does not reparse")
    write_atomic(args.output, text)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] not in COMMANDS and argv[0] not in ("-h", "--help"):
        argv.insert(0, "solve")
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="c %(message)s",
                        stream=sys.stderr)
    handler = {"solve": cmd_solve, "score": cmd_score, "gen": cmd_gen}[args.command]
    try:
        return handler(args)
    except (ParseError, GraphError, UsageError, ValueError) as exc:
        print(f"reach-orient: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CapExceeded, UnsupportedInstance) as exc:
        print(f"reach-orient: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
