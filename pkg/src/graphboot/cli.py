"""Command-line front end.

Exit codes: 0 success, 1 usage or flag error, 2 invalid input data,
3 refusal on size limits.  JSON goes to --output (default stdout); sweeps
write CSV.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import montecarlo, oracles, patterns
from .engine import close_generic, close_kr, percolates
from .errors import GraphBootError, InvalidInputError, SizeLimitError
from .graph import SimpleGraph, graph_from_edge_list, to_edge_list
from .witness import Realization, check_extremal, red_edge_trace

SEED_ENV = "GRAPHBOOT_SEED"

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_SIZE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _prob(text):
    v = float(text)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"probability {text} outside [0, 1]")
    return v


def _seed(text):
    v = int(text, 0)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _int_list(text):
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from None
    if not vals or min(vals) < 1:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}")
    return vals


def _prob_list(text):
    try:
        return [_prob(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad probability list {text!r}") from None


def _edge(text):
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected u,v, got {text!r}") from None
    return a, b


def _default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return _seed(raw)
    except (ValueError, argparse.ArgumentTypeError):
        raise UsageError(f"{SEED_ENV}={raw!r} is not a valid seed") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=_seed, default=None,
                        help=f"master seed (default ${SEED_ENV} or 0)")
    common.add_argument("--threads", type=_positive, default=1)
    common.add_argument("--output", default="-", help="output file, '-' for stdout")

    parser = _Parser(prog="graphboot", description="H-bootstrap percolation toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("close", parents=[common], help="closure of a seed graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--trace", action="store_true")

    p = sub.add_parser("percolates", parents=[common])
    p.add_argument("--graph", required=True)
    p.add_argument("--pattern", required=True)

    p = sub.add_parser("witness", parents=[common], help="witness set and red-edge trace")
    p.add_argument("--graph", required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--edge", type=_edge, required=True)

    p = sub.add_parser("gadget", parents=[common])
    p.add_argument("--pattern", required=True)
    p.add_argument("--depth", type=_positive, required=True)
    p.add_argument("--out", help="write the gadget edge list here")

    p = sub.add_parser("wsat", parents=[common])
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--construct", action="store_true")

    p = sub.add_parser("estimate-pc", parents=[common])
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--trials", type=_positive, required=True)
    p.add_argument("--rtol", type=float, required=True)

    p = sub.add_parser("sweep", parents=[common])
    p.add_argument("--n-list", type=_int_list, required=True)
    p.add_argument("--p-grid", type=_prob_list, required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--trials", type=_positive, required=True)

    p = sub.add_parser("spanning-prob", parents=[common])
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--p", type=_prob, required=True)
    p.add_argument("--trials", type=_positive, required=True)

    p = sub.add_parser("er-limit", parents=[common])
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--trials", type=_positive, required=True)

    p = sub.add_parser("verify", parents=[common], help="run a brute-force oracle")
    p.add_argument("--lemma", required=True, choices=sorted(VERIFIERS))
    p.add_argument("--n", type=_positive)
    p.add_argument("--r", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--pattern")
    p.add_argument("--depth", type=_positive)
    p.add_argument("--r-size", type=int)
    p.add_argument("--s-size", type=int)
    p.add_argument("--trials", type=_positive)

    p = sub.add_parser("bounds", parents=[common], help="closed-form bounds for K_r")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--r", type=int, required=True)
    return parser


def _read_graph(path) -> SimpleGraph:
    """Edge-list file, or the JSON written by ``close`` (its closure is read back)."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc.strerror}") from None
    if text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
            return SimpleGraph.from_edges(int(doc["n"]), [tuple(e) for e in doc["closure"]])
        except (ValueError, KeyError, TypeError):
            raise InvalidInputError(f"{path}: not a closure JSON document") from None
    return graph_from_edge_list(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _edges(g: SimpleGraph) -> list:
    return [list(e) for e in g.edges()]


def cmd_close(args):
    g = _read_graph(args.graph)
    h = patterns.load_pattern(args.pattern)
    if h.clique_order and h.clique_order >= 4:
        c, tr = close_kr(g, h.clique_order)
    else:
        c, tr = close_generic(g, h)
    out = {
        "n": g.n,
        "pattern": h.name,
        "seed_edges": g.m,
        "closure_edges": c.m,
        "percolates": c.is_complete(),
        "rounds": tr.num_rounds,
        "closure": _edges(c),
    }
    if args.trace:
        out["trace"] = tr.to_dict()
    return _json(out)


def cmd_percolates(args):
    g = _read_graph(args.graph)
    h = patterns.load_pattern(args.pattern)
    return "true\n" if percolates(g, h) else "false\n"


def cmd_witness(args):
    g = _read_graph(args.graph)
    h = patterns.load_pattern(args.pattern)
    r = h.clique_order
    if not r:
        raise InvalidInputError("witness sets need a complete pattern K_r")
    real = Realization(g, r)
    w = real.witness(args.edge)
    out = {"r": r, "witness": w.to_dict(), "extremal_bound_holds": None, "trace": None}
    if w.target not in real.trace.initial:
        out["extremal_bound_holds"] = check_extremal(w, r)
        out["trace"] = red_edge_trace(g, r, w.target, realization=real).to_dict()
    return _json(out)


def cmd_gadget(args):
    h = patterns.load_pattern(args.pattern)
    gad = patterns.build_gadget(h, args.depth)
    text = to_edge_list(gad.graph)
    if not args.out:
        return text
    with open(args.out, "w") as fh:
        fh.write(text)
    return _json({
        "pattern": h.name,
        "depth": gad.d,
        "v": gad.graph.n,
        "e": gad.graph.m,
        "root": list(gad.root),
        "file": args.out,
    })


def cmd_wsat(args):
    out = {"n": args.n, "r": args.r, "wsat_bound": patterns.wsat_bound(args.n, args.r)}
    if args.construct:
        g = patterns.wsat_construction(args.n, args.r)
        out["construction"] = {
            "edges": _edges(g),
            "m": g.m,
            "percolates": percolates(g, args.r),
        }
    return _json(out)


def cmd_estimate_pc(args):
    h = patterns.load_pattern(args.pattern)
    est = montecarlo.estimate_pc(args.n, h, args.trials, args.rtol, args.seed, args.threads)
    return _json(est.to_dict())


def cmd_sweep(args):
    h = patterns.load_pattern(args.pattern)
    rows = montecarlo.sweep(args.n_list, args.p_grid, h, args.trials, args.seed, args.threads)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=montecarlo.SWEEP_FIELDS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def cmd_spanning_prob(args):
    est = montecarlo.estimate_spanning_prob(args.l, args.p, args.trials, args.seed, args.threads)
    lo, hi = patterns.spanning_prob_bounds(args.l, args.p)
    return _json({"l": args.l, "p": args.p, "master_seed": args.seed, **est.to_dict(),
                  "lower_bound": lo, "upper_bound": hi})


def cmd_er_limit(args):
    est = montecarlo.er_limit_check(args.n, args.c, args.trials, args.seed, args.threads)
    return _json({"n": args.n, "c": args.c, "master_seed": args.seed, **est.to_dict()})


def _need(args, *names):
    missing = [f"--{x.replace('_', '-')}" for x in names if getattr(args, x) is None]
    if missing:
        raise UsageError(f"--lemma {args.lemma} needs {' '.join(missing)}")


def _verify_wsat(args):
    _need(args, "n")
    return oracles.verify_wsat_lower(args.n, args.r or 4, threads=args.threads)


def _verify_2l(args):
    _need(args, "l")
    return oracles.verify_2lminus3(args.l, threads=args.threads)


def _verify_cover(args):
    _need(args, "m", "r")
    return oracles.verify_double_cover(args.m, args.r)


def _verify_var_ext(args):
    _need(args, "pattern", "depth")
    return oracles.verify_var_ext(patterns.load_pattern(args.pattern), args.depth)


def _verify_dext(args):
    _need(args, "r_size", "s_size", "trials")
    return oracles.verify_dext(args.r_size, args.s_size, args.trials, args.seed)


VERIFIERS = {
    "wsat-lower": _verify_wsat,
    "2lminus3": _verify_2l,
    "double-cover": _verify_cover,
    "var-ext": _verify_var_ext,
    "dext": _verify_dext,
}


def cmd_verify(args):
    return _json(VERIFIERS[args.lemma](args).to_dict())


def cmd_bounds(args):
    n, r = args.n, args.r
    out = {
        "n": n,
        "r": r,
        "lambda_r": str(patterns.lambda_r(r)),
        "wsat_bound": patterns.wsat_bound(n, r),
    }
    lo, hi = patterns.kr_threshold_window(n, r)
    out["pc_window"] = [lo, hi]
    if r == 4:
        out["k4_lower_condition"] = patterns.k4_lower_condition(n)
        out["k4_upper_condition"] = patterns.k4_upper_condition(n)
    return _json(out)


COMMANDS = {
    "close": cmd_close,
    "percolates": cmd_percolates,
    "witness": cmd_witness,
    "gadget": cmd_gadget,
    "wsat": cmd_wsat,
    "estimate-pc": cmd_estimate_pc,
    "sweep": cmd_sweep,
    "spanning-prob": cmd_spanning_prob,
    "er-limit": cmd_er_limit,
    "verify": cmd_verify,
    "bounds": cmd_bounds,
}


def run(argv) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.seed is None:
            args.seed = _default_seed()
        text = COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SizeLimitError as exc:
        print(f"size limit: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except InvalidInputError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GraphBootError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)
    return EXIT_OK


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
