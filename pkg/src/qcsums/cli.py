"""``qcs``: command-line front end. Every command prints one JSON object."""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import cyclic_bounds, digraph, funceq, gp, maxsum, minsum
from .errors import CapacityError, QcsError
from .sums import parse_power

SIG_DIGITS = 15

CITE = {
    "girth": "girth = length of a shortest directed cycle (BFS)",
    "maxsum": "inf S_max = sum of girths of final strong components, always an integer",
    "minsum": "exact min-sum by enumeration of preferential arrangements with block quotient sums",
    "gp": "on a strongly connected digraph the quotient sum has a positive minimizer, unique up to scale",
    "shapiro_nonpos": cyclic_bounds.CITE_P_NONPOS,
    "shapiro_inf": cyclic_bounds.CITE_P_INF,
    "shapiro_finite": "finite p: best local minimum only, an upper bound on A_{n,k,p}",
    "mavlo": "sharp Mavlo-Georgiev: a/(b+cx)+b/(c+ax)+c/(a+bx) >= 3/(1+x) >= 3x/(1+x^3)",
    "F": "A_{n,*} = F(n), F(x) = min_{0<y<x-1} (F(y) + x/(y+1)), F(x) = x on [0,1]",
    "F_asym": "F(x) = e ln x - A + e||b+ln x||^2/(2 ln x) + O(1/(ln x)^2)",
    "f": "f(x) = min_n n x^(1/n) = e ln x + e||ln x||^2/(2 ln x) + O(1/(ln x)^2)",
    "shallit": "Shallit: min g_n = 3n - C + o(1), C ~ 1.3694514; min g_n <= 3n - 1",
    "anstar": "A_{n,*} = e ln n - A + O(1/ln n), A ~ 1.704656",
    "extremal": "min-sum of a strongly connected digraph on n vertices exceeds e ln(n+1-ln(n+1))",
    "ks": "min_x (ln x + ln(r-x)/x) > ln ln(r - ln r)",
    "chc": "conditional on the Caccetta-Haggkvist conjecture: girth <= ceil(n/k)",
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _num(v):
    """Round floats to SIG_DIGITS significant digits; recurse into containers."""
    if isinstance(v, (bool, np.bool_)) or v is None:
        return None if v is None else bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return "nan"
        return float(f"{v:.{SIG_DIGITS}g}")
    if isinstance(v, np.ndarray):
        return [_num(x) for x in v.tolist()]
    if isinstance(v, dict):
        return {str(k): _num(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_num(x) for x in v]
    return v


def _result(command, args, value, attained=None, certificate=None, citations=()):
    inp = {k: v for k, v in vars(args).items() if k not in ("func", "command", "csv")}
    return {
        "command": command,
        "input": _num(inp),
        "value": _num(value),
        "attained": attained,
        "certificate": _num(certificate),
        "citations": list(citations),
    }


def _graph(args):
    fmt = args.format
    if fmt is None:
        return digraph.read_graph(args.input)
    with open(args.input) as fh:
        return digraph.parse_graph(fh.read(), fmt)


# ---------------------------------------------------------------------------
# commands


def cmd_girth(args):
    g = _graph(args)
    val = digraph.girth(g)
    cyc = digraph.shortest_cycle(g)
    return _result("girth", args, val if val is not None else "acyclic",
                   certificate={"cycle": cyc}, citations=[CITE["girth"]])


def cmd_components(args):
    g = _graph(args)
    d = digraph.scc(g)
    cert = {
        "components": [list(c) for c in d.components],
        "final": [list(c) for c in d.final_components()],
        "condensation_edges": [list(e) for e in d.condensation.edges],
    }
    return _result("components", args, len(d.components), certificate=cert)


def cmd_minsum(args):
    g = _graph(args)
    rep = minsum.minsum_exact(g, cap=args.cap)
    c = rep.certificate
    cert = {
        "blocks": [list(b) for b in c.partition.blocks],
        "block_values": list(c.block_values),
        "minimizer": rep.minimizer_dict(),
        "status": rep.status,
    }
    return _result("minsum", args, rep.value, rep.attained, cert, [CITE["minsum"]])


def cmd_maxsum(args):
    g = _graph(args)
    val = maxsum.maxsum_infimum(g)
    x = maxsum.maxsum_witness(g, args.epsilon)
    cert = {
        "final_components": [list(c) for c in digraph.final_strong_components(g)],
        "witness": dict(zip(g.vertices, x.tolist())),
        "witness_value": maxsum.witness_value(g, args.epsilon),
    }
    return _result("maxsum", args, val, maxsum.maxsum_attained(g), cert, [CITE["maxsum"]])


def cmd_gp(args):
    g = _graph(args)
    pin = None
    if args.pin:
        v, _, val = args.pin.partition("=")
        pin = (v, float(val) if val else 1.0)
    spec = gp.build_quotient_sum(g, pin)
    rep = gp.minimize(spec, tol=args.tol, seed=args.seed)
    cert = {"minimizer": rep.minimizer_dict(), "status": rep.status, "iterations": rep.iterations}
    if isinstance(rep.certificate, dict):
        cert.update(rep.certificate)
    return _result("gp", args, rep.value, rep.attained, cert, [CITE["gp"]])


def cmd_shapiro(args):
    p = parse_power(args.p)
    rep = cyclic_bounds.minimize_diananda(args.n, args.k, p, starts=args.starts, seed=args.seed)
    if p <= 0:
        cites = [CITE["shapiro_nonpos"]]
    elif math.isinf(p):
        cites = [CITE["shapiro_inf"]]
    else:
        cites = [CITE["shapiro_finite"]]
    cert = {"status": rep.status, "minimizer": rep.minimizer}
    return _result("shapiro", args, rep.value, rep.attained, cert, cites)


def cmd_mavlo(args):
    run = cyclic_bounds.mavlo_property_run(args.samples, args.seed)
    cert = dict(run)
    value = None
    if args.x is not None:
        orig, sharp = cyclic_bounds.mavlo_bounds(args.x)
        cert.update({"original_bound": orig, "sharp_bound": sharp})
        value = sharp
    ok = run["min_slack_sharp"] >= -1e-12 and run["max_identity_residual"] <= 1e-10
    cert["holds"] = ok
    return _result("mavlo", args, value, None, cert, [CITE["mavlo"]])


def cmd_funceq(args):
    kind = args.kind
    if kind == "F":
        if args.x is None:
            raise _UsageError("funceq F needs --x")
        stair = funceq.optimal_staircase(args.x) if args.x > 1 else None
        value = funceq.F_exact(args.x)
        cert = {"stages": stair.n if stair else 1, "chain": list(stair.chain) if stair else []}
        if args.csv:
            table = funceq.build_F_table(max(args.x, 1.0))
            table.to_csv(args.csv)
            cert["csv"] = args.csv
            cert["table_value"] = table(args.x)
        cites = [CITE["F"]]
        if args.x > math.e**2:
            cert["asymptotic_residual"] = funceq.F_residual(args.x)
            cites.append(CITE["F_asym"])
        return _result("funceq", args, value, None, cert, cites)
    if kind == "f":
        if args.x is None:
            raise _UsageError("funceq f needs --x")
        value, n = funceq.amgm_f(args.x)
        cert = {"argmin_n": n}
        if args.x > 1:
            cert["asymptotic_residual"] = funceq.amgm_f_residual(args.x)
        return _result("funceq", args, value, True, cert, [CITE["f"]])
    if kind == "shallit":
        if args.n is None:
            raise _UsageError("funceq shallit needs --n")
        rep, C = funceq.shallit_min(args.n)
        cert = {"C_n": C, "status": rep.status, "minimizer": rep.minimizer_dict()}
        return _result("funceq", args, rep.value, rep.attained, cert, [CITE["shallit"]])
    if kind == "anstar":
        if args.n is None:
            raise _UsageError("funceq anstar needs --n")
        value = funceq.a_n_star(args.n)
        cert = {"asymptotic": math.e * math.log(args.n) - cyclic_bounds.BOUNDS["variable_k_A"].value}
        if args.bruteforce:
            bf, k = funceq.a_n_star_bruteforce(args.n, seed=args.seed)
            cert.update({"bruteforce": bf, "best_k": list(k)})
        return _result("funceq", args, value, None, cert, [CITE["F"], CITE["anstar"]])
    raise _UsageError(f"unknown funceq kind {kind!r}")  # pragma: no cover


def cmd_extremal(args):
    val = minsum.extremal_minsum_value(args.n)
    lb = minsum.extremal_lower_bound(args.n)
    cert = {"k": minsum.extremal_minsum_k(args.n), "lower_bound": lb}
    if args.threshold is not None:
        cert["below_threshold_possible"] = val < args.threshold
        cert["lower_bound_exceeds_threshold"] = lb > args.threshold
        cert["answer"] = "yes" if val < args.threshold else "no"
    return _result("extremal", args, val, True, cert, [CITE["extremal"]])


def cmd_ks(args):
    val = minsum.ks_gap(args.r, sharp=args.sharp)
    return _result("ks", args, val, None, {"positive": val > 0}, [CITE["ks"]])


def cmd_game(args):
    val = maxsum.game_bound(args.n, args.k)
    return _result("game", args, val, None, {"conditional": True}, [CITE["chc"]])


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized paths")
    common.add_argument("--threads", type=int, default=1, help="worker cap (solvers here are sequential)")
    common.add_argument("--csv", default=None, help="optional CSV output path")

    graph = _Parser(add_help=False)
    graph.add_argument("-i", "--input", required=True, help="edge-list or JSON graph file")
    graph.add_argument("--format", choices=["edge-list", "json"], default=None)

    p = _Parser(prog="qcs", description="Quasi-cyclic sums: exact values, bounds and checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("girth", parents=[common, graph])
    s.set_defaults(func=cmd_girth)
    s = sub.add_parser("components", parents=[common, graph])
    s.set_defaults(func=cmd_components)
    s = sub.add_parser("minsum", parents=[common, graph])
    s.add_argument("--cap", type=int, default=minsum.DEFAULT_CAP)
    s.set_defaults(func=cmd_minsum)
    s = sub.add_parser("maxsum", parents=[common, graph])
    s.add_argument("--epsilon", type=float, default=1e-3)
    s.set_defaults(func=cmd_maxsum)
    s = sub.add_parser("gp", parents=[common, graph])
    s.add_argument("--pin", default=None, help="VERTEX=VALUE")
    s.add_argument("--tol", type=float, default=1e-10)
    s.set_defaults(func=cmd_gp)
    s = sub.add_parser("shapiro", parents=[common])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--p", default="1", help="power order; accepts -inf, 0, inf")
    s.add_argument("--starts", type=int, default=64)
    s.set_defaults(func=cmd_shapiro)
    s = sub.add_parser("mavlo", parents=[common])
    s.add_argument("--samples", type=int, default=100_000)
    s.add_argument("--x", type=float, default=None)
    s.set_defaults(func=cmd_mavlo)
    s = sub.add_parser("funceq", parents=[common])
    s.add_argument("kind", choices=["F", "f", "shallit", "anstar"])
    s.add_argument("--x", type=float, default=None)
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--bruteforce", action="store_true")
    s.set_defaults(func=cmd_funceq)
    s = sub.add_parser("extremal", parents=[common])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--threshold", type=float, default=None)
    s.set_defaults(func=cmd_extremal)
    s = sub.add_parser("ks", parents=[common])
    s.add_argument("--r", type=float, required=True)
    s.add_argument("--sharp", action="store_true")
    s.set_defaults(func=cmd_ks)
    s = sub.add_parser("game", parents=[common])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(func=cmd_game)
    return p


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        result = args.func(args)
    except _UsageError as exc:
        print(str(exc), file=err)
        return 1
    except CapacityError as exc:
        print(json.dumps({"error": "capacity", "message": str(exc)}), file=err)
        return 2
    except (QcsError, OSError) as exc:
        print(json.dumps({"error": "validation", "message": str(exc)}), file=err)
        return 1
    print(json.dumps(result), file=out)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
