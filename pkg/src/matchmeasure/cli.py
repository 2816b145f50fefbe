"""Command-line interface: ``matchmeasure <subcommand> ...``.

Exit codes: 0 success, 1 computation failure, 2 usage or input error,
3 resource cap exceeded. JSON payloads carry ``"schema": "1"``; exact
quantities are rational strings ("p/q"), big counts are decimal strings and
floats use Python's shortest round-trip repr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import bs_stats, covers, expander, generators, mckay, measures, selftest
from ._errors import GenerationError, ResourceCapError, RootSolverError
from .counting import (
    all_matchings_edge_probability,
    claw_free,
    edge_probabilities,
    edge_probability,
    independence_coefficients,
    independence_stats,
    matching_coefficients,
    matching_stats,
    pm_count,
)
from .graph import Graph, bipartition, format_graph, read_graph

__all__ = ["main", "build_parser"]

SCHEMA = "1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _plain(obj):
    """Recursively convert to JSON-ready values with the conventions above."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, int)):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, complex):
        return {"re": _plain(obj.real), "im": _plain(obj.imag)}
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, bytes):
        return obj.hex()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _dump(payload: dict) -> str:
    return json.dumps(_plain({"schema": SCHEMA, **payload}), indent=2) + "\n"


def _edge(text: str) -> tuple:
    try:
        u, v = (int(t) for t in text.split(","))
    except ValueError as exc:
        raise UsageError(f"edge must look like 'u,v', got {text!r}") from exc
    return u, v


def _load(path: str) -> Graph:
    try:
        return read_graph(path)
    except OSError as exc:
        raise UsageError(f"cannot read graph file: {exc}") from exc


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_graph_result(args, g: Graph, sidecar: dict, comment: str) -> None:
    """Graph file plus JSON sidecar with --out; otherwise one JSON document with the graph inline."""
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(format_graph(g, comment))
        with open(args.out + ".json", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(_dump(sidecar))
        sys.stdout.write(_dump(sidecar))
    else:
        sys.stdout.write(_dump({**sidecar, "graph": format_graph(g, comment)}))


# subcommands ---------------------------------------------------------------------


def cmd_gen(args) -> None:
    fam, n = args.family, args.n
    if fam == "empty":
        g = generators.make_empty(n)
    elif fam == "path":
        g = generators.make_path(n)
    elif fam == "cycle":
        g = generators.make_cycle(n)
    elif fam == "complete":
        g = generators.make_complete(n)
    elif fam == "complete-bipartite":
        g = generators.make_complete_bipartite(n, args.m if args.m is not None else n)
    elif fam == "petersen":
        g = generators.make_petersen()
    elif fam == "random-regular":
        g = generators.random_regular(n, args.d, args.seed)
    elif fam == "random-bipartite-regular":
        g = generators.random_bipartite_regular(n, args.d, args.seed)
    elif fam == "large-girth":
        g = generators.large_girth_regular(n, args.d, args.g_min, args.seed)
    else:
        g = generators.random_graph(n, args.d, args.p, args.seed)
    _emit(format_graph(g, f"gen {fam} n={n} d={args.d} seed={args.seed}"), args.out)


def cmd_poly(args) -> None:
    g = _load(args.graph)
    c = matching_coefficients(g)
    _emit(_dump({"kind": "matching", "v": g.num_vertices, "coeffs": [str(x) for x in c.coeffs]}), args.out)


def cmd_indep(args) -> None:
    g = _load(args.graph)
    c = independence_coefficients(g)
    payload = {"kind": "independence", "v": g.num_vertices, "coeffs": [str(x) for x in c.coeffs], "claw_free": claw_free(g)}
    _emit(_dump(payload), args.out)


def cmd_measure(args) -> None:
    g = _load(args.graph)
    m = measures.matching_measure(g) if args.kind == "matching" else measures.independence_measure(g)
    _emit(_dump({"kind": args.kind, **m.to_json()}), args.out)


def cmd_stats(args) -> None:
    g = _load(args.graph)
    ms = matching_stats(g)
    rho = measures.matching_measure(g)
    st = measures.stats_from_measure(rho, "matching")
    payload = {
        "v": g.num_vertices,
        "matching": ms.to_json(),
        "matching_from_measure": {
            "entropy_per_vertex": st.entropy,
            "expected_size_normalized": st.expectation,
            "variance_normalized": st.variance,
            "matching_ratio": st.ratio,
            "pm_entropy_per_vertex": measures.pm_entropy_from_measure(rho),
        },
        "independence": independence_stats(g).to_json(),
    }
    try:
        ist = measures.stats_from_measure(measures.independence_measure(g), "independence")
        payload["independence_from_measure"] = {
            "entropy_per_vertex": ist.entropy,
            "expected_size_normalized": ist.expectation,
            "variance_normalized": ist.variance,
            "independence_ratio": ist.ratio,
        }
    except RootSolverError:
        payload["independence_from_measure"] = None
    _emit(_dump(payload), args.out)


def cmd_pm(args) -> None:
    g = _load(args.graph)
    parts = bipartition(g)
    method = "permanent" if parts is not None and len(parts[0]) == len(parts[1]) else "matching-polynomial"
    _emit(_dump({"v": g.num_vertices, "pm": str(pm_count(g)), "method": method}), args.out)


def cmd_edge_prob(args) -> None:
    g = _load(args.graph)
    if args.all_matchings:
        if args.edge is None:
            raise UsageError("--all-matchings needs --edge")
        e = _edge(args.edge)
        payload = {"edge": list(e), "p": all_matchings_edge_probability(g, e), "ensemble": "all-matchings"}
    elif args.edge is not None:
        e = _edge(args.edge)
        payload = {"edge": list(e), "p": edge_probability(g, e), "ensemble": "perfect-matchings"}
    else:
        probs = edge_probabilities(g)
        payload = {"ensemble": "perfect-matchings", "edges": [{"edge": list(e), "p": p} for e, p in sorted(probs.items())]}
    _emit(_dump(payload), args.out)


def cmd_cover(args) -> None:
    g = _load(args.graph)
    e = _edge(args.edge)
    cover, new = covers.n_fold_cover(covers.CoverSpec(g, e, args.n))
    p = edge_probability(g, e)
    predicted = covers.cover_edge_probability_formula(p, args.n)
    verified = False
    if cover.num_vertices // 2 <= 18:
        verified = edge_probability(cover, new[0]) == predicted
    sidecar = {"edge": list(new[0]), "new_edges": [list(x) for x in new], "p_base": p, "p": predicted, "verified": verified}
    _emit_graph_result(args, cover, sidecar, f"{args.n}-fold cover at edge {e[0]},{e[1]}")


def cmd_construct(args) -> None:
    if args.kind == "theorem52":
        g, e = covers.build_theorem52_graph(args.d, args.n, args.simple)
        p = Fraction(1, (args.d - 1) ** args.n + 1)
        verified = g.num_vertices // 2 <= 18 and edge_probability(g, e) == p
        _emit_graph_result(args, g, {"edge": list(e), "p": p, "verified": verified}, f"theorem52 d={args.d} n={args.n}")
    elif args.kind == "skewed":
        sk = covers.build_skewed_graph(args.d)
        sidecar = {
            "edge": list(sk.edge),
            "p": sk.p,
            "verified": sk.verified,
            "sequence": [list(s) for s in sk.sequence],
            "side": sk.side,
            "c": sk.c,
        }
        _emit_graph_result(args, sk.graph, sidecar, f"skewed d={args.d}")
    else:
        g = _load(args.graph)
        e, f = _edge(args.e), _edge(args.f)
        two, tilde = covers.build_gap_pair(g, e, f)
        pm_g = pm_count(g)
        p_e, p_f = edge_probability(g, e), edge_probability(g, f)
        pm_tilde = pm_count(tilde)
        identity = pm_g**2 * (p_e * p_f + (1 - p_e) * (1 - p_f))
        sidecar = {
            "e": list(e),
            "f": list(f),
            "p_e": p_e,
            "p_f": p_f,
            "pm_2G": str(pm_g**2),
            "pm_tilde": str(pm_tilde),
            "identity_holds": identity == pm_tilde,
        }
        if args.out:
            with open(args.out + ".2g", "w", encoding="utf-8", newline="\n") as fh:
                fh.write(format_graph(two, "2G"))
        _emit_graph_result(args, tilde, sidecar, "gap pair G~")


def cmd_mckay(args) -> None:
    d = args.d
    params = mckay.McKayParams.from_degree(d)
    gamma = 1j
    closed = {
        "log": mckay.log_integral(d, gamma),
        "reciprocal": mckay.reciprocal_integral(d, gamma),
        "derivative": mckay.derivative_integral(d),
        "log_abs": mckay.log_abs_integral(d),
    }
    quad = {
        "log": mckay.log_integral_quad(d, gamma),
        "reciprocal": mckay.reciprocal_integral_quad(d, gamma),
        "derivative": mckay.derivative_integral_quad(d),
        "log_abs": mckay.log_abs_integral_quad(d),
    }
    t, val = mckay.gurvits_max(d)
    payload = {
        **params.to_json(),
        "limits": mckay.theorem_limits(d) if d >= 3 else None,
        "closed_forms_at_i": closed,
        "quadrature_residuals": {k: abs(closed[k] - quad[k]) for k in closed},
        "gurvits": {"t_star": t, "max": val, "ln_S_d": math.log(params.S_d)},
    }
    _emit(_dump(payload), args.out)


def cmd_expander(args) -> None:
    g = _load(args.graph)
    rep = expander.compute_delta(g)
    e = _edge(args.edge) if args.edge else None
    t19 = expander.theorem19_check(g, e)
    checks = {"theorem19": t19.to_json()}
    m = expander.perfect_matching(g)
    if m is not None and rep.delta is not None and rep.delta > 0:
        dg, _ = expander.matched_digraph(g, m)
        n = dg.num_vertices
        dexp = expander.digraph_expansion(dg)
        cycles = [expander.shortest_alternating_cycle_through(g, m, edge) for edge in g.edges]
        checks["lemma61"] = {"digraph_expansion": dexp, "holds": dexp is not None and dexp >= rep.delta}
        checks["lemma63"] = {
            "max_alternating_cycle": max(cycles),
            "bound": expander.lemma63_bound(n, rep.delta),
            "holds": max(cycles) <= expander.lemma63_bound(n, rep.delta),
        }
    if e is not None:
        checks["prop65"] = expander.prop65_check(g, e)
    payload = {
        "delta": rep.delta,
        "witness_set": list(rep.witness_set),
        "side": rep.side,
        "bound_checks": checks,
        "p_min": t19.p_min,
        "p_max": t19.p_max,
    }
    _emit(_dump(payload), args.out)


def cmd_bs_stats(args) -> None:
    g = _load(args.graph)
    _emit(_dump(bs_stats.ball_distribution(g, args.r).to_json()), args.out)


def cmd_bs_dist(args) -> None:
    a, b = _load(args.graph), _load(args.other)
    tv = bs_stats.tv_distance(bs_stats.ball_distribution(a, args.r), bs_stats.ball_distribution(b, args.r))
    _emit(_dump({"r": args.r, "tv": tv}), args.out)


def cmd_converge(args) -> None:
    if args.manifest:
        try:
            man = bs_stats.load_manifest(args.manifest)
        except OSError as exc:
            raise UsageError(f"cannot read manifest: {exc}") from exc
    else:
        if not args.sizes:
            raise UsageError("give --manifest or --sizes")
        man = bs_stats.load_manifest(
            {"family": args.family, "d": args.d, "g_min": args.g_min, "sizes": args.sizes, "r": args.r, "seed": args.seed}
        )
    rows = bs_stats.run_convergence_experiment(man["spec"], man["sizes"], man["r"], man["seed"], threads=args.threads)
    _emit(bs_stats.rows_to_csv(rows), args.out)


def cmd_diverge(args) -> None:
    _emit(_dump(bs_stats.run_divergence_experiment(args.d, args.seed, args.r, args.base)), args.out)


def cmd_selftest(args) -> None:
    graphs = list(selftest.atlas_graphs(args.max_v))
    graphs += list(selftest.random_suite_graphs(args.random, seed=args.seed))
    rep = selftest.run_identity_suite(graphs)
    _emit(_dump(rep.to_json()), args.out)
    if not rep.ok:
        raise ArithmeticError(f"{len(rep.failures)} identity failures")


# parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output to this path instead of standard output")
    common.add_argument("--threads", type=int, default=1, help="worker cap; never changes the output")
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")

    parser = argparse.ArgumentParser(prog="matchmeasure", description="Matching measures and local statistics of graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_, parents=(common,)):
        p = sub.add_parser(name, parents=list(parents), help=help_)
        p.set_defaults(func=func)
        return p

    p = add("gen", cmd_gen, "generate a graph file")
    p.add_argument(
        "--family",
        required=True,
        choices=[
            "empty", "path", "cycle", "complete", "complete-bipartite", "petersen",
            "random-regular", "random-bipartite-regular", "large-girth", "random",
        ],
    )
    p.add_argument("--n", type=int, default=10, help="vertices (per side for bipartite families)")
    p.add_argument("--m", type=int, help="second side of complete-bipartite")
    p.add_argument("--d", type=int, default=3, help="degree (maximum degree for 'random')")
    p.add_argument("--g-min", type=int, default=3)
    p.add_argument("--p", type=float, default=0.3, help="edge probability for 'random'")

    for name, func, help_ in (
        ("poly", cmd_poly, "matching polynomial coefficients m_k"),
        ("indep", cmd_indep, "independence polynomial coefficients i_k"),
        ("stats", cmd_stats, "matching and independent-set statistics, two routes"),
        ("pm", cmd_pm, "number of perfect matchings"),
        ("bs-stats", cmd_bs_stats, "distribution of rooted r-ball types"),
    ):
        p = add(name, func, help_)
        p.add_argument("--graph", required=True)
        if name == "bs-stats":
            p.add_argument("--r", type=int, default=2)

    p = add("measure", cmd_measure, "matching or independence root measure")
    p.add_argument("--graph", required=True)
    p.add_argument("--kind", choices=["matching", "independence"], default="matching")

    p = add("edge-prob", cmd_edge_prob, "exact edge probabilities")
    p.add_argument("--graph", required=True)
    p.add_argument("--edge")
    p.add_argument("--all-matchings", action="store_true", help="uniform random matching instead of perfect matching")

    p = add("cover", cmd_cover, "n-fold cover at an edge")
    p.add_argument("--graph", required=True)
    p.add_argument("--edge", required=True)
    p.add_argument("--n", type=int, required=True)

    p = add("construct", cmd_construct, "constructions with prescribed edge probabilities", parents=())
    csub = p.add_subparsers(dest="kind", required=True)
    q = csub.add_parser("theorem52", parents=[common])
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--simple", action=argparse.BooleanOptionalAction, default=True)
    q = csub.add_parser("skewed", parents=[common])
    q.add_argument("--d", type=int, required=True)
    q = csub.add_parser("gap", parents=[common])
    q.add_argument("--graph", required=True)
    q.add_argument("--e", required=True)
    q.add_argument("--f", required=True)

    p = add("mckay", cmd_mckay, "Kesten-McKay constants and integrals")
    p.add_argument("--d", type=int, required=True)

    p = add("expander", cmd_expander, "expansion constant and edge-probability bounds")
    p.add_argument("--graph", required=True)
    p.add_argument("--edge")

    p = add("bs-dist", cmd_bs_dist, "total-variation distance of r-ball distributions")
    p.add_argument("--graph", required=True)
    p.add_argument("--other", required=True)
    p.add_argument("--r", type=int, default=2)

    p = add("converge", cmd_converge, "convergence experiment, CSV output")
    p.add_argument("--manifest", help="JSON manifest path")
    p.add_argument("--family", default="large_girth_regular", choices=list(bs_stats.FAMILIES))
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--g-min", type=int, default=3)
    p.add_argument("--sizes", type=int, nargs="*")
    p.add_argument("--r", type=int, default=2)

    p = add("diverge", cmd_diverge, "locally close pair with far perfect-matching entropy")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--base", choices=["complete", "skewed"], default="complete")

    p = add("selftest", cmd_selftest, "identity suite on all graphs up to 7 vertices")
    p.add_argument("--max-v", type=int, default=7)
    p.add_argument("--random", type=int, default=0, help="extra random graphs (v <= 12, degree <= 5)")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.threads < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        args.func(args)
    except ResourceCapError as exc:
        print(f"error: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, ValueError, KeyError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GenerationError, ArithmeticError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
