"""Command-line entry point.

Subcommands: gen, blur, decompose, htsd, embed, verify, bench. Exit codes:
0 success, 1 audit or verdict failure, 2 usage error. Every report carries
the package version, the seed, and an echo of the resolved configuration.
The seed falls back to the LOWDIAM_SEED environment variable.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

import numpy as np

from . import __version__
from .blur import BlurError, BlurParams, blur
from .decompose import (DecomposeError, DecomposeParams, IterationCapError,
                        ts_decompose)
from .embed import EmbedError, build_hst, build_projected_tree, stretch_per_edge
from .generators import GeneratorError, generate_graph, parse_graph_spec
from .graph import Graph, GraphError, GraphFormatError, parse_graph, write_graph
from .harness import (AuditError, TrialConfig, make_oracle, run_trials)
from .htsd import HtsdError, build_htsd
from .oracle import CallLedger, OracleError, approx_sssp, ledger_report
from .report import emit, render_csv, write_atomic
from .sampling import RandomStream, SamplingError
from .suites import SUITES, run_suite, verdict_lines

_USAGE_ERRORS = (GraphError, GraphFormatError, GeneratorError, OracleError,
                 BlurError, DecomposeError, HtsdError, EmbedError,
                 SamplingError, ValueError, OSError)


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("LOWDIAM_SEED")
    if env is not None:
        try:
            seed = int(env)
        except ValueError:
            raise ValueError(f"LOWDIAM_SEED is not an integer: {env!r}")
        if seed < 0:
            raise ValueError("LOWDIAM_SEED must be non-negative")
        return seed
    return 0


def _load_graph(source: str) -> Graph:
    if os.path.exists(source) or "/" in source:
        with open(source, "r", encoding="utf-8") as fh:
            return parse_graph(fh.read())
    return generate_graph(source)


def _edge_key(u: int, v: int) -> str:
    return f"{u}-{v}"


def _base_report(args, seed: int) -> dict:
    echo = {k: v for k, v in sorted(vars(args).items())
            if k != "func" and v is not None}
    echo["seed"] = seed
    return {"version": __version__, "seed": seed, "config": echo}


def _write(args, payload, rows=None, header=None) -> None:
    if args.format == "csv":
        if rows is None:
            raise ValueError("this subcommand has no CSV table; use --format json")
        text = render_csv(rows, header)
        if args.out:
            write_atomic(args.out, text)
        else:
            sys.stdout.write(text)
        return
    text = emit(payload, args.out, "json")
    if not args.out:
        sys.stdout.write(text)


def _write_failure(args, report) -> int:
    text = emit(report, args.out, "json")
    if not args.out:
        sys.stdout.write(text)
    print(f"run failed: {report['failure']}", file=sys.stderr)
    return 1


def _tsd_json(tsd) -> dict:
    return {
        "clusters": [{"members": c.members.tolist(),
                      "root": int(c.tree.root),
                      "tree_edges": [[p, v, w] for p, v, w in c.tree.edges()]}
                     for c in tsd.clusters],
        "cut_edges": [[int(u), int(v)] for u, v in tsd.cut_edges],
        "deleted_edges": [[int(u), int(v)] for u, v in tsd.deleted_edges],
        "loads": {_edge_key(u, v): int(c)
                  for (u, v), c in sorted(tsd.loads.items())},
        "iterations": int(tsd.iterations),
    }


def cmd_gen(args) -> int:
    spec = " ".join(args.spec)
    parse_graph_spec(spec)          # validate before any work
    g = generate_graph(spec)
    text = write_graph(g)
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_blur(args) -> int:
    seed = _resolve_seed(args)
    g = _load_graph(args.graph)
    rho = args.rho
    if args.alpha is not None:
        params = BlurParams(rho=rho, alpha=args.alpha, eps=args.alpha ** 2)
    else:
        params = BlurParams.default(g.n, rho)
    b = np.array([int(x) for x in args.b.split(",")], dtype=np.int64) \
        if args.b else g.ids[:1]
    report = _base_report(args, seed)
    if args.trials > 1:
        cfg = TrialConfig(graph=g, algorithm="blur",
                          params={"rho": rho, "alpha": args.alpha,
                                  "b": b.tolist()},
                          oracle=args.oracle, oracle_eps=args.oracle_eps,
                          trials=args.trials, seed=seed,
                          threads=args.threads)
        stats = run_trials(cfg)
        freq = stats.cut_frequencies()
        header = ["u", "v", "length", "cut_freq", "trials"]
        rows = [[int(u), int(v), float(w), float(f), args.trials]
                for u, v, w, f in zip(g.eu, g.ev, g.ew, freq)]
        report.update({"edges": [dict(zip(header, r)) for r in rows],
                       "ledger": {"total": stats.ledger_total,
                                  "merged": stats.ledger_merged}})
        _write(args, report, rows, header)
        return 0
    stream = RandomStream(seed, (0,))
    oracle = make_oracle(args.oracle, args.oracle_eps, stream.child("oracle"))
    ledger = CallLedger()
    picked, trace = blur(g, params, b, oracle, stream.child("blur"), ledger)
    report.update({
        "rho": params.rho, "alpha": params.alpha,
        "reach_bound": params.reach(),
        "seeds": b.tolist(), "picked": picked.tolist(),
        "rounds": [{"round": i, "radius": r, "size": s}
                   for i, r, s in trace.steps],
        "ledger": ledger_report(ledger),
    })
    inside = np.isin(g.eu, picked) ^ np.isin(g.ev, picked)
    header = ["u", "v", "length", "cut"]
    rows = [[int(u), int(v), float(w), int(c)]
            for u, v, w, c in zip(g.eu, g.ev, g.ew, inside)]
    _write(args, report, rows, header)
    return 0


def cmd_decompose(args) -> int:
    seed = _resolve_seed(args)
    g = _load_graph(args.graph)
    c = args.c if args.c is not None else 4.0
    report = _base_report(args, seed)
    stream = RandomStream(seed, (0,))
    oracle = make_oracle(args.oracle, args.oracle_eps, stream.child("oracle"))
    ledger = CallLedger()
    params = DecomposeParams(delta=args.delta, c=c, n=g.n)
    try:
        tsd = ts_decompose(g, params, oracle, stream.child("decompose"),
                           ledger)
    except IterationCapError as exc:
        report["failure"] = str(exc)
        return _write_failure(args, report)
    report.update(_tsd_json(tsd))
    report["ledger"] = ledger_report(ledger)
    cut = {(u, v) if u < v else (v, u) for u, v in tsd.cut_edges}
    gone = {(u, v) if u < v else (v, u) for u, v in tsd.deleted_edges}
    header = ["u", "v", "length", "cut", "deleted"]
    rows = [[int(u), int(v), float(w), int((u, v) in cut),
             int((u, v) in gone)]
            for u, v, w in zip(g.eu.tolist(), g.ev.tolist(), g.ew)]
    if args.trials > 1:
        cfg = TrialConfig(graph=g, algorithm="decompose",
                          params={"delta": args.delta, "c": c},
                          oracle=args.oracle, oracle_eps=args.oracle_eps,
                          trials=args.trials, seed=seed,
                          threads=args.threads)
        stats = run_trials(cfg)
        freq = stats.cut_frequencies()
        header = ["u", "v", "length", "cut_freq", "trials"]
        rows = [[int(u), int(v), float(w), float(f), args.trials]
                for u, v, w, f in zip(g.eu, g.ev, g.ew, freq)]
        report["cut_frequencies"] = [dict(zip(header, r)) for r in rows]
        report["trial_failures"] = stats.failure_events
    _write(args, report, rows, header)
    return 0


def _build_hierarchy(args, g, seed):
    c = args.c if args.c is not None else 2.0
    stream = RandomStream(seed, (0,))
    oracle = make_oracle(args.oracle, args.oracle_eps, stream.child("oracle"))
    ledger = CallLedger()
    h = build_htsd(g, c, oracle, stream.child("htsd"), ledger)
    return h, ledger


def cmd_htsd(args) -> int:
    seed = _resolve_seed(args)
    g = _load_graph(args.graph)
    report = _base_report(args, seed)
    if args.trials > 1:
        cfg = TrialConfig(graph=g, algorithm="htsd",
                          params={"c": args.c if args.c is not None else 2.0,
                                  "p": args.p},
                          oracle=args.oracle, oracle_eps=args.oracle_eps,
                          trials=args.trials, seed=seed,
                          threads=args.threads)
        stats = run_trials(cfg)
        dec_mean = (stats.decouple_counts
                    * np.arange(stats.decouple_counts.shape[0])[:, None]
                    ).sum(axis=0) / max(stats.trials - stats.failure_events, 1) \
            if stats.decouple_counts is not None else np.zeros(g.num_edges)
        header = ["u", "v", "length", "decouple_mean", "load_mean"]
        load_mean = (stats.edge_load_sums
                     / max(stats.trials - stats.failure_events, 1)
                     if stats.edge_load_sums is not None
                     else np.zeros(g.num_edges))
        rows = [[int(u), int(v), float(w), float(dm), float(lm)]
                for u, v, w, dm, lm in zip(g.eu, g.ev, g.ew, dec_mean,
                                           load_mean)]
        report.update({"edges": [dict(zip(header, r)) for r in rows],
                       "trial_failures": stats.failure_events,
                       "ledger": {"total": stats.ledger_total,
                                  "merged": stats.ledger_merged}})
        _write(args, report, rows, header)
        return 0
    try:
        h, ledger = _build_hierarchy(args, g, seed)
    except IterationCapError as exc:
        report["failure"] = str(exc)
        return _write_failure(args, report)
    dec = h.decoupling_levels()
    loads = h.cumulative_loads()
    report.update({
        "delta": h.delta,
        "d_seq": h.d_seq.tolist(),
        "levels": [_tsd_json(lvl) for lvl in h.levels],
        "decoupling": {_edge_key(int(u), int(v)): int(l)
                       for u, v, l in zip(g.eu, g.ev, dec)},
        "loads": {_edge_key(int(u), int(v)): int(l)
                  for u, v, l in zip(g.eu, g.ev, loads)},
        "ledger": ledger_report(ledger),
    })
    header = ["u", "v", "length", "decouple_level", "load"]
    rows = [[int(u), int(v), float(w), int(dl), int(ld)]
            for u, v, w, dl, ld in zip(g.eu, g.ev, g.ew, dec, loads)]
    _write(args, report, rows, header)
    return 0


def cmd_embed(args) -> int:
    seed = _resolve_seed(args)
    g = _load_graph(args.graph)
    report = _base_report(args, seed)
    if args.trials > 1:
        cfg = TrialConfig(graph=g, algorithm=args.kind,
                          params={"c": args.c if args.c is not None else 2.0,
                                  "p": args.p},
                          oracle=args.oracle, oracle_eps=args.oracle_eps,
                          trials=args.trials, seed=seed,
                          threads=args.threads)
        stats = run_trials(cfg)
        report.update({
            "kind": args.kind,
            "stretch_mean": stats.stretch_mean(),
            "stretch_se": stats.stretch_stderr(),
            "p": args.p,
            "p_stretch_mean": stats.p_stretch_mean(),
            "p_stretch_se": stats.p_stretch_stderr(),
            "cap_violations": stats.cap_violations_4d,
            "domination_violations": stats.domination_violations,
            "trial_failures": stats.failure_events,
            "ledger": {"total": stats.ledger_total,
                       "merged": stats.ledger_merged}})
        header = ["kind", "p", "stretch_mean", "stretch_se",
                  "p_stretch_mean", "p_stretch_se", "trials"]
        rows = [[args.kind, args.p, stats.stretch_mean(),
                 stats.stretch_stderr(), stats.p_stretch_mean(),
                 stats.p_stretch_stderr(), args.trials]]
        _write(args, report, rows, header)
        return 0
    try:
        h, ledger = _build_hierarchy(args, g, seed)
    except IterationCapError as exc:
        report["failure"] = str(exc)
        return _write_failure(args, report)
    stretch = None
    if args.kind == "projected":
        tree = build_projected_tree(h)
        tree_edges = [{"a": int(a), "b": int(b), "len": float(w),
                       "projected_edge": [int(pu), int(pv)]}
                      for a, b, w, pu, pv in zip(tree.edges_a, tree.edges_b,
                                                 tree.edge_len, tree.proj_u,
                                                 tree.proj_v)]
        embedding = {str(int(v)): int(n)
                     for v, n in zip(g.ids, tree.embed)}
        loads = {_edge_key(u, v): int(c)
                 for (u, v), c in sorted(tree.loads().items())}
        stretch = stretch_per_edge(tree)
    else:
        tree = build_hst(h)
        tree_edges = [{"a": int(a), "b": int(p),
                       "len": float(tree.parent_len[a])}
                      for a, p in enumerate(tree.parent) if p != -1]
        embedding = {str(int(v)): int(n)
                     for v, n in zip(g.ids, tree.leaf_of)}
        loads = {}
        stretch = stretch_per_edge(tree)
    header = ["u", "v", "length", "stretch"]
    rows = [[int(u), int(v), float(w), float(s)]
            for u, v, w, s in zip(g.eu, g.ev, g.ew, stretch)]
    report.update({
        "kind": args.kind,
        "tree_edges": tree_edges,
        "embedding": embedding,
        "loads": loads,
        "stretch_per_edge": [dict(zip(header, r)) for r in rows],
        "ledger": ledger_report(ledger),
    })
    _write(args, report, rows, header)
    return 0


def cmd_verify(args) -> int:
    seed = _resolve_seed(args)
    scale = (args.trials / 10000.0) if args.trials else 1.0
    result = run_suite(args.suite, seed=seed, scale=scale,
                       threads=args.threads)
    report = _base_report(args, seed)
    report.update(result)
    for line in verdict_lines(result):
        print(line)
    if args.out:
        emit(report, args.out, "json")
        base = args.out[:-5] if args.out.endswith(".json") else args.out
        for key, verdict in result["criteria"].items():
            checks = verdict.get("checks")
            if isinstance(checks, dict) and "rows" in checks:
                write_atomic(f"{base}.criterion{key}.csv",
                             render_csv(checks["rows"], checks["header"]))
    return 0 if result["pass"] else 1


def cmd_bench(args) -> int:
    seed = _resolve_seed(args)
    report = _base_report(args, seed)
    sizes = [int(s) for s in args.sizes.split(",")]
    rows = []
    for n in sizes:
        g = generate_graph(f"cycle({n},100)")
        stream = RandomStream(seed, ("bench", n))
        oracle = make_oracle(args.oracle, args.oracle_eps,
                             stream.child("oracle"))
        t0 = time.perf_counter()
        for _ in range(args.reps):
            approx_sssp(g, 0, oracle, eps=0.01)
        t_sssp = (time.perf_counter() - t0) / args.reps
        params = DecomposeParams(delta=float(200 * n), c=1.0, n=n)
        t0 = time.perf_counter()
        for r in range(args.reps):
            ts_decompose(g, params, oracle, stream.child("dec", r))
        t_dec = (time.perf_counter() - t0) / args.reps
        t0 = time.perf_counter()
        for r in range(args.reps):
            build_htsd(g, 1.0, oracle, stream.child("htsd", r))
        t_htsd = (time.perf_counter() - t0) / args.reps
        rows.append([n, t_sssp, t_dec, t_htsd])
    header = ["n", "sssp_s", "decompose_s", "htsd_s"]
    report["results"] = [dict(zip(header, r)) for r in rows]
    _write(args, report, rows, header)
    return 0


def _add_common(p: argparse.ArgumentParser, trials_default: int = 1) -> None:
    p.add_argument("--seed", type=int, default=None,
                   help="base seed (fallback: LOWDIAM_SEED, then 0)")
    p.add_argument("--oracle", choices=["exact", "perturbed"],
                   default="exact")
    p.add_argument("--oracle-eps", type=float, default=None,
                   help="override the oracle error bound")
    p.add_argument("--c", type=float, default=None,
                   help="confidence knob scaling beta and the round cap")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", default=None, help="write report atomically here")
    p.add_argument("--threads", type=int,
                   default=max(1, os.cpu_count() or 1))
    p.add_argument("--trials", type=int, default=trials_default)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lowdiam",
        description="Low-diameter decompositions and tree embeddings")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a graph file")
    p.add_argument("spec", nargs="+",
                   help="generator spec, e.g. 'path(8,1)' or: path 8 1")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("blur", help="grow a blurred ball around a seed set")
    p.add_argument("graph", help="graph file or generator spec")
    p.add_argument("--rho", type=float, default=10.0)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--b", default=None, help="comma-separated seed vertices")
    _add_common(p)
    p.set_defaults(func=cmd_blur)

    p = sub.add_parser("decompose", help="one tree-supported decomposition")
    p.add_argument("graph")
    p.add_argument("--delta", type=float, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("htsd", help="hierarchical decomposition")
    p.add_argument("graph")
    p.add_argument("--p", type=float, default=0.5,
                   help="exponent for p-stretch reports")
    _add_common(p)
    p.set_defaults(func=cmd_htsd)

    p = sub.add_parser("embed", help="tree embedding from a hierarchy")
    p.add_argument("graph")
    p.add_argument("--kind", choices=["projected", "hst"],
                   default="projected")
    p.add_argument("--p", type=float, default=0.5)
    _add_common(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("verify", help="run acceptance suites")
    p.add_argument("--suite", choices=sorted(SUITES), default="all")
    _add_common(p, trials_default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time the core operations")
    p.add_argument("--sizes", default="64,256,1024")
    p.add_argument("--reps", type=int, default=3)
    _add_common(p)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if getattr(args, "seed", None) is not None and args.seed < 0:
            raise ValueError("--seed must be non-negative")
        return args.func(args)
    except AuditError as exc:
        print(f"audit failure: {exc}", file=sys.stderr)
        return 1
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
