"""Monte-Carlo trial harness with deterministic per-trial audits.

Every trial is a pure function of (base seed, trial index): it builds its own
random streams and oracle configuration, runs the algorithm under test, and
audits every deterministic guarantee on the spot. Deterministic audit
failures abort the whole run with the reproduction key; statistical events
(iteration caps, supporting-tree diameters, domination under a failed
diameter event) are counted, not fatal.

Aggregates come with Wilson 95% intervals, and `compare_bound` passes only
when the Wilson upper bound sits at or below the theoretical bound.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .blur import BlurParams, blur
from .decompose import (DecomposeParams, IterationCapError, Tsd, ts_decompose)
from .embed import (build_hst, build_projected_tree, stretch_per_edge,
                    verify_domination)
from .generators import generate_graph
from .graph import (Graph, all_pairs_distances, contract_into_super_source,
                    exact_sssp, parse_graph)
from .htsd import build_htsd
from .oracle import CallLedger, OracleConfig, OracleError
from .sampling import RandomStream

Z95 = 1.959963984540054  # two-sided 95% normal quantile


class AuditError(AssertionError):
    """A deterministic guarantee failed; carries the reproduction key."""

    def __init__(self, message: str, seed: int, trial: int):
        super().__init__(f"{message} (repro: seed={seed}, trial={trial})")
        self.seed = seed
        self.trial = trial


def wilson_interval(successes: int, trials: int, z: float = Z95):
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(phat * (1 - phat) / trials
                                   + z * z / (4 * trials * trials))
    return max(0.0, center - half), min(1.0, center + half)


def compare_bound(observed_freq: float, n_trials: int, bound: float) -> dict:
    """PASS iff the Wilson 95% upper bound does not exceed `bound`."""
    successes = int(round(observed_freq * n_trials))
    lo, hi = wilson_interval(successes, n_trials)
    return {"observed": observed_freq, "trials": n_trials, "bound": bound,
            "wilson_lower": lo, "wilson_upper": hi,
            "margin": bound - hi, "pass": hi <= bound}


# One graph per family and size; audits must never fail on any of these.
STANDING_CORPUS = (
    "path(16,1)", "cycle(16,1)", "grid(4,4,1)",
    "gnp(16,0.3,10,1)", "geometric(16,0.5,10,1)",
    "path(64,1)", "cycle(64,1)", "grid(8,8,1)",
    "gnp(64,0.1,10,7)", "geometric(64,0.3,10,7)",
    "path(256,1)", "cycle(256,1)", "grid(16,16,1)",
    "gnp(256,0.04,10,11)", "geometric(256,0.15,10,11)",
    "path(1024,1)", "cycle(1024,1)", "grid(32,32,1)",
    "gnp(1024,0.012,10,13)", "geometric(1024,0.08,10,13)",
)


def resolve_graph(source) -> Graph:
    """Accept a Graph, a generator spec string, or a file path."""
    if isinstance(source, Graph):
        return source
    text = str(source)
    if "/" in text or text.endswith(".txt"):
        with open(text, "r", encoding="utf-8") as fh:
            return parse_graph(fh.read())
    return generate_graph(text)


@dataclass
class TrialConfig:
    """One batch of trials of a single algorithm on a single graph."""

    graph: object
    algorithm: str               # blur | decompose | htsd | projected | hst
    params: dict = field(default_factory=dict)
    oracle: str = "exact"
    oracle_eps: float | None = None
    trials: int = 100
    seed: int = 0
    threads: int = 1


@dataclass
class TrialStats:
    """Aggregated results; arrays are aligned with the graph's edge list."""

    trials: int = 0
    failure_events: int = 0          # iteration-cap aborts
    edge_cut_counts: np.ndarray | None = None
    iteration_counts: list = field(default_factory=list)
    diameter_ok_count: int = 0
    max_load_per_trial: list = field(default_factory=list)
    edge_load_sums: np.ndarray | None = None
    decouple_counts: np.ndarray | None = None   # (levels, edges) lazily sized
    event_log: list = field(default_factory=list)
    stretch_sums: float = 0.0
    stretch_sq_sums: float = 0.0
    stretch_trials: int = 0
    p_stretch_sums: float = 0.0
    p_stretch_sq_sums: float = 0.0
    domination_violations: int = 0
    domination_checked: int = 0
    cap_violations_4d: int = 0
    ledger_total: int = 0
    ledger_merged: int = 0
    per_trial: list = field(default_factory=list)

    def cut_frequencies(self) -> np.ndarray:
        if self.edge_cut_counts is None:
            return np.zeros(0)
        return self.edge_cut_counts / max(self.trials, 1)

    def stretch_mean(self) -> float:
        return self.stretch_sums / max(self.stretch_trials, 1)

    def stretch_stderr(self) -> float:
        n = self.stretch_trials
        if n < 2:
            return 0.0
        mean = self.stretch_sums / n
        var = max(self.stretch_sq_sums / n - mean * mean, 0.0) * n / (n - 1)
        return math.sqrt(var / n)

    def p_stretch_mean(self) -> float:
        return self.p_stretch_sums / max(self.stretch_trials, 1)

    def p_stretch_stderr(self) -> float:
        n = self.stretch_trials
        if n < 2:
            return 0.0
        mean = self.p_stretch_sums / n
        var = max(self.p_stretch_sq_sums / n - mean * mean, 0.0) * n / (n - 1)
        return math.sqrt(var / n)


def make_oracle(mode: str, eps: float | None, stream: RandomStream) -> OracleConfig:
    if mode == "exact":
        return OracleConfig(mode="exact", eps=None)
    if mode == "perturbed":
        return OracleConfig(mode="perturbed", eps=eps, stream=stream)
    raise OracleError(f"unknown oracle mode {mode!r}")


def _trial_blur(g: Graph, cfg: TrialConfig, trial: int):
    stream = RandomStream(cfg.seed, (trial,))
    oracle = make_oracle(cfg.oracle, cfg.oracle_eps, stream.child("oracle"))
    ledger = CallLedger()
    params = cfg.params
    rho = float(params.get("rho", 10.0))
    if "alpha" in params and params["alpha"] is not None:
        bp = BlurParams(rho=rho, alpha=float(params["alpha"]),
                        eps=float(params["alpha"]) ** 2)
    else:
        bp = BlurParams.default(g.n, rho)
    if "b" in params and params["b"] is not None:
        seeds = np.unique(np.asarray(params["b"], dtype=np.int64))
    else:
        pick = int(stream.child("seed-vertex").uniform01() * g.n)
        seeds = g.ids[[min(pick, g.n - 1)]]
    picked, trace = blur(g, bp, seeds, oracle, stream.child("blur"), ledger)
    # Deterministic audits.
    if not np.isin(seeds, picked).all():
        raise AuditError("blur lost part of its seed set", cfg.seed, trial)
    sizes = [s for _, _, s in trace.steps]
    if sizes and (np.diff(sizes) < 0).any():
        raise AuditError("blur trace is not monotone", cfg.seed, trial)
    if len(picked) > len(seeds):
        cg = contract_into_super_source(g, seeds)
        dtree = exact_sssp(cg, cg.s)
        reach = bp.reach()
        grown = np.setdiff1d(picked, seeds, assume_unique=True)
        gpos = dtree.positions(grown)
        dmax = float(dtree.dist[gpos].max())
        if dmax > reach + 1e-9:
            raise AuditError("blur absorbed a vertex beyond rho/(1-alpha)",
                             cfg.seed, trial)
    else:
        dmax = 0.0
    inside = np.isin(g.eu, picked, assume_unique=False)
    inside_v = np.isin(g.ev, picked, assume_unique=False)
    cut = inside ^ inside_v
    total, merged = ledger.recount()
    return {"cut": cut, "rounds": len(trace.steps), "max_reach": dmax,
            "trace": list(trace.steps), "ledger": (total, merged),
            "picked_size": int(len(picked))}


def _audit_tsd(g: Graph, tsd: Tsd, params: DecomposeParams, seed, trial,
               cells_of_cluster=None):
    if not tsd.partition_ok(g):
        raise AuditError("clusters do not partition the vertex set", seed, trial)
    wd = g.weight_dict()
    for cl in tsd.clusters:
        t = cl.tree
        if not np.isin(cl.members, t.ids).all():
            raise AuditError("supporting tree misses cluster vertices", seed, trial)
        for p, v, w in t.edges():
            if wd.get((p, v)) != w:
                raise AuditError("supporting tree edge not in graph", seed, trial)
    thr = params.long_edge_threshold
    for u, v in tsd.deleted_edges:
        key = (u, v) if u < v else (v, u)
        if wd[key] <= thr:
            raise AuditError("deleted edge not above the threshold", seed, trial)
    if tsd.recompute_loads() != tsd.loads:
        raise AuditError("stored loads disagree with trees", seed, trial)
    for key, cnt in tsd.loads.items():
        if cnt > max(tsd.iterations, 1):
            raise AuditError("edge load exceeds round count", seed, trial)


def _trial_decompose(g: Graph, cfg: TrialConfig, trial: int):
    stream = RandomStream(cfg.seed, (trial,))
    oracle = make_oracle(cfg.oracle, cfg.oracle_eps, stream.child("oracle"))
    ledger = CallLedger()
    params = DecomposeParams(delta=float(cfg.params["delta"]),
                             c=float(cfg.params.get("c", 4.0)), n=g.n)
    try:
        tsd = ts_decompose(g, params, oracle, stream.child("decompose"), ledger)
    except IterationCapError:
        return {"failed": True}
    _audit_tsd(g, tsd, params, cfg.seed, trial)
    diam_ok = all(c.tree.diameter() <= params.delta for c in tsd.clusters)
    label = {}
    for ci, c in enumerate(tsd.clusters):
        for v in c.members.tolist():
            label[v] = ci
    cut = np.array([label[u] != label[v]
                    for u, v in zip(g.eu.tolist(), g.ev.tolist())], dtype=bool)
    max_load = max(tsd.loads.values()) if tsd.loads else 0
    total, merged = ledger.recount()
    return {"failed": False, "cut": cut, "iterations": tsd.iterations,
            "diam_ok": diam_ok, "max_load": max_load,
            "ledger": (total, merged)}


def _trial_htsd(g: Graph, cfg: TrialConfig, trial: int, embed_kind=None,
                apsp=None):
    stream = RandomStream(cfg.seed, (trial,))
    oracle = make_oracle(cfg.oracle, cfg.oracle_eps, stream.child("oracle"))
    ledger = CallLedger()
    c = float(cfg.params.get("c", 2.0))
    try:
        h = build_htsd(g, c, oracle, stream.child("htsd"), ledger)
    except IterationCapError:
        return {"failed": True}
    # Structural audits.
    d = h.d_seq
    for i in range(1, len(d)):
        if d[i] != d[i - 1] / 2.0:
            raise AuditError("level budgets do not halve exactly",
                             cfg.seed, trial)
    if len(d) >= 2 and not (d[-1] < 1.0 <= d[-2]):
        raise AuditError("wrong number of levels for the budget sequence",
                         cfg.seed, trial)
    if h.delta > 0 and d[0] != 4.0 * h.delta:
        raise AuditError("top budget is not four times the estimate",
                         cfg.seed, trial)
    for i, lvl in enumerate(h.levels):
        if not lvl.partition_ok(g):
            raise AuditError(f"level {i} does not partition", cfg.seed, trial)
    if any(cl.size != 1 for cl in h.levels[-1].clusters):
        raise AuditError("bottom level is not all singletons", cfg.seed, trial)
    if len(h.levels[0].clusters) != 1:
        raise AuditError("top level is not a single cluster", cfg.seed, trial)
    for i in range(1, len(h.levels)):
        parent_label = {v: ci for ci, cl in enumerate(h.levels[i - 1].clusters)
                        for v in cl.members.tolist()}
        for cl in h.levels[i].clusters:
            labels = {parent_label[v] for v in cl.members.tolist()}
            if len(labels) != 1:
                raise AuditError(f"level {i} cluster straddles parents",
                                 cfg.seed, trial)
    dec = h.decoupling_levels()
    k = h.k
    if g.num_edges and k >= 1:
        if (dec < 0).any() or (dec > k - 1).any():
            raise AuditError("decoupling level out of range", cfg.seed, trial)
        first = h.first_cut_or_deleted_levels()
        if not np.array_equal(first, dec + 1):
            raise AuditError("decoupling levels disagree with cut listings",
                             cfg.seed, trial)
    loads = h.cumulative_loads()
    recheck = np.zeros(g.num_edges, dtype=np.int64)
    idx = g.edge_index()
    for lvl in h.levels:
        for key, cnt in lvl.recompute_loads().items():
            recheck[idx[key]] += cnt
    if not np.array_equal(loads, recheck):
        raise AuditError("cumulative loads do not add up", cfg.seed, trial)
    diam_ok = h.level_diameter_ok()
    out = {"failed": False, "decouple": dec, "loads": loads,
           "max_load": int(loads.max()) if len(loads) else 0,
           "diam_ok": diam_ok, "k": k,
           "d0": float(d[0]) if len(d) else 0.0,
           "stretch_d": (d[dec] / g.ew if g.num_edges else np.zeros(0))}
    kinds = {"projected": ("projected",), "hst": ("hst",),
             "both": ("projected", "hst"), None: ()}[embed_kind]
    for kind in kinds:
        tree = build_projected_tree(h) if kind == "projected" else build_hst(h)
        stretches = stretch_per_edge(tree)
        out[f"stretch_{kind}"] = stretches
        if kind == "projected":
            want = {k2: int(v) for k2, v in zip(
                map(tuple, np.column_stack([g.eu, g.ev]).tolist()),
                loads.tolist()) if v}
            if tree.loads() != want:
                raise AuditError("projected loads differ from hierarchy loads",
                                 cfg.seed, trial)
            if g.num_edges and k >= 1:
                cap = 4.0 * d[dec]
                over = stretches * g.ew > cap + 1e-9
                out["cap_violations"] = int(np.count_nonzero(over))
            else:
                out["cap_violations"] = 0
        else:
            _audit_hst(tree, d, k, g, cfg.seed, trial)
        if g.n <= 64:
            dom = verify_domination(tree, g, apsp=apsp)
            out[f"dom_violations_{kind}"] = len(dom["violations"])
            out[f"dom_checked_{kind}"] = 1
        else:
            out[f"dom_violations_{kind}"] = 0
            out[f"dom_checked_{kind}"] = 0
    if embed_kind in ("projected", "hst"):
        out["stretch"] = out[f"stretch_{embed_kind}"]
        out["dom_violations"] = out[f"dom_violations_{embed_kind}"]
        out["dom_checked"] = out[f"dom_checked_{embed_kind}"]
    elif embed_kind == "both":
        out["dom_violations"] = (out["dom_violations_projected"]
                                 + out["dom_violations_hst"])
        out["dom_checked"] = out["dom_checked_projected"]
    total, merged = ledger.recount()
    out["ledger"] = (total, merged)
    return out


def _audit_hst(tree, d, k, g: Graph, seed: int, trial: int) -> None:
    """Exact 2-separation, one-level parent steps, balanced leaf depth."""
    nonroot = tree.parent != -1
    roots = np.flatnonzero(~nonroot)
    if len(roots) != 1 or tree.node_level[roots[0]] != 0:
        raise AuditError("tree root is not the single top node", seed, trial)
    lvl = tree.node_level[nonroot]
    if not np.array_equal(tree.parent_len[nonroot], d[lvl - 1]):
        raise AuditError("2-separated edge has the wrong length", seed, trial)
    if (tree.node_level[tree.parent[nonroot]] != lvl - 1).any():
        raise AuditError("parent edge skips a level", seed, trial)
    if (tree.node_level[tree.leaf_of] != k).any():
        raise AuditError("a leaf is not at the bottom level", seed, trial)
    # Closed form versus an explicit parent walk, probed at three leaves.
    probes = sorted({0, g.n // 2, g.n - 1})
    for level in {0, max(0, k // 2)}:
        formula = tree.ancestor_distance_formula(level)
        for i in probes:
            walked = tree.ancestor_distance_walked(int(g.ids[i]), level)
            if abs(walked - formula) > 1e-9 * max(formula, 1.0):
                raise AuditError("leaf depth disagrees with closed form",
                                 seed, trial)


def run_trials(cfg: TrialConfig) -> TrialStats:
    """Run the batch; aggregation is independent of the thread count."""
    g = resolve_graph(cfg.graph)
    g._matrix()          # warm the lazy caches before any thread touches them
    g.weight_dict()
    g.edge_index()
    apsp = None
    if cfg.algorithm in ("projected", "hst", "both") and g.n <= 64:
        apsp = all_pairs_distances(g)

    def one(trial: int):
        if cfg.algorithm == "blur":
            return _trial_blur(g, cfg, trial)
        if cfg.algorithm == "decompose":
            return _trial_decompose(g, cfg, trial)
        if cfg.algorithm == "htsd":
            return _trial_htsd(g, cfg, trial)
        if cfg.algorithm in ("projected", "hst", "both"):
            return _trial_htsd(g, cfg, trial, embed_kind=cfg.algorithm,
                               apsp=apsp)
        raise ValueError(f"unknown algorithm {cfg.algorithm!r}")

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(one, range(cfg.trials)))
    else:
        results = [one(t) for t in range(cfg.trials)]

    stats = TrialStats(trials=cfg.trials)
    stats.edge_cut_counts = np.zeros(g.num_edges, dtype=np.int64)
    p = float(cfg.params.get("p", 0.5))
    for r in results:
        if r.get("failed"):
            stats.failure_events += 1
            continue
        if "cut" in r:
            stats.edge_cut_counts += r["cut"]
        if "iterations" in r:
            stats.iteration_counts.append(r["iterations"])
        if r.get("diam_ok"):
            stats.diameter_ok_count += 1
        if "max_load" in r:
            stats.max_load_per_trial.append(r["max_load"])
        if "loads" in r:
            if stats.edge_load_sums is None:
                stats.edge_load_sums = np.zeros(g.num_edges, dtype=np.int64)
            stats.edge_load_sums += r["loads"]
        if "decouple" in r and len(r["decouple"]):
            top = int(r["decouple"].max())
            if stats.decouple_counts is None:
                stats.decouple_counts = np.zeros((top + 1, g.num_edges),
                                                 dtype=np.int64)
            elif top + 1 > stats.decouple_counts.shape[0]:
                grown = np.zeros((top + 1, g.num_edges), dtype=np.int64)
                grown[:stats.decouple_counts.shape[0]] = stats.decouple_counts
                stats.decouple_counts = grown
            stats.decouple_counts[r["decouple"],
                                  np.arange(g.num_edges)] += 1
        if "stretch" in r and len(r["stretch"]):
            stats.stretch_trials += 1
            m = float(r["stretch"].mean())
            stats.stretch_sums += m
            stats.stretch_sq_sums += m * m
            pm = float((r["stretch"] ** p).mean())
            stats.p_stretch_sums += pm
            stats.p_stretch_sq_sums += pm * pm
        stats.cap_violations_4d += r.get("cap_violations", 0)
        stats.domination_violations += r.get("dom_violations", 0)
        stats.domination_checked += r.get("dom_checked", 0)
        if "ledger" in r:
            stats.ledger_total += r["ledger"][0]
            stats.ledger_merged += r["ledger"][1]
        stats.per_trial.append(r)
    for t, r in enumerate(results):
        if r.get("failed"):
            stats.event_log.append((t, "iteration-cap"))
        elif "diam_ok" in r and not r["diam_ok"]:
            stats.event_log.append((t, "diameter"))
    return stats


def rerun_trial(cfg: TrialConfig, trial: int):
    """Re-execute a single trial from its (seed, index) key."""
    g = resolve_graph(cfg.graph)
    apsp = None
    if cfg.algorithm in ("projected", "hst", "both") and g.n <= 64:
        apsp = all_pairs_distances(g)
    if cfg.algorithm == "blur":
        return _trial_blur(g, cfg, trial)
    if cfg.algorithm == "decompose":
        return _trial_decompose(g, cfg, trial)
    if cfg.algorithm == "htsd":
        return _trial_htsd(g, cfg, trial)
    return _trial_htsd(g, cfg, trial, embed_kind=cfg.algorithm, apsp=apsp)
