"""Approximate single-source shortest paths plus call accounting.

Two oracle modes:

  exact      -- plain exact Dijkstra (zero error).
  perturbed  -- every edge length is multiplied by an independent uniform
                factor in [1, 1+eps], the exact tree on the perturbed lengths
                is computed, and the tree is re-measured with the original
                lengths. The returned distances therefore sandwich the truth:
                dist <= dist_T <= (1+eps) * dist, by construction.

The CallLedger counts every oracle invocation and, separately, merged
invocations: calls that a parallel execution would batch into one (same
context, level, iteration, phase and round) count once. Contexts separate
unrelated top-level computations so they never merge with each other.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix

from .graph import Graph, GraphError, SsspTree, SuperSourceGraph, _sssp_on_arrays, exact_sssp
from .sampling import RandomStream

ORACLE_MODES = ("exact", "perturbed")


class OracleError(ValueError):
    pass


@dataclass
class OracleConfig:
    """How approximate SSSP answers are produced.

    eps=None means "use whatever error bound the calling algorithm requires";
    a number pins the perturbation magnitude for every call (the CLI's
    --oracle-eps). Exact mode always answers with zero error.
    """

    mode: str = "exact"
    eps: float | None = None
    stream: RandomStream | None = None

    def __post_init__(self):
        if self.mode not in ORACLE_MODES:
            raise OracleError(f"unknown oracle mode {self.mode!r}")
        if self.eps is not None:
            if not (np.isfinite(self.eps) and self.eps >= 0):
                raise OracleError("eps must be a non-negative float")
            if self.mode == "exact" and self.eps != 0:
                raise OracleError("exact mode forces eps = 0")
        if self.mode == "perturbed" and self.stream is None:
            raise OracleError("perturbed mode needs a stream")


class CallLedger:
    """Counts oracle calls; thread safe.

    total   -- raw number of invocations
    merged  -- number of distinct (context, level, iteration, phase, round)
               batches, i.e. what a parallel execution would pay
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._next_ctx = 0
        self.total = 0
        self.phase_counts: dict[str, int] = {}
        self.events: list[tuple] = []
        self._batches: set[tuple] = set()

    def new_context(self) -> int:
        with self._lock:
            self._next_ctx += 1
            return self._next_ctx

    def record(self, phase: str, batch: tuple = (0, 0, 0, 0)) -> None:
        key = (batch[0], batch[1], batch[2], phase, batch[3])
        with self._lock:
            self.total += 1
            self.phase_counts[phase] = self.phase_counts.get(phase, 0) + 1
            self.events.append(key)
            self._batches.add(key)

    @property
    def merged(self) -> int:
        return len(self._batches)

    def recount(self) -> tuple[int, int]:
        """(total, merged) recomputed from the raw event list."""
        return len(self.events), len(set(self.events))


def ledger_report(ledger: CallLedger) -> dict:
    total, merged = ledger.recount()
    if total != ledger.total or merged != ledger.merged:
        raise OracleError("ledger counters disagree with event trace")
    return {
        "total": ledger.total,
        "merged": ledger.merged,
        "phases": {k: ledger.phase_counts[k] for k in sorted(ledger.phase_counts)},
    }


def _arrays_of(g):
    if isinstance(g, SuperSourceGraph):
        ids, eu, ev, ew = g._materialize()
        return ids, eu, ev, ew, g._matrix()
    if isinstance(g, Graph):
        return g.ids, g.eu, g.ev, g.ew, g._matrix()
    raise OracleError(f"not a graph: {g!r}")


def _perturbed_sssp(g, root, eps, stream) -> SsspTree:
    ids, eu, ev, ew, _ = _arrays_of(g)
    n = len(ids)
    factors = 1.0 + eps * stream.uniform01(size=len(ew)) if len(ew) else np.zeros(0)
    ew_p = ew * factors
    pu = np.searchsorted(ids, eu)
    pv = np.searchsorted(ids, ev)
    matrix = csr_matrix((ew_p, (pu, pv)), shape=(n, n))
    tree = _sssp_on_arrays(ids, eu, ev, ew_p, matrix, root)
    # Re-measure the tree with the original lengths, parents first. Tree
    # edges are found by canonical (min, max) key against a sorted copy of
    # the edge keys (a super source appends its edges out of order).
    big = int(ids[-1]) + 2 if n else 2
    if big > (1 << 31):
        raise OracleError("vertex ids too large for edge keying")
    dist = np.full(n, np.inf)
    root_pos = tree.position(root)
    dist[root_pos] = 0.0
    rest = np.isfinite(tree.dist)
    rest[root_pos] = False
    if rest.any():
        vid = ids[rest]
        par = tree.parent[rest]
        lo = np.minimum(vid, par)
        hi = np.maximum(vid, par)
        ekeys = eu * big + ev
        by_key = np.argsort(ekeys, kind="stable")
        qk = lo * big + hi
        slot = np.minimum(np.searchsorted(ekeys[by_key], qk), len(ekeys) - 1)
        where = by_key[slot]
        if (ekeys[where] != qk).any():
            raise OracleError("tree parent is not a graph edge")
        order = np.argsort(tree.dist[rest], kind="stable")
        vp = np.flatnonzero(rest)[order].tolist()
        pp = np.searchsorted(ids, par)[order].tolist()
        ww = ew[where][order].tolist()
        d = dist.tolist()
        for v_, p_, w_ in zip(vp, pp, ww):
            d[v_] = d[p_] + w_
        dist = np.asarray(d)
    return SsspTree(tree.root, ids, dist, tree.parent)


def approx_sssp(g, root, cfg: OracleConfig, ledger: CallLedger | None = None,
                *, eps: float | None = None, phase: str = "other",
                batch: tuple = (0, 0, 0, 0)) -> SsspTree:
    """Shortest-path tree whose distances satisfy
    dist(root, v) <= dist_T(root, v) <= (1 + eps_eff) * dist(root, v).

    eps is the error bound the caller is entitled to; cfg.eps overrides it
    when set. Every call is recorded in the ledger under (phase, batch).
    """
    if ledger is not None:
        ledger.record(phase, batch)
    if cfg.mode == "exact":
        return exact_sssp(g, root)
    eff = cfg.eps if cfg.eps is not None else eps
    if eff is None:
        raise OracleError("perturbed oracle needs an error bound")
    if eff == 0:
        return exact_sssp(g, root)
    return _perturbed_sssp(g, root, float(eff), cfg.stream)


def approximate_diameter(g: Graph, cfg: OracleConfig,
                         ledger: CallLedger | None = None,
                         *, eps: float | None = None,
                         batch: tuple = (0, 0, 0, 0)) -> tuple[float, SsspTree]:
    """Factor-4 diameter estimate from one SSSP call.

    Runs the oracle from the smallest-id vertex at error <= 1 and returns
    (max tree distance / 2, tree). The estimate lands in [diam/4, diam].
    """
    if g.n == 0:
        raise GraphError("diameter of the empty graph")
    if not g.connected:
        raise GraphError("diameter estimate needs a connected graph")
    eff = cfg.eps if cfg.eps is not None else eps
    if cfg.mode == "perturbed":
        if eff is None:
            raise OracleError("diameter estimate needs an error bound <= 1")
        if eff > 1:
            raise OracleError("diameter estimate needs error <= 1")
    root = int(g.ids[0])
    tree = approx_sssp(g, root, cfg, ledger, eps=eps, phase="diameter",
                       batch=batch)
    if not np.isfinite(tree.dist).all():
        raise GraphError("diameter estimate hit an unreachable vertex")
    return float(tree.dist.max()) / 2.0, tree
