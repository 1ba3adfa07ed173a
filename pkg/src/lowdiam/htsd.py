"""Hierarchical tree-supported decomposition.

Level 0 is the whole (connected) graph, supported by an SSSP tree whose
maximum root distance also yields the diameter estimate. Each next level
decomposes every cluster of the previous one, on its induced subgraph, with
the budget halved: d_0 = 4 * estimate, d_{i+1} = d_i / 2, down to the first
d_k < 1, where every cluster is necessarily a single vertex.

Every edge has a unique decoupling level: the last level at which both
endpoints share a cluster. Cumulative load of an edge is the number of
supporting trees containing it, summed over all levels.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .decompose import (Cluster, DecomposeParams, SupportTree, Tsd,
                        support_tree_from_branch, ts_decompose)
from .graph import Graph, GraphError, induced_subgraph
from .oracle import CallLedger, OracleConfig, approximate_diameter
from .sampling import RandomStream


class HtsdError(ValueError):
    pass


@dataclass
class Htsd:
    """levels[i] is the level-i decomposition; levels[0] has one cluster."""

    graph: Graph
    delta: float
    d_seq: np.ndarray
    levels: list
    c: float
    cluster_of: np.ndarray  # shape (k+1, n): cluster index per level/vertex

    @property
    def k(self) -> int:
        return len(self.d_seq) - 1

    def decoupling_levels(self) -> np.ndarray:
        """Per edge of the graph: the last level where both endpoints are
        co-clustered. Always in [0, k-1] for k >= 1."""
        g = self.graph
        pu, pv = g._edge_positions()
        same = (self.cluster_of[:, pu] == self.cluster_of[:, pv])
        return same.sum(axis=0).astype(np.int64) - 1

    def first_cut_or_deleted_levels(self) -> np.ndarray:
        """Per edge: the first level whose decomposition lists it as cut or
        deleted (for the consistency audit against decoupling levels)."""
        g = self.graph
        idx = g.edge_index()
        first = np.full(g.num_edges, -1, dtype=np.int64)
        for i, tsd in enumerate(self.levels):
            listed = set()
            for u, v in tsd.cut_edges:
                listed.add((u, v) if u < v else (v, u))
            for u, v in tsd.deleted_edges:
                listed.add((u, v) if u < v else (v, u))
            for e in listed:
                j = idx.get(e)
                if j is not None and first[j] == -1:
                    first[j] = i
        return first

    def cumulative_loads(self) -> np.ndarray:
        """Per edge of the graph: total supporting-tree load across levels."""
        g = self.graph
        idx = g.edge_index()
        loads = np.zeros(g.num_edges, dtype=np.int64)
        for tsd in self.levels:
            for (u, v), cnt in tsd.loads.items():
                loads[idx[(u, v)]] += cnt
        return loads

    def level_diameter_ok(self) -> bool:
        """True when every supporting tree at every level i has diameter at
        most d_i (the high-probability event the embeddings lean on)."""
        for i, tsd in enumerate(self.levels):
            budget = float(self.d_seq[i])
            for c in tsd.clusters:
                if c.tree.size > 1 and c.tree.diameter() > budget:
                    return False
        return True


def _singleton_tsd(v: int) -> Tsd:
    c = Cluster(members=np.array([v], dtype=np.int64),
                tree=SupportTree.singleton(v), iteration=0)
    return Tsd(clusters=[c], deleted_edges=[], cut_edges=[], loads={},
               iterations=0)


def _level_zero(g: Graph, tree) -> Tsd:
    weights = g.weight_dict()
    support = support_tree_from_branch(tree, g.ids, tree.root, weights)
    c = Cluster(members=g.ids.copy(), tree=support, iteration=0)
    return Tsd(clusters=[c], deleted_edges=[], cut_edges=[], loads={},
               iterations=0)


def build_htsd(g: Graph, c: float, cfg: OracleConfig, stream: RandomStream,
               ledger: CallLedger | None = None) -> Htsd:
    """Build the full hierarchy for a connected graph."""
    if g.n == 0:
        raise HtsdError("empty graph")
    if not g.connected:
        raise HtsdError("hierarchy needs a connected graph")
    ctx = ledger.new_context() if ledger is not None else 0
    if g.n == 1:
        lvl = _singleton_tsd(int(g.ids[0]))
        lvl.loads = lvl.recompute_loads()
        h = Htsd(graph=g, delta=0.0, d_seq=np.array([0.0]), levels=[lvl],
                 c=float(c), cluster_of=np.zeros((1, 1), dtype=np.int64))
        return h
    # Error budget for every oracle call in the hierarchy: the decompose
    # contract for this n and c (it is far below the factor-2 the diameter
    # estimate needs).
    probe = DecomposeParams(delta=1.0, c=float(c), n=g.n)
    eps_contract = probe.eps
    delta, tree0 = approximate_diameter(g, cfg, ledger, eps=eps_contract,
                                        batch=(ctx, 0, 0, 0))
    d_seq = [4.0 * delta]
    while d_seq[-1] >= 1.0:
        d_seq.append(d_seq[-1] / 2.0)
    d_seq = np.array(d_seq)
    k = len(d_seq) - 1
    levels = [_level_zero(g, tree0)]
    levels[0].loads = levels[0].recompute_loads()
    for i in range(k):
        budget = float(d_seq[i + 1])
        params = DecomposeParams(delta=budget, c=float(c), n=g.n)
        merged_clusters: list = []
        deleted: list = []
        iterations = 0
        for ci, parent in enumerate(levels[i].clusters):
            if parent.size == 1:
                merged_clusters.extend(
                    _singleton_tsd(int(parent.members[0])).clusters)
                continue
            part = induced_subgraph(g, parent.members)
            tsd = ts_decompose(part, params, cfg,
                               stream.child("level", i + 1, ci),
                               ledger, ctx=ctx, level=i + 1)
            merged_clusters.extend(tsd.clusters)
            deleted.extend(tsd.deleted_edges)
            iterations = max(iterations, tsd.iterations)
        lvl = Tsd(clusters=merged_clusters, deleted_edges=deleted,
                  cut_edges=[], loads={}, iterations=iterations)
        lvl.cut_edges = lvl.recompute_cut(g)
        lvl.loads = lvl.recompute_loads()
        levels.append(lvl)
    cluster_of = np.zeros((k + 1, g.n), dtype=np.int64)
    for i, lvl in enumerate(levels):
        for ci, cl in enumerate(lvl.clusters):
            cluster_of[i, g.positions(cl.members)] = ci
    return Htsd(graph=g, delta=float(delta), d_seq=d_seq, levels=levels,
                c=float(c), cluster_of=cluster_of)


def decoupling_level(h: Htsd, u: int, v: int) -> int:
    """Decoupling level of the edge (u, v)."""
    g = h.graph
    key = (u, v) if u < v else (v, u)
    idx = g.edge_index().get(key)
    if idx is None:
        raise GraphError(f"({u}, {v}) is not an edge")
    return int(h.decoupling_levels()[idx])


def htsd_stretch(h: Htsd, u: int, v: int) -> float:
    """d_i / len(e) where i is the edge's decoupling level."""
    g = h.graph
    key = (u, v) if u < v else (v, u)
    idx = g.edge_index().get(key)
    if idx is None:
        raise GraphError(f"({u}, {v}) is not an edge")
    lvl = int(h.decoupling_levels()[idx])
    return float(h.d_seq[lvl]) / float(g.ew[idx])
