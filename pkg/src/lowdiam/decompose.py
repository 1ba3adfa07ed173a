"""Tree-supported low-diameter decomposition of a graph part.

One round works like this: draw an exponential shift per remaining vertex,
join a virtual source to every vertex with length 1 + max(shift) - shift, and
take the approximate SSSP tree. The children of the source carve the vertices
into cells. Vertices close (in a second, unit-length source SSSP) to any cell
boundary are shaved off; the remaining interior of each cell is blurred into
a cluster, which is emitted together with the source-tree subtree spanning
its cell, and removed. Rounds repeat until no edges remain. Edges longer than
1/(40 beta) are deleted up front; vertices that ever become isolated turn
into singleton clusters immediately.

The emitted pieces partition the vertex set. Each cluster sits inside its
cell, its supporting tree is a subgraph of the input part spanning a superset
of the cluster, and with high probability each tree has diameter at most the
budget and the round count stays logarithmic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .blur import BlurParams, blur
from .graph import (Graph, GraphError, attach_super_source, induced_subgraph)
from .oracle import CallLedger, OracleConfig, approx_sssp
from .sampling import RandomStream, sample_exponential


class DecomposeError(ValueError):
    pass


class IterationCapError(DecomposeError):
    """The while loop exceeded its hard cap; the trial should be aborted
    and reported as a failure event."""


def _log2_floored(n: int) -> float:
    return max(float(np.log2(n)), 1.0) if n >= 1 else 1.0


@dataclass(frozen=True)
class DecomposeParams:
    """Diameter budget delta, confidence knob c >= 1, and the vertex count n
    of the original graph (recursive calls keep the original n)."""

    delta: float
    c: float = 4.0
    n: int = 0

    def __post_init__(self):
        if not (np.isfinite(self.delta) and self.delta > 0):
            raise DecomposeError("delta must be positive")
        if not (np.isfinite(self.c) and self.c >= 1):
            raise DecomposeError("c must be at least 1")
        if self.n < 1:
            raise DecomposeError("original vertex count must be at least 1")

    @classmethod
    def for_graph(cls, g: Graph, delta: float, c: float = 4.0) -> "DecomposeParams":
        return cls(delta=float(delta), c=float(c), n=g.n)

    @property
    def log2n(self) -> float:
        return _log2_floored(self.n)

    @property
    def beta(self) -> float:
        return self.c * self.log2n / self.delta

    @property
    def eps(self) -> float:
        return 1.0 / (self.c * self.log2n**2)

    @property
    def alpha_blur(self) -> float:
        return 1.0 / (2.0 * self.log2n)

    @property
    def rho(self) -> float:
        return (1.0 - self.alpha_blur) / (4.0 * self.beta)

    @property
    def long_edge_threshold(self) -> float:
        return 1.0 / (40.0 * self.beta)

    @property
    def interior_margin(self) -> float:
        return (1.0 + self.eps) / (4.0 * self.beta)

    @property
    def max_iterations(self) -> int:
        return int(np.ceil(64.0 * self.c * self.log2n))

    def blur_params(self) -> BlurParams:
        a = self.alpha_blur
        return BlurParams(rho=self.rho, alpha=a, eps=a**2)


@dataclass
class SupportTree:
    """Rooted tree over explicit vertex ids; a subgraph of the decomposed part.

    ids are sorted; parent[i] is the parent id of ids[i] (-1 at the root);
    wparent[i] is the length of that edge; depth[i] is the distance from the
    root along tree edges.
    """

    root: int
    ids: np.ndarray
    parent: np.ndarray
    wparent: np.ndarray
    depth: np.ndarray

    @classmethod
    def singleton(cls, v: int) -> "SupportTree":
        return cls(root=int(v), ids=np.array([v], dtype=np.int64),
                   parent=np.array([-1], dtype=np.int64),
                   wparent=np.zeros(1), depth=np.zeros(1))

    @property
    def size(self) -> int:
        return len(self.ids)

    def position(self, v) -> int:
        p = int(np.searchsorted(self.ids, v))
        if p >= len(self.ids) or self.ids[p] != v:
            raise GraphError(f"vertex {v} not in tree")
        return p

    def edges(self):
        """(parent, child, length) triples, child ids ascending."""
        out = []
        for i in range(len(self.ids)):
            p = int(self.parent[i])
            if p != -1:
                out.append((p, int(self.ids[i]), float(self.wparent[i])))
        return out

    def max_depth(self) -> float:
        return float(self.depth.max()) if len(self.depth) else 0.0

    def diameter(self) -> float:
        """Exact weighted diameter (longest path inside the tree)."""
        n = len(self.ids)
        if n <= 1:
            return 0.0
        # height[i]: longest downward path starting at ids[i]
        height = np.zeros(n)
        best = 0.0
        order = np.argsort(self.depth, kind="stable")[::-1]
        top1 = np.zeros(n)  # two tallest child branches per vertex
        top2 = np.zeros(n)
        for i in order:
            p = int(self.parent[i])
            through = top1[i] + top2[i]
            best = max(best, through)
            height[i] = top1[i]
            if p != -1:
                pp = self.position(p)
                cand = height[i] + float(self.wparent[i])
                if cand > top1[pp]:
                    top2[pp] = top1[pp]
                    top1[pp] = cand
                elif cand > top2[pp]:
                    top2[pp] = cand
        root_pos = self.position(self.root)
        best = max(best, top1[root_pos] + top2[root_pos])
        return float(best)


def support_tree_from_branch(tree, members: np.ndarray, root: int,
                             weights: dict) -> SupportTree:
    """Extract the subtree of an SSSP tree spanning `members`, rooted at
    `root`, with edge lengths looked up in the decomposed part."""
    members = np.asarray(members, dtype=np.int64)
    pos = {int(v): i for i, v in enumerate(members)}
    parent = np.full(len(members), -1, dtype=np.int64)
    wparent = np.zeros(len(members))
    depth = np.zeros(len(members))
    tpos = np.searchsorted(tree.ids, members)
    order = np.argsort(tree.dist[tpos], kind="stable")
    for i in order:
        v = int(members[i])
        if v == root:
            continue
        p = int(tree.parent[tpos[i]])
        parent[i] = p
        w = weights[(p, v)]
        wparent[i] = w
        depth[i] = depth[pos[p]] + w
    return SupportTree(root=int(root), ids=members, parent=parent,
                       wparent=wparent, depth=depth)


@dataclass
class Cluster:
    """members: the cluster's vertices; tree: its supporting tree (spanning a
    superset of members); iteration: the round that produced it."""

    members: np.ndarray
    tree: SupportTree
    iteration: int

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass
class Tsd:
    """A tree-supported decomposition of one graph part."""

    clusters: list
    deleted_edges: list
    cut_edges: list
    loads: dict
    iterations: int

    def partition_ok(self, g: Graph) -> bool:
        allv = np.sort(np.concatenate([c.members for c in self.clusters])) \
            if self.clusters else np.zeros(0, dtype=np.int64)
        return len(allv) == g.n and bool(np.array_equal(allv, g.ids))

    def recompute_cut(self, g: Graph) -> list:
        label = {}
        for ci, c in enumerate(self.clusters):
            for v in c.members.tolist():
                label[v] = ci
        out = []
        for u, v in zip(g.eu.tolist(), g.ev.tolist()):
            if label.get(u) != label.get(v):
                out.append((u, v))
        return out

    def recompute_loads(self) -> dict:
        loads: dict = {}
        for c in self.clusters:
            for p, v, _ in c.tree.edges():
                key = (p, v) if p < v else (v, p)
                loads[key] = loads.get(key, 0) + 1
        return loads


def _emit_singletons(work: Graph, clusters: list, iteration: int) -> Graph:
    """Peel isolated vertices off `work` as singleton clusters."""
    deg = work.degrees()
    lone = work.ids[deg == 0]
    if len(lone) == 0:
        return work
    for v in lone.tolist():
        clusters.append(Cluster(members=np.array([v], dtype=np.int64),
                                tree=SupportTree.singleton(v),
                                iteration=iteration))
    return induced_subgraph(work, work.ids[deg > 0])


def ts_decompose(g: Graph, params: DecomposeParams, cfg: OracleConfig,
                 stream: RandomStream, ledger: CallLedger | None = None,
                 *, ctx: int | None = None, level: int = 0) -> Tsd:
    """Decompose the part g under the given budget.

    g may be disconnected (recursion feeds cluster-induced subgraphs).
    Raises IterationCapError when the round count exceeds the hard cap.
    """
    if ctx is None:
        ctx = ledger.new_context() if ledger is not None else 0
    clusters: list = []
    deleted: list = []
    if g.num_edges:
        thr = params.long_edge_threshold
        long_mask = g.ew > thr
        deleted = list(zip(g.eu[long_mask].tolist(), g.ev[long_mask].tolist()))
        work = Graph._from_arrays(g.ids, g.eu[~long_mask], g.ev[~long_mask],
                                  g.ew[~long_mask])
    else:
        work = g
    work = _emit_singletons(work, clusters, 0)
    iteration = 0
    while work.num_edges > 0:
        iteration += 1
        if iteration > params.max_iterations:
            raise IterationCapError(
                f"decomposition exceeded {params.max_iterations} rounds")
        shifts = sample_exponential(stream.child("shift", iteration),
                                    params.beta, size=work.n)
        src_len = 1.0 + shifts.max() - shifts
        cells_graph = attach_super_source(work, work.ids, src_len)
        tree = approx_sssp(cells_graph, cells_graph.s, cfg, ledger,
                           eps=params.eps, phase="cells",
                           batch=(ctx, level, iteration, 0))
        cell = tree.branch_labels()[:-1]  # aligned to work.ids; source dropped
        pu, pv = work._edge_positions()
        crossing = cell[pu] != cell[pv]
        on_boundary = np.zeros(work.n, dtype=bool)
        on_boundary[pu[crossing]] = True
        on_boundary[pv[crossing]] = True
        sep_graph = attach_super_source(work, work.ids[on_boundary],
                                        np.ones(int(on_boundary.sum())))
        sep_tree = approx_sssp(sep_graph, sep_graph.s, cfg, ledger,
                               eps=params.eps, phase="separation",
                               batch=(ctx, level, iteration, 0))
        near_boundary = sep_tree.dist[:-1] <= params.interior_margin
        weights = work.weight_dict()
        bp = params.blur_params()
        removed = []
        for root in np.unique(cell).tolist():
            in_cell = cell == root
            members = work.ids[in_cell]
            interior = work.ids[in_cell & ~near_boundary]
            if len(interior) == 0:
                continue
            part = induced_subgraph(work, members)
            picked, _ = blur(part, bp, interior, cfg,
                             stream.child("blur", iteration, int(root)),
                             ledger, batch=(ctx, level, iteration))
            clusters.append(Cluster(
                members=picked,
                tree=support_tree_from_branch(tree, members, root, weights),
                iteration=iteration))
            removed.append(picked)
        if removed:
            gone = np.concatenate(removed)
            keep = work.ids[~np.isin(work.ids, gone, assume_unique=True)]
            work = induced_subgraph(work, keep)
        work = _emit_singletons(work, clusters, iteration)
    work = _emit_singletons(work, clusters, iteration)
    if work.n:
        raise DecomposeError("vertices left over after the edge set emptied")
    tsd = Tsd(clusters=clusters, deleted_edges=deleted, cut_edges=[],
              loads={}, iterations=iteration)
    tsd.cut_edges = tsd.recompute_cut(g)
    tsd.loads = tsd.recompute_loads()
    return tsd
