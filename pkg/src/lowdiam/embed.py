"""Metric tree embeddings extracted from a hierarchy.

Projected tree: take one clone of every supporting-tree vertex per (level,
cluster), wire each cluster's leader (smallest-id member) to its own clone in
the parent cluster's tree with a zero-length edge, and contract those
connections. What remains is a tree whose every edge is a real graph edge
with its real length; distances in it dominate graph distances run for run.

Hierarchically 2-separated tree: one node per (level, cluster), labeled by
the cluster leader, each node joined to its parent cluster's node by an edge
of length d_{level-1}. Leaves are the vertices; consecutive levels halve the
edge length exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as _dijkstra

from .graph import Graph, GraphError, all_pairs_distances
from .htsd import Htsd, htsd_stretch


class EmbedError(ValueError):
    pass


def leader_map(h: Htsd) -> dict:
    """(level, cluster index) -> smallest-id member."""
    out = {}
    for i, lvl in enumerate(h.levels):
        for ci, c in enumerate(lvl.clusters):
            out[(i, ci)] = int(c.members[0])
    return out


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


@dataclass
class ProjectedTree:
    """Tree over clone classes; every edge projects to a graph edge."""

    node_count: int
    node_vertex: np.ndarray      # original vertex behind each node
    edges_a: np.ndarray
    edges_b: np.ndarray
    edge_len: np.ndarray
    proj_u: np.ndarray           # projected graph edge, canonical u < v
    proj_v: np.ndarray
    embed: np.ndarray            # original vertex position -> node
    graph: Graph
    d_seq: np.ndarray

    _csr: csr_matrix | None = field(default=None, repr=False)

    def _matrix(self) -> csr_matrix:
        if self._csr is None:
            self._csr = csr_matrix(
                (self.edge_len, (self.edges_a, self.edges_b)),
                shape=(self.node_count, self.node_count))
        return self._csr

    def node_of(self, v: int) -> int:
        return int(self.embed[self.graph.positions([v])[0]])

    def distances_from_vertices(self) -> np.ndarray:
        """n x node_count matrix of tree distances from every embedded vertex."""
        if self.node_count == 1:
            return np.zeros((self.graph.n, 1))
        return _dijkstra(self._matrix(), directed=False, indices=self.embed)

    def distance(self, u: int, v: int) -> float:
        du = _dijkstra(self._matrix(), directed=False,
                       indices=self.node_of(u))
        return float(du[self.node_of(v)])

    def loads(self) -> dict:
        out: dict = {}
        for u, v in zip(self.proj_u.tolist(), self.proj_v.tolist()):
            out[(u, v)] = out.get((u, v), 0) + 1
        return out


def build_projected_tree(h: Htsd) -> ProjectedTree:
    """Contract the leader connections of the clone forest into one tree."""
    g = h.graph
    k = h.k
    if any(c.size != 1 for c in h.levels[k].clusters):
        raise EmbedError("bottom level must be all singletons")
    # Enumerate clones: one per (level, cluster, supporting-tree vertex).
    offsets = {}
    clone_vertex = []
    total = 0
    for i, lvl in enumerate(h.levels):
        for ci, c in enumerate(lvl.clusters):
            offsets[(i, ci)] = total
            clone_vertex.extend(c.tree.ids.tolist())
            total += c.tree.size
    clone_vertex = np.array(clone_vertex, dtype=np.int64)

    def clone_of(level: int, ci: int, v: int) -> int:
        c = h.levels[level].clusters[ci]
        return offsets[(level, ci)] + c.tree.position(v)

    uf = _UnionFind(total)
    for i in range(1, k + 1):
        for ci, c in enumerate(h.levels[i].clusters):
            leader = int(c.members[0])
            up_ci = int(h.cluster_of[i - 1, g.positions([leader])[0]])
            up = h.levels[i - 1].clusters[up_ci]
            if leader not in set(up.tree.ids.tolist()):
                raise EmbedError(
                    "leader missing from the parent supporting tree")
            uf.union(clone_of(i - 1, up_ci, leader), clone_of(i, ci, leader))
    rep = np.array([uf.find(x) for x in range(total)], dtype=np.int64)
    reps, node_id = np.unique(rep, return_inverse=True)
    node_count = len(reps)
    node_vertex = np.full(node_count, -1, dtype=np.int64)
    for x in range(total):
        nid = node_id[x]
        if node_vertex[nid] == -1:
            node_vertex[nid] = clone_vertex[x]
        elif node_vertex[nid] != clone_vertex[x]:
            raise EmbedError("contracted clones of two different vertices")

    ea, eb, el, pu, pv = [], [], [], [], []
    for i, lvl in enumerate(h.levels):
        for ci, c in enumerate(lvl.clusters):
            base = offsets[(i, ci)]
            t = c.tree
            for j in range(t.size):
                p = int(t.parent[j])
                if p == -1:
                    continue
                a = node_id[base + t.position(p)]
                b = node_id[base + j]
                ea.append(a)
                eb.append(b)
                el.append(float(t.wparent[j]))
                u, v = p, int(t.ids[j])
                if u > v:
                    u, v = v, u
                pu.append(u)
                pv.append(v)
    ea = np.array(ea, dtype=np.int64)
    eb = np.array(eb, dtype=np.int64)
    el = np.array(el)
    pu = np.array(pu, dtype=np.int64)
    pv = np.array(pv, dtype=np.int64)

    if len(ea) != node_count - 1:
        raise EmbedError("contracted forest is not a tree")
    check = _UnionFind(node_count)
    joins = 0
    for a, b in zip(ea.tolist(), eb.tolist()):
        if check.find(a) != check.find(b):
            check.union(a, b)
            joins += 1
    if joins != node_count - 1:
        raise EmbedError("contracted forest is not connected")

    embed = np.zeros(g.n, dtype=np.int64)
    for ci, c in enumerate(h.levels[k].clusters):
        v = int(c.members[0])
        embed[g.positions([v])[0]] = node_id[clone_of(k, ci, v)]
    wd = g.weight_dict()
    for a, b, w in zip(pu.tolist(), pv.tolist(), el.tolist()):
        if wd.get((a, b)) != w:
            raise EmbedError("tree edge does not match a graph edge")
    t = ProjectedTree(node_count=node_count, node_vertex=node_vertex,
                      edges_a=ea, edges_b=eb, edge_len=el,
                      proj_u=pu, proj_v=pv, embed=embed, graph=g,
                      d_seq=h.d_seq)
    for i in range(g.n):
        if node_vertex[embed[i]] != g.ids[i]:
            raise EmbedError("leaf embedding projects to the wrong vertex")
    return t


@dataclass
class Hst:
    """Hierarchically 2-separated tree over (level, cluster) nodes."""

    k: int
    d_seq: np.ndarray
    node_level: np.ndarray
    node_cluster: np.ndarray
    node_label: np.ndarray       # leader vertex of the cluster
    parent: np.ndarray           # node index, -1 at the root
    parent_len: np.ndarray
    leaf_of: np.ndarray          # original vertex position -> leaf node
    graph: Graph
    cluster_of: np.ndarray

    def suffix_sums(self) -> np.ndarray:
        """S[i] = d_i + ... + d_{k-1} (S[k] = 0)."""
        s = np.zeros(self.k + 1)
        for i in range(self.k - 1, -1, -1):
            s[i] = s[i + 1] + float(self.d_seq[i])
        return s

    def lca_levels(self) -> np.ndarray:
        """n x n matrix: deepest level at which two vertices share a cluster."""
        same = (self.cluster_of[:, :, None] == self.cluster_of[:, None, :])
        return same.sum(axis=0).astype(np.int64) - 1

    def distance_matrix(self) -> np.ndarray:
        """Leaf-to-leaf distances, closed form: 2 * S[lca level]."""
        s = self.suffix_sums()
        lca = self.lca_levels()
        out = 2.0 * s[np.minimum(lca, self.k)]
        np.fill_diagonal(out, 0.0)
        return out

    def distance(self, u: int, v: int) -> float:
        if u == v:
            return 0.0
        pu_, pv_ = self.graph.positions([u])[0], self.graph.positions([v])[0]
        same = self.cluster_of[:, pu_] == self.cluster_of[:, pv_]
        lca = int(same.sum()) - 1
        return 2.0 * float(self.suffix_sums()[lca])

    def ancestor_distance_walked(self, v: int, level: int) -> float:
        """Sum edge lengths from v's leaf up to its level-`level` ancestor."""
        node = int(self.leaf_of[self.graph.positions([v])[0]])
        total = 0.0
        while self.node_level[node] > level:
            total += float(self.parent_len[node])
            node = int(self.parent[node])
        return total

    def ancestor_distance_formula(self, level: int) -> float:
        return float(self.suffix_sums()[level])


def build_hst(h: Htsd) -> Hst:
    g = h.graph
    k = h.k
    if any(c.size != 1 for c in h.levels[k].clusters):
        raise EmbedError("bottom level must be all singletons")
    node_index = {}
    levels, clusters, labels = [], [], []
    for i, lvl in enumerate(h.levels):
        for ci, c in enumerate(lvl.clusters):
            node_index[(i, ci)] = len(levels)
            levels.append(i)
            clusters.append(ci)
            labels.append(int(c.members[0]))
    count = len(levels)
    parent = np.full(count, -1, dtype=np.int64)
    parent_len = np.zeros(count)
    for i in range(1, k + 1):
        for ci, c in enumerate(h.levels[i].clusters):
            anyv = int(c.members[0])
            up_ci = int(h.cluster_of[i - 1, g.positions([anyv])[0]])
            me = node_index[(i, ci)]
            parent[me] = node_index[(i - 1, up_ci)]
            parent_len[me] = float(h.d_seq[i - 1])
    leaf_of = np.zeros(g.n, dtype=np.int64)
    for ci, c in enumerate(h.levels[k].clusters):
        v = int(c.members[0])
        leaf_of[g.positions([v])[0]] = node_index[(k, ci)]
    return Hst(k=k, d_seq=h.d_seq, node_level=np.array(levels, dtype=np.int64),
               node_cluster=np.array(clusters, dtype=np.int64),
               node_label=np.array(labels, dtype=np.int64),
               parent=parent, parent_len=parent_len, leaf_of=leaf_of,
               graph=g, cluster_of=h.cluster_of)


def tree_stretch(tree, u: int, v: int) -> float:
    """Tree distance between the embedded endpoints over the edge length."""
    g = tree.graph
    key = (u, v) if u < v else (v, u)
    idx = g.edge_index().get(key)
    if idx is None:
        raise GraphError(f"({u}, {v}) is not an edge")
    return tree.distance(u, v) / float(g.ew[idx])


def stretch_per_edge(tree) -> np.ndarray:
    """Stretch of every graph edge in one shot."""
    g = tree.graph
    pu, pv = g._edge_positions()
    if isinstance(tree, Hst):
        dm = tree.distance_matrix()
        return dm[pu, pv] / g.ew
    dist = tree.distances_from_vertices()
    return dist[pu, tree.embed[pv]] / g.ew


def p_stretch(tree_or_h, u: int, v: int, p: float) -> float:
    """Stretch raised to the power p in (0, 1]; accepts a tree or a hierarchy
    (the hierarchy variant uses d_i / len(e) at the decoupling level)."""
    if not (0 < p <= 1):
        raise EmbedError("p must lie in (0, 1]")
    if isinstance(tree_or_h, Htsd):
        return htsd_stretch(tree_or_h, u, v) ** p
    return tree_stretch(tree_or_h, u, v) ** p


def verify_domination(tree, g: Graph, apsp: np.ndarray | None = None,
                      cap: int = 200) -> dict:
    """Check dist_tree(u, v) >= dist_g(u, v) over every vertex pair.

    Returns a report dict; violations carry the offending pair. An Hst can
    only violate this on runs where some supporting tree outgrew its level
    budget, so callers should pair this with the hierarchy's
    level_diameter_ok flag.
    """
    if g.n > cap:
        raise EmbedError(f"domination check capped at n={cap}")
    if apsp is None:
        apsp = all_pairs_distances(g)
    if isinstance(tree, Hst):
        tdist = tree.distance_matrix()
    else:
        full = tree.distances_from_vertices()
        tdist = full[:, tree.embed]
    bad = np.argwhere(tdist < apsp - 1e-9)
    violations = [(int(g.ids[a]), int(g.ids[b])) for a, b in bad if a < b]
    return {"pairs": g.n * (g.n - 1) // 2, "violations": violations,
            "ok": len(violations) == 0}
