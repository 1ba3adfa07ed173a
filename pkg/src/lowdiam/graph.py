"""Weighted undirected graphs and exact shortest-path primitives.

Vertices are integer ids. A full graph uses the dense range 0..n-1; induced
subgraphs keep the original ids so that results of recursive computations can
be compared against the graph they came from. Edge lengths are positive
float64 values (the text format only admits positive integers, but internal
graphs built by contraction or perturbation may carry arbitrary positive
reals).

Exact single-source shortest paths are computed with scipy's Dijkstra; the
shortest-path tree parent of each vertex is then re-derived as the smallest-id
neighbour that attains the optimal distance, which makes tie-breaking
deterministic and independent of heap order.
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.sparse.csgraph import dijkstra as _dijkstra

_NO_PARENT = -1
_ID_SENTINEL = np.int64(2**62)

ALL_PAIRS_CAP = 5000


class GraphError(ValueError):
    """Invalid graph construction or operation argument."""


class GraphFormatError(GraphError):
    """Malformed graph text."""


def _as_id_array(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.int64)
    if arr.ndim != 1:
        arr = arr.reshape(-1)
    return arr


def _in_sorted(sorted_ids: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Boolean mask: which of `values` occur in the sorted array `sorted_ids`."""
    pos = np.searchsorted(sorted_ids, values)
    pos_clipped = np.minimum(pos, len(sorted_ids) - 1) if len(sorted_ids) else pos
    if len(sorted_ids) == 0:
        return np.zeros(len(values), dtype=bool)
    return sorted_ids[pos_clipped] == values


class Graph:
    """Undirected graph with positive edge lengths and explicit vertex ids.

    `ids` is always sorted ascending. Edges are stored once with eu < ev.
    """

    __slots__ = ("ids", "eu", "ev", "ew", "_csr", "_pos_u", "_pos_v",
                 "_connected", "_wdict", "_eidx")

    def __init__(self, ids, edges):
        ids = np.unique(_as_id_array(ids))
        if len(ids) and ids[0] < 0:
            raise GraphError("vertex ids must be non-negative")
        eu, ev, ew = _normalize_edges(edges)
        if len(eu):
            present = _in_sorted(ids, eu) & _in_sorted(ids, ev)
            if not present.all():
                raise GraphError("edge endpoint not among vertex ids")
        self.ids = ids
        self.eu, self.ev, self.ew = eu, ev, ew
        self._csr = None
        self._pos_u = None
        self._pos_v = None
        self._connected = None
        self._wdict = None
        self._eidx = None

    @classmethod
    def _from_arrays(cls, ids, eu, ev, ew):
        """Trusted constructor: arrays already canonical (sorted ids, eu < ev)."""
        g = cls.__new__(cls)
        g.ids = ids
        g.eu, g.ev, g.ew = eu, ev, ew
        g._csr = None
        g._pos_u = None
        g._pos_v = None
        g._connected = None
        g._wdict = None
        g._eidx = None
        return g

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        """Graph on vertex ids 0..n-1 with the given (u, v, w) edges."""
        if n < 0:
            raise GraphError("vertex count must be non-negative")
        return cls(np.arange(n, dtype=np.int64), edges)

    # -- basic shape ------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.ids)

    @property
    def num_edges(self) -> int:
        return len(self.eu)

    def min_edge_length(self) -> float:
        """Minimum edge length; +inf on an empty edge set."""
        return float(self.ew.min()) if len(self.ew) else float("inf")

    @property
    def connected(self) -> bool:
        if self._connected is None:
            if self.n <= 1:
                self._connected = True
            else:
                ncomp, _ = connected_components(self._matrix(), directed=False)
                self._connected = ncomp == 1
        return self._connected

    def positions(self, values) -> np.ndarray:
        """Positions of the given ids inside `ids` (which is sorted)."""
        values = _as_id_array(values)
        pos = np.searchsorted(self.ids, values)
        if len(values) and (pos >= self.n).any():
            raise GraphError("id not in graph")
        if len(values) and not (self.ids[pos] == values).all():
            raise GraphError("id not in graph")
        return pos

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        if len(self.eu):
            np.add.at(deg, self._edge_positions()[0], 1)
            np.add.at(deg, self._edge_positions()[1], 1)
        return deg

    def weight_dict(self) -> dict:
        """(u, v) -> length for both orientations. Built once, cached."""
        if self._wdict is None:
            d = {}
            for u, v, w in zip(self.eu.tolist(), self.ev.tolist(), self.ew.tolist()):
                d[(u, v)] = w
                d[(v, u)] = w
            self._wdict = d
        return self._wdict

    def edge_index(self) -> dict:
        """Canonical (u, v) with u < v -> position in the edge arrays."""
        if self._eidx is None:
            self._eidx = {(u, v): i for i, (u, v) in
                          enumerate(zip(self.eu.tolist(), self.ev.tolist()))}
        return self._eidx

    def _edge_positions(self):
        if self._pos_u is None:
            self._pos_u = self.positions(self.eu)
            self._pos_v = self.positions(self.ev)
        return self._pos_u, self._pos_v

    def _matrix(self) -> csr_matrix:
        if self._csr is None:
            pu, pv = self._edge_positions()
            self._csr = csr_matrix((self.ew, (pu, pv)), shape=(self.n, self.n))
        return self._csr

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.num_edges})"


def _normalize_edges(edges):
    """Canonicalize an edge collection to (eu < ev) arrays; validate."""
    if isinstance(edges, tuple) and len(edges) == 3 and \
            all(isinstance(a, np.ndarray) for a in edges):
        eu, ev, ew = edges
        eu = eu.astype(np.int64, copy=True)
        ev = ev.astype(np.int64, copy=True)
        ew = ew.astype(np.float64, copy=True)
    else:
        rows = list(edges)
        eu = np.array([r[0] for r in rows], dtype=np.int64)
        ev = np.array([r[1] for r in rows], dtype=np.int64)
        ew = np.array([r[2] for r in rows], dtype=np.float64)
    if (eu == ev).any():
        raise GraphError("self-loops are not allowed")
    if len(ew) and (~np.isfinite(ew) | (ew <= 0)).any():
        raise GraphError("edge lengths must be positive and finite")
    swap = eu > ev
    eu2 = np.where(swap, ev, eu)
    ev2 = np.where(swap, eu, ev)
    order = np.lexsort((ev2, eu2))
    eu2, ev2, ew = eu2[order], ev2[order], ew[order]
    if len(eu2) > 1:
        dup = (eu2[1:] == eu2[:-1]) & (ev2[1:] == ev2[:-1])
        if dup.any():
            raise GraphError("duplicate edge")
    return eu2, ev2, ew


class SuperSourceGraph:
    """A graph part plus a virtual source s joined to selected vertices.

    s is one larger than the largest base vertex id, so it never collides and
    is the largest id in the extended vertex set (min-id tie-breaks therefore
    prefer real vertices over s).
    """

    __slots__ = ("base", "s", "source_ids", "source_len",
                 "_ids_all", "_eu", "_ev", "_ew", "_csr")

    def __init__(self, base: Graph, source_ids, source_len):
        source_ids = _as_id_array(source_ids)
        source_len = np.asarray(source_len, dtype=np.float64)
        if len(source_ids) != len(source_len):
            raise GraphError("source arrays must align")
        if len(source_ids):
            if not _in_sorted(base.ids, source_ids).all():
                raise GraphError("source endpoint not in base graph")
            if (~np.isfinite(source_len) | (source_len <= 0)).any():
                raise GraphError("source edge lengths must be positive")
            if len(np.unique(source_ids)) != len(source_ids):
                raise GraphError("duplicate source edge")
        self.base = base
        self.s = int(base.ids[-1]) + 1 if base.n else 0
        order = np.argsort(source_ids)
        self.source_ids = source_ids[order]
        self.source_len = source_len[order]
        self._ids_all = None
        self._eu = None
        self._ev = None
        self._ew = None
        self._csr = None

    @property
    def n(self) -> int:
        return self.base.n + 1

    def _materialize(self):
        """Extended (ids, eu, ev, ew) arrays with s appended last."""
        if self._ids_all is None:
            base = self.base
            self._ids_all = np.append(base.ids, np.int64(self.s))
            self._eu = np.concatenate([base.eu, self.source_ids])
            self._ev = np.concatenate(
                [base.ev, np.full(len(self.source_ids), self.s, dtype=np.int64)])
            self._ew = np.concatenate([base.ew, self.source_len])
        return self._ids_all, self._eu, self._ev, self._ew

    def _matrix(self) -> csr_matrix:
        if self._csr is None:
            ids, eu, ev, ew = self._materialize()
            pu = np.searchsorted(ids, eu)
            pv = np.searchsorted(ids, ev)
            self._csr = csr_matrix((ew, (pu, pv)), shape=(len(ids), len(ids)))
        return self._csr

    def __repr__(self):
        return (f"SuperSourceGraph(base={self.base!r}, s={self.s}, "
                f"sources={len(self.source_ids)})")


class SsspTree:
    """Shortest-path tree: per-vertex distance estimate and parent.

    `ids` covers every vertex of the queried graph (including the super
    source, when there is one). Unreached vertices have dist=+inf and
    parent=-1. The distance of a reached vertex always equals the sum of the
    lengths of its tree path, exactly, because the parent of v is chosen among
    neighbours u with dist[u] + w(u, v) == dist[v] (float equality).
    """

    __slots__ = ("root", "ids", "dist", "parent", "_pos")

    def __init__(self, root: int, ids: np.ndarray, dist: np.ndarray,
                 parent: np.ndarray):
        self.root = int(root)
        self.ids = ids
        self.dist = dist
        self.parent = parent
        self._pos = None

    def position(self, v) -> int:
        p = int(np.searchsorted(self.ids, v))
        if p >= len(self.ids) or self.ids[p] != v:
            raise GraphError(f"vertex {v} not in tree universe")
        return p

    def positions(self, values) -> np.ndarray:
        values = np.asarray(values, dtype=np.int64)
        pos = np.searchsorted(self.ids, values)
        bad = (pos >= len(self.ids)) | (self.ids[np.minimum(pos, len(self.ids) - 1)] != values)
        if bad.any():
            raise GraphError(f"vertex {values[bad][0]} not in tree universe")
        return pos

    def distance(self, v) -> float:
        return float(self.dist[self.position(v)])

    def parent_of(self, v) -> int:
        return int(self.parent[self.position(v)])

    def reached_mask(self) -> np.ndarray:
        return np.isfinite(self.dist)

    def unreached(self) -> np.ndarray:
        return self.ids[~np.isfinite(self.dist)]

    def branch_labels(self) -> np.ndarray:
        """For each vertex, the id of its ancestor that is a child of the root.

        The root gets its own id; unreached vertices get -1. Computed by one
        pass over vertices in increasing distance order (parents first).
        """
        n = len(self.ids)
        labels = np.full(n, -1, dtype=np.int64)
        pos_of = {int(v): i for i, v in enumerate(self.ids)}
        root_pos = pos_of[self.root]
        labels[root_pos] = self.root
        order = np.argsort(self.dist, kind="stable")
        for i in order:
            if not np.isfinite(self.dist[i]) or i == root_pos:
                continue
            p = int(self.parent[i])
            if p == self.root:
                labels[i] = self.ids[i]
            elif p != _NO_PARENT:
                labels[i] = labels[pos_of[p]]
        return labels

    def path_length_recomputed(self, v, weights: dict) -> float:
        """Walk the tree path root -> v summing graph lengths (for audits)."""
        total = 0.0
        cur = int(v)
        hops = 0
        while cur != self.root:
            p = self.parent_of(cur)
            if p == _NO_PARENT:
                return float("inf")
            total += weights[(p, cur)]
            cur = p
            hops += 1
            if hops > len(self.ids):
                raise GraphError("parent structure has a cycle")
        return total


def _sssp_on_arrays(ids, eu, ev, ew, matrix, root):
    """Dijkstra plus deterministic smallest-id parent selection."""
    n = len(ids)
    pos_root = int(np.searchsorted(ids, root))
    if pos_root >= n or ids[pos_root] != root:
        raise GraphError(f"root {root} not in graph")
    dist = _dijkstra(matrix, directed=False, indices=pos_root)
    parent = np.full(n, _NO_PARENT, dtype=np.int64)
    if len(eu):
        pu = np.searchsorted(ids, eu)
        pv = np.searchsorted(ids, ev)
        du = dist[pu]
        dv = dist[pv]
        fwd = np.isfinite(du) & (du + ew == dv)
        bwd = np.isfinite(dv) & (dv + ew == du)
        best = np.full(n, _ID_SENTINEL, dtype=np.int64)
        np.minimum.at(best, pv[fwd], ids[pu[fwd]])
        np.minimum.at(best, pu[bwd], ids[pv[bwd]])
        chosen = best < _ID_SENTINEL
        parent[chosen] = best[chosen]
    parent[pos_root] = _NO_PARENT
    return SsspTree(root, ids, dist, parent)


def exact_sssp(g, root) -> SsspTree:
    """Exact shortest-path tree from `root`.

    Works on a Graph or a SuperSourceGraph. Ties in optimal predecessors are
    broken toward the smallest parent id.
    """
    if isinstance(g, SuperSourceGraph):
        ids, eu, ev, ew = g._materialize()
        return _sssp_on_arrays(ids, eu, ev, ew, g._matrix(), root)
    return _sssp_on_arrays(g.ids, g.eu, g.ev, g.ew, g._matrix(), root)


def all_pairs_distances(g: Graph, cap: int = ALL_PAIRS_CAP) -> np.ndarray:
    """Dense n x n exact distance matrix, ordered like g.ids.

    Refuses graphs above `cap` vertices; unreachable pairs are +inf.
    """
    if g.n > cap:
        raise GraphError(f"all-pairs on n={g.n} exceeds cap {cap}")
    if g.n == 0:
        return np.zeros((0, 0))
    return _dijkstra(g._matrix(), directed=False)


def induced_subgraph(g: Graph, vertices) -> Graph:
    """Subgraph on the given vertex subset, original ids preserved."""
    vs = np.unique(_as_id_array(vertices))
    if len(vs) and not _in_sorted(g.ids, vs).all():
        raise GraphError("subset contains foreign vertex id")
    if len(g.eu):
        keep = _in_sorted(vs, g.eu) & _in_sorted(vs, g.ev)
        eu, ev, ew = g.eu[keep], g.ev[keep], g.ew[keep]
    else:
        eu, ev, ew = g.eu[:0], g.ev[:0], g.ew[:0]
    return Graph._from_arrays(vs, eu, ev, ew)


def contract_into_super_source(g: Graph, b) -> SuperSourceGraph:
    """Collapse the nonempty vertex set b into a virtual source.

    The base is the induced subgraph on ids - b; every vertex outside b that
    had at least one edge into b gets a source edge whose length is the
    minimum over those edges. Distances from b are preserved exactly.
    """
    b = np.unique(_as_id_array(b))
    if len(b) == 0:
        raise GraphError("cannot contract an empty set")
    if not _in_sorted(g.ids, b).all():
        raise GraphError("contraction set contains foreign vertex id")
    keep_mask = ~_in_sorted(b, g.ids)
    rest = g.ids[keep_mask]
    base = induced_subgraph(g, rest)
    if len(g.eu):
        u_in = _in_sorted(b, g.eu)
        v_in = _in_sorted(b, g.ev)
        cross = u_in ^ v_in
        outside = np.where(u_in[cross], g.ev[cross], g.eu[cross])
        wts = g.ew[cross]
        if len(outside):
            pos = np.searchsorted(rest, outside)
            best = np.full(len(rest), np.inf)
            np.minimum.at(best, pos, wts)
            have = np.isfinite(best)
            return SuperSourceGraph(base, rest[have], best[have])
    return SuperSourceGraph(base, rest[:0], np.zeros(0))


def attach_super_source(g: Graph, source_ids, source_len) -> SuperSourceGraph:
    """Add a virtual source with explicit positive edge lengths; g unchanged."""
    return SuperSourceGraph(g, source_ids, source_len)


def weak_diameter(g: Graph, vertices) -> float:
    """max over pairs in `vertices` of their distance measured in all of g."""
    vs = np.unique(_as_id_array(vertices))
    if len(vs) == 0:
        raise GraphError("weak diameter of an empty set")
    if len(vs) == 1:
        return 0.0
    pos = g.positions(vs)
    dist = _dijkstra(g._matrix(), directed=False, indices=pos)
    return float(dist[:, pos].max())


# -- text format --------------------------------------------------------

def parse_graph(text: str) -> Graph:
    """Parse the graph text format.

    Header line `p <n> <m>`, then m lines `e <u> <v> <w>` with 0-based vertex
    ids and positive integer lengths. Lines starting with '#' are comments.
    A disconnected graph parses fine; only operations that need connectivity
    reject it.
    """
    header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if header is not None:
                raise GraphFormatError(f"line {lineno}: duplicate header")
            if len(parts) != 3:
                raise GraphFormatError(f"line {lineno}: malformed header")
            try:
                header = (int(parts[1]), int(parts[2]))
            except ValueError:
                raise GraphFormatError(f"line {lineno}: malformed header") from None
            if header[0] < 0 or header[1] < 0:
                raise GraphFormatError(f"line {lineno}: negative count")
        elif parts[0] == "e":
            if header is None:
                raise GraphFormatError(f"line {lineno}: edge before header")
            if len(parts) != 4:
                raise GraphFormatError(f"line {lineno}: malformed edge line")
            try:
                u, v, w = int(parts[1]), int(parts[2]), int(parts[3])
            except ValueError:
                raise GraphFormatError(
                    f"line {lineno}: non-integer edge field") from None
            n = header[0]
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"line {lineno}: vertex id out of range")
            if u == v:
                raise GraphFormatError(f"line {lineno}: self-loop")
            if w <= 0:
                raise GraphFormatError(f"line {lineno}: non-positive length")
            edges.append((u, v, float(w)))
        else:
            raise GraphFormatError(f"line {lineno}: unknown record {parts[0]!r}")
    if header is None:
        raise GraphFormatError("missing header line")
    n, m = header
    if len(edges) != m:
        raise GraphFormatError(f"header promises {m} edges, found {len(edges)}")
    try:
        return Graph.from_edges(n, edges)
    except GraphError as exc:
        raise GraphFormatError(str(exc)) from None


def write_graph(g: Graph) -> str:
    """Canonical text for a graph: edges sorted by (u, v)."""
    if not np.array_equal(g.ids, np.arange(g.n)):
        raise GraphError("only dense 0..n-1 graphs serialize to text")
    lines = [f"p {g.n} {g.num_edges}"]
    for u, v, w in zip(g.eu.tolist(), g.ev.tolist(), g.ew.tolist()):
        if w != int(w):
            raise GraphError("text format carries integer lengths only")
        lines.append(f"e {u} {v} {int(w)}")
    return "\n".join(lines) + "\n"
