"""Hierarchy of decompositions: level budgets, nesting, loads, decoupling."""

import random

import numpy as np
import pytest

import bruteforce as bf
from lowdiam.graph import Graph
from lowdiam.htsd import (HtsdError, build_htsd, decoupling_level,
                          htsd_stretch)
from lowdiam.oracle import CallLedger, OracleConfig, ledger_report
from lowdiam.sampling import RandomStream

EXACT = OracleConfig(mode="exact")


def build(g, c=2.0, seed=1, ledger=None):
    return build_htsd(g, c, EXACT, RandomStream(seed, ("htsd",)), ledger)


def cycle_graph(n, w=1.0):
    edges = [(i, i + 1, w) for i in range(n - 1)] + [(0, n - 1, w)]
    return Graph.from_edges(n, edges)


def random_connected(n, extra, seed, wmax=9):
    rng = random.Random(seed)
    edges = {(i, i + 1): float(rng.randint(1, wmax)) for i in range(n - 1)}
    while len(edges) < n - 1 + extra:
        u, v = rng.sample(range(n), 2)
        key = (u, v) if u < v else (v, u)
        edges.setdefault(key, float(rng.randint(1, wmax)))
    return Graph.from_edges(n, [(u, v, w) for (u, v), w in edges.items()]), \
        [(u, v, w) for (u, v), w in edges.items()]


def segmented_path():
    """Three heavy edges separating two unit segments: a stable multi-level
    hierarchy whose decoupling levels differ between edge classes."""
    ws = [100.0, 1.0, 1.0, 100.0, 1.0, 1.0, 100.0]
    return Graph.from_edges(8, [(i, i + 1, w) for i, w in enumerate(ws)])


class TestTinyGraphs:
    def test_single_vertex(self):
        h = build(Graph([3], []))
        assert h.k == 0
        assert h.delta == 0.0
        assert h.d_seq.tolist() == [0.0]
        assert len(h.levels) == 1
        assert h.levels[0].clusters[0].members.tolist() == [3]

    def test_single_heavy_edge(self):
        g = Graph.from_edges(2, [(0, 1, 5.0)])
        h = build(g, c=2.0)
        assert h.delta == 2.5
        assert h.d_seq.tolist() == [10.0, 5.0, 2.5, 1.25, 0.625]
        assert h.k == 4
        assert h.decoupling_levels().tolist() == [0]
        assert h.first_cut_or_deleted_levels().tolist() == [1]
        assert h.cumulative_loads().tolist() == [1]
        assert len(h.levels[0].clusters) == 1
        assert all(c.size == 1 for c in h.levels[1].clusters)

    def test_rejects_bad_graphs(self):
        with pytest.raises(HtsdError):
            build(Graph([], []))
        with pytest.raises(HtsdError):
            build(Graph([0, 1], []))


class TestBudgetSequence:
    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_halving_and_termination(self, seed):
        g, _ = random_connected(20, 12, seed=seed)
        h = build(g, seed=seed)
        d = h.d_seq
        assert d[0] == 4.0 * h.delta
        for i in range(1, len(d)):
            assert d[i] == d[i - 1] / 2.0
        assert d[-1] < 1.0 <= d[-2]

    @pytest.mark.parametrize("seed", [1, 2])
    def test_estimate_window(self, seed):
        g, triples = random_connected(12, 8, seed=seed)
        diam = bf.diameter(bf.adjacency(triples))
        h = build(g, seed=seed)
        assert diam / 4 <= h.delta <= diam


class TestHierarchyStructure:
    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_partition_nesting_singletons(self, seed):
        g, _ = random_connected(24, 16, seed=seed, wmax=4)
        h = build(g, seed=seed)
        assert len(h.levels) == h.k + 1
        assert len(h.levels[0].clusters) == 1
        for lvl in h.levels:
            assert lvl.partition_ok(g)
        assert all(c.size == 1 for c in h.levels[-1].clusters)
        for i in range(1, len(h.levels)):
            parent = {}
            for ci, cl in enumerate(h.levels[i - 1].clusters):
                for v in cl.members.tolist():
                    parent[v] = ci
            for cl in h.levels[i].clusters:
                owners = {parent[v] for v in cl.members.tolist()}
                assert len(owners) == 1

    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_cluster_of_matrix_matches_levels(self, seed):
        g, _ = random_connected(15, 10, seed=seed)
        h = build(g, seed=seed)
        assert h.cluster_of.shape == (h.k + 1, g.n)
        for i, lvl in enumerate(h.levels):
            for ci, cl in enumerate(lvl.clusters):
                pos = g.positions(cl.members)
                assert (h.cluster_of[i, pos] == ci).all()

    def test_deterministic(self):
        g = cycle_graph(32)
        a = build(g, seed=9)
        b = build(g, seed=9)
        assert np.array_equal(a.cluster_of, b.cluster_of)
        assert np.array_equal(a.d_seq, b.d_seq)


class TestDecoupling:
    @pytest.mark.parametrize("seed", [1, 2, 3, 4])
    def test_consistency_with_cut_listings(self, seed):
        g, _ = random_connected(20, 14, seed=seed, wmax=5)
        h = build(g, seed=seed)
        dec = h.decoupling_levels()
        assert (dec >= 0).all() and (dec <= h.k - 1).all()
        assert np.array_equal(h.first_cut_or_deleted_levels(), dec + 1)

    def test_segmented_path_frozen(self):
        h = build(segmented_path(), c=1.0, seed=1)
        assert h.delta == 152.0
        assert h.k == 10
        assert h.d_seq.tolist() == [608.0, 304.0, 152.0, 76.0, 38.0, 19.0,
                                    9.5, 4.75, 2.375, 1.1875, 0.59375]
        # Heavy edges are deleted at level 1; the unit segments survive until
        # the level-3 threshold drops below 1.
        assert sorted(h.levels[1].deleted_edges) == [(0, 1), (3, 4), (6, 7)]
        assert h.decoupling_levels().tolist() == [0, 2, 2, 0, 2, 2, 0]
        assert h.cumulative_loads().tolist() == [1, 3, 3, 1, 3, 3, 1]
        assert h.level_diameter_ok()

    def test_helper_and_stretch(self):
        g = segmented_path()
        h = build(g, c=1.0, seed=1)
        assert decoupling_level(h, 1, 0) == 0
        assert decoupling_level(h, 1, 2) == 2
        assert htsd_stretch(h, 0, 1) == 608.0 / 100.0
        assert htsd_stretch(h, 1, 2) == 152.0 / 1.0
        with pytest.raises(Exception):
            decoupling_level(h, 0, 2)


class TestLoads:
    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_additive_over_levels(self, seed):
        g, _ = random_connected(18, 12, seed=seed, wmax=4)
        h = build(g, seed=seed)
        idx = g.edge_index()
        want = np.zeros(g.num_edges, dtype=np.int64)
        for lvl in h.levels:
            for key, cnt in lvl.recompute_loads().items():
                want[idx[key]] += cnt
        assert np.array_equal(h.cumulative_loads(), want)

    def test_levels_bound_loads(self):
        g = cycle_graph(32)
        h = build(g, seed=4)
        loads = h.cumulative_loads()
        budget = sum(max(lvl.iterations, 1) for lvl in h.levels)
        assert (loads <= budget).all()


class TestLedger:
    def test_one_diameter_call_and_context(self):
        ledger = CallLedger()
        g = cycle_graph(16)
        build(g, seed=2, ledger=ledger)
        rep = ledger_report(ledger)
        assert rep["phases"]["diameter"] == 1
        assert rep["merged"] <= rep["total"]
