"""Projected trees and hierarchically 2-separated trees."""

import random

import numpy as np
import pytest

from lowdiam.embed import (EmbedError, build_hst, build_projected_tree,
                           p_stretch, stretch_per_edge, tree_stretch,
                           verify_domination)
from lowdiam.graph import Graph, all_pairs_distances
from lowdiam.htsd import build_htsd
from lowdiam.oracle import OracleConfig
from lowdiam.sampling import RandomStream

EXACT = OracleConfig(mode="exact")


def hierarchy(g, c=2.0, seed=1):
    return build_htsd(g, c, EXACT, RandomStream(seed, ("htsd",)))


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
    return Graph.from_edges(n, [(u, v, w) for (u, v), w in edges.items()])


def segmented_path():
    ws = [100.0, 1.0, 1.0, 100.0, 1.0, 1.0, 100.0]
    return Graph.from_edges(8, [(i, i + 1, w) for i, w in enumerate(ws)])


class TestProjectedTree:
    def test_single_edge(self):
        g = Graph.from_edges(2, [(0, 1, 5.0)])
        t = build_projected_tree(hierarchy(g))
        assert t.node_count == 2
        assert t.edge_len.tolist() == [5.0]
        assert sorted(t.node_vertex.tolist()) == [0, 1]
        assert t.distance(0, 1) == 5.0
        assert stretch_per_edge(t).tolist() == [1.0]

    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_every_edge_is_a_graph_edge(self, seed):
        g = random_connected(20, 14, seed=seed, wmax=4)
        t = build_projected_tree(hierarchy(g, seed=seed))
        assert len(t.edges_a) == t.node_count - 1
        wd = g.weight_dict()
        for u, v, w in zip(t.proj_u.tolist(), t.proj_v.tolist(),
                           t.edge_len.tolist()):
            assert wd[(u, v)] == w
        # Endpoint clones really are clones of the projected endpoints.
        for a, b, u, v in zip(t.edges_a.tolist(), t.edges_b.tolist(),
                              t.proj_u.tolist(), t.proj_v.tolist()):
            assert {int(t.node_vertex[a]), int(t.node_vertex[b])} == {u, v}

    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_loads_equal_hierarchy_loads(self, seed):
        g = random_connected(18, 10, seed=seed, wmax=4)
        h = hierarchy(g, seed=seed)
        t = build_projected_tree(h)
        want = {}
        for (u, v), load in zip(
                zip(g.eu.tolist(), g.ev.tolist()),
                h.cumulative_loads().tolist()):
            if load:
                want[(u, v)] = load
        assert t.loads() == want

    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_distance_capped_by_decoupling_budget(self, seed):
        g = random_connected(16, 10, seed=seed, wmax=4)
        h = hierarchy(g, seed=seed)
        t = build_projected_tree(h)
        dec = h.decoupling_levels()
        stretches = stretch_per_edge(t)
        assert (stretches * g.ew <= 4.0 * h.d_seq[dec] + 1e-9).all()

    def test_embedding_points_at_own_clone(self):
        g = segmented_path()
        t = build_projected_tree(hierarchy(g, c=1.0))
        for i, v in enumerate(g.ids.tolist()):
            assert int(t.node_vertex[t.embed[i]]) == v
            assert t.node_of(v) == int(t.embed[i])

    def test_distances_from_vertices_matches_distance(self):
        g = segmented_path()
        t = build_projected_tree(hierarchy(g, c=1.0))
        full = t.distances_from_vertices()
        for i, u in enumerate(g.ids.tolist()):
            for j, v in enumerate(g.ids.tolist()):
                assert full[i, t.embed[j]] == t.distance(u, v)

    def test_unit_cycle_frozen_stretch(self):
        # The hierarchy on a unit 64-cycle collapses to singletons after one
        # level, so the projected tree is the level-0 SSSP path: one edge
        # stretches across the whole tree, the rest have stretch 1.
        g = cycle_graph(64)
        t = build_projected_tree(hierarchy(g, seed=123))
        s = np.sort(stretch_per_edge(t))
        assert s[:-1].tolist() == [1.0] * 63
        assert s[-1] == 63.0
        assert s.mean() == 1.96875


class TestHst:
    def test_two_separation_and_levels(self):
        g = random_connected(18, 12, seed=5, wmax=4)
        h = hierarchy(g, seed=5)
        t = build_hst(h)
        nonroot = t.parent != -1
        assert np.count_nonzero(~nonroot) == 1
        lvl = t.node_level[nonroot]
        assert np.array_equal(t.parent_len[nonroot], h.d_seq[lvl - 1])
        assert (t.node_level[t.parent[nonroot]] == lvl - 1).all()
        assert (t.node_level[t.leaf_of] == t.k).all()

    def test_suffix_sums_closed_form(self):
        g = random_connected(12, 8, seed=3)
        h = hierarchy(g, seed=3)
        t = build_hst(h)
        s = t.suffix_sums()
        k = t.k
        for i in range(k + 1):
            assert s[i] == pytest.approx(sum(float(h.d_seq[j])
                                             for j in range(i, k)), rel=1e-15)
        for i in range(k):
            closed = float(h.d_seq[i]) * (2.0 - 2.0 ** (i - k + 1))
            assert s[i] == pytest.approx(closed, rel=1e-12)

    def test_walked_distance_matches_formula(self):
        g = random_connected(16, 10, seed=7, wmax=4)
        h = hierarchy(g, seed=7)
        t = build_hst(h)
        for level in range(t.k + 1):
            formula = t.ancestor_distance_formula(level)
            for v in g.ids.tolist():
                walked = t.ancestor_distance_walked(v, level)
                assert abs(walked - formula) <= 1e-9 * max(formula, 1.0)

    def test_distance_matrix_matches_pointwise(self):
        g = segmented_path()
        t = build_hst(hierarchy(g, c=1.0))
        dm = t.distance_matrix()
        for i, u in enumerate(g.ids.tolist()):
            assert dm[i, i] == 0.0
            for j, v in enumerate(g.ids.tolist()):
                assert dm[i, j] == t.distance(u, v)
                assert dm[i, j] == dm[j, i]

    def test_unit_cycle_frozen_stretch(self):
        # All pairs separate at level 0, so every distance is 2 * 127.
        g = cycle_graph(64)
        t = build_hst(hierarchy(g, seed=5))
        s = stretch_per_edge(t)
        assert s.tolist() == [254.0] * 64

    def test_lca_levels_symmetry(self):
        g = segmented_path()
        t = build_hst(hierarchy(g, c=1.0))
        lca = t.lca_levels()
        assert np.array_equal(lca, lca.T)
        assert (np.diag(lca) == t.k).all()


class TestDomination:
    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_projected_dominates(self, seed):
        g = random_connected(14, 10, seed=seed, wmax=4)
        t = build_projected_tree(hierarchy(g, seed=seed))
        rep = verify_domination(t, g)
        assert rep["ok"], rep["violations"]
        assert rep["pairs"] == 14 * 13 // 2

    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_hst_dominates_when_diameters_hold(self, seed):
        g = random_connected(14, 10, seed=seed, wmax=4)
        h = hierarchy(g, seed=seed)
        if not h.level_diameter_ok():
            pytest.skip("level budget exceeded on this seed")
        rep = verify_domination(build_hst(h), g)
        assert rep["ok"], rep["violations"]

    def test_accepts_precomputed_apsp(self):
        g = segmented_path()
        t = build_projected_tree(hierarchy(g, c=1.0))
        apsp = all_pairs_distances(g)
        assert verify_domination(t, g, apsp=apsp)["ok"]

    def test_size_cap(self):
        g = cycle_graph(16)
        t = build_projected_tree(hierarchy(g))
        with pytest.raises(EmbedError):
            verify_domination(t, g, cap=8)


class TestStretchHelpers:
    def test_tree_stretch_on_edges_only(self):
        g = segmented_path()
        t = build_projected_tree(hierarchy(g, c=1.0))
        with pytest.raises(Exception):
            tree_stretch(t, 0, 2)

    def test_stretch_bounded_below_by_distance_ratio(self):
        # An edge can stretch below 1 when a lighter path bypasses it; the
        # real floor is dist_g(u, v) / len(u, v), by domination.
        for seed in (1, 2):
            g = random_connected(16, 12, seed=seed, wmax=9)
            h = hierarchy(g, seed=seed)
            apsp = all_pairs_distances(g)
            pu, pv = g._edge_positions()
            floor = apsp[pu, pv] / g.ew
            assert (stretch_per_edge(build_projected_tree(h))
                    >= floor - 1e-12).all()
            if h.level_diameter_ok():
                assert (stretch_per_edge(build_hst(h))
                        >= floor - 1e-12).all()

    def test_p_stretch_values_and_validation(self):
        g = Graph.from_edges(2, [(0, 1, 5.0)])
        h = hierarchy(g)
        t = build_projected_tree(h)
        assert p_stretch(t, 0, 1, 0.5) == 1.0
        assert p_stretch(h, 0, 1, 1.0) == 10.0 / 5.0  # d_0 / len at level 0
        assert p_stretch(h, 0, 1, 0.5) == (10.0 / 5.0) ** 0.5
        with pytest.raises(EmbedError):
            p_stretch(t, 0, 1, 0.0)
        with pytest.raises(EmbedError):
            p_stretch(t, 0, 1, 1.5)


class TestUnitCycleSummary:
    def test_p_stretch_means(self):
        # Frozen desk-scale values used by the acceptance thresholds.
        g = cycle_graph(64)
        h = hierarchy(g, seed=11)
        sp = stretch_per_edge(build_projected_tree(h))
        sh = stretch_per_edge(build_hst(h))
        root = (sp ** 0.5).mean()
        assert root == pytest.approx((63 + 63 ** 0.5) / 64, rel=1e-15)
        assert (sh ** 0.5).mean() == pytest.approx(254.0 ** 0.5, rel=1e-15)
