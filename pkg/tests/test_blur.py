"""Blurred ball growing: deterministic guarantees and round accounting."""

import random

import numpy as np
import pytest

import bruteforce as bf
from lowdiam.blur import BlurError, BlurParams, blur
from lowdiam.graph import Graph, GraphError
from lowdiam.oracle import CallLedger, OracleConfig
from lowdiam.sampling import RandomStream


def path_graph(n, w=1.0):
    return Graph.from_edges(n, [(i, i + 1, w) for i in range(n - 1)])


def random_connected(n, extra, seed):
    rng = random.Random(seed)
    edges = {(i, i + 1): float(rng.randint(1, 9)) for i in range(n - 1)}
    while len(edges) < n - 1 + extra:
        u, v = rng.sample(range(n), 2)
        key = (u, v) if u < v else (v, u)
        edges.setdefault(key, float(rng.randint(1, 9)))
    triples = [(u, v, w) for (u, v), w in edges.items()]
    return Graph.from_edges(n, triples), triples


EXACT = OracleConfig(mode="exact")


class TestParams:
    def test_default_alpha(self):
        assert BlurParams.default(4, 10.0).alpha == 0.25
        assert BlurParams.default(2, 10.0).alpha == 0.5
        # log2 is floored at 1, so tiny graphs stay at 1/2.
        assert BlurParams.default(1, 10.0).alpha == 0.5

    def test_reach(self):
        assert BlurParams(rho=10.0, alpha=0.25, eps=0.0).reach() == 10.0 / 0.75

    def test_validation(self):
        with pytest.raises(BlurError):
            BlurParams(rho=0.0, alpha=0.25, eps=0.0)
        with pytest.raises(BlurError):
            BlurParams(rho=1.0, alpha=0.75, eps=0.0)
        with pytest.raises(BlurError):
            BlurParams(rho=1.0, alpha=0.25, eps=0.1)  # 0.1 > 0.25^2


class TestRoundCount:
    def test_unit_path_two_rounds(self):
        # alpha^0 * 10 = 10 >= 1, alpha^1 * 10 = 2.5 >= 1, alpha^2 * 10 < 1.
        g = path_graph(50)
        params = BlurParams(rho=10.0, alpha=0.25, eps=0.0)
        _, trace = blur(g, params, [0], EXACT, RandomStream(1, ("b",)))
        assert len(trace.steps) == 2

    def test_heavy_edges_mean_zero_rounds(self):
        g = path_graph(5, w=100.0)
        params = BlurParams(rho=10.0, alpha=0.25, eps=0.0)
        picked, trace = blur(g, params, [2], EXACT, RandomStream(1, ("b",)))
        assert picked.tolist() == [2]
        assert trace.steps == []

    def test_round_radii_shrink(self):
        g = path_graph(200)
        params = BlurParams(rho=64.0, alpha=0.5, eps=0.0)
        _, trace = blur(g, params, [0], EXACT, RandomStream(3, ("b",)))
        assert len(trace.steps) == 7  # 0.5^i * 64 >= 1 for i = 0..6
        for (i, radius, _) in trace.steps:
            assert 0.0 <= radius <= params.alpha ** (i - 1) * params.rho


class TestGuarantees:
    @pytest.mark.parametrize("seed", [1, 2, 3, 4, 5])
    def test_containment_and_reach(self, seed):
        g, triples = random_connected(12, 8, seed=seed)
        adj = bf.adjacency(triples)
        params = BlurParams(rho=6.0, alpha=0.25, eps=0.0625)
        b = sorted(random.Random(seed).sample(range(12), 2))
        oracle = OracleConfig(mode="perturbed", eps=None,
                              stream=RandomStream(seed, ("o",)))
        picked, _ = blur(g, params, b, oracle, RandomStream(seed, ("b",)))
        assert set(b) <= set(picked.tolist())
        for v in picked.tolist():
            assert bf.set_distance(adj, b, v) <= params.reach() + 1e-12

    def test_unit_path_stays_within_reach(self):
        g = path_graph(50)
        params = BlurParams(rho=10.0, alpha=0.25, eps=0.0)
        hit = set()
        for seed in range(30):
            picked, _ = blur(g, params, [0], EXACT,
                             RandomStream(seed, ("b",)))
            hit |= set(picked.tolist())
        # reach = 13.33, so nothing past vertex 13 is ever absorbed.
        assert hit <= set(range(14))
        assert 0 in hit

    def test_keep_sets_certificate(self):
        g = path_graph(30)
        params = BlurParams(rho=8.0, alpha=0.25, eps=0.0)
        picked, trace = blur(g, params, [10], EXACT,
                             RandomStream(5, ("b",)), keep_sets=True)
        assert trace.sets[0].tolist() == [10]
        assert np.array_equal(trace.sets[-1], picked)
        for a, b in zip(trace.sets, trace.sets[1:]):
            assert set(a.tolist()) <= set(b.tolist())
        assert np.array_equal(trace.final, picked)

    def test_monotone_sizes(self):
        g, _ = random_connected(20, 15, seed=9)
        params = BlurParams(rho=12.0, alpha=0.25, eps=0.0)
        _, trace = blur(g, params, [0, 7], EXACT, RandomStream(2, ("b",)))
        sizes = [s for _, _, s in trace.steps]
        assert sizes == sorted(sizes)


class TestEdgeCases:
    def test_empty_seed_set(self):
        picked, trace = blur(path_graph(4),
                             BlurParams(rho=1.0, alpha=0.25, eps=0.0),
                             [], EXACT, RandomStream(0, ()))
        assert picked.tolist() == []
        assert trace.steps == []

    def test_foreign_seed(self):
        with pytest.raises(GraphError):
            blur(path_graph(4), BlurParams(rho=1.0, alpha=0.25, eps=0.0),
                 [9], EXACT, RandomStream(0, ()))

    def test_duplicate_seeds_collapse(self):
        g = path_graph(6)
        params = BlurParams(rho=2.0, alpha=0.25, eps=0.0)
        a, _ = blur(g, params, [1, 1, 3], EXACT, RandomStream(4, ("b",)))
        b, _ = blur(g, params, [1, 3], EXACT, RandomStream(4, ("b",)))
        assert np.array_equal(a, b)

    def test_deterministic_given_stream(self):
        g, _ = random_connected(15, 10, seed=3)
        params = BlurParams(rho=7.0, alpha=0.25, eps=0.0)
        a, ta = blur(g, params, [0], EXACT, RandomStream(6, ("b",)))
        b, tb = blur(g, params, [0], EXACT, RandomStream(6, ("b",)))
        assert np.array_equal(a, b)
        assert ta.steps == tb.steps


class TestLedger:
    def test_rounds_merge_across_cells(self):
        g = path_graph(50)
        params = BlurParams(rho=10.0, alpha=0.25, eps=0.0)
        ledger = CallLedger()
        # Two cells blurred in the same decomposition iteration share batch
        # keys round by round, so merged counts one SSSP per round.
        blur(g, params, [0], EXACT, RandomStream(1, ("x",)), ledger,
             batch=(1, 0, 0))
        blur(g, params, [40], EXACT, RandomStream(1, ("y",)), ledger,
             batch=(1, 0, 0))
        assert ledger.total == 4
        assert ledger.merged == 2

    def test_batches_separate_by_iteration(self):
        g = path_graph(50)
        params = BlurParams(rho=10.0, alpha=0.25, eps=0.0)
        ledger = CallLedger()
        blur(g, params, [0], EXACT, RandomStream(1, ("x",)), ledger,
             batch=(1, 0, 0))
        blur(g, params, [0], EXACT, RandomStream(1, ("y",)), ledger,
             batch=(1, 0, 1))
        assert ledger.total == 4
        assert ledger.merged == 4
