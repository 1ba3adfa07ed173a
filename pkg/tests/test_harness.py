"""Trial harness: Wilson bounds, graph resolution, trial plumbing, audits."""

import numpy as np
import pytest
from scipy.stats import binomtest

import lowdiam.harness as harness
from lowdiam.decompose import DecomposeParams
from lowdiam.generators import GeneratorError, generate_graph
from lowdiam.graph import Graph
from lowdiam.harness import (STANDING_CORPUS, AuditError, TrialConfig,
                             compare_bound, make_oracle, rerun_trial,
                             resolve_graph, run_trials, wilson_interval)
from lowdiam.oracle import OracleError
from lowdiam.sampling import RandomStream


class TestWilson:
    def test_reference_example(self):
        # 50 hits in 10^4 trials against a 0.0075 bound must pass with an
        # upper limit of about 0.0066.
        lo, hi = wilson_interval(50, 10000)
        assert lo == pytest.approx(0.003794901070838226, rel=1e-15)
        assert hi == pytest.approx(0.006585257316131604, rel=1e-15)
        verdict = compare_bound(0.005, 10000, 0.0075)
        assert verdict["pass"]
        assert verdict["margin"] == pytest.approx(0.0075 - hi, rel=1e-12)

    def test_fails_when_bound_is_tight(self):
        assert not compare_bound(0.005, 10000, 0.006)["pass"]

    def test_extremes(self):
        lo, hi = wilson_interval(0, 100)
        assert lo < 1e-12 and 0.0 < hi < 0.05
        lo, hi = wilson_interval(100, 100)
        assert 0.95 < lo < 1.0 and hi == 1.0

    @pytest.mark.parametrize("successes,trials", [
        (0, 50), (1, 50), (7, 100), (50, 10000), (999, 1000), (1000, 1000),
    ])
    def test_matches_scipy(self, successes, trials):
        lo, hi = wilson_interval(successes, trials)
        ci = binomtest(successes, trials).proportion_ci(
            confidence_level=0.95, method="wilson")
        assert lo == pytest.approx(float(ci.low), rel=1e-10, abs=1e-12)
        assert hi == pytest.approx(float(ci.high), rel=1e-10, abs=1e-12)

    def test_rejects_zero_trials(self):
        with pytest.raises(ValueError):
            wilson_interval(1, 0)


class TestGenerators:
    def test_standing_corpus_resolves_connected(self):
        sizes = []
        for spec in STANDING_CORPUS:
            g = resolve_graph(spec)
            assert g.connected, spec
            assert g.num_edges >= g.n - 1, spec
            sizes.append(g.n)
        assert sorted(set(sizes)) == [16, 64, 256, 1024]
        assert len(STANDING_CORPUS) == 20

    def test_random_families_are_deterministic(self):
        for spec in ("gnp(64,0.1,10,7)", "geometric(64,0.3,10,7)"):
            a, b = generate_graph(spec), generate_graph(spec)
            assert np.array_equal(a.eu, b.eu)
            assert np.array_equal(a.ew, b.ew)

    def test_grid_shape(self):
        g = generate_graph("grid(4,4,1)")
        assert g.n == 16 and g.num_edges == 24

    def test_spec_forms(self):
        assert generate_graph("path 8 1").n == 8
        assert generate_graph("path(8,1)").n == 8
        with pytest.raises(GeneratorError):
            generate_graph("moebius(8,1)")
        with pytest.raises(GeneratorError):
            generate_graph("path(8)")

    def test_resolve_graph_passthrough_and_file(self, tmp_path):
        g = generate_graph("path(5,1)")
        assert resolve_graph(g) is g
        p = tmp_path / "g.txt"
        p.write_text("p 3 2\ne 0 1 1\ne 1 2 1\n")
        assert resolve_graph(str(p)).n == 3


class TestMakeOracle:
    def test_exact(self):
        cfg = make_oracle("exact", None, RandomStream(0, ()))
        assert cfg.mode == "exact" and cfg.eps is None

    def test_perturbed_pins_eps(self):
        cfg = make_oracle("perturbed", 0.25, RandomStream(0, ()))
        assert cfg.mode == "perturbed" and cfg.eps == 0.25

    def test_bad_mode(self):
        with pytest.raises(OracleError):
            make_oracle("psychic", None, RandomStream(0, ()))


def blur_config(trials=40, threads=1, seed=5):
    return TrialConfig(graph="path(50,1)", algorithm="blur",
                       params={"rho": 10.0, "b": [0]},
                       trials=trials, seed=seed, threads=threads)


class TestRunTrialsBlur:
    def test_counts_and_frequencies(self):
        stats = run_trials(blur_config())
        assert stats.trials == 40
        assert stats.failure_events == 0
        freq = stats.cut_frequencies()
        assert freq.shape == (49,)
        assert (freq >= 0).all() and (freq <= 1).all()
        # Only the boundary near the reach can ever be cut.
        assert freq[20:].sum() == 0.0
        assert freq.sum() > 0.0

    def test_thread_count_does_not_change_results(self):
        a = run_trials(blur_config(threads=1))
        b = run_trials(blur_config(threads=4))
        assert np.array_equal(a.edge_cut_counts, b.edge_cut_counts)
        assert a.ledger_total == b.ledger_total
        assert a.ledger_merged == b.ledger_merged

    def test_rerun_reproduces_trial(self):
        cfg = blur_config()
        stats = run_trials(cfg)
        for t in (0, 7, 39):
            again = rerun_trial(cfg, t)
            logged = stats.per_trial[t]
            assert again["trace"] == logged["trace"]
            assert np.array_equal(again["cut"], logged["cut"])

    def test_random_seed_vertex_when_b_missing(self):
        cfg = TrialConfig(graph="cycle(16,1)", algorithm="blur",
                          params={"rho": 2.0}, trials=30, seed=3)
        stats = run_trials(cfg)
        assert stats.trials == 30
        sizes = {r["picked_size"] for r in stats.per_trial}
        assert sizes  # every trial produced a set


class TestRunTrialsDecompose:
    def test_aggregation(self):
        cfg = TrialConfig(graph="cycle(64,1)", algorithm="decompose",
                          params={"delta": 512.0, "c": 2.0},
                          trials=25, seed=2)
        stats = run_trials(cfg)
        assert stats.failure_events == 0
        assert len(stats.iteration_counts) == 25
        assert all(i >= 1 for i in stats.iteration_counts)
        assert stats.diameter_ok_count == 25
        assert len(stats.max_load_per_trial) == 25
        assert stats.event_log == []

    def test_iteration_cap_becomes_failure_event(self, monkeypatch):
        monkeypatch.setattr(DecomposeParams, "max_iterations",
                            property(lambda self: 0))
        cfg = TrialConfig(graph="cycle(16,1)", algorithm="decompose",
                          params={"delta": 200.0, "c": 1.0},
                          trials=4, seed=1)
        stats = run_trials(cfg)
        assert stats.failure_events == 4
        assert stats.event_log == [(t, "iteration-cap") for t in range(4)]

    def test_audit_failure_aborts_with_repro_key(self, monkeypatch):
        real = harness._audit_tsd

        def sabotaged(g, tsd, params, seed, trial, cells_of_cluster=None):
            if trial == 2:
                raise AuditError("synthetic audit failure", seed, trial)
            return real(g, tsd, params, seed, trial, cells_of_cluster)

        monkeypatch.setattr(harness, "_audit_tsd", sabotaged)
        cfg = TrialConfig(graph="cycle(32,1)", algorithm="decompose",
                          params={"delta": 256.0, "c": 2.0},
                          trials=5, seed=9)
        with pytest.raises(AuditError) as err:
            run_trials(cfg)
        assert err.value.seed == 9
        assert err.value.trial == 2
        assert "seed=9" in str(err.value) and "trial=2" in str(err.value)


class TestRunTrialsHierarchy:
    def test_htsd_aggregation(self):
        cfg = TrialConfig(graph="cycle(16,1)", algorithm="htsd",
                          params={"c": 2.0}, trials=10, seed=4)
        stats = run_trials(cfg)
        g = generate_graph("cycle(16,1)")
        assert stats.edge_load_sums is not None
        assert stats.edge_load_sums.shape == (g.num_edges,)
        assert stats.decouple_counts is not None
        assert stats.decouple_counts.sum() == 10 * g.num_edges
        assert len(stats.max_load_per_trial) == 10

    def test_embed_kinds_produce_stretch(self):
        for kind in ("projected", "hst"):
            cfg = TrialConfig(graph="cycle(16,1)", algorithm=kind,
                              params={"c": 2.0, "p": 0.5},
                              trials=6, seed=4)
            stats = run_trials(cfg)
            assert stats.stretch_trials == 6
            assert stats.stretch_mean() > 0
            assert stats.p_stretch_mean() > 0
            assert stats.domination_checked == 6
            assert stats.domination_violations == 0

    def test_both_kinds_in_one_pass(self):
        cfg = TrialConfig(graph="cycle(16,1)", algorithm="both",
                          params={"c": 2.0, "p": 0.5}, trials=4, seed=4)
        stats = run_trials(cfg)
        r = stats.per_trial[0]
        assert "stretch_projected" in r and "stretch_hst" in r
        assert stats.cap_violations_4d == 0

    def test_stat_helpers(self):
        stats = harness.TrialStats()
        stats.stretch_trials = 4
        stats.stretch_sums = 10.0
        stats.stretch_sq_sums = 30.0
        assert stats.stretch_mean() == 2.5
        var = (30.0 / 4 - 2.5**2) * 4 / 3
        assert stats.stretch_stderr() == pytest.approx((var / 4) ** 0.5)
