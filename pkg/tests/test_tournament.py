"""Match execution, round robins, ecological dynamics, presets."""

import numpy as np
import pytest

from egtsim.dynamics import IntegratorConfig
from egtsim.errors import ParameterError
from egtsim.games import IpdStageParams
from egtsim.presets import get_preset, list_presets, run_preset
from egtsim.roster import parse_roster, parse_strategy
from egtsim.strategies import (ALL_C, ALL_D, GRIM, TIT_FOR_TAT, WIN_STAY_LOSE_SHIFT,
                               MemoryOneStrategy, NamedStrategy)
from egtsim.tournament import (MatchConfig, ecological_tournament, play_match, round_robin,
                               roster_payoff_matrix)

STAGE = IpdStageParams(t=5, r=3, p=1, s=0)
TEN_ROUNDS = MatchConfig(rounds=10, noise=0.0, seed=0)


class TestPlayMatch:
    def test_tft_vs_alld(self):
        result = play_match(TIT_FOR_TAT, ALL_D, TEN_ROUNDS, STAGE)
        assert (result.score_a, result.score_b) == (9.0, 14.0)

    def test_tft_vs_allc(self):
        result = play_match(TIT_FOR_TAT, ALL_C, TEN_ROUNDS, STAGE)
        assert (result.score_a, result.score_b) == (30.0, 30.0)

    def test_wsls_vs_alld_alternates(self):
        result = play_match(WIN_STAY_LOSE_SHIFT, ALL_D, TEN_ROUNDS, STAGE)
        assert (result.score_a, result.score_b) == (5.0, 30.0)
        assert [m for m, _ in result.moves] == list("CDCDCDCDCD")

    def test_score_bounds(self):
        rosters = [TIT_FOR_TAT, ALL_C, ALL_D, GRIM, WIN_STAY_LOSE_SHIFT,
                   NamedStrategy("random", 0.5), MemoryOneStrategy(0.9, 0.1, 0.8, 0.2)]
        cfg = MatchConfig(rounds=25, noise=0.05, seed=31)
        for s1 in rosters:
            for s2 in rosters:
                result = play_match(s1, s2, cfg, STAGE)
                for score in (result.score_a, result.score_b):
                    assert cfg.rounds * STAGE.s <= score <= cfg.rounds * STAGE.t

    def test_deterministic_per_seed(self):
        cfg = MatchConfig(rounds=100, noise=0.1, seed=404)
        first = play_match(NamedStrategy("random", 0.5), TIT_FOR_TAT, cfg, STAGE)
        second = play_match(NamedStrategy("random", 0.5), TIT_FOR_TAT, cfg, STAGE)
        assert first == second

    def test_move_log_length(self):
        result = play_match(ALL_C, ALL_D, TEN_ROUNDS, STAGE)
        assert len(result.moves) == 10
        assert result.cooperation_rates() == (1.0, 0.0)


class TestRoundRobin:
    def test_totals_hand_checked(self):
        table = round_robin([("tft", TIT_FOR_TAT), ("alld", ALL_D), ("allc", ALL_C)],
                            TEN_ROUNDS, STAGE)
        assert dict(zip(table.roster, table.totals)) == {"tft": 39.0, "alld": 64.0, "allc": 30.0}

    def test_mutual_defection_pair(self):
        table = round_robin([("alld", ALL_D), ("alld-copy", ALL_D)],
                            MatchConfig(rounds=17, seed=2), STAGE)
        assert table.totals.tolist() == [17.0, 17.0]

    def test_totals_recompute_from_pairwise(self):
        table = round_robin(parse_roster(["tft", "alld", "allc", "wsls", "grim"]),
                            MatchConfig(rounds=64, noise=0.02, seed=8), STAGE)
        n = len(table.roster)
        for i in range(n):
            assert table.totals[i] == sum(table.pairwise[i][j] for j in range(n) if j != i)

    def test_duplicate_names_rejected(self):
        with pytest.raises(ParameterError, match="duplicate"):
            round_robin([("tft", TIT_FOR_TAT), ("tft", ALL_D)], TEN_ROUNDS, STAGE)

    def test_single_entry_rejected(self):
        with pytest.raises(ParameterError):
            round_robin([("tft", TIT_FOR_TAT)], TEN_ROUNDS, STAGE)

    def test_seeded_determinism_across_workers(self, monkeypatch):
        roster = parse_roster(["tft", "alld", "allc", "wsls", "random:p=0.5"])
        cfg = MatchConfig(rounds=50, noise=0.05, seed=77)
        base = round_robin(roster, cfg, STAGE)
        monkeypatch.setenv("EGTSIM_WORKERS", "4")
        threaded = round_robin(roster, cfg, STAGE)
        assert np.array_equal(base.pairwise, threaded.pairwise)
        assert base.roster == threaded.roster


class TestEcological:
    def test_defection_dominates_one_round_payoffs(self):
        traj = ecological_tournament(parse_roster(["allc", "alld"]), TEN_ROUNDS, STAGE,
                                     IntegratorConfig(t_end=200))
        assert traj.x[-1][1] == pytest.approx(1.0, abs=1e-6)

    def test_tft_beats_alld_from_equal_shares(self):
        cfg = MatchConfig(rounds=100, noise=0.0, seed=5)
        matrix = roster_payoff_matrix(parse_roster(["tft", "alld"]), cfg, STAGE)
        assert matrix.payoff[0].tolist() == [3.0, 0.99]
        assert matrix.payoff[1].tolist() == [1.04, 1.0]
        traj = ecological_tournament(parse_roster(["tft", "alld"]), cfg, STAGE,
                                     IntegratorConfig(t_end=200), x0=[0.5, 0.5])
        assert traj.x[-1][0] == pytest.approx(1.0, abs=1e-6)

    def test_identical_strategies_keep_constant_shares(self):
        traj = ecological_tournament([("alld", ALL_D), ("alld-copy", ALL_D)],
                                     TEN_ROUNDS, STAGE, IntegratorConfig(t_end=50))
        assert np.max(np.abs(traj.x - 0.5)) < 1e-12

    def test_trajectories_live_on_simplex(self):
        traj = ecological_tournament(parse_roster(["tft", "alld", "allc", "wsls"]),
                                     MatchConfig(rounds=30, noise=0.03, seed=4), STAGE,
                                     IntegratorConfig(t_end=100))
        assert np.all(traj.x >= 0)
        assert np.max(np.abs(traj.x.sum(axis=1) - 1)) < 1e-9


class TestRosterParsing:
    def test_known_names(self):
        assert parse_strategy("tft") == TIT_FOR_TAT
        assert parse_strategy("random:p=0.25") == NamedStrategy("random", 0.25)
        zd = parse_strategy("zd:chi=2,phi=0.1", STAGE)
        assert isinstance(zd, MemoryOneStrategy) and zd.p_dd == 0.0
        m1 = parse_strategy("m1:cc=1,cd=0,dc=1,dd=0,init=0")
        assert m1 == MemoryOneStrategy(1, 0, 1, 0, initial_coop=0)

    def test_bad_names_rejected(self):
        with pytest.raises(ParameterError):
            parse_strategy("nope")
        with pytest.raises(ParameterError):
            parse_strategy("tft:p=1")
        with pytest.raises(ParameterError):
            parse_strategy("random:q=0.5")
        with pytest.raises(ParameterError):
            parse_strategy("zd:chi=2")


class TestPresets:
    def test_listing(self):
        assert list_presets() == ["attrition-convention", "hawk-dove-mixed", "ipd-coevolution"]

    def test_unknown_preset_lists_valid_names(self):
        with pytest.raises(ParameterError) as err:
            run_preset("foo")
        for name in ("hawk-dove-mixed", "ipd-coevolution", "attrition-convention"):
            assert name in str(err.value)

    def test_hawk_dove_mixed_summary(self):
        result = run_preset("hawk-dove-mixed")
        single = result.summary["single_population"]
        assert single["equilibrium_type"] == "mixed"
        assert single["final_hawk_share"] == pytest.approx(0.5, abs=1e-6)
        assert result.summary["two_population"]["asymmetric_convention"]
        assert result.summary["ess_verified"]

    def test_attrition_convention_low_cost_population_persists(self):
        result = run_preset("attrition-convention")  # c_human=1 vs c_ai=0.5
        summary = result.summary
        assert summary["mean_persistence_ai"] > summary["mean_persistence_human"]
        assert summary["asymmetric_convention"]
        assert summary["conceding_population"] == "human"

    def test_attrition_convention_flips_with_costs(self):
        result = run_preset("attrition-convention", {"c_human": 0.5, "c_ai": 1.0})
        assert result.summary["mean_persistence_human"] > result.summary["mean_persistence_ai"]

    def test_ipd_coevolution_reports_regime(self):
        result = run_preset("ipd-coevolution")
        assert result.summary["regime"] in ("cooperative", "defecting", "mixed")
        assert result.summary["regime"] == "cooperative"  # nice strategies win at zero noise
        shares = result.summary["final_shares"]
        assert shares["alld"] == pytest.approx(0.0, abs=1e-6)

    def test_override_validation(self):
        with pytest.raises(ParameterError, match="unknown parameter"):
            run_preset("hawk-dove-mixed", {"vv": 3})

    def test_override_coercion_from_cli_strings(self):
        result = run_preset("hawk-dove-mixed", {"v": "3", "c": "4"})
        assert result.summary["ess_hawk_share"] == pytest.approx(0.75)

    def test_preset_objects(self):
        preset = get_preset("hawk-dove-mixed")
        assert preset.parameters["v"] == 2.0
        with pytest.raises(ParameterError):
            get_preset("bogus")
