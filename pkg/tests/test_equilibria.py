"""ESS verification, 2x2 equilibrium enumeration, attrition ESS law."""

import numpy as np
import pytest

from egtsim.equilibria import (attrition_ess, attrition_pure_payoff, hawk_dove_ess,
                               is_ess, solve_2x2)
from egtsim.errors import DimensionError, ParameterError
from egtsim.games import (HawkDoveParams, IpdStageParams, MixedStrategy, PayoffBimatrix,
                          make_hawk_dove, make_ipd_stage)


class TestHawkDoveEss:
    def test_interior_point(self):
        ess = hawk_dove_ess(HawkDoveParams(2, 4))
        assert ess.probs.tolist() == [0.5, 0.5]

    def test_hawk_dominates_when_value_exceeds_cost(self):
        assert hawk_dove_ess(HawkDoveParams(4, 2)).probs.tolist() == [1.0, 0.0]

    def test_boundary_folds_into_pure_hawk(self):
        assert hawk_dove_ess(HawkDoveParams(2, 2)).probs.tolist() == [1.0, 0.0]

    @pytest.mark.parametrize("v,c", [(2, 4), (1, 3), (3, 4), (5, 7), (4, 2)])
    def test_output_verifies_as_ess(self, v, c):
        game = make_hawk_dove(HawkDoveParams(v, c))
        report = is_ess(game.a, hawk_dove_ess(HawkDoveParams(v, c)), tol=1e-9)
        assert report.is_ess


class TestIsEss:
    def test_mixed_hawk_dove_point(self):
        game = make_hawk_dove(HawkDoveParams(2, 4))
        report = is_ess(game.a, MixedStrategy(np.array([0.5, 0.5])))
        assert report.is_nash and report.is_ess
        assert report.worst_violation <= 1e-9
        assert report.tested_mutants == 2

    def test_pure_dove_not_nash(self):
        game = make_hawk_dove(HawkDoveParams(2, 4))
        report = is_ess(game.a, MixedStrategy.pure(1, 2))
        assert not report.is_nash and not report.is_ess
        assert report.worst_violation == pytest.approx(1.0)  # Hawk earns 2 > 1

    def test_pure_hawk_not_nash_when_costly(self):
        game = make_hawk_dove(HawkDoveParams(2, 4))
        report = is_ess(game.a, MixedStrategy.pure(0, 2))
        assert not report.is_nash  # Dove earns 0 > -1 against Hawk

    def test_defect_is_strict_nash(self):
        game = make_ipd_stage(IpdStageParams())
        report = is_ess(game.a, MixedStrategy.pure(1, 2))
        assert report.is_nash and report.is_ess

    def test_constant_shift_invariance(self):
        rng = np.random.RandomState(13)
        for _ in range(10):
            a = rng.uniform(-4, 4, (3, 3))
            x = MixedStrategy(rng.dirichlet(np.ones(3)))
            base = is_ess(a, x)
            moved = is_ess(a + 11.25, x)
            assert base.is_nash == moved.is_nash
            assert base.is_ess == moved.is_ess
            assert base.worst_violation == pytest.approx(moved.worst_violation, abs=1e-12)

    def test_larger_games_labeled_incomplete(self):
        report = is_ess(np.eye(3), MixedStrategy.pure(0, 3))
        assert report.method == "pure-mutant check only"
        report = is_ess(np.eye(2), MixedStrategy.pure(0, 2))
        assert "complete for 2x2" in report.method

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            is_ess(np.zeros((2, 3)), MixedStrategy.uniform(2))


class TestSolve2x2:
    def test_hawk_dove_three_equilibria(self):
        result = solve_2x2(make_hawk_dove(HawkDoveParams(2, 4)))
        assert not result.degenerate
        profiles = {(tuple(x.probs), tuple(y.probs)) for x, y in result.equilibria}
        assert ((1.0, 0.0), (0.0, 1.0)) in profiles
        assert ((0.0, 1.0), (1.0, 0.0)) in profiles
        assert ((0.5, 0.5), (0.5, 0.5)) in profiles
        assert len(profiles) == 3

    def test_prisoners_dilemma_unique_defection(self):
        result = solve_2x2(make_ipd_stage(IpdStageParams()))
        assert not result.degenerate
        assert len(result.equilibria) == 1
        x, y = result.equilibria[0]
        assert x.probs.tolist() == [0.0, 1.0]
        assert y.probs.tolist() == [0.0, 1.0]

    def test_all_zero_game_flagged_degenerate(self):
        game = PayoffBimatrix(a=np.zeros((2, 2)), b=np.zeros((2, 2)))
        result = solve_2x2(game)
        assert result.degenerate
        assert len(result.equilibria) == 4  # every pure profile survives

    def test_mixed_matches_hawk_dove_ess(self):
        for v, c in [(2, 4), (1, 3), (3, 4)]:
            result = solve_2x2(make_hawk_dove(HawkDoveParams(v, c)))
            interior = [e for e in result.equilibria
                        if 0 < e[0].probs[0] < 1 and 0 < e[1].probs[0] < 1]
            assert len(interior) == 1
            ess = hawk_dove_ess(HawkDoveParams(v, c))
            assert np.max(np.abs(interior[0][0].probs - ess.probs)) < 1e-12

    def test_non_2x2_rejected(self):
        with pytest.raises(DimensionError):
            solve_2x2(PayoffBimatrix(a=np.zeros((3, 3)), b=np.zeros((3, 3))))


class TestAttritionEss:
    def test_rate_and_mean(self):
        ess = attrition_ess(2, 1)
        assert ess.rate == 0.5
        assert ess.mean == 2.0
        ess = attrition_ess(1, 1)
        assert ess.rate == 1.0 and ess.mean == 1.0

    def test_rejects_nonpositive(self):
        with pytest.raises(ParameterError):
            attrition_ess(2, 0)
        with pytest.raises(ParameterError):
            attrition_ess(-1, 1)

    def test_indifference_grid(self):
        for v, c in [(2, 1), (1, 1), (10, 0.5)]:
            ess = attrition_ess(v, c)
            for m in (0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0):
                assert abs(attrition_pure_payoff(m, ess, v, c)) < 1e-10

    def test_immediate_withdrawal_is_zero(self):
        assert attrition_pure_payoff(0.0, attrition_ess(3, 2), 3, 2) == 0.0

    def test_negative_persistence_rejected(self):
        with pytest.raises(ParameterError):
            attrition_pure_payoff(-1.0, attrition_ess(2, 1), 2, 1)

    def test_inconsistent_ess_rejected(self):
        with pytest.raises(ParameterError):
            attrition_pure_payoff(1.0, attrition_ess(2, 1), 4, 1)
