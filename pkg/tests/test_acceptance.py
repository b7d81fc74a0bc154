"""Acceptance suite: one test per exit criterion, one printed line each.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion
PASS/FAIL lines; every tolerance is pinned here, not configurable.
"""

import contextlib
import json
import math
import os
import subprocess
import sys
import time
from pathlib import Path

import numpy as np

from egtsim.dynamics import IntegratorConfig, integrate_bimatrix, integrate_replicator
from egtsim.equilibria import attrition_ess, attrition_pure_payoff, hawk_dove_ess, is_ess
from egtsim.games import HawkDoveParams, IpdStageParams, MixedStrategy, make_hawk_dove, make_ipd_stage
from egtsim.rng import SplitMix64
from egtsim.scenario import run_scenario
from egtsim.stochastic import (ExponentialPersistence, MoranConfig, PurePersistence,
                               discretize_attrition, moran_fixation_analytic, moran_simulate,
                               run_contests)
from egtsim.strategies import ALL_C, ALL_D, TIT_FOR_TAT, WIN_STAY_LOSE_SHIFT, MemoryOneStrategy, \
    make_zd_extortion, stationary_payoffs
from egtsim.tournament import MatchConfig, play_match, round_robin

REPO = Path(__file__).resolve().parent.parent
SCENARIOS = REPO / "scenarios"
STAGE = IpdStageParams(t=5, r=3, p=1, s=0)
HD_CASES = [(2.0, 4.0), (1.0, 3.0), (3.0, 4.0)]


@contextlib.contextmanager
def criterion(num: int, name: str):
    try:
        yield
    except BaseException:
        print(f"[acceptance] criterion {num:02d} ({name}): FAIL")
        raise
    print(f"[acceptance] criterion {num:02d} ({name}): PASS")


def test_criterion_01_hawk_dove_mixed_equilibrium():
    with criterion(1, "hawk-dove mixed equilibrium v/c"):
        for v, c in HD_CASES:
            game = make_hawk_dove(HawkDoveParams(v, c))
            traj = integrate_replicator(game.a, [0.9, 0.1], IntegratorConfig(t_end=200))
            assert abs(traj.x[-1][0] - v / c) < 1e-6, (v, c, traj.x[-1])
            assert traj.converged
            report = is_ess(game.a, hawk_dove_ess(HawkDoveParams(v, c)), tol=1e-9)
            assert report.is_ess, (v, c)


def test_criterion_02_no_pure_dominance():
    with criterion(2, "neither pure hawk nor pure dove stable when v < c"):
        for v, c in HD_CASES:
            game = make_hawk_dove(HawkDoveParams(v, c))
            hawk = is_ess(game.a, MixedStrategy.pure(0, 2))
            dove = is_ess(game.a, MixedStrategy.pure(1, 2))
            interior = is_ess(game.a, hawk_dove_ess(HawkDoveParams(v, c)))
            assert not hawk.is_ess and not hawk.is_nash
            assert not dove.is_ess and not dove.is_nash
            assert interior.is_nash and interior.is_ess


def test_criterion_03_asymmetric_equilibria():
    with criterion(3, "two-population hawk-dove reaches asymmetric profiles"):
        game = make_hawk_dove(HawkDoveParams(2, 4))
        cfg = IntegratorConfig(t_end=500)
        rng = SplitMix64(20240101)
        for run in range(20):
            while True:
                xh = 0.05 + 0.9 * rng.random()
                yh = 0.05 + 0.9 * rng.random()
                if abs(xh - yh) >= 0.05:
                    break
            traj = integrate_bimatrix(game.a, game.b, [xh, 1 - xh], [yh, 1 - yh], cfg)
            fx, fy = traj.x[-1][0], traj.y[-1][0]
            assert (fx >= 0.999 and fy <= 0.001) or (fy >= 0.999 and fx <= 0.001), \
                (run, xh, yh, fx, fy)


def test_criterion_04_attrition_indifference():
    with criterion(4, "war-of-attrition ESS indifference, closed form + Monte Carlo"):
        for v, c in [(2.0, 1.0), (1.0, 1.0), (10.0, 0.5)]:
            ess = attrition_ess(v, c)
            for m in (0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0):
                assert abs(attrition_pure_payoff(m, ess, v, c)) <= 1e-10, (m, v, c)
        field = ExponentialPersistence(rate=0.5)  # c/v for v=2, c=1
        for m in (0.5, 1.0, 5.0):
            _, _, _, pay_pure = run_contests(field, PurePersistence(m), 2.0, 1.0, 1.0,
                                             200000, seed=int(10 * m) + 1)
            se = pay_pure.std(ddof=1) / math.sqrt(pay_pure.size)
            assert abs(pay_pure.mean()) <= 4 * se, (m, pay_pure.mean(), se)


def test_criterion_05_discretization_echo():
    with criterion(5, "discretized attrition mean persistence within 15% of v/c"):
        game = discretize_attrition(2.0, 1.0, bins=21, t_max=10.0)
        traj = integrate_replicator(game.a, np.full(21, 1 / 21), IntegratorConfig(t_end=200))
        grid = np.array([i * 10.0 / 20 for i in range(21)])
        mean_persistence = float(traj.x[-1] @ grid)
        assert abs(mean_persistence - 2.0) <= 0.30, mean_persistence  # 15% of v/c = 2


def test_criterion_06_ipd_hand_verified(monkeypatch, tmp_path):
    with criterion(6, "IPD hand-verified matches and deterministic tournaments"):
        cfg = MatchConfig(rounds=10, noise=0.0, seed=0)
        assert (play_match(TIT_FOR_TAT, ALL_D, cfg, STAGE).score_a,
                play_match(TIT_FOR_TAT, ALL_D, cfg, STAGE).score_b) == (9.0, 14.0)
        result = play_match(TIT_FOR_TAT, ALL_C, cfg, STAGE)
        assert (result.score_a, result.score_b) == (30.0, 30.0)
        result = play_match(WIN_STAY_LOSE_SHIFT, ALL_D, cfg, STAGE)
        assert (result.score_a, result.score_b) == (5.0, 30.0)
        roster = [("tft", TIT_FOR_TAT), ("alld", ALL_D), ("allc", ALL_C)]
        table = round_robin(roster, cfg, STAGE)
        assert dict(zip(table.roster, table.totals)) == {"tft": 39.0, "alld": 64.0,
                                                         "allc": 30.0}
        run_scenario(SCENARIOS / "ipd_tournament.json", out_dir=tmp_path / "a")
        run_scenario(SCENARIOS / "ipd_tournament.json", out_dir=tmp_path / "b")
        monkeypatch.setenv("EGTSIM_WORKERS", "4")
        run_scenario(SCENARIOS / "ipd_tournament.json", out_dir=tmp_path / "c")
        monkeypatch.delenv("EGTSIM_WORKERS")
        blobs = [(tmp_path / d / "scores.csv").read_bytes() for d in ("a", "b", "c")]
        assert blobs[0] == blobs[1] == blobs[2]


def test_criterion_07_zd_extortion_relation():
    with criterion(7, "zero-determinant extortion pins payoffs at chi = 2"):
        zd = make_zd_extortion(2.0, 0.1, STAGE)
        rand = np.random.RandomState(99)
        for _ in range(25):
            opponent = MemoryOneStrategy(*rand.uniform(0.05, 0.95, 4))
            s_x, s_y = stationary_payoffs(zd, opponent, STAGE, noise=0.0)
            assert abs((s_x - STAGE.p) - 2.0 * (s_y - STAGE.p)) <= 1e-8


def test_criterion_08_moran_fixation():
    with criterion(8, "Moran fixation: analytic and Monte Carlo"):
        for n in (2, 5, 10):
            assert moran_fixation_analytic(1.0, n) == 1.0 / n
        start = time.perf_counter()
        constant_r2 = np.array([[2.0, 2.0], [1.0, 1.0]])
        cfg = MoranConfig(n=10, selection_intensity=1.0, trials=100000, seed=2024)
        est = moran_simulate(constant_r2, cfg)
        elapsed = time.perf_counter() - start
        target = moran_fixation_analytic(2.0, 10)
        assert f"{target:.6f}" == "0.500489"
        assert abs(est.estimate - target) <= 3 * est.standard_error, (est.estimate, target)
        assert est.censored == 0
        assert elapsed < 30.0, elapsed


def test_criterion_09_dynamics_invariants():
    with criterion(9, "dynamics invariant suite on the acceptance games"):
        games = [make_hawk_dove(HawkDoveParams(v, c)).a for v, c in HD_CASES]
        games.append(make_ipd_stage(STAGE).a)
        games.append(discretize_attrition(2.0, 1.0, bins=21, t_max=10.0).a)
        for a in games:
            n = a.shape[0]
            start = np.full(n, 1.0 / n)
            traj = integrate_replicator(a, start, IntegratorConfig(t_end=50))
            assert np.all(traj.x >= 0.0)
            assert np.max(np.abs(traj.x.sum(axis=1) - 1.0)) < 1e-9
            for k in range(n):  # vertex absorption, exact
                vertex = integrate_replicator(a, MixedStrategy.pure(k, n),
                                              IntegratorConfig(t_end=5))
                expect = np.zeros(n)
                expect[k] = 1.0
                assert np.all(vertex.x == expect)
        for a in games:  # column-shift invariance and dt halving, every game
            n = a.shape[0]
            rng = np.random.RandomState(n)
            start = rng.dirichlet(np.ones(n))
            shift = a + rng.uniform(-2, 2, n)[None, :]
            base = integrate_replicator(a, start, IntegratorConfig(t_end=200))
            moved = integrate_replicator(shift, start, IntegratorConfig(t_end=200))
            assert np.max(np.abs(base.x - moved.x)) < 1e-9
            fine = integrate_replicator(a, start, IntegratorConfig(dt=0.005, t_end=200))
            assert np.max(np.abs(base.x[-1] - fine.x[-1])) < 1e-8


def test_criterion_10_cli_contract(tmp_path):
    with criterion(10, "CLI scenarios and exit codes"):
        out = tmp_path / "hd"
        run_scenario(SCENARIOS / "hawk_dove_replicator.json", out_dir=out)
        summary = json.loads((out / "summary.json").read_text())
        assert summary["converged"] is True
        assert abs(summary["final_state"]["Hawk"] - 0.5) < 1e-6

        out = tmp_path / "moran"
        run_scenario(SCENARIOS / "moran_neutral.json", out_dir=out)
        summary = json.loads((out / "summary.json").read_text())
        assert abs(summary["fixation_estimate"] - 0.1) <= 3 * summary["standard_error"]

        out = tmp_path / "ipd"
        run_scenario(SCENARIOS / "ipd_tournament.json", out_dir=out)
        rows = (out / "scores.csv").read_text().splitlines()
        totals = {r.split(",")[0]: float(r.split(",")[1]) for r in rows[1:]}
        assert totals == {"tft": 39.0, "alld": 64.0, "allc": 30.0}

        env = dict(os.environ, PYTHONPATH=str(REPO / "src"))

        def exit_code(*args):
            return subprocess.run([sys.executable, "-m", "egtsim", *args],
                                  capture_output=True, env=env, cwd=REPO).returncode

        assert exit_code("validate", str(SCENARIOS / "hawk_dove_replicator.json")) == 0
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"schema_version": 1, "kind": "replicator", "seed": 0}))
        assert exit_code("validate", str(bad)) == 2
        assert exit_code("validate", str(tmp_path / "missing.json")) == 3
        diverging = tmp_path / "diverge.json"
        diverging.write_text(json.dumps({
            "schema_version": 1, "kind": "replicator",
            "game": {"type": "matrix", "a": [[1e308, 0.0], [0.0, 1e308]]},
            "initial": {"x": [0.6, 0.4]}, "dynamics": {"dt": 1.0, "t_end": 10.0},
            "seed": 0}))
        assert exit_code("run", str(diverging), "--out", str(tmp_path / "dout")) == 1
