"""Compiled vs pure kernel backend equivalence.

The stochastic kernels must agree bit for bit (shared splitmix64 integer
streams and identical float expressions); the RK4 kernels accumulate in
different orders and are compared with tolerances.
"""

import json
import os
import subprocess
import sys

import numpy as np
import pytest

from egtsim._kernels import have_compiled, pure

if have_compiled():
    from egtsim._kernels import _core as compiled
else:
    compiled = None
pytestmark = pytest.mark.skipif(not have_compiled(), reason="compiled backend not built")

HD = np.array([[-1.0, 2.0], [0.0, 1.0]])


def test_moran_outcomes_bit_identical():
    args = (2.0, 2.0, 1.0, 1.0, 10, 1.0, 1, 100000, 20000, 4242, 0)
    ours, status_p = pure.moran_trials(*args)
    theirs, status_c = compiled.moran_trials(*args)
    assert status_p == status_c == 0
    assert np.array_equal(ours, theirs)


def test_moran_chunking_matches_single_shot():
    full, _ = compiled.moran_trials(1.0, 1.0, 1.0, 1.0, 5, 0.0, 1, 100000, 3000, 9, 0)
    head, _ = compiled.moran_trials(1.0, 1.0, 1.0, 1.0, 5, 0.0, 1, 100000, 1000, 9, 0)
    tail, _ = compiled.moran_trials(1.0, 1.0, 1.0, 1.0, 5, 0.0, 1, 100000, 2000, 9, 1000)
    assert np.array_equal(np.concatenate([head, tail]), full)


def test_contests_bit_identical():
    args = (1, 0.5, 1, 0.25, 2.0, 1.0, 0.5, 50000, 2024, 0)
    for lhs, rhs in zip(pure.contest_trials(*args), compiled.contest_trials(*args)):
        assert np.array_equal(lhs, rhs)


def test_contests_tie_coin_bit_identical():
    # pure-vs-pure ties exercise the coin path in both backends
    args = (0, 1.5, 0, 1.5, 2.0, 1.0, 1.0, 1000, 31, 0)
    ours = pure.contest_trials(*args)
    theirs = compiled.contest_trials(*args)
    for lhs, rhs in zip(ours, theirs):
        assert np.array_equal(lhs, rhs)
    assert set(np.unique(ours[0])) == {0, 1}


def test_rk4_replicator_matches_within_roundoff():
    args = (HD, np.array([0.9, 0.1]), 0.01, 20000, 10, True)
    t_p, x_p, r_p, s_p, _ = pure.rk4_replicator(*args)
    t_c, x_c, r_c, s_c, _ = compiled.rk4_replicator(*args)
    assert s_p == s_c == 0
    assert np.array_equal(t_p, t_c)
    assert np.max(np.abs(x_p - x_c)) < 1e-12
    assert abs(r_p - r_c) < 1e-12


def test_rk4_bimatrix_matches_within_roundoff():
    args = (HD, HD.T.copy(), np.array([0.6, 0.4]), np.array([0.4, 0.6]),
            0.01, 20000, 50, True)
    t_p, x_p, y_p, r_p, s_p, _ = pure.rk4_bimatrix(*args)
    t_c, x_c, y_c, r_c, s_c, _ = compiled.rk4_bimatrix(*args)
    assert s_p == s_c == 0
    assert np.max(np.abs(x_p - x_c)) < 1e-12
    assert np.max(np.abs(y_p - y_c)) < 1e-12


def test_error_statuses_agree():
    bad = np.array([[1e308, 0.0], [0.0, 1e308]])
    args = (bad, np.array([0.6, 0.4]), 1.0, 10, 1, True)
    *_, s_p, step_p = pure.rk4_replicator(*args)
    *_, s_c, step_c = compiled.rk4_replicator(*args)
    assert (s_p, step_p) == (s_c, step_c)
    assert s_p == 1


def test_backend_env_selection():
    code = "import egtsim; print(egtsim.backend_name())"
    env = dict(os.environ, PYTHONPATH="src", EGTSIM_BACKEND="pure")
    out = subprocess.run([sys.executable, "-c", code], capture_output=True,
                         text=True, env=env, cwd=os.path.dirname(os.path.dirname(__file__)))
    assert out.stdout.strip() == "pure"
    env["EGTSIM_BACKEND"] = "compiled"
    out = subprocess.run([sys.executable, "-c", code], capture_output=True,
                         text=True, env=env, cwd=os.path.dirname(os.path.dirname(__file__)))
    assert out.stdout.strip() == "compiled"


def test_scenario_runs_under_pure_backend(tmp_path):
    # end-to-end fallback path: same convergence target, per-backend determinism
    repo = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    env = dict(os.environ, PYTHONPATH=os.path.join(repo, "src"), EGTSIM_BACKEND="pure")
    scenario = os.path.join(repo, "scenarios", "hawk_dove_replicator.json")
    for out_name in ("a", "b"):
        result = subprocess.run(
            [sys.executable, "-m", "egtsim", "run", scenario,
             "--out", str(tmp_path / out_name), "--quiet"],
            capture_output=True, text=True, env=env, cwd=repo)
        assert result.returncode == 0, result.stderr
    first = (tmp_path / "a" / "trajectory.csv").read_bytes()
    second = (tmp_path / "b" / "trajectory.csv").read_bytes()
    assert first == second
    summary = json.loads((tmp_path / "a" / "summary.json").read_text())
    assert summary["converged"] is True
    assert abs(summary["final_state"]["Hawk"] - 0.5) < 1e-6
