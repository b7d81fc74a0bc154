"""Preset two-population coevolution experiments.

Three named scenarios tie the library together as runnable experiments over
a "human" population and an "AI" population.  The labels are population tags
only: no behavioral asymmetry is assumed beyond the parameters (cost rates,
rosters, payoffs), which are all overridable.

  hawk-dove-mixed      resource conflict: single-population mixed ESS and
                       the two-population ownership convention.
  ipd-coevolution      ecological IPD tournament over a human/AI roster
                       split; reports the regime at horizon.
  attrition-convention two-population discretized war of attrition with
                       asymmetric cost rates; reports whether one population
                       conceded (a resource-sharing convention).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .dynamics import IntegratorConfig, Trajectory, integrate_bimatrix, integrate_replicator
from .equilibria import hawk_dove_ess, is_ess
from .errors import ParameterError
from .games import HawkDoveParams, IpdStageParams, make_hawk_dove
from .roster import parse_roster
from .stochastic import attrition_bimatrix
from .tournament import MatchConfig, ScoreTable, round_robin, roster_payoff_matrix

PRESET_HORIZON = 500.0

_DEFAULTS: dict[str, dict[str, Any]] = {
    "hawk-dove-mixed": {
        "v": 2.0,
        "c": 4.0,
        "x0_hawk": 0.9,           # single-population start
        "x0_hawk_two": 0.6,       # two-population starts (generic, off-diagonal)
        "y0_hawk_two": 0.4,
        "dt": 0.01,
        "t_end": PRESET_HORIZON,
        "record_every": 100,
    },
    "ipd-coevolution": {
        "roster_human": ["tft", "grim", "allc"],
        "roster_ai": ["wsls", "alld", "zd:chi=2,phi=0.1"],
        "rounds": 200,
        "noise": 0.0,
        "seed": 7,
        "t": 5.0, "r": 3.0, "p": 1.0, "s": 0.0,
        "dt": 0.01,
        "t_end": PRESET_HORIZON,
        "record_every": 100,
    },
    "attrition-convention": {
        "v": 2.0,
        "c_human": 1.0,
        "c_ai": 0.5,
        "bins": 21,
        "t_max": 10.0,
        "dt": 0.01,
        "t_end": PRESET_HORIZON,
        "record_every": 100,
    },
}


@dataclass(frozen=True)
class ScenarioPreset:
    """A named preset plus its resolved parameter block."""

    name: str
    parameters: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in _DEFAULTS:
            raise ParameterError(
                f"unknown preset {self.name!r}; valid presets: {', '.join(sorted(_DEFAULTS))}"
            )


@dataclass(frozen=True)
class PresetResult:
    """Artifacts of one preset run, keyed for the CLI writers.

    labels maps a trajectory key to its per-strategy names.
    """

    name: str
    parameters: dict[str, Any]
    trajectories: dict[str, Trajectory]
    tables: dict[str, ScoreTable]
    summary: dict[str, Any]
    labels: dict[str, tuple[str, ...]] = field(default_factory=dict)


def list_presets() -> list[str]:
    return sorted(_DEFAULTS)


def get_preset(name: str) -> ScenarioPreset:
    if name not in _DEFAULTS:
        raise ParameterError(
            f"unknown preset {name!r}; valid presets: {', '.join(sorted(_DEFAULTS))}"
        )
    return ScenarioPreset(name=name, parameters=dict(_DEFAULTS[name]))


def _coerce_like(default: Any, value: Any, key: str) -> Any:
    if isinstance(value, str):
        if isinstance(default, list):
            return [part.strip() for part in value.split(",") if part.strip()]
        if isinstance(default, (int, float)):
            try:
                number = float(value)
            except ValueError:
                raise ParameterError(f"override {key}={value!r} is not a number") from None
            return int(number) if isinstance(default, int) and number == int(number) else number
        return value
    if isinstance(default, int) and isinstance(value, float) and value == int(value):
        return int(value)
    return value


def resolve_parameters(preset: ScenarioPreset, overrides: dict[str, Any] | None = None) -> dict[str, Any]:
    params = dict(_DEFAULTS[preset.name])
    params.update(preset.parameters)
    for key, value in (overrides or {}).items():
        if key not in params:
            raise ParameterError(
                f"unknown parameter {key!r} for preset {preset.name!r}; "
                f"valid keys: {', '.join(sorted(params))}"
            )
        params[key] = _coerce_like(params[key], value, key)
    return params


def run_preset(preset: ScenarioPreset | str, overrides: dict[str, Any] | None = None) -> PresetResult:
    """Run a preset scenario with optional parameter overrides."""
    if isinstance(preset, str):
        preset = get_preset(preset)
    params = resolve_parameters(preset, overrides)
    runner = {"hawk-dove-mixed": _run_hawk_dove_mixed,
              "ipd-coevolution": _run_ipd_coevolution,
              "attrition-convention": _run_attrition_convention}[preset.name]
    return runner(params)


def _integrator(params) -> IntegratorConfig:
    return IntegratorConfig(dt=float(params["dt"]), t_end=float(params["t_end"]),
                            record_every=int(params["record_every"]))


def _run_hawk_dove_mixed(params) -> PresetResult:
    hd = HawkDoveParams(v=float(params["v"]), c=float(params["c"]))
    game = make_hawk_dove(hd)
    cfg = _integrator(params)

    x0 = float(params["x0_hawk"])
    single = integrate_replicator(game.a, [x0, 1.0 - x0], cfg)
    ess = hawk_dove_ess(hd)
    report = is_ess(game.a, ess)

    xh, yh = float(params["x0_hawk_two"]), float(params["y0_hawk_two"])
    two = integrate_bimatrix(game.a, game.b, [xh, 1.0 - xh], [yh, 1.0 - yh], cfg)

    final_single = float(single.x[-1][0])
    fx, fy = float(two.x[-1][0]), float(two.y[-1][0])
    asymmetric = (fx >= 0.999 and fy <= 0.001) or (fy >= 0.999 and fx <= 0.001)
    ess_share = float(ess.probs[0])
    summary = {
        "preset": "hawk-dove-mixed",
        "v": hd.v,
        "c": hd.c,
        "ess_hawk_share": ess_share,
        "ess_verified": report.is_ess,
        "single_population": {
            "final_hawk_share": final_single,
            "converged": single.converged,
            "equilibrium_type": "mixed" if 0.001 < final_single < 0.999 else "pure",
            "matches_ess": abs(final_single - ess_share) < 1e-6,
        },
        "two_population": {
            "final_hawk_share_human": fx,
            "final_hawk_share_ai": fy,
            "converged": two.converged,
            "asymmetric_convention": asymmetric,
            "equilibrium_type": "asymmetric ownership convention" if asymmetric else "other",
        },
    }
    labels = {"single": ("Hawk", "Dove"), "two_population": ("Hawk", "Dove")}
    return PresetResult(name="hawk-dove-mixed", parameters=params,
                        trajectories={"single": single, "two_population": two},
                        tables={}, summary=summary, labels=labels)


def _run_ipd_coevolution(params) -> PresetResult:
    stage = IpdStageParams(t=float(params["t"]), r=float(params["r"]),
                           p=float(params["p"]), s=float(params["s"]))
    human_names = list(params["roster_human"])
    ai_names = list(params["roster_ai"])
    roster = parse_roster(human_names + ai_names, stage)
    cfg = MatchConfig(rounds=int(params["rounds"]), noise=float(params["noise"]),
                      seed=int(params["seed"]))

    table = round_robin(roster, cfg, stage)
    matrix = roster_payoff_matrix(roster, cfg, stage)
    n = len(roster)
    traj = integrate_replicator(matrix.payoff, np.full(n, 1.0 / n), _integrator(params))

    shares = traj.x[-1]
    coop_rate = float(shares @ matrix.cooperation @ shares)
    if coop_rate >= 0.8:
        regime = "cooperative"
    elif coop_rate <= 0.2:
        regime = "defecting"
    else:
        regime = "mixed"
    human_share = float(shares[: len(human_names)].sum())
    summary = {
        "preset": "ipd-coevolution",
        "roster_human": human_names,
        "roster_ai": ai_names,
        "rounds": cfg.rounds,
        "noise": cfg.noise,
        "final_shares": {name: float(s) for name, s in zip(matrix.names, shares)},
        "human_share": human_share,
        "ai_share": 1.0 - human_share,
        "population_cooperation_rate": coop_rate,
        "regime": regime,
        "converged": traj.converged,
    }
    return PresetResult(name="ipd-coevolution", parameters=params,
                        trajectories={"ecological": traj},
                        tables={"round_robin": table}, summary=summary,
                        labels={"ecological": matrix.names})


def _run_attrition_convention(params) -> PresetResult:
    v = float(params["v"])
    c_human = float(params["c_human"])
    c_ai = float(params["c_ai"])
    bins = int(params["bins"])
    t_max = float(params["t_max"])
    a, b, times = attrition_bimatrix(v, c_human, c_ai, bins, t_max)
    x0 = np.full(bins, 1.0 / bins)
    traj = integrate_bimatrix(a, b, x0, x0, _integrator(params))

    mean_human = float(traj.x[-1] @ times)
    mean_ai = float(traj.y[-1] @ times)
    conceded_human = float(traj.x[-1][0]) >= 0.9
    conceded_ai = float(traj.y[-1][0]) >= 0.9
    convention = conceded_human != conceded_ai
    summary = {
        "preset": "attrition-convention",
        "v": v,
        "c_human": c_human,
        "c_ai": c_ai,
        "bins": bins,
        "t_max": t_max,
        "mean_persistence_human": mean_human,
        "mean_persistence_ai": mean_ai,
        "mass_at_zero_human": float(traj.x[-1][0]),
        "mass_at_zero_ai": float(traj.y[-1][0]),
        "asymmetric_convention": convention,
        "conceding_population": ("human" if conceded_human else "ai") if convention else None,
        "converged": traj.converged,
    }
    grid = tuple(f"persist={t:g}" for t in times)
    return PresetResult(name="attrition-convention", parameters=params,
                        trajectories={"two_population": traj},
                        tables={}, summary=summary, labels={"two_population": grid})
