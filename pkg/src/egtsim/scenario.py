"""Scenario files: strict JSON schema, validation, execution, artifacts.

A scenario is a JSON object with schema_version 1 and a `kind` selecting the
experiment.  Parsing is strict: unknown keys anywhere are errors, because a
silently ignored typo corrupts an experiment.  `validate_scenario` returns
every violation it can find; `run_scenario` dispatches to the library and
writes the artifact files:

    trajectory.csv   t,pop,strategy,share        (long form, one row per
                                                  time x population x strategy)
    scores.csv       strategy,total,mean_per_round
    contests.csv     trial,winner,duration,payoff_a,payoff_b
    summary.json     kind-specific results
    manifest.json    scenario echo, resolved defaults, artifact list,
                     duration, version

All floats in CSVs are serialized with 17 significant digits; JSON floats use
Python's shortest round-trip representation.  Identical scenario + seed give
byte-identical artifacts (manifest.json excepted: it carries wall-clock
duration).
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__
from . import _kernels
from .dynamics import IntegratorConfig, Trajectory, integrate_bimatrix, integrate_replicator
from .equilibria import hawk_dove_ess, is_ess, solve_2x2
from .errors import EgtsimError, ParameterError
from .games import (DEFAULT_STAGE, HawkDoveParams, IpdStageParams, MixedStrategy,
                    PayoffBimatrix, make_hawk_dove, make_ipd_stage, validate_game)
from .presets import get_preset, list_presets, resolve_parameters, run_preset
from .roster import parse_roster
from .stochastic import (ExponentialPersistence, MoranConfig, PurePersistence,
                         moran_simulate, run_contests)
from .tournament import MatchConfig, ScoreTable, ecological_tournament, round_robin

SCHEMA_VERSION = 1
KINDS = ("replicator", "bimatrix", "moran", "attrition", "ipd-tournament", "ess", "preset")


def fmt(x: float) -> str:
    """17-significant-digit decimal form; integers and shares round-trip exactly."""
    return format(float(x), ".17g")


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

class _Check:
    """Collects diagnostics while walking the scenario tree."""

    def __init__(self):
        self.problems: list[str] = []

    def fail(self, message: str) -> None:
        self.problems.append(message)

    def known_keys(self, obj: dict, where: str, allowed: set[str]) -> None:
        for key in obj:
            if key not in allowed:
                self.fail(f"{where}: unknown key {key!r} (allowed: {', '.join(sorted(allowed))})")

    def require(self, obj: dict, where: str, key: str) -> Any:
        if key not in obj:
            self.fail(f"{where}: missing required key {key!r}")
            return None
        return obj[key]

    def number(self, obj: dict, where: str, key: str, default=None, required=False):
        if key not in obj:
            if required:
                self.fail(f"{where}: missing required key {key!r}")
            return default
        value = obj[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(f"{where}.{key}: expected a number, got {value!r}")
            return default
        return value


def _check_probs(check: _Check, where: str, value) -> None:
    if not isinstance(value, list) or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        check.fail(f"{where}: expected a list of numbers")
        return
    try:
        MixedStrategy(np.asarray(value, dtype=float))
    except ParameterError as exc:
        check.fail(f"{where}: {exc}")


def _build_game(check: _Check, game: dict) -> PayoffBimatrix | None:
    """Validate and construct the `game` block's matrix game."""
    if not isinstance(game, dict):
        check.fail("game: expected an object")
        return None
    gtype = game.get("type")
    if gtype == "hawk-dove":
        check.known_keys(game, "game", {"type", "v", "c"})
        v = check.number(game, "game", "v", required=True)
        c = check.number(game, "game", "c", required=True)
        if v is None or c is None:
            return None
        try:
            return make_hawk_dove(HawkDoveParams(v=v, c=c))
        except ParameterError as exc:
            check.fail(f"game: {exc}")
            return None
    if gtype == "ipd-stage":
        check.known_keys(game, "game", {"type", "t", "r", "p", "s"})
        kwargs = {}
        for key in ("t", "r", "p", "s"):
            value = check.number(game, "game", key)
            if value is not None:
                kwargs[key] = value
        try:
            return make_ipd_stage(IpdStageParams(**kwargs))
        except ParameterError as exc:
            check.fail(f"game: {exc}")
            return None
    if gtype == "matrix":
        check.known_keys(game, "game", {"type", "a", "b", "labels"})
        a = check.require(game, "game", "a")
        if a is None:
            return None
        try:
            a = np.asarray(a, dtype=float)
        except (TypeError, ValueError):
            check.fail("game.a: not a numeric matrix")
            return None
        if "b" in game:
            try:
                b = np.asarray(game["b"], dtype=float)
            except (TypeError, ValueError):
                check.fail("game.b: not a numeric matrix")
                return None
            candidate = PayoffBimatrix(a=a, b=b, labels=game.get("labels"))
        else:
            if a.ndim != 2 or a.shape[0] != a.shape[1]:
                check.fail(f"game.a: symmetric game needs a square matrix, got shape {a.shape}")
                return None
            candidate = PayoffBimatrix(a=a, b=a.T.copy(), symmetric=True, labels=game.get("labels"))
        for problem in validate_game(candidate):
            check.fail(f"game: {problem}")
        return candidate
    check.fail(f"game.type: expected one of 'hawk-dove', 'ipd-stage', 'matrix', got {gtype!r}")
    return None


def _build_dynamics(check: _Check, block) -> IntegratorConfig | None:
    if block is None:
        return IntegratorConfig()
    if not isinstance(block, dict):
        check.fail("dynamics: expected an object")
        return None
    check.known_keys(block, "dynamics", {"dt", "t_end", "record_every", "renormalize"})
    kwargs: dict[str, Any] = {}
    for key in ("dt", "t_end"):
        value = check.number(block, "dynamics", key)
        if value is not None:
            kwargs[key] = value
    if "record_every" in block:
        value = block["record_every"]
        if not isinstance(value, int) or isinstance(value, bool):
            check.fail(f"dynamics.record_every: expected an integer, got {value!r}")
        else:
            kwargs["record_every"] = value
    if "renormalize" in block:
        if not isinstance(block["renormalize"], bool):
            check.fail("dynamics.renormalize: expected a boolean")
        else:
            kwargs["renormalize"] = block["renormalize"]
    try:
        return IntegratorConfig(**kwargs)
    except ParameterError as exc:
        check.fail(f"dynamics: {exc}")
        return None


def _build_persistence(check: _Check, where: str, block):
    if not isinstance(block, dict):
        check.fail(f"{where}: expected an object like "
                   '{"kind": "pure", "m": 1.0} or {"kind": "exponential", "rate": 0.5}')
        return None
    kind = block.get("kind")
    if kind == "pure":
        check.known_keys(block, where, {"kind", "m"})
        m = check.number(block, where, "m", required=True)
        if m is None:
            return None
        try:
            return PurePersistence(m=m)
        except ParameterError as exc:
            check.fail(f"{where}: {exc}")
            return None
    if kind == "exponential":
        check.known_keys(block, where, {"kind", "rate"})
        rate = check.number(block, where, "rate", required=True)
        if rate is None:
            return None
        try:
            return ExponentialPersistence(rate=rate)
        except ParameterError as exc:
            check.fail(f"{where}: {exc}")
            return None
    check.fail(f"{where}.kind: expected 'pure' or 'exponential', got {kind!r}")
    return None


_TOP_KEYS = {"schema_version", "kind", "game", "dynamics", "stochastic",
             "initial", "tournament", "seed", "output_dir"}

_KIND_BLOCKS: dict[str, dict[str, set[str]]] = {
    # kind -> {"required": {...}, "optional": {...}} beyond the universal keys
    "replicator": {"required": {"game"}, "optional": {"dynamics", "initial"}},
    "bimatrix": {"required": {"game", "initial"}, "optional": {"dynamics"}},
    "moran": {"required": {"game", "stochastic"}, "optional": set()},
    "attrition": {"required": {"game", "stochastic"}, "optional": set()},
    "ipd-tournament": {"required": {"tournament"}, "optional": {"game", "dynamics"}},
    "ess": {"required": {"game"}, "optional": set()},
    "preset": {"required": {"game"}, "optional": set()},
}


@dataclass
class ResolvedScenario:
    """A validated scenario, ready to run."""

    kind: str
    seed: int
    output_dir: str | None
    raw: dict
    game: PayoffBimatrix | None = None
    dynamics: IntegratorConfig | None = None
    x0: np.ndarray | None = None
    y0: np.ndarray | None = None
    moran: MoranConfig | None = None
    initial_mutants: int = 1
    persistence_a: Any = None
    persistence_b: Any = None
    contest_v: float = 0.0
    contest_c_a: float = 0.0
    contest_c_b: float = 0.0
    contests: int = 0
    roster: list = field(default_factory=list)
    match: MatchConfig | None = None
    stage: IpdStageParams = DEFAULT_STAGE
    ess_candidate: np.ndarray | None = None
    preset_name: str = ""
    preset_overrides: dict = field(default_factory=dict)


def parse_scenario(doc: Any) -> tuple[ResolvedScenario | None, list[str]]:
    """Strictly parse a scenario document; returns (scenario, diagnostics)."""
    check = _Check()
    if not isinstance(doc, dict):
        check.fail("scenario: top level must be a JSON object")
        return None, check.problems

    check.known_keys(doc, "scenario", _TOP_KEYS)
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        check.fail(f"schema_version: expected {SCHEMA_VERSION}, got {version!r}")
    kind = doc.get("kind")
    if kind not in KINDS:
        check.fail(f"kind: expected one of {', '.join(KINDS)}, got {kind!r}")
        return None, check.problems

    blocks = _KIND_BLOCKS[kind]
    for key in blocks["required"]:
        if key not in doc:
            check.fail(f"scenario: kind {kind!r} requires a {key!r} block")
    for key in ("game", "dynamics", "stochastic", "initial", "tournament"):
        if key in doc and key not in blocks["required"] | blocks["optional"]:
            check.fail(f"scenario: kind {kind!r} does not take a {key!r} block")

    seed = doc.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0 or seed > 2**64 - 1:
        check.fail(f"seed: expected an unsigned 64-bit integer, got {seed!r}")
        seed = 0
    output_dir = doc.get("output_dir")
    if output_dir is not None and not isinstance(output_dir, str):
        check.fail(f"output_dir: expected a string path, got {output_dir!r}")
        output_dir = None

    sc = ResolvedScenario(kind=kind, seed=seed, output_dir=output_dir, raw=doc)

    if kind == "replicator":
        sc.game = _build_game(check, doc.get("game")) if "game" in doc else None
        sc.dynamics = _build_dynamics(check, doc.get("dynamics"))
        initial = doc.get("initial")
        if initial is not None:
            if not isinstance(initial, dict):
                check.fail("initial: expected an object")
            else:
                check.known_keys(initial, "initial", {"x"})
                if "x" in initial:
                    _check_probs(check, "initial.x", initial["x"])
                    if not check.problems:
                        sc.x0 = np.asarray(initial["x"], dtype=float)
        if sc.game is not None:
            if sc.x0 is None:
                sc.x0 = np.full(sc.game.rows, 1.0 / sc.game.rows)
            elif sc.x0.size != sc.game.rows:
                check.fail(f"initial.x: needs {sc.game.rows} entries, got {sc.x0.size}")

    elif kind == "bimatrix":
        sc.game = _build_game(check, doc.get("game")) if "game" in doc else None
        sc.dynamics = _build_dynamics(check, doc.get("dynamics"))
        initial = doc.get("initial")
        if not isinstance(initial, dict):
            if "initial" in doc:
                check.fail("initial: expected an object with 'x' and 'y'")
        else:
            check.known_keys(initial, "initial", {"x", "y"})
            for key in ("x", "y"):
                value = check.require(initial, "initial", key)
                if value is not None:
                    _check_probs(check, f"initial.{key}", value)
            if not check.problems:
                sc.x0 = np.asarray(initial["x"], dtype=float)
                sc.y0 = np.asarray(initial["y"], dtype=float)
                if sc.game is not None:
                    if sc.x0.size != sc.game.rows:
                        check.fail(f"initial.x: needs {sc.game.rows} entries, got {sc.x0.size}")
                    if sc.y0.size != sc.game.cols:
                        check.fail(f"initial.y: needs {sc.game.cols} entries, got {sc.y0.size}")

    elif kind == "moran":
        sc.game = _build_game(check, doc.get("game")) if "game" in doc else None
        if sc.game is not None and sc.game.a.shape != (2, 2):
            check.fail(f"game: moran scenarios need a 2x2 game, got shape {sc.game.a.shape}")
        block = doc.get("stochastic")
        if not isinstance(block, dict):
            if "stochastic" in doc:
                check.fail("stochastic: expected an object")
        else:
            check.known_keys(block, "stochastic",
                             {"n", "selection_intensity", "trials", "max_steps", "initial_mutants"})
            n = block.get("n")
            if not isinstance(n, int) or isinstance(n, bool):
                check.fail(f"stochastic.n: expected an integer, got {n!r}")
                n = 2
            w = check.number(block, "stochastic", "selection_intensity", default=0.0)
            trials = block.get("trials", 10_000)
            max_steps = block.get("max_steps", 1_000_000)
            mutants = block.get("initial_mutants", 1)
            for name, value in (("trials", trials), ("max_steps", max_steps),
                                ("initial_mutants", mutants)):
                if not isinstance(value, int) or isinstance(value, bool):
                    check.fail(f"stochastic.{name}: expected an integer, got {value!r}")
            if not check.problems:
                try:
                    sc.moran = MoranConfig(n=n, selection_intensity=w, trials=trials,
                                           max_steps=max_steps, seed=seed)
                except ParameterError as exc:
                    check.fail(f"stochastic: {exc}")
                sc.initial_mutants = mutants
                if not (1 <= mutants <= n - 1):
                    check.fail(f"stochastic.initial_mutants: must lie in [1, n-1], got {mutants}")

    elif kind == "attrition":
        game = doc.get("game")
        if not isinstance(game, dict):
            if "game" in doc:
                check.fail("game: expected an object with v and cost rates")
        else:
            check.known_keys(game, "game", {"v", "c_a", "c_b"})
            v = check.number(game, "game", "v", required=True)
            c_a = check.number(game, "game", "c_a", required=True)
            c_b = check.number(game, "game", "c_b", required=True)
            if None not in (v, c_a, c_b):
                if v <= 0 or c_a <= 0 or c_b <= 0:
                    check.fail("game: v, c_a, c_b must all be > 0")
                sc.contest_v, sc.contest_c_a, sc.contest_c_b = v, c_a, c_b
        block = doc.get("stochastic")
        if not isinstance(block, dict):
            if "stochastic" in doc:
                check.fail("stochastic: expected an object")
        else:
            check.known_keys(block, "stochastic", {"strategy_a", "strategy_b", "contests"})
            sc.persistence_a = _build_persistence(check, "stochastic.strategy_a",
                                                  check.require(block, "stochastic", "strategy_a"))
            sc.persistence_b = _build_persistence(check, "stochastic.strategy_b",
                                                  check.require(block, "stochastic", "strategy_b"))
            contests = block.get("contests", 10_000)
            if not isinstance(contests, int) or isinstance(contests, bool) or contests < 1:
                check.fail(f"stochastic.contests: expected a positive integer, got {contests!r}")
            else:
                sc.contests = contests

    elif kind == "ipd-tournament":
        game = doc.get("game")
        if game is not None:
            if isinstance(game, dict) and game.get("type") != "ipd-stage":
                check.fail("game: ipd-tournament scenarios take an ipd-stage game block")
            else:
                built = _build_game(check, game)
                if built is not None:
                    raw_stage = {k: v for k, v in game.items() if k != "type"}
                    try:
                        sc.stage = IpdStageParams(**raw_stage)
                    except (TypeError, ParameterError) as exc:
                        check.fail(f"game: {exc}")
        block = doc.get("tournament")
        if not isinstance(block, dict):
            if "tournament" in doc:
                check.fail("tournament: expected an object")
        else:
            check.known_keys(block, "tournament", {"roster", "rounds", "noise"})
            roster = check.require(block, "tournament", "roster")
            if roster is not None:
                if not isinstance(roster, list) or not all(isinstance(r, str) for r in roster):
                    check.fail("tournament.roster: expected a list of strategy names")
                else:
                    try:
                        sc.roster = parse_roster(roster, sc.stage)
                    except ParameterError as exc:
                        check.fail(f"tournament.roster: {exc}")
                    if len(roster) != len(set(roster)):
                        check.fail("tournament.roster: duplicate strategy names")
                    elif len(roster) < 2:
                        check.fail("tournament.roster: needs at least 2 strategies")
            rounds = block.get("rounds", 200)
            noise = check.number(block, "tournament", "noise", default=0.0)
            if not isinstance(rounds, int) or isinstance(rounds, bool):
                check.fail(f"tournament.rounds: expected an integer, got {rounds!r}")
            elif noise is not None:
                try:
                    sc.match = MatchConfig(rounds=rounds, noise=noise, seed=seed)
                except ParameterError as exc:
                    check.fail(f"tournament: {exc}")
        if "dynamics" in doc:
            sc.dynamics = _build_dynamics(check, doc.get("dynamics"))

    elif kind == "ess":
        game = doc.get("game")
        candidate = None
        if isinstance(game, dict) and "candidate" in game:
            game = dict(game)
            candidate = game.pop("candidate")
        sc.game = _build_game(check, game) if "game" in doc else None
        if candidate is not None:
            _check_probs(check, "game.candidate", candidate)
            if not check.problems:
                sc.ess_candidate = np.asarray(candidate, dtype=float)
        if sc.game is not None and sc.game.rows != sc.game.cols:
            check.fail("game: ess scenarios need a square game")

    elif kind == "preset":
        game = doc.get("game")
        if not isinstance(game, dict):
            if "game" in doc:
                check.fail("game: expected an object with the preset name")
        else:
            check.known_keys(game, "game", {"name", "params"})
            name = check.require(game, "game", "name")
            if name is not None:
                if name not in list_presets():
                    check.fail(f"game.name: unknown preset {name!r}; "
                               f"valid presets: {', '.join(list_presets())}")
                else:
                    sc.preset_name = name
                    overrides = game.get("params", {})
                    if not isinstance(overrides, dict):
                        check.fail("game.params: expected an object")
                    else:
                        sc.preset_overrides = overrides
                        try:
                            resolve_parameters(get_preset(name), overrides)
                        except ParameterError as exc:
                            check.fail(f"game.params: {exc}")

    if check.problems:
        return None, check.problems
    return sc, []


def validate_scenario(path: str | Path) -> list[str]:
    """Parse a scenario file strictly; returns all diagnostics (empty = clean).

    Raises OSError when the file cannot be read (an I/O failure, not a
    validation failure).
    """
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        return [f"not valid JSON: {exc}"]
    _, problems = parse_scenario(doc)
    return problems


# ---------------------------------------------------------------------------
# artifact writers
# ---------------------------------------------------------------------------

def write_trajectory_csv(path: Path, traj: Trajectory, labels: tuple[str, ...] | None,
                      labels_y: tuple[str, ...] | None = None) -> None:
    def label(names, i):
        return names[i] if names is not None and i < len(names) else f"s{i}"

    lines = ["t,pop,strategy,share"]
    for row, t in enumerate(traj.times):
        for i in range(traj.x.shape[1]):
            lines.append(f"{fmt(t)},0,{label(labels, i)},{fmt(traj.x[row, i])}")
        if traj.y is not None:
            names_y = labels_y if labels_y is not None else labels
            for j in range(traj.y.shape[1]):
                lines.append(f"{fmt(t)},1,{label(names_y, j)},{fmt(traj.y[row, j])}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_scores_csv(path: Path, table: ScoreTable) -> None:
    lines = ["strategy,total,mean_per_round"]
    for i, name in enumerate(table.roster):
        lines.append(f"{name},{fmt(table.totals[i])},{fmt(table.mean_per_round(i))}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_contests_csv(path: Path, winners, durations, pay_a, pay_b) -> None:
    lines = ["trial,winner,duration,payoff_a,payoff_b"]
    for k in range(len(winners)):
        lines.append(f"{k},{int(winners[k])},{fmt(durations[k])},{fmt(pay_a[k])},{fmt(pay_b[k])}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def write_svg_chart(path: Path, traj: Trajectory, labels, labels_y=None) -> None:
    """Minimal dependency-free line chart of all shares over time."""
    width, height, pad = 640, 360, 40
    t0, t1 = float(traj.times[0]), float(traj.times[-1])
    span = (t1 - t0) or 1.0
    palette = ["#1b6ca8", "#c0392b", "#27ae60", "#8e44ad", "#d68910", "#16a085",
               "#7f8c8d", "#2c3e50"]

    def sx(t):
        return pad + (width - 2 * pad) * (t - t0) / span

    def sy(v):
        return height - pad - (height - 2 * pad) * v

    def series(states, names, dash, pop):
        parts = []
        for i in range(states.shape[1]):
            pts = " ".join(f"{sx(t):.2f},{sy(states[row, i]):.2f}"
                           for row, t in enumerate(traj.times))
            color = palette[i % len(palette)]
            name = names[i] if names is not None and i < len(names) else f"s{i}"
            parts.append(f'<polyline fill="none" stroke="{color}"{dash} points="{pts}">'
                         f"<title>pop{pop}:{name}</title></polyline>")
        return parts

    body = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}">',
            f'<rect width="{width}" height="{height}" fill="white"/>',
            f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" '
            'stroke="#333"/>',
            f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="#333"/>',
            f'<text x="{width // 2}" y="{height - 8}" font-size="12" text-anchor="middle">'
            f"t in [{t0:g}, {t1:g}]</text>",
            f'<text x="12" y="{height // 2}" font-size="12" transform="rotate(-90 12 '
            f'{height // 2})" text-anchor="middle">share</text>']
    body += series(traj.x, labels, "", 0)
    if traj.y is not None:
        body += series(traj.y, labels_y if labels_y is not None else labels,
                       ' stroke-dasharray="6 3"', 1)
    body.append("</svg>")
    path.write_text("\n".join(body) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# runner
# ---------------------------------------------------------------------------

@dataclass
class RunManifest:
    """What a run produced; serialized as manifest.json."""

    scenario: dict
    resolved: dict
    artifacts: list[str]
    duration_seconds: float
    version: str
    backend: str
    error: str | None = None

    def to_json(self) -> dict:
        return {
            "scenario": self.scenario,
            "resolved": self.resolved,
            "artifacts": self.artifacts,
            "duration_seconds": self.duration_seconds,
            "library_version": self.version,
            "kernel_backend": self.backend,
            "error": self.error,
        }


def _ess_payload(a: np.ndarray, candidate: np.ndarray) -> dict:
    report = is_ess(a, candidate)
    return {
        "candidate": [float(v) for v in report.candidate.probs],
        "is_nash": report.is_nash,
        "is_ess": report.is_ess,
        "worst_violation": report.worst_violation,
        "tested_mutants": report.tested_mutants,
        "method": report.method,
    }


def run_scenario(path: str | Path, out_dir: str | Path | None = None,
                 seed_override: int | None = None, svg: bool = False) -> RunManifest:
    """Validate, run, and write artifacts for one scenario file.

    On library errors the partial artifacts are removed and the manifest
    (with the error recorded) is still written.  Raises ParameterError when
    the scenario is invalid, OSError on I/O failures, EgtsimError on runtime
    failures.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParameterError(f"not valid JSON: {exc}") from None
    sc, problems = parse_scenario(doc)
    if problems:
        raise ParameterError("invalid scenario: " + "; ".join(problems))
    if seed_override is not None:
        sc.seed = seed_override
        if sc.moran is not None:
            sc.moran = MoranConfig(n=sc.moran.n, selection_intensity=sc.moran.selection_intensity,
                                   max_steps=sc.moran.max_steps, trials=sc.moran.trials,
                                   seed=seed_override)
        if sc.match is not None:
            sc.match = MatchConfig(rounds=sc.match.rounds, noise=sc.match.noise,
                                   seed=seed_override)

    if out_dir is None:
        out_dir = sc.output_dir if sc.output_dir is not None else f"{path.stem}_out"
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    start = time.perf_counter()
    written: list[Path] = []

    def emit(name: str, writer: Callable[[Path], None]) -> None:
        target = out / name
        writer(target)
        written.append(target)

    resolved: dict[str, Any] = {"kind": sc.kind, "seed": sc.seed, "output_dir": str(out)}
    try:
        summary = _dispatch(sc, emit, resolved, svg)
        emit("summary.json", lambda p: write_json(p, summary))
    except EgtsimError as exc:
        for target in written:
            target.unlink(missing_ok=True)
        manifest = RunManifest(scenario=doc, resolved=resolved, artifacts=[],
                               duration_seconds=time.perf_counter() - start,
                               version=__version__, backend=_kernels.backend_name(),
                               error=str(exc))
        write_json(out / "manifest.json", manifest.to_json())
        raise

    manifest = RunManifest(scenario=doc, resolved=resolved,
                           artifacts=sorted(p.name for p in written),
                           duration_seconds=time.perf_counter() - start,
                           version=__version__, backend=_kernels.backend_name())
    write_json(out / "manifest.json", manifest.to_json())
    return manifest


def _dispatch(sc: ResolvedScenario, emit, resolved: dict, svg: bool) -> dict:
    if sc.kind == "replicator":
        resolved["dynamics"] = {"dt": sc.dynamics.dt, "t_end": sc.dynamics.t_end,
                                "record_every": sc.dynamics.record_every,
                                "renormalize": sc.dynamics.renormalize}
        resolved["initial_x"] = [float(v) for v in sc.x0]
        traj = integrate_replicator(sc.game.a, sc.x0, sc.dynamics)
        emit("trajectory.csv", lambda p: write_trajectory_csv(p, traj, sc.game.labels))
        if svg:
            emit("trajectory.svg", lambda p: write_svg_chart(p, traj, sc.game.labels))
        return {
            "kind": "replicator",
            "converged": traj.converged,
            "final_residual": traj.final_residual,
            "final_state": {(sc.game.labels[i] if sc.game.labels else f"s{i}"): float(v)
                            for i, v in enumerate(traj.x[-1])},
            "t_end": float(traj.times[-1]),
        }

    if sc.kind == "bimatrix":
        resolved["dynamics"] = {"dt": sc.dynamics.dt, "t_end": sc.dynamics.t_end,
                                "record_every": sc.dynamics.record_every,
                                "renormalize": sc.dynamics.renormalize}
        resolved["initial_x"] = [float(v) for v in sc.x0]
        resolved["initial_y"] = [float(v) for v in sc.y0]
        traj = integrate_bimatrix(sc.game.a, sc.game.b, sc.x0, sc.y0, sc.dynamics)
        emit("trajectory.csv", lambda p: write_trajectory_csv(p, traj, sc.game.labels))
        if svg:
            emit("trajectory.svg", lambda p: write_svg_chart(p, traj, sc.game.labels))
        return {
            "kind": "bimatrix",
            "converged": traj.converged,
            "final_residual": traj.final_residual,
            "final_state_x": [float(v) for v in traj.x[-1]],
            "final_state_y": [float(v) for v in traj.y[-1]],
            "t_end": float(traj.times[-1]),
        }

    if sc.kind == "moran":
        resolved["stochastic"] = {"n": sc.moran.n,
                                  "selection_intensity": sc.moran.selection_intensity,
                                  "trials": sc.moran.trials, "max_steps": sc.moran.max_steps,
                                  "initial_mutants": sc.initial_mutants}
        est = moran_simulate(sc.game.a, sc.moran, sc.initial_mutants)
        return {
            "kind": "moran",
            "fixation_estimate": est.estimate,
            "standard_error": est.standard_error,
            "fixed": est.fixed,
            "extinct": est.extinct,
            "censored": est.censored,
            "trials": est.trials,
            "neutral_reference": 1.0 / sc.moran.n,
        }

    if sc.kind == "attrition":
        resolved["stochastic"] = {"contests": sc.contests}
        winners, durations, pay_a, pay_b = run_contests(
            sc.persistence_a, sc.persistence_b, sc.contest_v,
            sc.contest_c_a, sc.contest_c_b, sc.contests, sc.seed)
        emit("contests.csv", lambda p: write_contests_csv(p, winners, durations, pay_a, pay_b))
        n = sc.contests
        return {
            "kind": "attrition",
            "contests": n,
            "win_rate_a": float(np.count_nonzero(winners == 0)) / n,
            "mean_duration": float(durations.mean()),
            "mean_payoff_a": float(pay_a.mean()),
            "mean_payoff_b": float(pay_b.mean()),
            "se_payoff_a": float(pay_a.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0,
            "se_payoff_b": float(pay_b.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0,
        }

    if sc.kind == "ipd-tournament":
        resolved["tournament"] = {"roster": [name for name, _ in sc.roster],
                                  "rounds": sc.match.rounds, "noise": sc.match.noise}
        table = round_robin(sc.roster, sc.match, sc.stage)
        emit("scores.csv", lambda p: write_scores_csv(p, table))
        summary: dict[str, Any] = {
            "kind": "ipd-tournament",
            "totals": {name: float(table.totals[i]) for i, name in enumerate(table.roster)},
            "ranking": [table.roster[i] for i in np.argsort(-table.totals, kind="stable")],
        }
        if sc.dynamics is not None:
            traj = ecological_tournament(sc.roster, sc.match, sc.stage, sc.dynamics)
            emit("trajectory.csv", lambda p: write_trajectory_csv(p, traj, table.roster))
            if svg:
                emit("trajectory.svg", lambda p: write_svg_chart(p, traj, table.roster))
            summary["ecological"] = {
                "converged": traj.converged,
                "final_shares": {name: float(v) for name, v in zip(table.roster, traj.x[-1])},
            }
        return summary

    if sc.kind == "ess":
        a = sc.game.a
        summary = {"kind": "ess"}
        if sc.game.rows == 2:
            result = solve_2x2(sc.game)
            summary["equilibria"] = [
                {"x": [float(v) for v in x.probs], "y": [float(v) for v in y.probs]}
                for x, y in result.equilibria
            ]
            summary["degenerate"] = result.degenerate
        if sc.raw.get("game", {}).get("type") == "hawk-dove":
            hd = HawkDoveParams(v=sc.raw["game"]["v"], c=sc.raw["game"]["c"])
            ess = hawk_dove_ess(hd)
            summary["hawk_dove_ess"] = [float(v) for v in ess.probs]
            summary["ess_report"] = _ess_payload(a, ess.probs)
        if sc.ess_candidate is not None:
            summary["candidate_report"] = _ess_payload(a, sc.ess_candidate)
        return summary

    if sc.kind == "preset":
        resolved["preset"] = {"name": sc.preset_name, "params": sc.preset_overrides}
        result = run_preset(sc.preset_name, sc.preset_overrides)
        for key, traj in sorted(result.trajectories.items()):
            names = result.labels.get(key)
            emit(f"trajectory_{key}.csv",
                 lambda p, tr=traj, nm=names: write_trajectory_csv(p, tr, nm))
            if svg:
                emit(f"trajectory_{key}.svg", lambda p, tr=traj, nm=names: write_svg_chart(p, tr, nm))
        for key, table in sorted(result.tables.items()):
            emit(f"scores_{key}.csv", lambda p, tb=table: write_scores_csv(p, tb))
        return {"kind": "preset", **result.summary}

    raise ParameterError(f"unhandled scenario kind {sc.kind!r}")
