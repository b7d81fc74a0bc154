"""egtsim: a deterministic evolutionary-game-theory engine.

Hawk-dove, iterated prisoner's dilemma, and war-of-attrition models with
replicator and Moran dynamics, ESS verification, seeded Monte Carlo, and a
scenario-driven CLI producing CSV/JSON artifacts.
"""

__version__ = "0.1.0"

from ._kernels import backend_name, have_compiled
from .dynamics import (IntegratorConfig, Trajectory, integrate_bimatrix,
                       integrate_replicator, replicator_rhs)
from .equilibria import (AttritionEss, EssReport, Solve2x2Result, attrition_ess,
                         attrition_pure_payoff, hawk_dove_ess, is_ess, solve_2x2)
from .errors import (DimensionError, DivergenceError, EgtsimError, NonErgodicError,
                     ParameterError)
from .games import (DEFAULT_STAGE, HawkDoveParams, IpdStageParams, MixedStrategy,
                    PayoffBimatrix, expected_payoff, make_hawk_dove, make_ipd_stage,
                    validate_game)
from .presets import PresetResult, ScenarioPreset, get_preset, list_presets, run_preset
from .rng import SplitMix64, derive_seed
from .stochastic import (ContestOutcome, ExponentialPersistence, FixationEstimate,
                         MoranConfig, PurePersistence, discretize_attrition,
                         moran_fixation_analytic, moran_simulate, run_contest,
                         run_contests, sample_persistence)
from .strategies import (ALL_C, ALL_D, GRIM, TIT_FOR_TAT, WIN_STAY_LOSE_SHIFT,
                         MatchState, MemoryOneStrategy, NamedStrategy, as_memory_one,
                         make_zd_extortion, next_move, stationary_distribution,
                         stationary_payoffs)
from .tournament import (MatchConfig, MatchResult, ScoreTable, ecological_tournament,
                         play_match, round_robin, roster_payoff_matrix)

__all__ = [name for name in dir() if not name.startswith("_")]
