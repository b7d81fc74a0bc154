"""Strategy-name parsing for the CLI-facing layer (scenarios and presets).

Grammar: `kind` or `kind:key=value,key=value`.

    allc | alld | tft | grim | wsls
    random:p=0.5
    zd:chi=2,phi=0.1
    m1:cc=1,cd=0,dc=1,dd=0[,init=1]
"""

from __future__ import annotations

from .errors import ParameterError
from .games import DEFAULT_STAGE, IpdStageParams
from .strategies import MemoryOneStrategy, NamedStrategy, Strategy, make_zd_extortion

_BARE = {"allc", "alld", "tft", "grim", "wsls"}


def _parse_args(kind: str, text: str, required: tuple[str, ...],
                optional: tuple[str, ...] = ()) -> dict[str, float]:
    args: dict[str, float] = {}
    for part in text.split(","):
        if "=" not in part:
            raise ParameterError(f"{kind!r} arguments must look like key=value, got {part!r}")
        key, _, value = part.partition("=")
        key = key.strip()
        if key not in required + optional:
            raise ParameterError(f"unknown argument {key!r} for strategy {kind!r}")
        if key in args:
            raise ParameterError(f"duplicate argument {key!r} for strategy {kind!r}")
        try:
            args[key] = float(value)
        except ValueError:
            raise ParameterError(f"argument {key}={value!r} is not a number") from None
    missing = [key for key in required if key not in args]
    if missing:
        raise ParameterError(f"strategy {kind!r} is missing arguments: {missing}")
    return args


def parse_strategy(name: str, stage: IpdStageParams = DEFAULT_STAGE) -> Strategy:
    """Turn a roster name into a strategy value.

    The stage parameters matter only for zero-determinant entries, whose
    probabilities depend on the stage payoffs.
    """
    text = name.strip()
    kind, sep, rest = text.partition(":")
    kind = kind.strip().lower()
    if kind in _BARE:
        if sep:
            raise ParameterError(f"strategy {kind!r} takes no arguments, got {text!r}")
        return NamedStrategy(kind)
    if kind == "random":
        args = _parse_args(kind, rest, required=("p",))
        return NamedStrategy("random", p=args["p"])
    if kind == "zd":
        args = _parse_args(kind, rest, required=("chi", "phi"))
        return make_zd_extortion(args["chi"], args["phi"], stage)
    if kind == "m1":
        args = _parse_args(kind, rest, required=("cc", "cd", "dc", "dd"), optional=("init",))
        return MemoryOneStrategy(args["cc"], args["cd"], args["dc"], args["dd"],
                                 initial_coop=args.get("init", 1.0))
    raise ParameterError(
        f"unknown strategy name {text!r}; expected one of "
        f"{sorted(_BARE)} or random:p=..., zd:chi=..,phi=.., m1:cc=..,cd=..,dc=..,dd=.."
    )


def parse_roster(names, stage: IpdStageParams = DEFAULT_STAGE):
    """Parse a list of names into (name, strategy) roster entries."""
    return [(str(name), parse_strategy(str(name), stage)) for name in names]
