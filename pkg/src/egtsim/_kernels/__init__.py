"""Kernel backend selection.

The hot loops (RK4 replicator integration, Moran and contest Monte Carlo)
exist twice: a Cython extension (`_core`) and a numpy fallback (`pure`).
Selection happens once at import:

  * EGTSIM_BACKEND=compiled  — require the extension, fail loudly if missing
  * EGTSIM_BACKEND=pure      — force the fallback
  * unset / auto             — compiled if importable, else pure

`active` is the selected module; the stochastic kernels of both backends are
bit-identical, the integrators agree to floating-point round-off.
"""

from __future__ import annotations

import os

from . import pure


def _load_compiled():
    from . import _core  # noqa: PLC0415

    return _core


_choice = os.environ.get("EGTSIM_BACKEND", "auto").lower()

if _choice == "pure":
    active = pure
elif _choice == "compiled":
    active = _load_compiled()
elif _choice == "auto":
    try:
        active = _load_compiled()
    except ImportError:
        active = pure
else:
    raise RuntimeError(
        f"EGTSIM_BACKEND={_choice!r} not understood; use 'compiled', 'pure', or 'auto'"
    )


def backend_name() -> str:
    """Name of the kernel backend in use: 'compiled' or 'pure'."""
    return active.BACKEND


def have_compiled() -> bool:
    try:
        _load_compiled()
        return True
    except ImportError:
        return False
