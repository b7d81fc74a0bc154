"""Exception types shared across the library."""


class EgtsimError(Exception):
    """Base class for all library errors."""


class ParameterError(EgtsimError, ValueError):
    """A parameter violates its documented precondition."""


class DimensionError(EgtsimError, ValueError):
    """Vector or matrix dimensions do not agree."""


class DivergenceError(EgtsimError, RuntimeError):
    """An integration step produced a non-finite or invalid state.

    Attributes:
        step: index of the integration step that failed.
    """

    def __init__(self, message: str, step: int):
        super().__init__(f"{message} (step {step})")
        self.step = step


class NonErgodicError(EgtsimError, ValueError):
    """The induced Markov chain has no unique long-run distribution."""
