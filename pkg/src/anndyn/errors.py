"""Exception types shared across the toolkit."""


class AnndynError(Exception):
    """Base class for all toolkit errors."""


class PoleError(AnndynError):
    """Evaluation requested at, or too close to, a pole."""

    def __init__(self, message: str, pole: complex | None = None):
        super().__init__(message)
        self.pole = pole


class OverflowRangeError(AnndynError):
    """Result modulus exceeds float range; use the log-scale path."""


class QuadratureError(AnndynError):
    """Adaptive refinement exceeded its node budget without converging."""


class PoleOnCircleError(AnndynError):
    """A pole sits on the requested circle."""


class OutsideDomainError(AnndynError):
    """A point lies outside the domain an operation requires."""


class ConstraintViolation(AnndynError):
    """A generated radius sequence breaks one of its constraints."""

    def __init__(self, constraint: str, detail: str = ""):
        super().__init__(f"constraint violated: {constraint}" + (f" ({detail})" if detail else ""))
        self.constraint = constraint


class PullbackError(AnndynError):
    """Newton pullback found no root inside the required annulus."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class AsymptoticUnavailableError(AnndynError):
    """Extrapolation was required but the fitted growth model is unreliable."""
