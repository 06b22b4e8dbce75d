"""Error types shared across the package."""


class BeadshapeError(Exception):
    """Base class for everything this package raises on purpose."""


class DomainError(BeadshapeError, ValueError):
    """Input is syntactically fine but physically or numerically unusable."""


class RangeViolation:
    """One input outside its documented range."""

    __slots__ = ("field", "value", "lo", "hi")

    def __init__(self, field: str, value: float, lo: float, hi: float):
        self.field = field
        self.value = value
        self.lo = lo
        self.hi = hi

    def message(self) -> str:
        return f"{self.field}={self.value:g} outside [{self.lo:g}, {self.hi:g}]"

    def __repr__(self) -> str:  # pragma: no cover
        return f"RangeViolation({self.message()})"


class ValidationError(DomainError):
    """Strict range validation failed. Carries the individual violations."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(v.message() for v in self.violations))
