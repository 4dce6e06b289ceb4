"""Exception and violation types shared across the package."""
from __future__ import annotations

from dataclasses import dataclass, field


class DesignError(ValueError):
    """Raised when an operation's precondition or a requested construction fails.

    ``code`` is a short machine-readable tag such as ``"B-RANGE"``,
    ``"S-RANGE"`` or ``"INFEASIBLE"``.
    """

    def __init__(self, code: str, message: str = ""):
        self.code = code
        self.message = message
        super().__init__(f"{code}: {message}" if message else code)


@dataclass(frozen=True)
class Violation:
    """First failed predicate of a verification, returned as data.

    Verifiers return a ``Violation`` instead of raising, so callers can
    branch on ``isinstance(result, Violation)``.
    """

    code: str
    message: str
    indices: tuple = ()
    magnitude: float = 0.0
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return False
