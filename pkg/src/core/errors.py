"""
Error types raised by the simulation engine
"""

from typing import Iterable, List, Optional


class DenseCodingError(Exception):
    """Base class for every engine error"""


class ValidationError(DenseCodingError, ValueError):
    """Input or precondition violation; carries every message found"""

    def __init__(self, errors: Iterable[str]):
        if isinstance(errors, str):
            errors = [errors]
        self.errors: List[str] = list(errors)
        super().__init__("; ".join(self.errors))


class BracketError(DenseCodingError):
    """Root finder could not bracket or converge"""


class DegenerateEstimateError(DenseCodingError):
    """Estimator input has zero residual variance"""


class SimulationError(DenseCodingError):
    """Trial generation failed (e.g. the trial arrays cannot be allocated)"""


class ToleranceExceeded(DenseCodingError):
    """Estimate-vs-analytic gap is larger than the requested tolerance"""

    def __init__(self, gap: float, tolerance: float, message: Optional[str] = None):
        self.gap = gap
        self.tolerance = tolerance
        super().__init__(
            message or f"estimate gap {gap:.6g} exceeds tolerance {tolerance:.6g}"
        )
