"""
Exception types raised by the instruction sequence toolkit
"""

from typing import Optional


class TermSyntaxError(ValueError):
    """Raised when term text does not conform to the grammar"""

    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class UnknownInstructionError(ValueError):
    """Raised for a basic instruction outside the configured alphabet"""


class RepetitionError(ValueError):
    """Raised when an operation needs a repetition-free term"""


class AlphabetError(ValueError):
    """Raised when a Boolean register operation meets another alphabet"""


class StepBudgetExceeded(RuntimeError):
    """Raised when third canonicalization fails to terminate within its budget"""


class CompletenessViolation(RuntimeError):
    """Raised when distinct repetition-free canonical forms are congruent"""


class TraceReplayError(RuntimeError):
    """Raised when a recorded rewrite step does not apply during replay"""
