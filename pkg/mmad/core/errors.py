"""
Exception hierarchy. Every error knows the process exit code the CLI
reports for it.
"""
from typing import Any, List, Optional


class MMADError(Exception):
    """Base error with an exit code and a human-readable detail."""

    exit_code = 1

    def __init__(self, detail: str, **context: Any):
        super().__init__(detail)
        self.detail = detail
        self.context = context

    def to_line(self) -> str:
        """One-line, machine-parsable rendering for stderr."""
        detail = self.detail.replace('"', "'").replace("\n", " ")
        return f'error code={self.exit_code} kind={type(self).__name__} detail="{detail}"'


class InvalidArgumentError(MMADError, ValueError):
    exit_code = 1


class ConfigError(MMADError):
    exit_code = 1


class DegenerateElementError(MMADError):
    exit_code = 1


class SolverError(MMADError):
    exit_code = 2

    def __init__(self, detail: str, residual_history: Optional[List[float]] = None, **context: Any):
        super().__init__(detail, **context)
        self.residual_history = list(residual_history or [])


class VerificationError(MMADError):
    exit_code = 3
