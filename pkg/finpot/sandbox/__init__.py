"""Program extraction and sandboxed execution."""

from .errors import ExtractionError, SandboxError, SandboxLimitError
from .extract import extract_program
from .runner import CHILD_SCRIPT, SandboxPool, execute_program
from .types import MIB, ExecutionResult, ExecutionStatus, SandboxLimits, build_limits

__all__ = [
    "CHILD_SCRIPT",
    "MIB",
    "ExecutionResult",
    "ExecutionStatus",
    "ExtractionError",
    "SandboxError",
    "SandboxLimitError",
    "SandboxLimits",
    "SandboxPool",
    "build_limits",
    "execute_program",
    "extract_program",
]
