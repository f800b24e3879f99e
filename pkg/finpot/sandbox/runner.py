"""Subprocess execution of generated programs."""

import asyncio
import json
import logging
import math
import os
import signal
import sys
import tempfile
import time
from collections.abc import Mapping
from pathlib import Path

from .types import ExecutionResult, SandboxLimits

logger = logging.getLogger(__name__)

CHILD_SCRIPT = Path(__file__).with_name("_child.py")
_DIAGNOSTICS_LIMIT = 2000


def _kill_group(process: asyncio.subprocess.Process) -> None:
    try:
        os.killpg(process.pid, signal.SIGKILL)
    except (ProcessLookupError, PermissionError):
        if process.returncode is None:
            process.kill()


def _parse_child_output(
    stdout: bytes, stderr: bytes, returncode: int | None, duration: float
) -> ExecutionResult:
    lines = stdout.decode("utf-8", errors="replace").strip().splitlines()
    if lines:
        try:
            data = json.loads(lines[-1])
            return ExecutionResult(
                status=data["status"],
                answer=data.get("answer"),
                diagnostics=data.get("diagnostics", "")[:_DIAGNOSTICS_LIMIT],
                duration=duration,
            )
        except (json.JSONDecodeError, KeyError, TypeError):
            pass
    message = stderr.decode("utf-8", errors="replace").strip()
    if returncode is not None and returncode < 0:
        message = f"terminated by signal {-returncode}. {message}".strip()
    return ExecutionResult(
        status="runtime_error",
        diagnostics=(message or f"exit code {returncode}")[:_DIAGNOSTICS_LIMIT],
        duration=duration,
    )


async def execute_program(program: str, limits: SandboxLimits | None = None) -> ExecutionResult:
    """Run a program in a fresh isolated interpreter.

    The child runs in a private scratch directory with address-space, CPU,
    file-size and process limits, no network and restricted builtins. The
    value bound to ``ans`` is returned.

    Args:
        program: Program source
        limits: Execution limits

    Returns:
        Execution result; program failures are statuses, never exceptions
    """
    limits = limits or SandboxLimits()
    start = time.perf_counter()
    with tempfile.TemporaryDirectory(prefix="finpot-sandbox-") as scratch:
        payload = json.dumps(
            {
                "program": program,
                "scratch": scratch,
                "memory": limits.memory,
                "cpu_seconds": math.ceil(limits.timeout) + 1,
                "max_file_size": limits.max_file_size,
            }
        ).encode("utf-8")
        process = await asyncio.create_subprocess_exec(
            sys.executable,
            "-I",
            str(CHILD_SCRIPT),
            stdin=asyncio.subprocess.PIPE,
            stdout=asyncio.subprocess.PIPE,
            stderr=asyncio.subprocess.PIPE,
            cwd=scratch,
            env={"PATH": os.defpath, "HOME": scratch, "TMPDIR": scratch},
            start_new_session=True,
        )
        try:
            stdout, stderr = await asyncio.wait_for(process.communicate(payload), timeout=limits.timeout)
        except TimeoutError:
            _kill_group(process)
            await process.wait()
            duration = time.perf_counter() - start
            logger.debug("Program timed out after %.2fs", duration)
            return ExecutionResult(
                status="timeout",
                diagnostics=f"execution exceeded {limits.timeout:g}s",
                duration=duration,
            )
        return _parse_child_output(stdout, stderr, process.returncode, time.perf_counter() - start)


class SandboxPool:
    """Bounded pool of concurrent sandbox executions."""

    def __init__(self, limits: SandboxLimits | None = None) -> None:
        """Initialize the pool.

        Args:
            limits: Limits applied to every execution; ``max_workers`` bounds
                concurrency
        """
        self.limits = limits or SandboxLimits()
        self._semaphore: asyncio.Semaphore | None = None

    def _bound(self) -> asyncio.Semaphore:
        if self._semaphore is None:
            self._semaphore = asyncio.Semaphore(self.limits.max_workers)
        return self._semaphore

    async def run(self, program: str) -> ExecutionResult:
        """Execute one program within the pool bound."""
        async with self._bound():
            return await execute_program(program, self.limits)

    async def run_many(self, programs: Mapping[str, str]) -> dict[str, ExecutionResult]:
        """Execute programs keyed by record id.

        Returns:
            Results keyed by record id, in sorted id order
        """
        ids = sorted(programs)
        results = await asyncio.gather(*(self.run(programs[i]) for i in ids))
        timeouts = sum(1 for r in results if r.status == "timeout")
        if timeouts:
            logger.info("%d of %d programs timed out", timeouts, len(ids))
        return dict(zip(ids, results, strict=True))
