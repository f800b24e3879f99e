"""Sandbox child process.

Run as ``python -I _child.py`` with a JSON payload on stdin. Prints one JSON
result line on stdout. Imports nothing outside the standard library.
"""

import builtins
import contextlib
import io
import json
import math
import os
import resource
import sys
import traceback
from decimal import Decimal
from fractions import Fraction

ALLOWED_MODULES = frozenset(
    {
        "math",
        "statistics",
        "decimal",
        "fractions",
        "datetime",
        "re",
        "itertools",
        "functools",
        "collections",
        "operator",
    }
)

SAFE_BUILTINS = (
    "abs", "all", "any", "bool", "dict", "divmod", "enumerate", "filter", "float",
    "format", "frozenset", "int", "isinstance",
    "iter", "len", "list", "map", "max", "min", "next", "pow", "print", "range",
    "repr", "reversed", "round", "set", "slice", "sorted", "str", "sum", "tuple",
    "zip", "Exception", "ArithmeticError",
    "AssertionError", "AttributeError", "IndexError", "KeyError", "LookupError",
    "NameError", "OverflowError", "StopIteration", "TypeError", "ValueError",
    "ZeroDivisionError", "__build_class__",
)

DENIED_EVENTS = (
    "socket.",
    "subprocess.",
    "os.system",
    "os.exec",
    "os.posix_spawn",
    "os.spawn",
    "os.fork",
    "os.forkpty",
    "os.kill",
    "pty.",
    "ctypes.",
    "sys._getframe",
)

PATH_EVENTS = {"os.remove", "os.rename", "os.rmdir", "os.mkdir", "os.chmod", "os.truncate", "shutil.rmtree"}


def _inside(path: object, scratch: str) -> bool:
    if isinstance(path, int):
        return True
    try:
        real = os.path.realpath(os.fsdecode(path))
    except (TypeError, ValueError):
        return False
    return real == scratch or real.startswith(scratch + os.sep)


def _install_audit_hook(scratch: str) -> None:
    def hook(event: str, args: tuple) -> None:
        if event.startswith(DENIED_EVENTS):
            raise PermissionError(f"sandbox: {event} is not allowed")
        if event == "open":
            path, mode, flags = args
            writing = (mode and any(c in str(mode) for c in "wax+")) or (
                isinstance(flags, int) and flags & (os.O_WRONLY | os.O_RDWR | os.O_CREAT)
            )
            if writing and not _inside(path, scratch):
                raise PermissionError(f"sandbox: writing {path!r} is not allowed")
        elif event in PATH_EVENTS and args and not _inside(args[0], scratch):
            raise PermissionError(f"sandbox: {event} outside the scratch directory")

    sys.addaudithook(hook)


def _set_limits(memory: int, cpu_seconds: int, file_size: int) -> None:
    for limit, value in (
        (resource.RLIMIT_AS, memory),
        (resource.RLIMIT_CPU, cpu_seconds),
        (resource.RLIMIT_FSIZE, file_size),
        (resource.RLIMIT_NPROC, 0),
    ):
        try:
            resource.setrlimit(limit, (value, value))
        except (ValueError, OSError):
            pass


def _restricted_import(name, globals=None, locals=None, fromlist=(), level=0):
    if level != 0 or name.split(".")[0] not in ALLOWED_MODULES:
        raise ImportError(f"sandbox: import of {name!r} is not allowed")
    return builtins.__import__(name, globals, locals, fromlist, level)


def _jsonable(value: object, depth: int = 0) -> object:
    if value is None or isinstance(value, bool | int | str):
        return value
    if isinstance(value, float):
        return value if math.isfinite(value) else repr(value)
    if isinstance(value, Decimal | Fraction):
        return float(value)
    if depth < 4 and isinstance(value, list | tuple | set | frozenset):
        return [_jsonable(v, depth + 1) for v in value]
    if depth < 4 and isinstance(value, dict):
        return {str(k): _jsonable(v, depth + 1) for k, v in value.items()}
    return repr(value)


def main() -> None:
    payload = json.loads(sys.stdin.read())
    scratch = os.path.realpath(payload["scratch"])
    os.chdir(scratch)

    for module in ALLOWED_MODULES:
        __import__(module)

    safe = {name: getattr(builtins, name) for name in SAFE_BUILTINS}
    safe["__import__"] = _restricted_import
    namespace: dict = {"__builtins__": safe, "__name__": "__main__"}

    _set_limits(payload["memory"], payload["cpu_seconds"], payload["max_file_size"])
    _install_audit_hook(scratch)

    real_stdout = sys.stdout
    captured = io.StringIO()
    result: dict
    try:
        code = compile(payload["program"], "<program>", "exec")
        with contextlib.redirect_stdout(captured):
            exec(code, namespace)
    except BaseException as e:
        lines = traceback.format_exception_only(type(e), e)
        result = {"status": "runtime_error", "diagnostics": "".join(lines).strip()}
    else:
        if namespace.get("ans") is None:
            result = {"status": "missing_answer", "diagnostics": 'variable "ans" is not bound'}
        else:
            result = {"status": "ok", "answer": _jsonable(namespace["ans"]), "diagnostics": ""}
    real_stdout.write(json.dumps(result) + "\n")
    real_stdout.flush()


if __name__ == "__main__":
    main()
