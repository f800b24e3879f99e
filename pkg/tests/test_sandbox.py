import time

import pytest

from finpot.sandbox import (
    ExecutionResult,
    ExtractionError,
    SandboxLimitError,
    SandboxLimits,
    SandboxPool,
    build_limits,
    execute_program,
    extract_program,
)


class TestExtract:
    def test_between_markers(self):
        assert extract_program("###Python\nans = 1\n###EndPython\nsome chatter") == "ans = 1"

    def test_completion_after_prompt(self):
        assert extract_program("\nx = 2\nans = x\n###EndPython") == "x = 2\nans = x"

    def test_spaced_close_marker(self):
        assert extract_program("ans = 2\n###End Python") == "ans = 2"

    def test_fenced_block(self):
        assert extract_program("Here you go:\n```python\nans = 3\n```\nDone.") == "ans = 3"

    def test_plain_text(self):
        assert extract_program("  ans = 4  ") == "ans = 4"

    @pytest.mark.parametrize("text", ["", "   \n", "###Python\n###EndPython"])
    def test_nothing_to_extract(self, text):
        with pytest.raises(ExtractionError):
            extract_program(text)


class TestLimits:
    def test_defaults(self):
        limits = build_limits()
        assert limits.timeout == 10.0
        assert limits.max_workers == 4

    @pytest.mark.parametrize("values", [{"timeout": 0}, {"memory": -1}, {"cpu": 3}])
    def test_invalid(self, values):
        with pytest.raises(SandboxLimitError):
            build_limits(values)


async def test_credit_spread_program(credit_spread_program):
    result = await execute_program(credit_spread_program)
    assert result.status == "ok"
    assert result.answer == 37.0


async def test_adversarial_programs(tmp_path):
    escape = tmp_path / "escape.txt"
    programs = {
        "p01-ok": "ans = 1 + 1",
        "p02-ok-float": "x = 10\nans = x / 4",
        "p03-loop": "while True:\n    pass",
        "p04-open-outside": f"open({str(escape)!r}, 'w').write('x')\nans = 1",
        "p05-os-system": f"import os\nos.system('touch {escape}')\nans = 1",
        "p06-socket": "import socket\nsocket.create_connection(('example.com', 80))\nans = 1",
        "p07-subprocess": "import subprocess\nsubprocess.run(['ls'])\nans = 1",
        "p08-no-ans": "x = 1",
        "p09-ans-none": "ans = None",
        "p10-raise": "raise ValueError('boom')",
        "p11-zero-division": "ans = 1 / 0",
        "p12-recursion": "def f():\n    return f()\nans = f()",
        "p13-memory": "ans = [0] * (10 ** 10)",
        "p14-math": "import math\nans = math.sqrt(16)",
        "p15-string": "ans = 'yes'",
        "p16-percent-change": "ans = (1923 - 2040) / 2040",
        "p17-dunder-import": "__import__('os').remove('/etc/hostname')\nans = 1",
        "p18-eval": "ans = eval('1 + 1')",
        "p19-syntax": "ans = (1 +",
        "p20-print": "print('hello')\nans = 3",
    }
    expected = {
        "p01-ok": ("ok", 2),
        "p02-ok-float": ("ok", 2.5),
        "p03-loop": ("timeout", None),
        "p04-open-outside": ("runtime_error", None),
        "p05-os-system": ("runtime_error", None),
        "p06-socket": ("runtime_error", None),
        "p07-subprocess": ("runtime_error", None),
        "p08-no-ans": ("missing_answer", None),
        "p09-ans-none": ("missing_answer", None),
        "p10-raise": ("runtime_error", None),
        "p11-zero-division": ("runtime_error", None),
        "p12-recursion": ("runtime_error", None),
        "p13-memory": ("runtime_error", None),
        "p14-math": ("ok", 4.0),
        "p15-string": ("ok", "yes"),
        "p16-percent-change": ("ok", (1923 - 2040) / 2040),
        "p17-dunder-import": ("runtime_error", None),
        "p18-eval": ("runtime_error", None),
        "p19-syntax": ("runtime_error", None),
        "p20-print": ("ok", 3),
    }
    pool = SandboxPool(SandboxLimits(timeout=1.0, max_workers=4))
    results = await pool.run_many(programs)

    assert list(results) == sorted(programs)
    assert {k: (r.status, r.answer) for k, r in results.items()} == expected
    assert "ValueError: boom" in results["p10-raise"].diagnostics
    assert "ZeroDivisionError" in results["p11-zero-division"].diagnostics
    assert not escape.exists()


async def test_timeout_fires_within_limit():
    started = time.monotonic()
    result = await execute_program("while True:\n    pass", SandboxLimits(timeout=1.0))
    assert result.status == "timeout"
    assert time.monotonic() - started < 2.0


async def test_allowed_module_import():
    program = "import re\nans = len(re.findall('a', 'banana'))"
    result = await execute_program(program)
    assert result.ok
    assert result.answer == 3


def test_persisted_form_leaves_out_duration():
    result = ExecutionResult(status="ok", answer=1, duration=0.25)
    assert "duration" not in result.to_dict()
    assert result.to_dict(timing=True)["duration"] == 0.25
    assert ExecutionResult.from_dict(result.to_dict()).answer == 1
