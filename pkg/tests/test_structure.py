import pytest

from finpot.structure import StructureError, first_concept_line, is_concept_line, parse_segments


def test_credit_spread_segments(credit_spread_program):
    segments = parse_segments(credit_spread_program)
    assert segments.concept_line == "#Calculate: avg_crdt_spr = (crdt_spr_2010 + crdt_spr_2009) / 2"
    assert segments.entities == [("crdt_spr_2009", "39"), ("crdt_spr_2010", "35")]
    assert segments.remaining_lines == (
        "avg_crdt_spr = (crdt_spr_2010 + crdt_spr_2009) / 2",
        "ans = avg_crdt_spr",
    )
    assert segments.answer_assignment_present


def test_lines_reassemble_program(credit_spread_program):
    assert parse_segments(credit_spread_program).lines() == credit_spread_program.splitlines()


@pytest.mark.parametrize(
    "program",
    [
        "x = 1\n#Calculate: y = x\ny = 2\nans = y",
        "import math\n\nbase = 2\n#Calculate: r = math.log(v, base)\nv = 8\n\nr = math.log(v, base)\nans = r\n",
        "x = 3\nans = x * 2",
    ],
)
def test_lines_keep_program_order(program):
    segments = parse_segments(program)
    assert segments.lines() == [line for line in program.splitlines() if line.strip()]


def test_lines_before_concept_are_leading():
    segments = parse_segments("x = 1\n#Calculate: y = x\ny = 2\nans = y")
    assert segments.leading_lines == ("x = 1",)
    assert segments.entities == [("y", "2")]
    assert segments.remaining_lines == ("ans = y",)


def test_no_concept_line():
    segments = parse_segments("x = 3\nans = x * 2")
    assert segments.concept_line is None
    assert segments.entity_assignments == ()
    assert segments.remaining_lines == ("x = 3", "ans = x * 2")
    assert segments.answer_assignment_present


def test_prose_never_raises():
    segments = parse_segments("The answer is 37.")
    assert segments.concept_line is None
    assert not segments.answer_assignment_present


def test_first_matching_concept_line_only():
    program = "#Calculate: a = b + c\n#Calculate: d = e\nb = 1\nc = 2\nans = b + c"
    segments = parse_segments(program)
    assert segments.concept_line == "#Calculate: a = b + c"
    assert segments.entity_assignments == ()


def test_entities_stop_at_first_computation():
    program = "#Calculate: r = a / b\na = -4.5\nb = 1,\nr = a / b\nc = 3\nans = r"
    segments = parse_segments(program)
    assert segments.entities == [("a", "-4.5")]


def test_blank_lines_between_entities():
    segments = parse_segments("# Calculate: t = a + b\n\na = 1\n\nb = 2\nans = a + b")
    assert segments.entities == [("a", "1"), ("b", "2")]


def test_comparison_is_not_an_answer():
    assert not parse_segments("ans == 3").answer_assignment_present


@pytest.mark.parametrize(
    ("line", "expected"),
    [("#Calculate: x = y", True), ("  # Calculate : x", True), ("# calculate x", False), ("x = 1", False)],
)
def test_is_concept_line(line, expected):
    assert is_concept_line(line) is expected


def test_first_concept_line(credit_spread_program):
    assert first_concept_line("\n" + credit_spread_program).startswith("#Calculate: avg_crdt_spr")
    with pytest.raises(StructureError):
        first_concept_line("x = 1\n#Calculate: y = x")
