import random
from decimal import ROUND_HALF_EVEN, Decimal

import pytest

from finpot.grading import AggregationError, MatchConfig, accuracy, compare_answers, gold_precision, grade, parse_number

WORDS = ["yes", "no", "Increase", "decrease", "net revenue", "N/A"]


def _oracle_decimals(gold: float) -> int:
    exponent = Decimal(repr(gold)).as_tuple().exponent
    return max(0, -exponent)


def oracle(predicted, gold, cfg: MatchConfig) -> bool:
    """Same matching rule, written with exact decimal arithmetic."""
    if isinstance(predicted, str) or isinstance(gold, str):
        if isinstance(predicted, str) and isinstance(gold, str):
            return predicted.lower().split() == gold.lower().split()
        return False
    candidates = [predicted]
    if cfg.percent_scale_equivalence:
        candidates += [predicted * 100, predicted / 100]
    quantum = Decimal(1).scaleb(-_oracle_decimals(gold))
    threshold = max(Decimal(cfg.abs_tol), Decimal(cfg.rel_tol) * abs(Decimal(gold)))
    for candidate in candidates:
        value = Decimal(candidate)
        if cfg.gold_precision_rounding:
            value = value.quantize(quantum, rounding=ROUND_HALF_EVEN)
        if abs(value - Decimal(gold)) <= threshold:
            return True
    return False


def _near_boundary(predicted, gold, cfg: MatchConfig) -> bool:
    """Whether float and exact arithmetic may disagree for this pair."""
    if isinstance(predicted, str) or isinstance(gold, str):
        return False
    threshold = max(Decimal(cfg.abs_tol), Decimal(cfg.rel_tol) * abs(Decimal(gold)))
    quantum = Decimal(1).scaleb(-_oracle_decimals(gold))
    margin = Decimal("1e-9") * max(Decimal(1), abs(Decimal(gold)))
    for candidate in (predicted, predicted * 100, predicted / 100):
        value = Decimal(candidate)
        for v in (value, value.quantize(quantum, rounding=ROUND_HALF_EVEN)):
            if abs(abs(v - Decimal(gold)) - threshold) <= margin:
                return True
            if abs(v - v.quantize(quantum)) == quantum / 2:
                return True
    return False


def _generate_pair(rng: random.Random):
    kind = rng.random()
    if kind < 0.1:
        a = rng.choice(WORDS)
        b = rng.choice([a, a.upper(), f"  {a} ", rng.choice(WORDS)])
        return a, b
    if kind < 0.15:
        return rng.choice(WORDS), round(rng.uniform(-1000, 1000), 2)
    gold = round(rng.uniform(0.01, 1e6) * rng.choice([1, -1]), rng.randint(0, 5))
    if gold == 0:
        gold = 1.0
    eps = rng.choice([0, 1e-4, 1e-3, 4.9e-3, 5.1e-3, 1e-2, 0.1, 0.5]) * rng.choice([1, -1])
    scale = rng.choice([1, 1, 1, 100, 0.01])
    return gold * scale * (1 + eps), gold


class TestOracleAgreement:
    def test_ten_thousand_pairs(self):
        rng = random.Random(20240601)
        configs = [MatchConfig(), MatchConfig(percent_scale_equivalence=False), MatchConfig(rel_tol=0.01)]
        checked = 0
        while checked < 10_000:
            predicted, gold = _generate_pair(rng)
            cfg = configs[checked % len(configs)]
            if _near_boundary(predicted, gold, cfg):
                continue
            assert compare_answers(predicted, gold, cfg) == oracle(predicted, gold, cfg), (predicted, gold, cfg)
            checked += 1


class TestWorkedExamples:
    def test_integer_gold(self):
        assert compare_answers(37.0, 37)

    def test_negative(self):
        assert compare_answers(-117.0, -117.0)

    def test_percent_scale(self):
        verdict = grade(25.57938, 0.25579)
        assert verdict.match
        assert verdict.scale == "div_100"

    def test_percent_scale_off(self):
        assert not compare_answers(25.57938, 0.25579, MatchConfig(percent_scale_equivalence=False))

    def test_prose_against_missing(self):
        assert not compare_answers("To answer this question we need the table.", None)

    def test_zero_and_one(self):
        assert not compare_answers(0, 1)

    def test_gold_precision_rounding(self):
        assert compare_answers(-0.0573529, -0.05735)
        assert grade(-0.0573529, -0.05735).scale == "exact"


class TestParsing:
    @pytest.mark.parametrize(
        ("value", "expected"),
        [("$1,234.50", 1234.5), (" 12% ", 12.0), (3, 3.0), ("abc", None), (True, None), (float("nan"), None)],
    )
    def test_parse_number(self, value, expected):
        assert parse_number(value) == expected

    def test_mixed_types_parse_strings(self):
        assert compare_answers("37", 37.0)
        assert not compare_answers("yes", 1)

    def test_strings_normalize_case_and_spaces(self):
        assert compare_answers("  Net   Revenue ", "net revenue")

    @pytest.mark.parametrize(("gold", "decimals"), [(37, 0), (0.25579, 5), ("12.50", 2), (37.0, 1), ("n/a", 0)])
    def test_gold_precision(self, gold, decimals):
        assert gold_precision(gold) == decimals


class TestProperties:
    @pytest.mark.parametrize("value", [0.0, 1.5, -117.0, 1e9, 3, "yes", "Net Revenue", 10**400, -(10**400), "1e400"])
    def test_reflexive(self, value):
        assert compare_answers(value, value)

    def test_tolerance_monotone(self):
        rng = random.Random(7)
        for _ in range(500):
            gold = round(rng.uniform(-1e4, 1e4), rng.randint(0, 4)) or 1.0
            predicted = gold * (1 + rng.uniform(-0.02, 0.02))
            tight = MatchConfig(rel_tol=0.001, abs_tol=1e-6)
            loose = MatchConfig(rel_tol=0.01, abs_tol=1e-3)
            if compare_answers(predicted, gold, tight):
                assert compare_answers(predicted, gold, loose)

    def test_values_beyond_float_range(self):
        huge = 10**400
        assert parse_number(huge) is None
        assert compare_answers(huge, "1e400")
        assert compare_answers(huge + 1, huge)
        assert not compare_answers(2 * huge, huge)
        assert not compare_answers(huge, 37.0)
        assert grade(huge * 100, huge).scale == "div_100"
        exact = MatchConfig(rel_tol=0, abs_tol=0)
        assert compare_answers(huge, huge, exact)
        assert not compare_answers(huge + 1, huge, exact)

    def test_negative_tolerance_rejected(self):
        with pytest.raises(ValueError):
            MatchConfig(rel_tol=-1)


class TestAccuracy:
    def test_three_of_four(self):
        assert accuracy([True, True, True, False]) == 75.0

    def test_all_true(self):
        assert accuracy([True] * 9) == 100.0

    def test_table_cell_arithmetic(self):
        assert accuracy([True] * 322 + [False] * 99) == 76.48

    def test_empty(self):
        with pytest.raises(AggregationError):
            accuracy([])
