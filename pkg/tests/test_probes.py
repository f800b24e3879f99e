import random

import pytest

from finpot.llm import BackendProfile, LLMClient, ScriptedProvider, judge_responder, make_student_responder, question_key
from finpot.probes import (
    ConceptProbeItem,
    EntityProbeItem,
    JudgeVerdict,
    ProbeInputError,
    RatingHistogram,
    TargetMetrics,
    VerdictParseError,
    build_eval_report,
    check_probe_inputs,
    concept_accuracy,
    entity_accuracy,
    executable_rate,
    parse_concept_verdict,
    parse_entity_verdict,
    rating_distribution,
    run_concept_probe,
    run_entity_probe,
    student_code,
)
from finpot.prompts import build_entity_probe_prompt, build_finetune_prompt
from finpot.sandbox import ExecutionResult

CONCEPT_RESPONSES = [
    ("{'Explanation': 'Same formula.', 'Star rating': [5]}", 5),
    ("{'Explanation': ['Step 1: gold averages. Step 2: student sums.'], 'Star rating': [2]}", 2),
    ('{"Explanation": "Close.", "Star rating": 4}', 4),
    ("Here is my assessment:\n{'Explanation': 'Partial.', 'Star rating': [3]}\nThanks.", 3),
    ("{'Star rating': [1], 'Explanation': 'Unrelated.'}", 1),
    ("Explanation: the code matches.\nStar rating: 5", 5),
    ("'Explanation': 'ok', 'Star rating': [4]", 4),
    ("Star rating = 2", 2),
    ("star rating: [3] because the concept is partially right", 3),
    ("{'Explanation': 'Perfect.', 'Star rating': [5]} trailing text", 5),
]
MALFORMED_CONCEPT = [
    "{'Explanation': 'Too good.', 'Star rating': [6]}",
    "{'Explanation': 'Nothing.', 'Star rating': [0]}",
    "I would give it five stars.",
    "",
]
ENTITY_RESPONSES = [
    ("The values match.\nVerdict: CORRECT", True),
    ("The 2009 value is wrong.\nVerdict: INCORRECT", False),
    ("Checked.\n**Verdict: CORRECT**", True),
    ("verdict: incorrect", False),
]
MALFORMED_ENTITY = ["The student is correct.", "Verdict CORRECT"]


class TestParsing:
    @pytest.mark.parametrize(("response", "rating"), CONCEPT_RESPONSES)
    def test_concept(self, response, rating):
        verdict = parse_concept_verdict(response, "r1")
        assert verdict.rating == rating
        assert verdict.kind == "concept"
        assert verdict.record_id == "r1"
        assert verdict.raw_response == response

    @pytest.mark.parametrize("response", MALFORMED_CONCEPT)
    def test_concept_malformed(self, response):
        with pytest.raises(VerdictParseError) as excinfo:
            parse_concept_verdict(response)
        assert excinfo.value.raw_response == response

    @pytest.mark.parametrize(("response", "correct"), ENTITY_RESPONSES)
    def test_entity(self, response, correct):
        assert parse_entity_verdict(response).correct is correct

    @pytest.mark.parametrize("response", MALFORMED_ENTITY)
    def test_entity_malformed(self, response):
        with pytest.raises(VerdictParseError):
            parse_entity_verdict(response)

    def test_last_verdict_line_wins(self):
        assert parse_entity_verdict("Verdict: CORRECT\nOn reflection:\nVerdict: INCORRECT").correct is False

    def test_explanation_kept(self):
        verdict = parse_concept_verdict("{'Explanation': 'Same formula.', 'Star rating': [5]}")
        assert verdict.explanation == "Same formula."


def _concept(rating: int) -> JudgeVerdict:
    return JudgeVerdict(kind="concept", rating=rating)


def _ratings(counts: list[int]) -> list[JudgeVerdict]:
    return [_concept(level) for level, n in zip(range(1, 6), counts, strict=True) for _ in range(n)]


class TestAggregation:
    def test_base_distribution(self):
        verdicts = _ratings([1143, 599, 647, 491, 1120])
        assert concept_accuracy(verdicts) == 28.0
        histogram = rating_distribution(verdicts)
        assert histogram.counts == (1143, 599, 647, 491, 1120)
        assert histogram.percents == pytest.approx((28.6, 15.0, 16.2, 12.3, 28.0))
        assert sum(histogram.percents) == pytest.approx(100, abs=0.1 + 1e-9)

    def test_fine_tuned_distribution(self):
        verdicts = _ratings([263, 243, 251, 163, 3080])
        assert concept_accuracy(verdicts) == 77.0
        histogram = rating_distribution(verdicts)
        assert histogram[5] == pytest.approx(77.0)
        assert sum(histogram.percents) == pytest.approx(100, abs=0.1 + 1e-9)

    def test_thirds_sum_to_hundred(self):
        histogram = rating_distribution(_ratings([1, 1, 1, 0, 0]))
        assert sum(histogram.percents) == pytest.approx(100, abs=0.1 + 1e-9)
        assert histogram.total == 3

    @pytest.mark.parametrize("ratings", [(5, 1, 1), (5, 4, 3, 2, 1, 1, 2), (5, 5, 1), (5,) * 2 + (3,) * 5])
    def test_concept_accuracy_matches_top_level(self, ratings):
        verdicts = [_concept(r) for r in ratings]
        assert concept_accuracy(verdicts) == rating_distribution(verdicts)[5]

    @pytest.mark.parametrize("seed", range(50))
    def test_random_histograms(self, seed):
        rng = random.Random(seed)
        verdicts = [_concept(rng.randint(1, 5)) for _ in range(rng.randint(1, 40))]
        histogram = rating_distribution(verdicts)
        assert concept_accuracy(verdicts) == histogram[5]
        assert sum(histogram.percents) == pytest.approx(100, abs=0.1 + 1e-9)
        assert all(p >= 0 for p in histogram.percents)

    def test_entity_accuracy(self):
        verdicts = [JudgeVerdict(kind="entity", correct=c) for c in (True, True, False, True)]
        assert entity_accuracy(verdicts) == 75.0

    def test_executable_rate(self):
        results = [ExecutionResult(status="ok")] * 9 + [ExecutionResult(status="runtime_error")]
        assert executable_rate(results) == 90.0
        results = [ExecutionResult(status="ok")] * 5673 + [ExecutionResult(status="timeout")] * 4327
        assert executable_rate(results) == 56.73

    def test_empty_inputs(self):
        with pytest.raises(ProbeInputError):
            concept_accuracy([])
        with pytest.raises(ProbeInputError):
            executable_rate([])

    def test_mixed_kinds(self):
        with pytest.raises(ProbeInputError):
            concept_accuracy([_concept(5), JudgeVerdict(kind="entity", correct=True)])

    def test_invalid_verdicts(self):
        with pytest.raises(ValueError):
            JudgeVerdict(kind="concept", rating=7)
        with pytest.raises(ValueError):
            JudgeVerdict(kind="entity")

    def test_histogram_roundtrip(self):
        histogram = RatingHistogram(percents=(10.0, 20.0, 30.0, 20.0, 20.0), counts=(1, 2, 3, 2, 2))
        assert RatingHistogram.from_dict(histogram.to_dict()) == histogram


class TestReport:
    def _row(self, **kw) -> TargetMetrics:
        values = dict(
            model="phi-3-mini", target="zero_shot", split="test", dataset="finqa",
            samples=10, answer_accuracy=50.0, executable_rate=90.0,
        )
        values.update(kw)
        return TargetMetrics(**values)

    def test_rows_sorted_and_fingerprinted(self):
        report = build_eval_report(
            [self._row(target="few_shot"), self._row(target="epoch-0")], {"seed": 0}
        )
        assert [r.target for r in report.rows] == sorted(r.target for r in report.rows)
        assert report.fingerprint == build_eval_report([], {"seed": 0}).fingerprint
        assert report.fingerprint != build_eval_report([], {"seed": 1}).fingerprint

    def test_out_of_range(self):
        with pytest.raises(ProbeInputError):
            build_eval_report([self._row(answer_accuracy=101.0)], {})

    def test_duplicate_rows(self):
        with pytest.raises(ProbeInputError):
            build_eval_report([self._row(), self._row()], {})


def test_probe_input_check():
    check_probe_inputs(["a", "b"], ["a", "b", "c"])
    with pytest.raises(ProbeInputError):
        check_probe_inputs(["a", "z"], ["a"])


def test_student_code():
    assert student_code("x = 1\nans = x\n###EndPython") == "x = 1\nans = x"
    assert student_code("  ") == ""


def _mock_client(responder) -> LLMClient:
    provider = ScriptedProvider(fallback=responder)
    client = LLMClient()
    for model_id in ("judge", "student@finqa/epoch-1"):
        client.register(BackendProfile(model_id=model_id, provider="scripted"), provider)
    return client


async def test_concept_probe(credit_spread_program):
    client = _mock_client(judge_responder)
    items = [
        ConceptProbeItem("b", "Q?", credit_spread_program, "The answer is 37."),
        ConceptProbeItem("a", "Q?", credit_spread_program, credit_spread_program + "\n###EndPython"),
    ]
    outcome = await run_concept_probe(client, "judge", items)
    assert [v.record_id for v in outcome.verdicts] == ["a", "b"]
    assert [v.rating for v in outcome.verdicts] == [5, 1]
    assert outcome.failures == ()


async def test_concept_probe_keeps_parse_failures(credit_spread_program):
    client = _mock_client(lambda request: "no rating here")
    outcome = await run_concept_probe(client, "judge", [ConceptProbeItem("a", "Q?", credit_spread_program, "x")])
    assert outcome.verdicts == ()
    [failure] = outcome.failures
    assert failure.raw_response == "no rating here"
    assert failure.kind == "concept"


async def test_entity_probe(credit_spread_record, credit_spread_program):
    student = make_student_responder({question_key(credit_spread_record.question): credit_spread_program})
    seen = []

    def respond(request):
        seen.append(request.prompt)
        return judge_responder(request) if request.prompt.kind == "entity_judge" else student(request)

    outcome = await run_entity_probe(
        _mock_client(respond),
        "student@finqa/epoch-1",
        "judge",
        [EntityProbeItem(credit_spread_record, credit_spread_program)],
    )
    probe_prompt = next(p for p in seen if p.kind == "entity_probe")
    assert probe_prompt.text == (
        build_finetune_prompt(credit_spread_record).text
        + "\n#Calculate: avg_crdt_spr = (crdt_spr_2010 + crdt_spr_2009) / 2"
    )
    assert probe_prompt == build_entity_probe_prompt(credit_spread_record, credit_spread_program)
    [verdict] = outcome.verdicts
    assert verdict.kind == "entity"
    assert set(outcome.student_outputs) == {"credit-spread"}


async def test_empty_probe():
    with pytest.raises(ProbeInputError):
        await run_concept_probe(LLMClient(), "judge", [])
