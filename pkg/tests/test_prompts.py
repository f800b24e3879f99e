from dataclasses import replace

import pytest

from finpot.prompts import (
    MARKERS,
    ChatEnvelope,
    ExemplarSet,
    ProbeConstructionError,
    PromptTemplateError,
    apply_chat_envelope,
    build_baseline_prompt,
    build_concept_judge_prompt,
    build_entity_judge_prompt,
    build_entity_probe_prompt,
    build_finetune_pair,
    build_finetune_prompt,
    build_teacher_prompt,
    envelope_completion,
    judge_question,
    load_exemplars,
    render_exemplar,
)
from finpot.structure import is_concept_line


class TestExemplars:
    @pytest.mark.parametrize("kind", ["finqa", "convfinqa", "tatqa"])
    def test_packaged_sets_have_four(self, kind):
        exemplars = load_exemplars(kind)
        assert exemplars.dataset_kind == kind
        assert len(exemplars.exemplars) == 4
        for exemplar in exemplars.exemplars:
            assert is_concept_line(exemplar.program.splitlines()[0])
            assert "ans =" in exemplar.program

    def test_unknown_kind(self):
        with pytest.raises(PromptTemplateError):
            load_exemplars("squad")


class TestTeacherPrompt:
    def test_layout(self, credit_spread_record):
        prompt = build_teacher_prompt(credit_spread_record, load_exemplars("finqa"))
        query = prompt.query
        assert prompt.kind == "teacher"
        assert query.startswith(
            "Read the following passage and then write Python code to answer the question:\n###Passage: "
        )
        assert "2010 | $ 35\n2009 | $ 39" in query
        assert f"###Question: {credit_spread_record.question}" in query
        assert (
            "Answer Hint: Strictly perform the following calculations to arrive at the answer:: "
            "add(35, 39), divide(#0, 2)"
        ) in query
        assert query.endswith("\n###Python")
        assert prompt.text.count("###EndPython") == 4

    def test_without_hint(self, credit_spread_record):
        prompt = build_teacher_prompt(credit_spread_record, load_exemplars("finqa"), include_hint=False)
        assert "Answer Hint" not in prompt.text

    def test_hint_needs_gold_program(self, credit_spread_record):
        record = replace(credit_spread_record, gold_program=None)
        with pytest.raises(PromptTemplateError):
            build_teacher_prompt(record, load_exemplars("finqa"))

    def test_exemplar_count(self, credit_spread_record):
        finqa = load_exemplars("finqa")
        short = ExemplarSet("finqa", finqa.exemplars[:3])
        with pytest.raises(PromptTemplateError):
            build_teacher_prompt(credit_spread_record, short)

    def test_exemplar_kind_mismatch(self, credit_spread_record):
        with pytest.raises(PromptTemplateError):
            build_teacher_prompt(credit_spread_record, load_exemplars("tatqa"))

    def test_convfinqa_questions(self, convfinqa_record):
        prompt = build_teacher_prompt(convfinqa_record, load_exemplars("convfinqa"))
        assert prompt.query.startswith(
            "Read the following text and table, and then answer the last question by writing a Python code:"
        )
        assert "###Questions: what was net revenue in 2009? and in 2008?" in prompt.query
        assert "###Last Question: what is the percent change?" in prompt.query


class TestStudentPrompts:
    def test_zero_shot(self, credit_spread_record):
        prompt = build_baseline_prompt(credit_spread_record, "zero_shot")
        assert 'strictly store the answer to the python variable "ans"' in prompt.text
        assert prompt.text.endswith("###Python")
        assert "Answer Hint" not in prompt.text

    def test_few_shot_needs_exemplars(self, credit_spread_record):
        with pytest.raises(PromptTemplateError):
            build_baseline_prompt(credit_spread_record, "few_shot")
        prompt = build_baseline_prompt(credit_spread_record, "few_shot", load_exemplars("finqa"))
        assert prompt.query.endswith("###Python")
        assert prompt.query_offset > 0

    @pytest.mark.parametrize(
        ("kind", "header"),
        [
            ("finqa", "Read the following passage and then write python code to answer the question\n"),
            ("convfinqa", "Read the following text and table, and then answer the last question in a series of questions:\n"),
        ],
    )
    def test_exemplars_use_demonstration_header(self, kind, header):
        exemplars = load_exemplars(kind)
        shot = render_exemplar(kind, exemplars.exemplars[0])
        assert shot.startswith(header)
        assert shot.endswith(MARKERS.python_close)

    def test_few_shot_query_keeps_query_header(self, credit_spread_record):
        prompt = build_baseline_prompt(credit_spread_record, "few_shot", load_exemplars("finqa"))
        assert prompt.text.startswith("Read the following passage and then write python code")
        assert prompt.query.startswith("Read the following passage and then write Python code to answer the question:")

    def test_finetune_pair(self, credit_spread_record, credit_spread_program):
        sample = build_finetune_pair(credit_spread_record, credit_spread_program, 37.0)
        assert sample.prompt.endswith(MARKERS.python_open)
        assert sample.prompt == build_finetune_prompt(credit_spread_record).text
        assert '###Instructions: The final answer must be stored in the Python variable "ans"' in sample.prompt
        assert sample.completion == f"\n{credit_spread_program}\n###EndPython"
        assert "Answer Hint" not in sample.prompt + sample.completion
        assert sample.executed_answer == 37.0

    def test_empty_program(self, credit_spread_record):
        with pytest.raises(PromptTemplateError):
            build_finetune_pair(credit_spread_record, "   ")


class TestProbePrompts:
    def test_entity_probe_extends_finetune_prompt(self, credit_spread_record, credit_spread_program):
        probe = build_entity_probe_prompt(credit_spread_record, credit_spread_program)
        base = build_finetune_prompt(credit_spread_record).text
        assert probe.text == base + "\n#Calculate: avg_crdt_spr = (crdt_spr_2010 + crdt_spr_2009) / 2"
        assert probe.kind == "entity_probe"

    def test_entity_probe_needs_concept_line(self, credit_spread_record):
        with pytest.raises(ProbeConstructionError):
            build_entity_probe_prompt(credit_spread_record, "x = 1\nans = x")

    def test_concept_judge(self, credit_spread_program):
        prompt = build_concept_judge_prompt("Q?", credit_spread_program, "ans = 1")
        assert "'Star rating': [int]" in prompt.text
        assert prompt.text.endswith("Student generated code: ans = 1")
        assert f"Gold code: {credit_spread_program}" in prompt.text

    def test_entity_judge_has_verdict_instruction(self):
        prompt = build_entity_judge_prompt("Q?", "a = 1\nans = a", "a = 2\nans = a")
        assert 'reads exactly "Verdict: CORRECT"' in prompt.text
        assert "Strictly ensure that the entity values are exactly matching." in prompt.text

    def test_judge_inputs_must_be_present(self):
        with pytest.raises(PromptTemplateError):
            build_concept_judge_prompt("Q?", "ans = 1", "  ")

    def test_judge_question_joins_turns(self, convfinqa_record):
        assert judge_question(convfinqa_record) == (
            "what was net revenue in 2009? and in 2008? what is the percent change?"
        )


class TestEnvelopes:
    def test_plain_envelope(self, credit_spread_record):
        prompt = build_finetune_prompt(credit_spread_record)
        envelope = ChatEnvelope(prompt_prefix="[INST] ", prompt_suffix=" [/INST]", completion_suffix="</s>")
        wrapped = apply_chat_envelope(prompt, envelope)
        assert wrapped.text == f"[INST] {prompt.text} [/INST]"
        assert wrapped.query.startswith("Read the following passage")
        assert envelope_completion("\nans = 1\n###EndPython", envelope).endswith("###EndPython</s>")

    def test_chat_envelope(self, credit_spread_record):
        prompt = build_finetune_prompt(credit_spread_record)
        wrapped = apply_chat_envelope(prompt, ChatEnvelope(layout="chat", system="You are helpful."))
        assert wrapped.role_layout == "chat"
        assert wrapped.messages == (("system", "You are helpful."), ("user", prompt.text))

    def test_no_envelope(self, credit_spread_record):
        prompt = build_finetune_prompt(credit_spread_record)
        assert apply_chat_envelope(prompt, None) is prompt
