"""Shared fixtures: the credit-spread record, raw dataset files and mock run configs."""

import json
from pathlib import Path
from typing import Any

import pytest

from finpot.config import load_profiles
from finpot.corpus import QARecord
from finpot.runner import RunConfig, build_run_config

CREDIT_SPREAD_PASSAGE = (
    "The firm gains $ 210 millions on 248 days. The following table presents credit spread "
    "sensitivity."
)
CREDIT_SPREAD_TABLE = [["year", "credit spread (in millions)"], ["2010", "$ 35"], ["2009", "$ 39"]]
CREDIT_SPREAD_QUESTION = "Find average credit spread (in millions) from 2009 to 2010?"
CREDIT_SPREAD_PROGRAM = "\n".join(
    [
        "#Calculate: avg_crdt_spr = (crdt_spr_2010 + crdt_spr_2009) / 2",
        "crdt_spr_2009 = 39",
        "crdt_spr_2010 = 35",
        "avg_crdt_spr = (crdt_spr_2010 + crdt_spr_2009) / 2",
        "ans = avg_crdt_spr",
    ]
)


def finqa_sample(
    sample_id: str,
    question: str,
    program: str | None,
    answer: Any,
    table: list[list[str]] | None = None,
    pre_text: list[str] | None = None,
) -> dict[str, Any]:
    """One raw FinQA sample."""
    return {
        "id": sample_id,
        "pre_text": pre_text or [f"Figures for {sample_id} are in millions ."],
        "post_text": [],
        "table": table or [["item", "value"], ["total", "1"]],
        "qa": {"question": question, "program": program or "", "exe_ans": answer},
    }


# Teacher hints the mock translates; t6 has no hint and t7 a wrong gold answer.
FIXTURE_SAMPLES: dict[str, list[dict[str, Any]]] = {
    "train": [
        finqa_sample("t0", "what is the sum of revenue in 2019 and 2020?", "add(120, 80)", 200.0),
        finqa_sample("t1", "what was the change in debt from 2018 to 2019?", "subtract(500, 320)", 180.0),
        finqa_sample("t2", "what is the average cost per unit?", "divide(90, 3)", 30.0),
        finqa_sample("t3", "what is the annual rent for four quarters?", "multiply(12, 4)", 48.0),
        finqa_sample(
            "t4",
            "what was the percentage change in cash from 2008 to 2009?",
            "subtract(1923, 2040), divide(#0, 2040)",
            -0.05735,
        ),
        finqa_sample("t5", "how many segments were reported in 2017?", "add(2, 3)", 5.0),
        finqa_sample("t6", "which segment had the highest margin?", None, 12.5),
        finqa_sample("t7", "what is the combined headcount of both units?", "add(10, 15)", 99.0),
    ],
    "dev": [
        finqa_sample("d0", "what is the total of fees in both years?", "add(7, 8)", 15.0),
        finqa_sample("d1", "what was the decline in inventory during 2016?", "subtract(50, 20)", 30.0),
    ],
    "test": [
        finqa_sample(
            "credit-spread",
            CREDIT_SPREAD_QUESTION,
            "add(35, 39), divide(#0, 2)",
            37.0,
            table=CREDIT_SPREAD_TABLE,
            pre_text=[CREDIT_SPREAD_PASSAGE],
        ),
        finqa_sample("s1", "what is the price per share given total value and shares?", "divide(45, 9)", 5.0),
    ],
}


def write_raw(directory: Path, name: str, samples: list[dict[str, Any]]) -> Path:
    path = directory / name
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(samples), encoding="utf-8")
    return path


@pytest.fixture
def credit_spread_record() -> QARecord:
    return QARecord(
        id="credit-spread",
        dataset_kind="finqa",
        passage_text=CREDIT_SPREAD_PASSAGE,
        table=tuple(tuple(row) for row in CREDIT_SPREAD_TABLE),
        question=CREDIT_SPREAD_QUESTION,
        gold_program="add(35, 39), divide(#0, 2)",
        gold_answer=37,
        split="test",
    )


@pytest.fixture
def credit_spread_program() -> str:
    return CREDIT_SPREAD_PROGRAM


@pytest.fixture
def convfinqa_record() -> QARecord:
    return QARecord(
        id="conv-0",
        dataset_kind="convfinqa",
        passage_text="Net revenue grew in 2009 .",
        table=(("year", "net revenue"), ("2009", "$ 19.9"), ("2008", "$ 11.8")),
        question="what is the percent change?",
        prior_questions=("what was net revenue in 2009?", "and in 2008?"),
        gold_program="subtract(19.9, 11.8), divide(#0, 11.8)",
        gold_answer=0.68644,
        split="test",
    )


@pytest.fixture
def raw_finqa_files(tmp_path: Path) -> dict[str, Path]:
    """The 12-record FinQA fixture as raw train/dev/test files."""
    raw = tmp_path / "raw"
    return {split: write_raw(raw, f"{split}.json", samples) for split, samples in FIXTURE_SAMPLES.items()}


@pytest.fixture
def profiles():
    return load_profiles()


@pytest.fixture
def make_run_config(raw_finqa_files: dict[str, Path], tmp_path: Path):
    """Factory for mock run configs over the 12-record fixture."""

    def make(runs_dir: Path | None = None, **overrides: Any) -> RunConfig:
        document: dict[str, Any] = {
            "run_id": "fixture",
            "runs_dir": str(runs_dir or tmp_path / "runs"),
            "mock": True,
            "students": ["phi-3-mini"],
            "datasets": [
                {
                    "kind": "finqa",
                    "train": str(raw_finqa_files["train"]),
                    "dev": str(raw_finqa_files["dev"]),
                    "test": str(raw_finqa_files["test"]),
                }
            ],
            "finetune": {"epochs": 2},
        }
        document.update(overrides)
        return build_run_config(document)

    return make
