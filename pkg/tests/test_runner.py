from pathlib import Path

import pytest

from finpot.corpus import SamplingError
from finpot.prompts import CuratedSample
from finpot.runner import (
    STAGE_DIRS,
    MissingArtifactError,
    RunArtifacts,
    RunConfigError,
    StageError,
    build_run_config,
    create_client,
    emit_report,
    load_run_config,
    parse_training_set,
    run_ablation,
    run_pipeline,
    select_training_samples,
    validate_dev_splits,
    validate_profiles,
)
from finpot.runner.report import NO_PROBES_NOTICE
from finpot.storage import read_json, read_jsonl

EXAMPLE_CONFIG = Path(__file__).parents[1] / "configs" / "finqa.example.toml"


def _samples(kind: str, n: int) -> list[CuratedSample]:
    return [
        CuratedSample(
            record_id=f"{kind}-{i:05d}",
            dataset_kind=kind,
            prompt=f"q{i}",
            completion=f"\nans = {i}\n###EndPython",
            teacher_program=f"ans = {i}",
        )
        for i in range(n)
    ]


def _tree(root) -> dict[str, bytes]:
    return {
        p.relative_to(root).as_posix(): p.read_bytes()
        for directory in STAGE_DIRS.values()
        for p in sorted((root / directory).rglob("*"))
        if p.is_file()
    }


class TestTrainingSets:
    def test_parse(self):
        spec = parse_training_set("FinQA:1000 + ConvFinQA:500")
        assert spec.label == "finqa-1000+convfinqa-500"
        assert spec.kinds == ["finqa", "convfinqa"]
        assert spec.text == "FinQA:1000 + ConvFinQA:500"

    def test_full_dataset_part(self):
        spec = parse_training_set("TAT-QA")
        assert spec.label == "tatqa"
        assert spec.parts[0].count is None

    @pytest.mark.parametrize("text", ["FinQA:0", "Bonds:10", "FinQA:1 + FinQA:2", "FinQA:ten", ""])
    def test_invalid(self, text):
        with pytest.raises(RunConfigError):
            parse_training_set(text)

    def test_select(self):
        curated = {"finqa": _samples("finqa", 2000), "convfinqa": _samples("convfinqa", 800)}

        single = select_training_samples(parse_training_set("FinQA:1500"), curated, seed=0)
        assert len(single) == 1500
        assert len({s.record_id for s in single}) == 1500

        mixed = select_training_samples(parse_training_set("FinQA:1000 + ConvFinQA:500"), curated, seed=0)
        kinds = [s.dataset_kind for s in mixed]
        assert kinds.count("finqa") == 1000
        assert kinds.count("convfinqa") == 500
        assert mixed == select_training_samples(parse_training_set("FinQA:1000 + ConvFinQA:500"), curated, seed=0)

    def test_select_too_many(self):
        with pytest.raises(SamplingError):
            select_training_samples(parse_training_set("FinQA:10"), {"finqa": _samples("finqa", 3)}, seed=0)


class TestRunConfig:
    DOCUMENT = {"run_id": "a", "datasets": [{"kind": "finqa", "train": "train.json"}]}

    def test_overrides(self):
        config = build_run_config(self.DOCUMENT, {"seeds.split": 3, "limit": None, "mock": True})
        assert config.seeds.split == 3
        assert config.seeds.sampling == 0
        assert config.limit is None
        assert config.mock
        assert config.trainer_name == "recording"

    def test_defaults(self):
        config = build_run_config(self.DOCUMENT)
        assert config.teacher == "gpt-4-teacher"
        assert config.judge == "gpt-4-judge"
        assert config.trainer_name == "peft"
        assert config.match.rel_tol == 5e-3

    @pytest.mark.parametrize(
        "document",
        [
            {"run_id": "a/b", "datasets": [{"kind": "finqa"}]},
            {"run_id": "a", "datasets": []},
            {"run_id": "a", "datasets": [{"kind": "finqa"}, {"kind": "finqa"}]},
            {"run_id": "a", "datasets": [{"kind": "finqa"}], "unknown": 1},
        ],
    )
    def test_invalid(self, document):
        with pytest.raises(RunConfigError):
            build_run_config(document)

    def test_load_toml(self, tmp_path):
        path = tmp_path / "run.toml"
        path.write_text('run_id = "toml"\n\n[[datasets]]\nkind = "convfinqa"\ndev_count = 5\n')
        config = load_run_config(path, {"run_id": "flag"})
        assert config.run_id == "flag"
        assert config.datasets[0].dev_count == 5

    def test_missing_file(self, tmp_path):
        with pytest.raises(RunConfigError):
            load_run_config(tmp_path / "absent.toml")

    def test_example_config(self, profiles):
        config = load_run_config(EXAMPLE_CONFIG, {"limit": 5})
        validate_profiles(config, profiles)
        assert config.dataset_kinds == ["finqa", "convfinqa"]
        assert config.limit == 5
        assert [parse_training_set(t).label for t in config.training_sets] == [
            "finqa",
            "finqa-1000+convfinqa-500",
        ]


async def test_unknown_profile_fails_before_any_stage(make_run_config):
    config = make_run_config(students=["llama-70b"])
    with pytest.raises(RunConfigError):
        await run_pipeline(config)
    assert not config.run_dir().exists()


class TestDevSplits:
    def _finqa(self, **splits) -> list[dict]:
        return [{"kind": "finqa", **{k: str(v) for k, v in splits.items()}}]

    async def test_missing_dev_file_fails_before_any_stage(self, make_run_config, raw_finqa_files):
        datasets = self._finqa(train=raw_finqa_files["train"], test=raw_finqa_files["test"])
        config = make_run_config(datasets=datasets)
        with pytest.raises(RunConfigError) as excinfo:
            await run_pipeline(config)
        assert excinfo.value.context["datasets"] == ["finqa"]
        assert not config.run_dir().exists()

    def test_zero_limit(self, make_run_config):
        with pytest.raises(RunConfigError):
            validate_dev_splits(make_run_config(limit=0))

    def test_sampled_dev_is_enough(self, make_run_config, raw_finqa_files):
        datasets = self._finqa(train=raw_finqa_files["train"], test=raw_finqa_files["test"])
        datasets[0]["dev_count"] = 2
        validate_dev_splits(make_run_config(datasets=datasets))

    def test_untuned_runs_need_no_dev(self, make_run_config, raw_finqa_files):
        datasets = self._finqa(train=raw_finqa_files["train"], test=raw_finqa_files["test"])
        validate_dev_splits(make_run_config(datasets=datasets, students=[]))
        validate_dev_splits(make_run_config(datasets=datasets, stages=["ingest", "generate", "curate"]))

    async def test_empty_dev_file_stops_at_ingest(self, make_run_config, raw_finqa_files, tmp_path):
        empty = tmp_path / "empty_dev.json"
        empty.write_text("[]")
        datasets = self._finqa(
            train=raw_finqa_files["train"], dev=empty, test=raw_finqa_files["test"]
        )
        config = make_run_config(datasets=datasets)
        with pytest.raises(StageError) as excinfo:
            await run_pipeline(config)
        assert excinfo.value.stage == "ingest"
        assert isinstance(excinfo.value.__cause__, RunConfigError)
        assert not (config.run_dir() / STAGE_DIRS["generate"]).exists()


async def test_mock_pipeline(make_run_config):
    config = make_run_config()
    artifacts = await run_pipeline(config)

    curated = read_jsonl(artifacts.curated / "finqa" / "test.jsonl")
    assert [row["record_id"] for row in curated] == ["credit-spread", "s1"]
    assert curated[0]["executed_answer"] == 37.0
    assert curated[0]["prompt"].endswith("###Python")
    assert "Answer Hint" not in curated[0]["prompt"]

    train_report = read_json(artifacts.curated / "finqa" / "train" / "report.json")
    assert train_report["kept"] == 6
    assert train_report["rejected"] == {"runtime_error": 1, "wrong_answer": 1}

    checkpoints = read_json(artifacts.checkpoints / "phi-3-mini" / "finqa" / "checkpoints.json")
    assert [c["model_id"] for c in checkpoints["checkpoints"]] == [
        "phi-3-mini@finqa/epoch-1",
        "phi-3-mini@finqa/epoch-2",
    ]

    summary = read_json(artifacts.grading / "summary.json")
    assert summary["selected"]["phi-3-mini@finqa"] in {"finqa/epoch-1", "finqa/epoch-2"}
    assert all(0 <= row["accuracy"] <= 100 for row in summary["rows"])

    report = read_json(artifacts.report / "report.json")
    assert set(report["tables"]) == {"answer_accuracy", "capabilities", "ablation"}
    methods = [row["method"] for row in report["tables"]["answer_accuracy"]["rows"]]
    assert methods == ["zero-shot", "few-shot", "fine-tuned finqa"]
    assert [row["training_set"] for row in report["tables"]["capabilities"]["rows"]] == ["finqa"]
    assert "Answer accuracy" in (artifacts.report / "report.txt").read_text()

    probes = read_json(artifacts.probes / "summary.json")
    assert {row["target"] for row in probes["rows"]} == {"epoch-0", "epoch-1"}
    for histogram in probes["histograms"].values():
        assert sum(histogram["percents"].values()) == pytest.approx(100, abs=0.1 + 1e-9)

    manifest = artifacts.load_manifest()
    assert {entry["status"] for entry in manifest["stages"].values()} == {"done"}

    client = create_client(None)
    await run_pipeline(config, client=client)
    assert client.backend_calls == 0


async def test_runs_are_reproducible(make_run_config, tmp_path):
    first = await run_pipeline(make_run_config(runs_dir=tmp_path / "one"))
    second = await run_pipeline(make_run_config(runs_dir=tmp_path / "two"))
    first_tree, second_tree = _tree(first.root), _tree(second.root)
    assert first_tree
    assert first_tree == second_tree


async def test_changed_outputs_are_rebuilt(make_run_config):
    config = make_run_config()
    artifacts = await run_pipeline(config)
    report = artifacts.report / "report.json"
    expected = report.read_bytes()
    report.write_text("{}")
    await run_pipeline(config, stages=["report"])
    assert report.read_bytes() == expected


async def test_report_without_probes(make_run_config):
    config = make_run_config(stages=["ingest", "generate", "curate", "tune", "infer", "grade", "report"])
    artifacts = await run_pipeline(config)
    assert NO_PROBES_NOTICE in (artifacts.report / "report.txt").read_text()
    assert read_json(artifacts.report / "report.json")["tables"]["capabilities"] is None


async def test_missing_upstream_artifact(make_run_config):
    config = make_run_config()
    with pytest.raises(StageError) as excinfo:
        await run_pipeline(config, stages=["curate"])
    assert isinstance(excinfo.value.__cause__, MissingArtifactError)
    assert excinfo.value.stage == "curate"
    assert excinfo.value.__cause__.stage == "curate"
    assert RunArtifacts(config.run_dir()).load_manifest()["stages"]["curate"]["status"] == "failed"


def test_report_needs_grading(tmp_path):
    with pytest.raises(MissingArtifactError) as excinfo:
        emit_report(RunArtifacts(tmp_path / "empty"))
    assert excinfo.value.producer == "grade"


async def test_ablation(make_run_config, tmp_path):
    table = await run_ablation(make_run_config(runs_dir=tmp_path / "ablation"), ["FinQA:4", "FinQA:2"])
    assert table["training_sets"] == ["FinQA:2", "FinQA:4"]
    assert table["datasets"] == ["finqa"]
    assert set(table["rows"]) == {"phi-3-mini"}
    assert set(table["rows"]["phi-3-mini"]) == {"FinQA:4", "FinQA:2"}
    for cells in table["rows"]["phi-3-mini"].values():
        assert 0 <= cells["finqa"] <= 100


async def test_empty_ablation_grid(make_run_config):
    with pytest.raises(RunConfigError):
        await run_ablation(make_run_config(), [])
