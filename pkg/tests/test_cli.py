from finpot.cli import build_parser, main
from finpot.storage import read_json


def _dataset_flag(files) -> str:
    return f"finqa={files['train']},{files['dev']},{files['test']}"


async def test_mock_run(raw_finqa_files, tmp_path):
    runs = tmp_path / "runs"
    code = await main(
        [
            "run",
            "--run-id", "cli",
            "--mock",
            "--model", "phi-3-mini",
            "--dataset", _dataset_flag(raw_finqa_files),
            "--runs-dir", str(runs),
            "--quiet",
        ]
    )
    assert code == 0
    assert (runs / "cli" / "report" / "report.txt").exists()
    assert read_json(runs / "cli" / "manifest.json")["config"]["students"] == ["phi-3-mini"]


async def test_single_stage(raw_finqa_files, tmp_path):
    runs = tmp_path / "runs"
    args = ["--run-id", "x", "--mock", "--dataset", _dataset_flag(raw_finqa_files), "--runs-dir", str(runs)]
    assert await main(["ingest", *args]) == 0
    assert (runs / "x" / "records" / "finqa" / "test.jsonl").exists()
    assert not (runs / "x" / "teacher").exists()


async def test_unknown_student(raw_finqa_files, tmp_path):
    code = await main(
        [
            "run",
            "--run-id", "x",
            "--mock",
            "--model", "llama-70b",
            "--dataset", _dataset_flag(raw_finqa_files),
            "--runs-dir", str(tmp_path),
        ]
    )
    assert code == 1


async def test_malformed_dataset_flag(tmp_path):
    assert await main(["run", "--run-id", "x", "--dataset", "finqa", "--runs-dir", str(tmp_path)]) == 1


async def test_missing_datasets(tmp_path):
    assert await main(["run", "--run-id", "x", "--runs-dir", str(tmp_path)]) == 1


def test_ablate_requires_grid():
    parser = build_parser()
    args = parser.parse_args(["ablate", "--grid", "FinQA:1500", "--grid", "FinQA:1000 + ConvFinQA:500"])
    assert args.grid == ["FinQA:1500", "FinQA:1000 + ConvFinQA:500"]
