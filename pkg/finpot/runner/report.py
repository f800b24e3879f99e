"""Report tables: answer accuracy, capability probes, ablation grid and rating histograms."""

import io
import logging
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Any

from rich import box
from rich.console import Console
from rich.table import Table

from ..probes import RatingHistogram, TargetMetrics, build_eval_report
from ..storage import read_json, write_json, write_text_atomic
from .artifacts import RunArtifacts

logger = logging.getLogger(__name__)

REPORT_TEXT = "report.txt"
REPORT_JSON = "report.json"
CAPABILITIES = ("concept_accuracy", "entity_accuracy", "executable_rate")
NO_PROBES_NOTICE = "Capability probes: no probe outputs, section omitted."
# Left out of the report fingerprint.
LOCATION_KEYS = ("runs_dir", "cache_dir")


def _fmt(value: float | None) -> str:
    return "-" if value is None else f"{value:.2f}"


def _fingerprinted_config(snapshot: Mapping[str, Any]) -> dict[str, Any]:
    return {k: v for k, v in snapshot.items() if k not in LOCATION_KEYS}


def _training_set_texts(artifacts: RunArtifacts) -> dict[str, str]:
    texts = {}
    for path in sorted(artifacts.checkpoints.rglob("checkpoints.json")):
        data = read_json(path)
        texts[data["label"]] = data["training_set"]
    return texts


def answer_table(
    rows: Sequence[Mapping[str, Any]], selected: Mapping[str, str], set_texts: Mapping[str, str]
) -> dict[str, Any]:
    """Test accuracy per student and method, one column per dataset."""
    datasets = sorted({r["dataset"] for r in rows if r["split"] == "test"})
    by_key = {(r["student"], r["target"], r["dataset"]): r["accuracy"] for r in rows if r["split"] == "test"}
    table_rows = []
    for student in sorted({r["student"] for r in rows}):
        methods = [("zero-shot", "zero_shot"), ("few-shot", "few_shot")]
        for key, target in sorted(selected.items()):
            owner, _, label = key.partition("@")
            if owner == student:
                methods.append((f"fine-tuned {set_texts.get(label, label)}", target))
        for method, target in methods:
            table_rows.append(
                {
                    "model": student,
                    "method": method,
                    "target": target,
                    "accuracy": {d: by_key.get((student, target, d)) for d in datasets},
                }
            )
    return {"datasets": datasets, "rows": table_rows}


def capability_table(probe_rows: Sequence[Mapping[str, Any]]) -> dict[str, Any]:
    """Base versus first-epoch capability metrics per student and dataset."""
    base = {(r["model"], r["dataset"]): r for r in probe_rows if r["target"] == "epoch-0"}
    table_rows = []
    for row in probe_rows:
        if row["target"] != "epoch-1":
            continue
        before = base.get((row["model"], row["dataset"]), {})
        table_rows.append(
            {
                "model": row["model"],
                "training_set": row["training_set"],
                "dataset": row["dataset"],
                "samples": row["samples"],
                **{
                    metric: {"base": before.get(metric), "epoch-1": row.get(metric)}
                    for metric in CAPABILITIES
                },
            }
        )
    table_rows.sort(key=lambda r: (r["dataset"], r["model"], r["training_set"]))
    return {"metrics": list(CAPABILITIES), "rows": table_rows}


def ablation_table(
    rows: Sequence[Mapping[str, Any]], selected: Mapping[str, str], set_texts: Mapping[str, str]
) -> dict[str, Any]:
    """Test accuracy of each dev-selected checkpoint, one column per training set."""
    by_key = {(r["student"], r["target"], r["dataset"]): r["accuracy"] for r in rows if r["split"] == "test"}
    labels = sorted({key.partition("@")[2] for key in selected})
    specs = [set_texts.get(label, label) for label in labels]
    datasets = sorted({r["dataset"] for r in rows if r["split"] == "test" and r["training_set"]})
    table: dict[str, dict[str, dict[str, float | None]]] = {}
    for key, target in sorted(selected.items()):
        student, _, label = key.partition("@")
        table.setdefault(student, {})[set_texts.get(label, label)] = {
            d: by_key.get((student, target, d)) for d in datasets
        }
    return {"training_sets": specs, "datasets": datasets, "rows": table}


def _render(tables: Mapping[str, Any], histograms: Mapping[str, Any], fingerprint: str) -> str:
    console = Console(file=io.StringIO(), width=200, color_system=None, force_terminal=False)

    answers = tables["answer_accuracy"]
    t = Table(title="Answer accuracy (test, %)", box=box.ASCII2)
    t.add_column("Model")
    t.add_column("Method")
    for d in answers["datasets"]:
        t.add_column(d, justify="right")
    for row in answers["rows"]:
        t.add_row(row["model"], row["method"], *(_fmt(row["accuracy"][d]) for d in answers["datasets"]))
    console.print(t)

    capabilities = tables.get("capabilities")
    if capabilities and capabilities["rows"]:
        t = Table(title="Capabilities on curated test samples (%): base / epoch 1", box=box.ASCII2)
        for name in ("Model", "Training set", "Dataset"):
            t.add_column(name)
        for metric in CAPABILITIES:
            t.add_column(f"{metric} base", justify="right")
            t.add_column(f"{metric} epoch-1", justify="right")
        for row in capabilities["rows"]:
            cells = []
            for metric in CAPABILITIES:
                cells += [_fmt(row[metric]["base"]), _fmt(row[metric]["epoch-1"])]
            t.add_row(row["model"], row["training_set"], row["dataset"], *cells)
        console.print(t)
    else:
        console.print(NO_PROBES_NOTICE)

    ablation = tables["ablation"]
    if ablation["rows"]:
        t = Table(title="Training data ablation (test accuracy, %)", box=box.ASCII2)
        t.add_column("Model")
        columns = [(s, d) for s in ablation["training_sets"] for d in ablation["datasets"]]
        for spec, d in columns:
            t.add_column(f"{spec} | {d}", justify="right")
        for student, cells in sorted(ablation["rows"].items()):
            t.add_row(student, *(_fmt(cells.get(spec, {}).get(d)) for spec, d in columns))
        console.print(t)

    if histograms:
        t = Table(title="Concept rating distribution (%)", box=box.ASCII2)
        t.add_column("Model / target / dataset")
        for level in range(1, 6):
            t.add_column(str(level), justify="right")
        for key, hist in sorted(histograms.items()):
            percents = RatingHistogram.from_dict(hist).percents
            t.add_row(key, *(f"{p:.1f}" for p in percents))
        console.print(t)

    console.print(f"Config fingerprint: {fingerprint}")
    return console.file.getvalue()  # type: ignore[attr-defined]


def emit_report(artifacts: RunArtifacts) -> list[Path]:
    """Write ``report/report.txt`` and ``report/report.json`` from grading and probe outputs.

    Raises:
        MissingArtifactError: If the grading summary is missing
    """
    grading = read_json(artifacts.require(artifacts.grading / "summary.json", "grade"))
    probes_path = artifacts.probes / "summary.json"
    probes = read_json(probes_path) if probes_path.exists() else {"rows": [], "histograms": {}}
    if not probes["rows"]:
        logger.warning(NO_PROBES_NOTICE)
    set_texts = _training_set_texts(artifacts)
    selected = grading.get("selected", {})

    metrics = [
        TargetMetrics(
            model=r["student"],
            target=r["target"],
            split=r["split"],
            dataset=r["dataset"],
            samples=r["samples"],
            answer_accuracy=r["accuracy"],
            executable_rate=r["executable_rate"],
            training_set=r["training_set"],
        )
        for r in grading["rows"]
    ]
    metrics += [TargetMetrics.from_dict(r) for r in probes["rows"]]
    report = build_eval_report(
        metrics,
        _fingerprinted_config(artifacts.load_manifest().get("config", {})),
        histograms={k: RatingHistogram.from_dict(h) for k, h in probes["histograms"].items()},
        selected=selected,
    )
    tables = {
        "answer_accuracy": answer_table(grading["rows"], selected, set_texts),
        "capabilities": capability_table(probes["rows"]) if probes["rows"] else None,
        "ablation": ablation_table(grading["rows"], selected, set_texts),
    }

    text_path = artifacts.report / REPORT_TEXT
    json_path = artifacts.report / REPORT_JSON
    write_text_atomic(text_path, _render(tables, probes["histograms"], report.fingerprint))
    write_json(json_path, {**report.to_dict(), "tables": tables})
    logger.info("Report written to %s", text_path)
    return [text_path, json_path]
