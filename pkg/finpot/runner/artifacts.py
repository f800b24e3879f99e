"""Run directory layout, manifest and stage fingerprints."""

import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from datetime import UTC, datetime
from pathlib import Path
from typing import Any

from ..storage import dumps, read_json, sha256_file, sha256_text, write_json
from .errors import MissingArtifactError

logger = logging.getLogger(__name__)

MANIFEST = "manifest.json"

STAGE_DIRS = {
    "ingest": "records",
    "generate": "teacher",
    "curate": "curated",
    "tune": "checkpoints",
    "infer": "inference",
    "grade": "grading",
    "probe": "probes",
    "report": "report",
}


def _now() -> str:
    return datetime.now(UTC).isoformat(timespec="seconds")


def files_under(paths: Iterable[Path]) -> list[Path]:
    """Every regular file below the given files or directories, sorted."""
    found: set[Path] = set()
    for path in paths:
        if path.is_file():
            found.add(path)
        elif path.is_dir():
            found.update(p for p in path.rglob("*") if p.is_file() and not p.name.startswith("."))
    return sorted(found)


@dataclass(frozen=True)
class RunArtifacts:
    """Files of one run under ``runs/<id>/``."""

    root: Path

    @property
    def run_id(self) -> str:
        return self.root.name

    @property
    def manifest_path(self) -> Path:
        return self.root / MANIFEST

    def stage_dir(self, stage: str) -> Path:
        return self.root / STAGE_DIRS[stage]

    @property
    def records(self) -> Path:
        return self.stage_dir("ingest")

    @property
    def teacher(self) -> Path:
        return self.stage_dir("generate")

    @property
    def curated(self) -> Path:
        return self.stage_dir("curate")

    @property
    def checkpoints(self) -> Path:
        return self.stage_dir("tune")

    @property
    def inference(self) -> Path:
        return self.stage_dir("infer")

    @property
    def grading(self) -> Path:
        return self.stage_dir("grade")

    @property
    def probes(self) -> Path:
        return self.stage_dir("probe")

    @property
    def report(self) -> Path:
        return self.stage_dir("report")

    def require(self, path: Path, producer: str) -> Path:
        """Return ``path`` if it exists.

        Raises:
            MissingArtifactError: Naming the missing file and its stage
        """
        if not path.exists():
            raise MissingArtifactError(path, producer)
        return path

    def relative(self, path: Path) -> str:
        try:
            return path.relative_to(self.root).as_posix()
        except ValueError:
            return path.as_posix()

    def checksums(self, paths: Iterable[Path]) -> dict[str, str]:
        """SHA-256 of every file below the paths, keyed by run-relative path."""
        return {self.relative(p): sha256_file(p) for p in files_under(paths)}

    def load_manifest(self) -> dict[str, Any]:
        if not self.manifest_path.exists():
            return {"run_id": self.run_id, "stages": {}}
        return read_json(self.manifest_path)

    def save_manifest(self, manifest: Mapping[str, Any]) -> None:
        write_json(self.manifest_path, manifest)

    def stage_fingerprint(self, config_slice: Any, inputs: Iterable[Path]) -> str:
        """Hash of the config a stage reads plus the checksums of its input files."""
        return sha256_text(dumps({"config": config_slice, "inputs": self.checksums(inputs)}))

    def is_current(self, stage: str, fingerprint: str) -> bool:
        """True when the manifest shows the stage done with this fingerprint and intact outputs."""
        entry = self.load_manifest().get("stages", {}).get(stage)
        if not entry or entry.get("status") != "done" or entry.get("fingerprint") != fingerprint:
            return False
        outputs: dict[str, str] = entry.get("outputs", {})
        for rel, digest in outputs.items():
            path = self.root / rel
            if not path.is_file() or sha256_file(path) != digest:
                logger.info("Output %s of stage %s changed; rerunning", rel, stage)
                return False
        return bool(outputs)

    def record_stage(
        self,
        stage: str,
        fingerprint: str,
        status: str,
        started_at: str,
        duration: float,
        error: str | None = None,
    ) -> None:
        """Store a stage's outcome and output checksums in the manifest."""
        manifest = self.load_manifest()
        entry: dict[str, Any] = {
            "status": status,
            "fingerprint": fingerprint,
            "started_at": started_at,
            "finished_at": _now(),
            "duration": round(duration, 3),
            "outputs": self.checksums([self.stage_dir(stage)]),
        }
        if error:
            entry["error"] = error
        manifest.setdefault("stages", {})[stage] = entry
        manifest["checksum"] = sha256_text(
            dumps({k: v["outputs"] for k, v in sorted(manifest["stages"].items())})
        )
        self.save_manifest(manifest)

    def start_run(self, config_snapshot: Mapping[str, Any]) -> None:
        """Create the run directory and store the config snapshot."""
        self.root.mkdir(parents=True, exist_ok=True)
        manifest = self.load_manifest()
        manifest["run_id"] = self.run_id
        manifest["config"] = dict(config_snapshot)
        manifest.setdefault("created_at", _now())
        manifest.setdefault("stages", {})
        self.save_manifest(manifest)


def started_now() -> str:
    return _now()
