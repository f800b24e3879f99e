"""Append-only completion cache."""

import asyncio
import json
import logging
from dataclasses import dataclass
from pathlib import Path

from ..storage import dumps
from .types import CompletionRequest, CompletionResult, FinishReason, request_key

logger = logging.getLogger(__name__)

CACHE_FILE = "completions.jsonl"


@dataclass(frozen=True)
class CacheEntry:
    """A cached completion."""

    text: str
    finish_reason: FinishReason


class CompletionCache:
    """Line-delimited cache of completions keyed by request hash.

    Corrupted lines are skipped with a warning and act as misses. A cache file
    removed from disk empties the in-memory index on the next lookup.
    """

    def __init__(self, path: Path) -> None:
        """Initialize the cache.

        Args:
            path: Cache file, or a directory to hold ``completions.jsonl``
        """
        self.path = path / CACHE_FILE if path.suffix != ".jsonl" else path
        self._index: dict[str, CacheEntry] = {}
        self._lock = asyncio.Lock()
        self._load()

    def _load(self) -> None:
        self._index.clear()
        if not self.path.exists():
            return
        with self.path.open("r", encoding="utf-8") as f:
            for number, line in enumerate(f, start=1):
                if not line.strip():
                    continue
                try:
                    row = json.loads(line)
                    self._index[row["key"]] = CacheEntry(row["text"], row.get("finish_reason", "stop"))
                except (json.JSONDecodeError, KeyError, TypeError):
                    logger.warning("Skipping corrupted cache line %d in %s", number, self.path)

    def __len__(self) -> int:
        return len(self._index)

    def get(self, request: CompletionRequest) -> CompletionResult | None:
        """Return the cached result for a request, if any."""
        if not self.path.exists():
            self._index.clear()
            return None
        entry = self._index.get(request_key(request))
        if entry is None:
            return None
        return CompletionResult(text=entry.text, finish_reason=entry.finish_reason, from_cache=True)

    async def put(self, request: CompletionRequest, result: CompletionResult) -> None:
        """Persist a result; appends are serialized."""
        key = request_key(request)
        row = {
            "key": key,
            "model_id": request.model_id,
            "text": result.text,
            "finish_reason": result.finish_reason,
        }
        async with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8", newline="\n") as f:
                f.write(dumps(row) + "\n")
            self._index[key] = CacheEntry(result.text, result.finish_reason)
