"""Campaign reports, the JSONL progress log, and resume support."""
from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from .errors import PreconditionError

# Bump ENUMERATION_ORDER_VERSION whenever the pair enumeration order changes;
# progress cursors from an older order are then refused.
ENUMERATION_ORDER_VERSION = "1"
ENUMERATION_ORDER_CONTRACT = (
    "blocks: principal/all-square by size ascending; layered by layer-size profile in "
    "lexicographic order (empty profile skipped). Sets inside a block: lexicographic order "
    "of sorted members. Pairs inside a block: row set outer, column set inner; principal "
    "blocks use the diagonal only. Random sampling: lcg64 stream, block chosen with "
    "probability proportional to its pair count, then uniform subsets per layer, rows "
    "before columns."
)
ORDER_HASH = hashlib.sha256(
    f"{ENUMERATION_ORDER_VERSION}\n{ENUMERATION_ORDER_CONTRACT}".encode()
).hexdigest()[:16]

COUNT_KEYS = ("checked", "nonsingular", "singular", "screened_only", "escalated", "ladder_retries")
TIMING_KEYS = ("runtime", "elapsed_ms")


class SpecMismatch(PreconditionError):
    """A progress log belongs to a different campaign spec or enumeration order."""


def zero_counts() -> dict[str, int]:
    return {k: 0 for k in COUNT_KEYS}


def canonical_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def spec_hash(spec_json: dict) -> str:
    return hashlib.sha256(canonical_json(spec_json).encode()).hexdigest()[:16]


@dataclass
class CampaignReport:
    spec: dict
    spec_hash: str
    counts: dict[str, int]
    singular_findings: list[dict]
    hypothesis: Optional[dict] = None
    screening: list[dict] = field(default_factory=list)
    rng: Optional[dict] = None
    total: int = 0
    complete: bool = True
    order_contract: dict = field(
        default_factory=lambda: {"version": ENUMERATION_ORDER_VERSION, "hash": ORDER_HASH}
    )
    runtime: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return 1 if self.singular_findings else 0

    def to_json(self) -> dict:
        return {
            "spec": self.spec,
            "spec_hash": self.spec_hash,
            "order_contract": self.order_contract,
            "screening": self.screening,
            "rng": self.rng,
            "hypothesis": self.hypothesis,
            "total": self.total,
            "complete": self.complete,
            "counts": dict(self.counts),
            "singular_findings": self.singular_findings,
            "runtime": self.runtime,
        }

    @classmethod
    def from_json(cls, data: dict) -> "CampaignReport":
        return cls(
            spec=data["spec"],
            spec_hash=data["spec_hash"],
            counts=dict(data["counts"]),
            singular_findings=list(data["singular_findings"]),
            hypothesis=data.get("hypothesis"),
            screening=list(data.get("screening", [])),
            rng=data.get("rng"),
            total=int(data.get("total", 0)),
            complete=bool(data.get("complete", True)),
            order_contract=dict(data["order_contract"]),
            runtime=dict(data.get("runtime", {})),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    def write(self, path: str | os.PathLike) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def read(cls, path: str | os.PathLike) -> "CampaignReport":
        return cls.from_json(json.loads(Path(path).read_text()))


def strip_timing(data: Any) -> Any:
    """Copy of a JSON structure without wall-clock fields."""
    if isinstance(data, dict):
        return {k: strip_timing(v) for k, v in data.items() if k not in TIMING_KEYS}
    if isinstance(data, list):
        return [strip_timing(v) for v in data]
    return data


def cache_dir() -> Path:
    return Path(os.environ.get("CHEB_CACHE_DIR", Path.home() / ".cache" / "chebminor"))


def default_progress_path(out: Optional[str], shash: str) -> Path:
    name = Path(out).name if out else shash
    return cache_dir() / f"{name}.progress.jsonl"


@dataclass
class ProgressState:
    header: dict
    cursor: int
    counts: dict[str, int]
    findings: list[dict]
    final: Optional[dict] = None


class ProgressLog:
    """Append-only JSONL: a header line, one line per finished chunk, a final line."""

    def __init__(self, path: str | os.PathLike):
        self.path = Path(path)

    def exists(self) -> bool:
        return self.path.exists()

    def start(self, header: dict) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.path.write_text(canonical_json({"type": "header", **header}) + "\n")

    def _append(self, record: dict) -> None:
        with self.path.open("a") as fh:
            fh.write(canonical_json(record) + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def chunk(self, cursor: int, counts: dict, findings: list[dict]) -> None:
        self._append({"type": "chunk", "cursor": cursor, "counts": counts, "findings": findings})

    def finish(self, report: dict) -> None:
        self._append({"type": "done", "report": report})

    def load(self) -> ProgressState:
        lines = self.path.read_text().splitlines()
        records = []
        for line in lines:
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError:
                # a torn final line from an interrupted append
                break
        if not records or records[0].get("type") != "header":
            raise SpecMismatch(f"{self.path} is not a campaign progress log")
        header = records[0]
        state = ProgressState(header, 0, zero_counts(), [])
        for rec in records[1:]:
            if rec["type"] == "chunk":
                state.cursor = rec["cursor"]
                state.counts = dict(rec["counts"])
                state.findings.extend(rec["findings"])
            elif rec["type"] == "done":
                state.final = rec["report"]
        return state

    def check(self, state: ProgressState, shash: str) -> None:
        h = state.header
        if h.get("spec_hash") != shash:
            raise SpecMismatch(
                f"progress log {self.path} was written for spec {h.get('spec_hash')}, not {shash}"
            )
        if h.get("order_hash") != ORDER_HASH:
            raise SpecMismatch(
                f"progress log {self.path} uses enumeration order {h.get('order_hash')}, current is {ORDER_HASH}"
            )
