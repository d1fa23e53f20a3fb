"""Annotation records and the append-only label log.

The log is JSON Lines; state is reconstructed by replay with the last
record per (gif, annotator, round) key winning, so resubmission is a plain
append.
"""

from __future__ import annotations

import enum
import json
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from ..errors import AnnotationError, CriteriaRequiredError
from ..labels import Label


class Round(str, enum.Enum):
    ROUND1 = "round1"
    ROUND2 = "round2"
    FINAL = "final"


class Criterion(str, enum.Enum):
    DIRECTED_BULLYING = "directed_bullying"
    HATE_SPEECH_OR_REMARKS = "hate_speech_or_remarks"
    HOSTILE_GESTURE_OR_EXPRESSION = "hostile_gesture_or_expression"


@dataclass(frozen=True)
class AnnotationRecord:
    gif_id: str
    annotator_id: str
    round: Round
    label: Label
    criteria_flags: frozenset[Criterion] = frozenset()
    timestamp: datetime = field(default_factory=lambda: datetime.now(timezone.utc))

    def __post_init__(self):
        if self.label == Label.CYBERBULLYING and not self.criteria_flags:
            raise CriteriaRequiredError(
                f"{self.gif_id}: a cyberbullying label requires at least one criterion"
            )
        if self.label == Label.NON_CYBERBULLYING and self.criteria_flags:
            raise AnnotationError(
                f"{self.gif_id}: a non_cyberbullying label must carry no criteria"
            )

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.gif_id, self.annotator_id, self.round.value)

    def to_json(self) -> dict:
        return {
            "gif_id": self.gif_id,
            "annotator_id": self.annotator_id,
            "round": self.round.value,
            "label": self.label.value,
            "criteria_flags": sorted(c.value for c in self.criteria_flags),
            "timestamp": self.timestamp.isoformat(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "AnnotationRecord":
        return cls(
            gif_id=obj["gif_id"],
            annotator_id=obj["annotator_id"],
            round=Round(obj["round"]),
            label=Label(obj["label"]),
            criteria_flags=frozenset(Criterion(c) for c in obj.get("criteria_flags", [])),
            timestamp=datetime.fromisoformat(obj["timestamp"]),
        )


class AnnotationStore:
    """Append-only JSONL log with replay. Appends are serialized by a lock;
    one process owns the file."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._records: dict[tuple[str, str, str], AnnotationRecord] = {}
        if self.path.exists():
            for line in self.path.read_text(encoding="utf-8").splitlines():
                line = line.strip()
                if not line:
                    continue
                record = AnnotationRecord.from_json(json.loads(line))
                self._records[record.key] = record

    def append(self, record: AnnotationRecord) -> AnnotationRecord:
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(record.to_json(), sort_keys=True) + "\n")
            self._records[record.key] = record
        return record

    def all_records(self) -> list[AnnotationRecord]:
        return list(self._records.values())

    def by_round(self, round: Round) -> list[AnnotationRecord]:
        return [r for r in self._records.values() if r.round == round]

    def for_gif(self, gif_id: str, round: Round | None = None) -> list[AnnotationRecord]:
        return [
            r for r in self._records.values()
            if r.gif_id == gif_id and (round is None or r.round == round)
        ]

    def get(self, gif_id: str, annotator_id: str, round: Round) -> AnnotationRecord | None:
        return self._records.get((gif_id, annotator_id, round.value))

    def __len__(self) -> int:
        return len(self._records)
