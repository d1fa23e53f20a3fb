"""Two-round annotation workflow over a dataset manifest.

Round 1 serves fixed per-annotator assignment blocks. Round 2 is
adjudication: any GIF whose round-1 labels disagree may receive a round-2
record. Finalization derives one final label per GIF — the unanimous
round-1 label, else the round-2 adjudication — and writes it back to the
log as a ``final``-round record under the reserved annotator id
``"final"``, which makes finalization idempotent.
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path

from ..errors import (
    AnnotationError,
    NotServedError,
    UnknownAnnotatorError,
    UnknownGifError,
    UnresolvedLabelsError,
)
from ..ingest.records import DatasetManifest, GifRecord
from ..labels import GifStatus, Label
from .agreement import AgreementReport, agreement_report
from .records import AnnotationRecord, AnnotationStore, Criterion, Round

logger = logging.getLogger(__name__)

FINAL_ANNOTATOR = "final"


class AnnotationService:
    def __init__(self, manifest: DatasetManifest, store: AnnotationStore,
                 assignments: dict[str, dict[str, list[str]]] | None = None):
        self.manifest = manifest
        self.store = store
        self._gifs = manifest.by_id()
        # assignments[round_value][annotator_id] -> ordered gif ids
        self.assignments: dict[str, dict[str, list[str]]] = assignments or {}

    # -- assignment management -------------------------------------------

    def assign(self, round: Round, annotator_id: str, gif_ids: list[str]) -> None:
        unknown = [g for g in gif_ids if g not in self._gifs]
        if unknown:
            raise UnknownGifError(f"cannot assign unknown gifs: {unknown[:5]}")
        self.assignments.setdefault(round.value, {})[annotator_id] = list(gif_ids)

    def assignment_for(self, round: Round, annotator_id: str) -> list[str]:
        by_annotator = self.assignments.get(round.value, {})
        if annotator_id not in by_annotator:
            if round == Round.ROUND2:
                # Adjudicators work the disagreement queue directly.
                return [rec.id for rec in self.disagreements(Round.ROUND1)]
            raise UnknownAnnotatorError(
                f"annotator {annotator_id!r} has no assignment in {round.value}"
            )
        return by_annotator[annotator_id]

    def progress(self, annotator_id: str, round: Round) -> dict[str, int]:
        assigned = self.assignment_for(round, annotator_id)
        labeled = sum(
            1 for g in assigned if self.store.get(g, annotator_id, round) is not None
        )
        return {"labeled": labeled, "assigned": len(assigned)}

    # -- the two-round workflow ------------------------------------------

    def next_unlabeled(self, annotator_id: str, round: Round) -> GifRecord | None:
        """The next assigned GIF this annotator has not labeled this round,
        or None when the assignment is exhausted."""
        for gif_id in self.assignment_for(round, annotator_id):
            if self.store.get(gif_id, annotator_id, round) is None:
                return self._gifs[gif_id]
        return None

    def submit_label(self, gif_id: str, annotator_id: str, round: Round, label: Label,
                     criteria_flags: frozenset[Criterion] = frozenset()
                     ) -> AnnotationRecord:
        if gif_id not in self._gifs:
            raise UnknownGifError(f"unknown gif {gif_id!r}")
        if round == Round.FINAL:
            raise AnnotationError("final records are produced by finalization only")
        if round == Round.ROUND2:
            # Adjudication is legal for any disagreeing GIF, including
            # resubmissions that revise an earlier adjudication.
            round1_labels = {r.label for r in self.store.for_gif(gif_id, Round.ROUND1)}
            explicit = gif_id in self.assignments.get(round.value, {}).get(annotator_id, [])
            if len(round1_labels) <= 1 and not explicit:
                raise NotServedError(f"gif {gif_id!r} has no round-1 disagreement to adjudicate")
        elif gif_id not in self.assignment_for(round, annotator_id):
            raise NotServedError(
                f"gif {gif_id!r} was not served to {annotator_id!r} in {round.value}"
            )
        record = AnnotationRecord(
            gif_id=gif_id,
            annotator_id=annotator_id,
            round=round,
            label=label,
            criteria_flags=frozenset(criteria_flags),
            timestamp=datetime.now(timezone.utc),
        )
        return self.store.append(record)

    def agreement(self, round: Round, rater_a: str, rater_b: str) -> AgreementReport:
        labels_a = {r.gif_id: r.label for r in self.store.by_round(round)
                    if r.annotator_id == rater_a}
        labels_b = {r.gif_id: r.label for r in self.store.by_round(round)
                    if r.annotator_id == rater_b}
        return agreement_report(labels_a, labels_b)

    def disagreements(self, round: Round = Round.ROUND1) -> list[GifRecord]:
        """GIFs whose labels in the round are not unanimous, in manifest
        order, excluding any already adjudicated in round 2."""
        out = []
        for rec in self.manifest.records:
            labels = {r.label for r in self.store.for_gif(rec.id, round)}
            if len(labels) > 1 and not self.store.for_gif(rec.id, Round.ROUND2):
                out.append(rec)
        return out

    # -- finalization ------------------------------------------------------

    def final_label_for(self, gif_id: str) -> Label | None:
        round1 = self.store.for_gif(gif_id, Round.ROUND1)
        labels = {r.label for r in round1}
        if len(labels) == 1:
            return labels.pop()
        round2 = self.store.for_gif(gif_id, Round.ROUND2)
        if round2:
            return max(round2, key=lambda r: r.timestamp).label
        return None

    def finalize_labels(self, manifest: DatasetManifest | None = None
                        ) -> tuple[DatasetManifest, dict[str, int]]:
        """Resolve every GIF to one final label; statuses become annotated.

        Unanimous round-1 labels win; otherwise the round-2 adjudication
        record. GIFs with neither are reported together in one error.
        """
        manifest = manifest or self.manifest
        unresolved = []
        finals: dict[str, Label] = {}
        for rec in manifest.records:
            if rec.status == GifStatus.EXCLUDED:
                continue
            label = self.final_label_for(rec.id)
            if label is None:
                unresolved.append(rec.id)
            else:
                finals[rec.id] = label
        if unresolved:
            raise UnresolvedLabelsError(sorted(unresolved))

        for gif_id, label in finals.items():
            flags = frozenset()
            if label == Label.CYBERBULLYING:
                flags = self._merged_criteria(gif_id)
            self.store.append(AnnotationRecord(
                gif_id=gif_id,
                annotator_id=FINAL_ANNOTATOR,
                round=Round.FINAL,
                label=label,
                criteria_flags=flags,
                timestamp=datetime.now(timezone.utc),
            ))
        records = [
            rec if rec.status == GifStatus.EXCLUDED else replace(rec, status=GifStatus.ANNOTATED)
            for rec in manifest.records
        ]
        summary = Counter(label.value for label in finals.values())
        logger.info("finalized %d labels: %s", len(finals), dict(summary))
        return manifest.with_records(records), dict(summary)

    def _merged_criteria(self, gif_id: str) -> frozenset[Criterion]:
        flags: set[Criterion] = set()
        for record in self.store.for_gif(gif_id):
            if record.label == Label.CYBERBULLYING:
                flags.update(record.criteria_flags)
        return frozenset(flags) or frozenset({Criterion.DIRECTED_BULLYING})

    def final_labels(self) -> dict[str, Label]:
        return {
            r.gif_id: r.label
            for r in self.store.by_round(Round.FINAL)
            if r.annotator_id == FINAL_ANNOTATOR
        }


def save_assignments(assignments: dict, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(assignments, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_assignments(path: Path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))
