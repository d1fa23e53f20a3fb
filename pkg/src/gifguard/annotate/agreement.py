"""Inter-annotator agreement: percent agreement and Cohen's kappa.

Kappa is chance-corrected: kappa = (p_o - p_e) / (1 - p_e) with p_e the
agreement expected from the raters' label marginals. The degenerate case
p_e = 1 (both raters constant on the same label) is defined as 1 when
observed agreement is also perfect, else 0.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

from ..errors import EmptyOverlapError
from ..labels import Label


@dataclass
class AgreementReport:
    n_items: int
    percent_agreement: float
    cohens_kappa: float
    disagreement_ids: list[str]

    def to_json(self) -> dict:
        return {
            "n_items": self.n_items,
            "percent_agreement": self.percent_agreement,
            "cohens_kappa": self.cohens_kappa,
            "disagreement_ids": self.disagreement_ids,
        }


def cohens_kappa(pairs: Sequence[tuple[Label, Label]]) -> float:
    n = len(pairs)
    p_o = sum(1 for a, b in pairs if a == b) / n
    marg_a = Counter(a for a, _ in pairs)
    marg_b = Counter(b for _, b in pairs)
    p_e = sum((marg_a[label] / n) * (marg_b[label] / n) for label in Label)
    if p_e == 1.0:
        return 1.0 if p_o == 1.0 else 0.0
    return (p_o - p_e) / (1.0 - p_e)


def agreement_report(labels_a: Mapping[str, Label], labels_b: Mapping[str, Label]
                     ) -> AgreementReport:
    """Agreement over the items both raters labeled."""
    overlap = sorted(set(labels_a) & set(labels_b))
    if not overlap:
        raise EmptyOverlapError("raters share no labeled items")
    pairs = [(labels_a[g], labels_b[g]) for g in overlap]
    agree = sum(1 for a, b in pairs if a == b)
    return AgreementReport(
        n_items=len(overlap),
        percent_agreement=agree / len(overlap),
        cohens_kappa=cohens_kappa(pairs),
        disagreement_ids=[g for g in overlap if labels_a[g] != labels_b[g]],
    )
