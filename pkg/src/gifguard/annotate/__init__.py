from .agreement import AgreementReport, agreement_report, cohens_kappa
from .api import create_app
from .records import AnnotationRecord, AnnotationStore, Criterion, Round
from .service import (
    FINAL_ANNOTATOR,
    AnnotationService,
    load_assignments,
    save_assignments,
)

__all__ = [
    "FINAL_ANNOTATOR",
    "AgreementReport",
    "AnnotationRecord",
    "AnnotationService",
    "AnnotationStore",
    "Criterion",
    "Round",
    "agreement_report",
    "cohens_kappa",
    "create_app",
    "load_assignments",
    "save_assignments",
]
