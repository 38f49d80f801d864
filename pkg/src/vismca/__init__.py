"""Human-in-the-loop workbench for correcting object-detection output.

Pipeline: ingest detector output, let reviewers mark verdicts and assign
image labels, then analyze the corrected corpus (average precision, class
coverage, person-object co-occurrence, ownership-graph queries).
"""

from .cooccurrence import build_matrix, cluster_overlapping, overlap_stats, suggest_labels
from .corrections import CorrectionRecord, CorrectionStore, LogEvent, export_csv, label_menu
from .graph import (
    GraphSource,
    OwnershipGraph,
    ShareMode,
    build_graph,
    ego_network,
    objects_shared_by,
    totem_candidates,
)
from .metrics import (
    average_precision,
    confidence_histogram,
    coverage_report,
    low_confidence_images,
    precision_recall,
)
from .model import (
    BBox,
    Dataset,
    Detection,
    ImageRecord,
    ValidationReport,
    Verdict,
    ingest_dataset,
    iou,
    serialize_dataset,
    validate_dataset,
)

__all__ = [
    "BBox",
    "CorrectionRecord",
    "CorrectionStore",
    "Dataset",
    "Detection",
    "GraphSource",
    "ImageRecord",
    "LogEvent",
    "OwnershipGraph",
    "ShareMode",
    "ValidationReport",
    "Verdict",
    "average_precision",
    "build_graph",
    "build_matrix",
    "cluster_overlapping",
    "confidence_histogram",
    "coverage_report",
    "ego_network",
    "export_csv",
    "ingest_dataset",
    "iou",
    "label_menu",
    "low_confidence_images",
    "objects_shared_by",
    "overlap_stats",
    "precision_recall",
    "serialize_dataset",
    "suggest_labels",
    "totem_candidates",
    "validate_dataset",
]
