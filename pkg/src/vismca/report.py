"""Batch analysis report reproducing the headline queries in one document.

The JSON output is deterministic: keys are sorted, floats are rounded to six
decimals, and the ``generated_at`` stamp is the timestamp of the last
correction event (not wall clock), so identical inputs give identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from .cooccurrence import build_matrix
from .corrections import LOG_FILE, SNAPSHOT_FILE, CorrectionStore
from .graph import GraphSource, ShareMode, build_graph, objects_shared_by, totem_candidates
from .metrics import all_class_metrics, coverage_report
from .model import Dataset, ingest_dataset


@dataclass(frozen=True)
class ReportParams:
    shared_k: int = 8
    shared_mode: ShareMode = ShareMode.AT_LEAST
    totem_group_size: int = 8
    totem_min_images: int = 2


def _round6(value):
    if isinstance(value, float):
        return round(value, 6)
    if isinstance(value, dict):
        return {k: _round6(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round6(v) for v in value]
    return value


def build_report(dataset: Dataset, store: CorrectionStore, params: ReportParams = ReportParams()) -> dict:
    """Assemble the analysis document from one consistent store snapshot."""
    with store.lock:
        coverage = coverage_report(dataset, store)
        per_class = all_class_metrics(dataset, store)
        matrix = build_matrix(dataset, store)
        graph = build_graph(dataset, store, GraphSource.CORRECTED)
        shared = objects_shared_by(graph, params.shared_k, params.shared_mode)
        totem = totem_candidates(graph, params.totem_group_size, params.totem_min_images)
        generated_at = store.log[-1].at if store.log else None

    report = {
        "generated_at": generated_at,
        "params": {
            "shared_k": params.shared_k,
            "shared_mode": params.shared_mode.value,
            "totem_group_size": params.totem_group_size,
            "totem_min_images": params.totem_min_images,
        },
        "coverage": {
            "classes_total": coverage.classes_total,
            "classes_detected": coverage.classes_detected,
            "truth_pairs": coverage.truth_pairs,
            "missed_pairs": coverage.missed_pairs,
            "missed_fraction": coverage.missed_fraction,
            "empty_truth": coverage.empty_truth,
        },
        "per_class": [
            {
                "class": m.class_name,
                "ap": m.ap,
                "tp": m.tp,
                "fp": m.fp,
                "unreviewed": m.unreviewed,
                "positives": m.positives,
                "no_positives": m.positives == 0,
            }
            for m in per_class
        ],
        "matrix_summary": {
            "per_person_detected": matrix.summary.per_person_detected,
            "per_person_corrected": matrix.summary.per_person_corrected,
            "per_object_detected": matrix.summary.per_object_detected,
            "per_object_corrected": matrix.summary.per_object_corrected,
        },
        "shared_objects": [{"object": obj, "owners": n} for obj, n in shared],
        "totem": totem,
    }
    return _round6(report)


def render_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def run_report(
    dataset_path: Union[str, Path],
    store_dir: Union[str, Path],
    params: ReportParams = ReportParams(),
) -> str:
    """Load dataset + corrections from disk and render the report document."""
    dataset = ingest_dataset(Path(dataset_path).read_bytes())
    store_dir = Path(store_dir)
    store = CorrectionStore.open(
        dataset, store_dir / LOG_FILE, snapshot_path=store_dir / SNAPSHOT_FILE
    )
    return render_report(build_report(dataset, store, params))
