"""Person-by-object distribution matrix and correction-assistance suggestions.

The matrix overlays what the detector claimed (instance counts, mean
confidence) with what the reviewers confirmed (image counts per label).
Suggestions come from two sources: label combinations that co-occur in the
corrected corpus, and mixed-class clusters of overlapping boxes.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Sequence

from .corrections import CorrectionStore
from .errors import BadThreshold, UnknownImage
from .model import Dataset, Detection, iou

DEFAULT_SUGGESTION_K = 5
DEFAULT_IOU_THRESHOLD = 0.5


@dataclass(frozen=True)
class MatrixCell:
    person: str
    object: str
    detected_count: int  # detections of the object in this person's images
    detected_image_count: int  # images of this person with >= 1 such detection
    mean_confidence: float | None  # None when detected_count == 0
    corrected_count: int  # images whose corrected labels contain the object


@dataclass(frozen=True)
class MatrixSummary:
    per_person_detected: dict[str, int]
    per_person_corrected: dict[str, int]
    per_object_detected: dict[str, int]
    per_object_corrected: dict[str, int]


@dataclass(frozen=True)
class Matrix:
    cells: dict[tuple[str, str], MatrixCell]
    summary: MatrixSummary


@dataclass(frozen=True)
class OverlapStats:
    overlap_cells: int  # detected and corrected agree the object is there
    detected_only_cells: int
    corrected_only_cells: int


@dataclass(frozen=True)
class Suggestion:
    class_name: str
    score: float
    reason: str  # "combination" | "overlap"


@dataclass(frozen=True)
class SuggestionList:
    image: str
    suggestions: tuple[Suggestion, ...]


def build_matrix(dataset: Dataset, store: CorrectionStore) -> Matrix:
    """One cell per (person, class), including all-zero cells."""
    det_count: dict[tuple[str, str], int] = {}
    det_images: dict[tuple[str, str], set[str]] = {}
    conf_sum: dict[tuple[str, str], float] = {}
    for det in dataset.detections:
        person = dataset.image_by_id[det.image].person
        key = (person, det.class_name)
        det_count[key] = det_count.get(key, 0) + 1
        det_images.setdefault(key, set()).add(det.image)
        conf_sum[key] = conf_sum.get(key, 0.0) + det.confidence

    corr_count: dict[tuple[str, str], int] = {}
    for record in store.records.values():
        person = dataset.image_by_id[record.image].person
        for label in record.labels:
            key = (person, label)
            corr_count[key] = corr_count.get(key, 0) + 1

    cells: dict[tuple[str, str], MatrixCell] = {}
    for person in dataset.people:
        for obj in dataset.classes:
            key = (person, obj)
            n = det_count.get(key, 0)
            cells[key] = MatrixCell(
                person=person,
                object=obj,
                detected_count=n,
                detected_image_count=len(det_images.get(key, ())),
                mean_confidence=(conf_sum[key] / n) if n else None,
                corrected_count=corr_count.get(key, 0),
            )

    per_person_detected = {p: 0 for p in dataset.people}
    per_person_corrected = {p: 0 for p in dataset.people}
    per_object_detected = {c: 0 for c in dataset.classes}
    per_object_corrected = {c: 0 for c in dataset.classes}
    for (person, obj), cell in cells.items():
        per_person_detected[person] += cell.detected_count
        per_person_corrected[person] += cell.corrected_count
        per_object_detected[obj] += cell.detected_count
        per_object_corrected[obj] += cell.corrected_count

    return Matrix(
        cells=cells,
        summary=MatrixSummary(
            per_person_detected=per_person_detected,
            per_person_corrected=per_person_corrected,
            per_object_detected=per_object_detected,
            per_object_corrected=per_object_corrected,
        ),
    )


def overlap_stats(matrix: Matrix) -> dict[str, OverlapStats]:
    """Partition each person's nonzero cells into overlap / detected-only / corrected-only."""
    out: dict[str, OverlapStats] = {}
    tallies: dict[str, list[int]] = {}
    for cell in matrix.cells.values():
        overlap = detected_only = corrected_only = 0
        if cell.detected_count > 0 and cell.corrected_count > 0:
            overlap = 1
        elif cell.detected_count > 0:
            detected_only = 1
        elif cell.corrected_count > 0:
            corrected_only = 1
        acc = tallies.setdefault(cell.person, [0, 0, 0])
        acc[0] += overlap
        acc[1] += detected_only
        acc[2] += corrected_only
    for person, (a, b, c) in tallies.items():
        out[person] = OverlapStats(a, b, c)
    return out


def cluster_overlapping(
    detections: Sequence[Detection], iou_threshold: float
) -> list[list[str]]:
    """Single-link connected components of one image's boxes under IoU.

    Two boxes link when iou >= threshold AND iou > 0, so a zero threshold
    does not glue disjoint boxes together. Clusters are ordered by smallest
    member id; members are sorted by id.
    """
    if not 0.0 <= iou_threshold <= 1.0:
        raise BadThreshold(f"iou_threshold must be in [0, 1], got {iou_threshold}")
    dets = sorted(detections, key=lambda d: d.id)
    parent = list(range(len(dets)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(dets)):
        for j in range(i + 1, len(dets)):
            overlap = iou(dets[i].bbox, dets[j].bbox)
            if overlap > 0 and overlap >= iou_threshold:
                parent[find(i)] = find(j)

    groups: dict[int, list[str]] = {}
    for i, det in enumerate(dets):
        groups.setdefault(find(i), []).append(det.id)
    return sorted((sorted(members) for members in groups.values()), key=lambda g: g[0])


def suggest_labels(
    dataset: Dataset,
    store: CorrectionStore,
    image_id: str,
    k: int = DEFAULT_SUGGESTION_K,
    iou_threshold: float = DEFAULT_IOU_THRESHOLD,
) -> SuggestionList:
    """Rank classes the reviewer may have missed for one image.

    Combination suggestions score a candidate C by its conditional frequency
    against each already-assigned label L, max over L, counting only *other*
    corrected images so a suggestion never justifies itself. Overlap
    suggestions come from mixed-class box clusters, scored by the cluster's
    best confidence. Already-assigned classes are never proposed.
    """
    if image_id not in dataset.image_by_id:
        raise UnknownImage(f"no image '{image_id}'")
    if not 0.0 <= iou_threshold <= 1.0:
        raise BadThreshold(f"iou_threshold must be in [0, 1], got {iou_threshold}")
    if k < 1:
        raise BadThreshold(f"k must be >= 1, got {k}")

    record = store.records.get(image_id)
    assigned = record.labels if record is not None else frozenset()

    best: dict[str, tuple[float, str]] = {}  # class -> (score, reason)

    others = [r for img, r in store.records.items() if img != image_id]
    for label in assigned:
        with_label = [r for r in others if label in r.labels]
        if not with_label:
            continue
        for candidate in dataset.classes:
            if candidate in assigned:
                continue
            both = sum(1 for r in with_label if candidate in r.labels)
            if both == 0:
                continue
            score = both / len(with_label)
            if candidate not in best or score > best[candidate][0]:
                best[candidate] = (score, "combination")

    dets = dataset.detections_by_image[image_id]
    by_id = {d.id: d for d in dets}
    for cluster in cluster_overlapping(dets, iou_threshold):
        classes = {by_id[i].class_name for i in cluster}
        if len(classes) < 2:
            continue
        score = max(by_id[i].confidence for i in cluster)
        for class_name in classes:
            if class_name in assigned:
                continue
            current = best.get(class_name)
            if current is None or score > current[0]:
                best[class_name] = (score, "overlap")

    ranked = sorted(best.items(), key=lambda item: (-item[1][0], item[0]))[:k]
    return SuggestionList(
        image=image_id,
        suggestions=tuple(
            Suggestion(class_name=c, score=score, reason=reason)
            for c, (score, reason) in ranked
        ),
    )


def matrix_csv(matrix: Matrix) -> bytes:
    """Matrix cells as CSV sorted by person then object; floats to 6 decimals."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(
        ["person", "object", "detected_count", "detected_image_count", "mean_confidence", "corrected_count"]
    )
    for key in sorted(matrix.cells):
        cell = matrix.cells[key]
        mean = "" if cell.mean_confidence is None else f"{cell.mean_confidence:.6f}"
        writer.writerow(
            [cell.person, cell.object, cell.detected_count, cell.detected_image_count, mean, cell.corrected_count]
        )
    return buffer.getvalue().encode("utf-8")
