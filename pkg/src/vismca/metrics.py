"""Evaluation analytics over the dataset plus the reviewer's corrections.

The corrected label sets are the ground truth: a true-positive verdict is
credited only when the detection's image actually carries that label, and at
most once per (image, class) pair. Everything else a reviewer marked counts
against precision, and unreviewed detections are left out of the ranking
entirely.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

from .corrections import CorrectionStore
from .errors import BadBinCount, BadThreshold, NoPositives, UnknownClass
from .model import Dataset, Verdict


@dataclass(frozen=True)
class Histogram:
    bin_edges: tuple[float, ...]  # ascending, 0.0 .. 1.0
    counts: tuple[int, ...]


@dataclass(frozen=True)
class PRCurve:
    points: tuple[tuple[float, float], ...]  # (recall, precision) per reviewed detection
    positives: int


@dataclass(frozen=True)
class ClassMetrics:
    class_name: str
    ap: float | None  # None iff the class has no corrected occurrences
    tp: int
    fp: int
    unreviewed: int
    positives: int


@dataclass(frozen=True)
class CoverageReport:
    classes_total: int
    classes_detected: int
    missed_pairs: int
    truth_pairs: int
    missed_fraction: float
    empty_truth: bool


def confidence_histogram(dataset: Dataset, bins: int) -> Histogram:
    """Equal-width bins over [0, 1]; only the final bin includes its right edge."""
    if bins < 1:
        raise BadBinCount(f"bins must be >= 1, got {bins}")
    edges = [i / bins for i in range(bins + 1)]
    edges[-1] = 1.0
    counts = [0] * bins
    for det in dataset.detections:
        index = min(bisect_right(edges, det.confidence) - 1, bins - 1)
        counts[index] += 1
    return Histogram(bin_edges=tuple(edges), counts=tuple(counts))


def low_confidence_images(dataset: Dataset, tau: float) -> list[str]:
    """Images worth triaging first: every detection below tau, or none at all.

    Ordered by the image's maximum confidence ascending; images with zero
    detections come first, sorted by id.
    """
    if not 0.0 <= tau <= 1.0:
        raise BadThreshold(f"tau must be in [0, 1], got {tau}")
    empty = []
    scored = []
    for img in dataset.images:
        dets = dataset.detections_by_image[img.id]
        if not dets:
            empty.append(img.id)
        else:
            best = max(d.confidence for d in dets)
            if best < tau:
                scored.append((best, img.id))
    return sorted(empty) + [img_id for _, img_id in sorted(scored)]


def _positives(store: CorrectionStore, class_name: str) -> int:
    return sum(1 for record in store.records.values() if class_name in record.labels)


def _ranked(dataset: Dataset, class_name: str):
    dets = [d for d in dataset.detections if d.class_name == class_name]
    dets.sort(key=lambda d: (-d.confidence, d.id))
    return dets


def precision_recall(dataset: Dataset, store: CorrectionStore, class_name: str) -> PRCurve:
    """Precision/recall walk over the class's reviewed detections.

    Detections are ranked by confidence descending (ties by id). A TP verdict
    is credited once per labeled (image, class) pair; duplicate or unmatched
    TP verdicts count as false positives so recall can never exceed 1.
    """
    if class_name not in dataset.classes:
        raise UnknownClass(f"no class '{class_name}'")
    positives = _positives(store, class_name)
    if positives == 0:
        raise NoPositives(f"class '{class_name}' has no corrected occurrences")

    credited: set[str] = set()
    tp = fp = 0
    points = []
    for det in _ranked(dataset, class_name):
        verdict = store.verdicts.get(det.id, Verdict.UNREVIEWED)
        if verdict is Verdict.UNREVIEWED:
            continue
        record = store.records.get(det.image)
        matched = record is not None and class_name in record.labels
        if verdict is Verdict.TRUE_POSITIVE and matched and det.image not in credited:
            credited.add(det.image)
            tp += 1
        else:
            fp += 1
        points.append((tp / positives, tp / (tp + fp)))
    return PRCurve(points=tuple(points), positives=positives)


def average_precision(curve: PRCurve) -> float:
    """Mean of the precision at each credited true positive, over all positives.

    Positives never retrieved contribute only to the denominator, so a
    ranking that misses ground truth is penalized.
    """
    total = 0.0
    previous_recall = 0.0
    for recall, precision in curve.points:
        if recall > previous_recall:
            total += precision
            previous_recall = recall
    return total / curve.positives


def class_metrics(dataset: Dataset, store: CorrectionStore, class_name: str) -> ClassMetrics:
    """Verdict tallies plus AP (None when the class has no positives yet)."""
    if class_name not in dataset.classes:
        raise UnknownClass(f"no class '{class_name}'")
    tp = fp = unreviewed = 0
    for det in dataset.detections:
        if det.class_name != class_name:
            continue
        verdict = store.verdicts.get(det.id, Verdict.UNREVIEWED)
        if verdict is Verdict.TRUE_POSITIVE:
            tp += 1
        elif verdict is Verdict.FALSE_POSITIVE:
            fp += 1
        else:
            unreviewed += 1
    positives = _positives(store, class_name)
    ap = None
    if positives > 0:
        ap = average_precision(precision_recall(dataset, store, class_name))
    return ClassMetrics(
        class_name=class_name, ap=ap, tp=tp, fp=fp, unreviewed=unreviewed, positives=positives
    )


def all_class_metrics(dataset: Dataset, store: CorrectionStore) -> list[ClassMetrics]:
    return [class_metrics(dataset, store, c) for c in sorted(dataset.classes)]


def coverage_report(dataset: Dataset, store: CorrectionStore) -> CoverageReport:
    """How much of the corrected truth the detector found at all.

    A corrected (image, label) pair is missed when the image has no detection
    of that label at any confidence.
    """
    detected_classes = {d.class_name for d in dataset.detections}
    truth_pairs = 0
    missed_pairs = 0
    for record in store.records.values():
        present = dataset.detected_classes_by_image[record.image]
        for label in record.labels:
            truth_pairs += 1
            if label not in present:
                missed_pairs += 1
    empty = truth_pairs == 0
    return CoverageReport(
        classes_total=len(dataset.classes),
        classes_detected=len(detected_classes),
        missed_pairs=missed_pairs,
        truth_pairs=truth_pairs,
        missed_fraction=0.0 if empty else missed_pairs / truth_pairs,
        empty_truth=empty,
    )
