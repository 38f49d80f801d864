"""Shared builders and independent oracles for the test suite.

The oracles deliberately take the dumbest possible path (pixel counting,
full re-enumeration per rank, naive scans) so they share no code with the
implementations they check.
"""

from __future__ import annotations

import json

from vismca.corrections import CorrectionStore
from vismca.model import BBox, Dataset, Verdict, ingest_dataset


def make_dataset(
    classes,
    people,
    images,
    detections=(),
    ground_truth=None,
) -> Dataset:
    """Build a dataset through the real ingest path.

    images: (id, person) or (id, person, width, height)
    detections: (id, image, class, [x, y, w, h], confidence)
    ground_truth: (image, [labels...])
    """
    doc = {
        "classes": list(classes),
        "people": list(people),
        "images": [
            {
                "id": img[0],
                "person": img[1],
                "width": img[2] if len(img) > 2 else 100,
                "height": img[3] if len(img) > 3 else 100,
            }
            for img in images
        ],
        "detections": [
            {"id": d[0], "image": d[1], "class": d[2], "bbox": list(d[3]), "confidence": d[4]}
            for d in detections
        ],
    }
    if ground_truth is not None:
        doc["ground_truth"] = [{"image": img, "labels": list(labels)} for img, labels in ground_truth]
    return ingest_dataset(json.dumps(doc))


def pixel_iou(a: BBox, b: BBox) -> float:
    """IoU by explicit pixel membership over the combined bounding region.

    Integer boxes only: pixel (px, py) belongs to a box when it lies in
    [x, x+w) x [y, y+h).
    """
    x0 = int(min(a.x, b.x))
    y0 = int(min(a.y, b.y))
    x1 = int(max(a.x + a.w, b.x + b.w))
    y1 = int(max(a.y + a.h, b.y + b.h))
    inter = union = 0
    for px in range(x0, x1):
        for py in range(y0, y1):
            in_a = a.x <= px < a.x + a.w and a.y <= py < a.y + a.h
            in_b = b.x <= px < b.x + b.w and b.y <= py < b.y + b.h
            if in_a and in_b:
                inter += 1
            if in_a or in_b:
                union += 1
    return inter / union


def oracle_ap(dataset: Dataset, store: CorrectionStore, class_name: str):
    """Brute-force average precision: precision re-counted at every rank.

    Returns None when the class has no corrected occurrences. A reviewed
    detection at rank k is a credited true positive when its verdict is TP,
    its image carries the label, and no earlier rank already claimed that
    image; precision at rank k is recounted from scratch over the prefix.
    """
    labeled = {img for img, r in store.records.items() if class_name in r.labels}
    positives = len(labeled)
    if positives == 0:
        return None

    ranked = sorted(
        (d for d in dataset.detections if d.class_name == class_name),
        key=lambda d: (-d.confidence, d.id),
    )
    reviewed = [
        d for d in ranked if store.verdicts.get(d.id, Verdict.UNREVIEWED) is not Verdict.UNREVIEWED
    ]

    def credited_flags(prefix):
        taken = set()
        flags = []
        for det in prefix:
            ok = (
                store.verdicts.get(det.id) is Verdict.TRUE_POSITIVE
                and det.image in labeled
                and det.image not in taken
            )
            if ok:
                taken.add(det.image)
            flags.append(ok)
        return flags

    total = 0.0
    for k in range(1, len(reviewed) + 1):
        flags = credited_flags(reviewed[:k])
        if flags[-1]:
            total += sum(flags) / k
    return total / positives


def naive_owner_weights(store: CorrectionStore, dataset: Dataset):
    """object -> person -> image count, scanned straight off the records."""
    weights: dict[str, dict[str, int]] = {}
    for record in store.records.values():
        person = dataset.image_by_id[record.image].person
        for label in record.labels:
            weights.setdefault(label, {}).setdefault(person, 0)
            weights[label][person] += 1
    return weights


def naive_shared(weights, k, at_least):
    out = []
    for obj, owners in weights.items():
        n = len(owners)
        if (n >= k) if at_least else (n == k):
            out.append((obj, n))
    return sorted(out, key=lambda item: (-item[1], item[0]))


def naive_totem(weights, group_size, min_images):
    return sorted(
        obj
        for obj, owners in weights.items()
        if len(owners) == group_size and all(v >= min_images for v in owners.values())
    )


def naive_ego_owners(weights, obj):
    return set(weights.get(obj, {}))
