"""Canonical domain types, dataset ingestion, validation, and box geometry.

A dataset is a single JSON document (see ``parse_dataset``). Once ingested it
is immutable: every analytics call works on the same frozen snapshot, which
makes read paths trivially safe to share across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import IO, Union

from .errors import ParseError, ValidationError


class Verdict(str, Enum):
    """Reviewer judgment on one detection."""

    UNREVIEWED = "unreviewed"
    TRUE_POSITIVE = "tp"
    FALSE_POSITIVE = "fp"


@dataclass(frozen=True)
class BBox:
    """Axis-aligned box in pixels, top-left origin."""

    x: float
    y: float
    w: float
    h: float

    @property
    def area(self) -> float:
        return self.w * self.h


def iou(a: BBox, b: BBox) -> float:
    """Intersection-over-union of two boxes; 0.0 when disjoint."""
    ix = min(a.x + a.w, b.x + b.w) - max(a.x, b.x)
    iy = min(a.y + a.h, b.y + b.h) - max(a.y, b.y)
    if ix <= 0 or iy <= 0:
        return 0.0
    inter = ix * iy
    union = a.area + b.area - inter
    return inter / union


@dataclass(frozen=True)
class ImageRecord:
    id: str
    person: str
    width: int
    height: int
    uri: str | None = None


@dataclass(frozen=True)
class Detection:
    """One detector output. Reviewer verdicts live in the correction store,
    so a freshly ingested detection is implicitly unreviewed."""

    id: str
    image: str
    class_name: str
    bbox: BBox
    confidence: float


@dataclass(frozen=True)
class GroundTruthEntry:
    """Seed labels carried through ingest for the correction store."""

    image: str
    labels: frozenset[str]


@dataclass(frozen=True)
class Issue:
    code: str
    entity: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[Issue, ...]
    warnings: tuple[Issue, ...]
    counts: tuple[int, int, int, int]  # images, people, classes, detections

    @property
    def accepted(self) -> bool:
        return not self.errors


@dataclass(frozen=True, eq=True)
class Dataset:
    """Immutable ingested corpus."""

    classes: tuple[str, ...]
    people: tuple[str, ...]
    images: tuple[ImageRecord, ...]
    detections: tuple[Detection, ...]
    ground_truth: tuple[GroundTruthEntry, ...] = field(default=())

    @cached_property
    def image_by_id(self) -> dict[str, ImageRecord]:
        return {img.id: img for img in self.images}

    @cached_property
    def detection_by_id(self) -> dict[str, Detection]:
        return {d.id: d for d in self.detections}

    @cached_property
    def detections_by_image(self) -> dict[str, tuple[Detection, ...]]:
        out: dict[str, list[Detection]] = {img.id: [] for img in self.images}
        for d in self.detections:
            out[d.image].append(d)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def images_by_person(self) -> dict[str, tuple[ImageRecord, ...]]:
        out: dict[str, list[ImageRecord]] = {p: [] for p in self.people}
        for img in self.images:
            out[img.person].append(img)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def detected_classes_by_image(self) -> dict[str, frozenset[str]]:
        return {
            img_id: frozenset(d.class_name for d in dets)
            for img_id, dets in self.detections_by_image.items()
        }

    def counts(self) -> tuple[int, int, int, int]:
        return (len(self.images), len(self.people), len(self.classes), len(self.detections))


def _require(raw: dict, key: str, kind, where: str):
    if key not in raw:
        raise ParseError(f"{where}: missing required field '{key}'")
    value = raw[key]
    if kind is float:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ParseError(f"{where}: field '{key}' must be a number")
        return float(value)
    if kind is int:
        if not isinstance(value, int) or isinstance(value, bool):
            raise ParseError(f"{where}: field '{key}' must be an integer")
        return value
    if not isinstance(value, kind):
        raise ParseError(f"{where}: field '{key}' must be {kind.__name__}")
    return value


def parse_dataset(source: Union[bytes, str, IO]) -> Dataset:
    """Parse the dataset JSON document into a (not yet validated) Dataset.

    Raises ParseError for malformed JSON or schema violations.
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    try:
        raw = json.loads(source)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ParseError("top-level document must be a JSON object")

    classes = _require(raw, "classes", list, "dataset")
    people = _require(raw, "people", list, "dataset")
    if not all(isinstance(c, str) for c in classes):
        raise ParseError("classes must be strings")
    if not all(isinstance(p, str) for p in people):
        raise ParseError("people must be strings")

    images = []
    for i, entry in enumerate(_require(raw, "images", list, "dataset")):
        if not isinstance(entry, dict):
            raise ParseError(f"images[{i}] must be an object")
        where = f"images[{i}]"
        uri = entry.get("uri")
        if uri is not None and not isinstance(uri, str):
            raise ParseError(f"{where}: field 'uri' must be a string")
        images.append(
            ImageRecord(
                id=_require(entry, "id", str, where),
                person=_require(entry, "person", str, where),
                width=_require(entry, "width", int, where),
                height=_require(entry, "height", int, where),
                uri=uri,
            )
        )

    detections = []
    for i, entry in enumerate(_require(raw, "detections", list, "dataset")):
        if not isinstance(entry, dict):
            raise ParseError(f"detections[{i}] must be an object")
        where = f"detections[{i}]"
        box = _require(entry, "bbox", list, where)
        if len(box) != 4 or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in box
        ):
            raise ParseError(f"{where}: bbox must be [x, y, w, h]")
        detections.append(
            Detection(
                id=_require(entry, "id", str, where),
                image=_require(entry, "image", str, where),
                class_name=_require(entry, "class", str, where),
                bbox=BBox(*(float(v) for v in box)),
                confidence=_require(entry, "confidence", float, where),
            )
        )

    ground_truth = []
    for i, entry in enumerate(raw.get("ground_truth") or []):
        if not isinstance(entry, dict):
            raise ParseError(f"ground_truth[{i}] must be an object")
        where = f"ground_truth[{i}]"
        labels = _require(entry, "labels", list, where)
        if not all(isinstance(v, str) for v in labels):
            raise ParseError(f"{where}: labels must be strings")
        ground_truth.append(
            GroundTruthEntry(image=_require(entry, "image", str, where), labels=frozenset(labels))
        )

    return Dataset(
        classes=tuple(classes),
        people=tuple(people),
        images=tuple(images),
        detections=tuple(detections),
        ground_truth=tuple(ground_truth),
    )


def validate_dataset(d: Dataset) -> ValidationReport:
    """Check every invariant; never raises. Dataset is accepted iff no errors."""
    errors: list[Issue] = []
    warnings: list[Issue] = []

    seen: set[str] = set()
    for p in d.people:
        if p in seen:
            errors.append(Issue("DUPLICATE_PERSON_ID", p, "person id appears twice"))
        seen.add(p)
    people = set(d.people)

    seen = set()
    for c in d.classes:
        if c in seen:
            errors.append(Issue("DUPLICATE_CLASS", c, "class name appears twice"))
        seen.add(c)
    classes = set(d.classes)

    image_ids: set[str] = set()
    image_map: dict[str, ImageRecord] = {}
    for img in d.images:
        if img.id in image_ids:
            errors.append(Issue("DUPLICATE_IMAGE_ID", img.id, "image id appears twice"))
        image_ids.add(img.id)
        image_map.setdefault(img.id, img)
        if img.width <= 0 or img.height <= 0:
            errors.append(
                Issue("BAD_DIMENSIONS", img.id, f"image is {img.width}x{img.height} pixels")
            )
        if img.person not in people:
            errors.append(
                Issue("DANGLING_PERSON_REF", img.id, f"person '{img.person}' not in people")
            )

    det_ids: set[str] = set()
    for det in d.detections:
        if det.id in det_ids:
            errors.append(Issue("DUPLICATE_DETECTION_ID", det.id, "detection id appears twice"))
        det_ids.add(det.id)
        if det.image not in image_ids:
            errors.append(
                Issue("DANGLING_IMAGE_REF", det.id, f"image '{det.image}' not in images")
            )
        if det.class_name not in classes:
            errors.append(
                Issue("UNKNOWN_CLASS", det.id, f"class '{det.class_name}' not in classes")
            )
        if not 0.0 <= det.confidence <= 1.0:
            errors.append(
                Issue("CONFIDENCE_RANGE", det.id, f"confidence {det.confidence} outside [0, 1]")
            )
        box = det.bbox
        if box.w <= 0 or box.h <= 0:
            errors.append(Issue("BBOX_NONPOSITIVE", det.id, f"box is {box.w}x{box.h}"))
        if box.x < 0 or box.y < 0:
            errors.append(Issue("BBOX_NEGATIVE_ORIGIN", det.id, f"box origin ({box.x}, {box.y})"))
        img = image_map.get(det.image)
        if img is not None and img.width > 0 and img.height > 0:
            # Overflowing boxes are common detector output; keep them as-is.
            if box.x + box.w > img.width or box.y + box.h > img.height:
                warnings.append(
                    Issue("BBOX_OUT_OF_BOUNDS", det.id, "box extends past the image bounds")
                )
            if box.w <= 1 and box.h <= 1 and (img.width > 1 or img.height > 1):
                warnings.append(
                    Issue("SUSPECT_NORMALIZED", det.id, "box smaller than one pixel; normalized coordinates?")
                )

    for entry in d.ground_truth:
        if entry.image not in image_ids:
            errors.append(
                Issue("DANGLING_IMAGE_REF", entry.image, "ground-truth image not in images")
            )
        for label in sorted(entry.labels):
            if label not in classes:
                errors.append(
                    Issue("UNKNOWN_CLASS", entry.image, f"ground-truth label '{label}' not in classes")
                )

    return ValidationReport(
        errors=tuple(errors),
        warnings=tuple(warnings),
        counts=(len(d.images), len(d.people), len(d.classes), len(d.detections)),
    )


def ingest_dataset(source: Union[bytes, str, IO]) -> Dataset:
    """Parse and validate; the returned dataset satisfies every invariant.

    Raises ParseError on malformed input, ValidationError (wrapping the
    report) when any invariant is violated.
    """
    dataset = parse_dataset(source)
    report = validate_dataset(dataset)
    if not report.accepted:
        raise ValidationError(report)
    return dataset


def _num(v: float):
    # Emit integral coordinates as JSON integers so ingest(serialize(d))
    # round-trips datasets authored with integer boxes.
    return int(v) if isinstance(v, float) and v.is_integer() else v


def dataset_to_dict(d: Dataset) -> dict:
    doc = {
        "classes": list(d.classes),
        "people": list(d.people),
        "images": [
            {
                "id": img.id,
                "person": img.person,
                "width": img.width,
                "height": img.height,
                **({"uri": img.uri} if img.uri is not None else {}),
            }
            for img in d.images
        ],
        "detections": [
            {
                "id": det.id,
                "image": det.image,
                "class": det.class_name,
                "bbox": [_num(det.bbox.x), _num(det.bbox.y), _num(det.bbox.w), _num(det.bbox.h)],
                "confidence": det.confidence,
            }
            for det in d.detections
        ],
    }
    if d.ground_truth:
        doc["ground_truth"] = [
            {"image": g.image, "labels": sorted(g.labels)} for g in d.ground_truth
        ]
    return doc


def serialize_dataset(d: Dataset) -> str:
    """Canonical JSON form; ingest(serialize(d)) == d."""
    return json.dumps(dataset_to_dict(d), indent=2, sort_keys=True) + "\n"
