"""Mutable correction state: verdicts, per-image label sets, difficult flags.

Every mutation appends one event to an append-only log before it is applied,
so the live state is always exactly ``replay(log)``. The log is the audit
trail of the human review session; it is never truncated or rewritten.
"""

from __future__ import annotations

import csv
import io
import json
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Sequence

from .errors import (
    CorruptLog,
    EmptySelection,
    UnknownDetection,
    UnknownImage,
    UnknownLabel,
)
from .model import Dataset, Verdict

LOG_FILE = "corrections.log.jsonl"
SNAPSHOT_FILE = "snapshot.json"

SET_VERDICT = "SetVerdict"
ASSIGN_LABELS = "AssignLabels"
BULK_VERDICT = "BulkVerdict"


@dataclass(frozen=True)
class LogEvent:
    seq: int
    kind: str
    payload: dict
    at: str  # ISO-8601 UTC

    def to_json(self) -> str:
        return json.dumps(
            {"seq": self.seq, "kind": self.kind, "payload": self.payload, "at": self.at},
            sort_keys=True,
        )


@dataclass(frozen=True)
class CorrectionRecord:
    image: str
    labels: frozenset[str]
    difficult: bool
    revision: int
    updated_at: str


def _now_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


def _parse_log_line(line: str, lineno: int) -> LogEvent:
    try:
        raw = json.loads(line)
        return LogEvent(
            seq=raw["seq"], kind=raw["kind"], payload=raw["payload"], at=raw["at"]
        )
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise CorruptLog(f"line {lineno}: unreadable event ({exc})") from exc


def read_log(path: Path) -> list[LogEvent]:
    """Load all events from a JSONL log file; missing file means empty log."""
    path = Path(path)
    if not path.exists():
        return []
    events = []
    with path.open("r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if line.strip():
                events.append(_parse_log_line(line, lineno))
    return events


def _check_seq(events: Sequence[LogEvent]) -> None:
    for i, event in enumerate(events, start=1):
        if event.seq != i:
            raise CorruptLog(f"expected seq {i}, found {event.seq}")


class CorrectionStore:
    """Single-writer correction state over one immutable dataset.

    All mutations are serialized through ``self.lock``; readers that need a
    consistent multi-field view take the same lock.
    """

    def __init__(self, dataset: Dataset, log_path: Path | None = None):
        self.dataset = dataset
        self.records: dict[str, CorrectionRecord] = {}
        self.verdicts: dict[str, Verdict] = {}
        self.log: list[LogEvent] = []
        self.lock = threading.RLock()
        self._log_path = Path(log_path) if log_path is not None else None

    # -- construction -----------------------------------------------------

    @classmethod
    def replay(cls, dataset: Dataset, events: Sequence[LogEvent]) -> "CorrectionStore":
        """Rebuild state from an event sequence.

        Raises CorruptLog when seq numbers are not dense from 1.
        """
        _check_seq(events)
        store = cls(dataset)
        for event in events:
            store._apply(event)
            store.log.append(event)
        return store

    @classmethod
    def open(
        cls,
        dataset: Dataset,
        log_path: Path,
        snapshot_path: Path | None = None,
    ) -> "CorrectionStore":
        """Open (or create) a persistent store backed by a JSONL log.

        When a snapshot is present and consistent with the log it seeds the
        state, and only events after its seq are applied.
        """
        log_path = Path(log_path)
        events = read_log(log_path)
        _check_seq(events)

        store = cls(dataset)
        start = 0
        if snapshot_path is not None:
            snap = _load_snapshot(Path(snapshot_path), dataset)
            if snap is not None and snap[0] <= len(events):
                start, store.records, store.verdicts = snap
        for event in events[start:]:
            store._apply(event)
        store.log = list(events)
        store._log_path = log_path
        return store

    # -- event plumbing ----------------------------------------------------

    def _next_seq(self) -> int:
        return len(self.log) + 1

    def _persist(self, event: LogEvent) -> None:
        if self._log_path is None:
            return
        self._log_path.parent.mkdir(parents=True, exist_ok=True)
        with self._log_path.open("a", encoding="utf-8") as handle:
            handle.write(event.to_json() + "\n")
            handle.flush()

    def _commit(self, kind: str, payload: dict) -> LogEvent:
        # Persist before applying: a failure here must leave state untouched.
        event = LogEvent(seq=self._next_seq(), kind=kind, payload=payload, at=_now_iso())
        self._persist(event)
        self._apply(event)
        self.log.append(event)
        return event

    def _apply(self, event: LogEvent) -> None:
        payload = event.payload
        if event.kind == SET_VERDICT:
            self.verdicts[payload["detection"]] = Verdict(payload["verdict"])
        elif event.kind == BULK_VERDICT:
            verdict = Verdict(payload["verdict"])
            for det_id in payload["detections"]:
                self.verdicts[det_id] = verdict
        elif event.kind == ASSIGN_LABELS:
            image = payload["image"]
            previous = self.records.get(image)
            self.records[image] = CorrectionRecord(
                image=image,
                labels=frozenset(payload["labels"]),
                difficult=bool(payload["difficult"]),
                revision=(previous.revision if previous else 0) + 1,
                updated_at=event.at,
            )
        else:
            raise CorruptLog(f"unknown event kind '{event.kind}'")

    # -- queries ------------------------------------------------------------

    def verdict(self, detection_id: str) -> Verdict:
        if detection_id not in self.dataset.detection_by_id:
            raise UnknownDetection(f"no detection '{detection_id}'")
        return self.verdicts.get(detection_id, Verdict.UNREVIEWED)

    def state_snapshot(self) -> dict:
        """Comparable view of the full state (used by replay-equality tests)."""
        return {
            "records": {
                img: (sorted(r.labels), r.difficult, r.revision, r.updated_at)
                for img, r in self.records.items()
            },
            "verdicts": {k: v.value for k, v in self.verdicts.items()},
        }

    # -- mutations -----------------------------------------------------------

    def set_verdict(self, detection_id: str, verdict: Verdict) -> int:
        """Replace one detection's verdict; returns the new store revision (seq)."""
        verdict = Verdict(verdict)
        with self.lock:
            if detection_id not in self.dataset.detection_by_id:
                raise UnknownDetection(f"no detection '{detection_id}'")
            event = self._commit(
                SET_VERDICT, {"detection": detection_id, "verdict": verdict.value}
            )
            return event.seq

    def bulk_set_verdict(self, detection_ids: Iterable[str], verdict: Verdict) -> int:
        """Set all listed detections atomically; a single bad id rejects the batch."""
        verdict = Verdict(verdict)
        ids = list(detection_ids)
        with self.lock:
            if not ids:
                raise EmptySelection("no detections selected")
            for det_id in ids:
                if det_id not in self.dataset.detection_by_id:
                    raise UnknownDetection(f"no detection '{det_id}'")
            self._commit(BULK_VERDICT, {"detections": ids, "verdict": verdict.value})
            return len(set(ids))

    def assign_labels(
        self, image_id: str, labels: Iterable[str], difficult: bool = False
    ) -> CorrectionRecord:
        """Replace the image's label set wholesale (empty set = nothing present)."""
        label_set = frozenset(labels)
        with self.lock:
            if image_id not in self.dataset.image_by_id:
                raise UnknownImage(f"no image '{image_id}'")
            known = set(self.dataset.classes)
            for label in sorted(label_set):
                if label not in known:
                    raise UnknownLabel(f"label '{label}' not in dataset classes")
            self._commit(
                ASSIGN_LABELS,
                {"image": image_id, "labels": sorted(label_set), "difficult": bool(difficult)},
            )
            return self.records[image_id]

    def seed_from_ground_truth(self) -> int:
        """Assign the dataset's ground-truth label sets; returns records written."""
        count = 0
        for entry in self.dataset.ground_truth:
            self.assign_labels(entry.image, entry.labels, difficult=False)
            count += 1
        return count

    # -- snapshot -------------------------------------------------------------

    def write_snapshot(self, path: Path) -> None:
        with self.lock:
            doc = {
                "seq": len(self.log),
                "records": [
                    {
                        "image": r.image,
                        "labels": sorted(r.labels),
                        "difficult": r.difficult,
                        "revision": r.revision,
                        "updated_at": r.updated_at,
                    }
                    for r in self.records.values()
                ],
                "verdicts": {k: v.value for k, v in self.verdicts.items()},
            }
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(doc, sort_keys=True) + "\n", encoding="utf-8")


def _load_snapshot(path: Path, dataset: Dataset):
    if not path.exists():
        return None
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
        records = {
            r["image"]: CorrectionRecord(
                image=r["image"],
                labels=frozenset(r["labels"]),
                difficult=bool(r["difficult"]),
                revision=int(r["revision"]),
                updated_at=r["updated_at"],
            )
            for r in doc["records"]
        }
        verdicts = {k: Verdict(v) for k, v in doc["verdicts"].items()}
        return int(doc["seq"]), records, verdicts
    except (json.JSONDecodeError, KeyError, TypeError, ValueError):
        return None  # stale or unreadable snapshot: fall back to full replay


def label_menu(dataset: Dataset, image_id: str):
    """Split the class list for the correction panel.

    Returns (detected, alternative): detected holds (class, max confidence)
    for classes present in the image's detections, best-confidence first
    (ties alphabetical); alternative holds every remaining class sorted
    alphabetically. Together they partition the dataset's classes.
    """
    if image_id not in dataset.image_by_id:
        raise UnknownImage(f"no image '{image_id}'")
    best: dict[str, float] = {}
    for det in dataset.detections_by_image[image_id]:
        if det.class_name not in best or det.confidence > best[det.class_name]:
            best[det.class_name] = det.confidence
    detected = sorted(best.items(), key=lambda item: (-item[1], item[0]))
    alternative = sorted(c for c in dataset.classes if c not in best)
    return detected, alternative


def export_csv(dataset: Dataset, store: CorrectionStore) -> bytes:
    """The corrected labels as CSV (UTF-8, LF, RFC-4180 quoting).

    One row per (image, label) in the corrected records, sorted by image id
    then label; origin is "detected" when the label also appears among the
    image's detection classes. Byte-identical for identical state.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["image_id", "person_id", "label", "origin", "difficult"])
    with store.lock:
        for image_id in sorted(store.records):
            record = store.records[image_id]
            person = dataset.image_by_id[image_id].person
            detected = dataset.detected_classes_by_image[image_id]
            for label in sorted(record.labels):
                origin = "detected" if label in detected else "manual"
                writer.writerow([image_id, person, label, origin, "1" if record.difficult else "0"])
    return buffer.getvalue().encode("utf-8")
