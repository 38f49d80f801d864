"""Store-directory layout: canonical dataset copy, event log, snapshot, lock.

One directory per review session. ``ingest`` writes the canonical dataset
and seeds corrections from any ground truth; ``open_store_dir`` restores a
live store from snapshot plus log tail.
"""

from __future__ import annotations

from pathlib import Path
from typing import Union

from filelock import FileLock, Timeout

from .corrections import LOG_FILE, SNAPSHOT_FILE, CorrectionStore
from .errors import IngestFailure, StoreLocked
from .model import Dataset, ingest_dataset, serialize_dataset

DATASET_FILE = "dataset.json"
LOCK_FILE = ".vismca.lock"


def acquire_lock(store_dir: Union[str, Path]) -> FileLock:
    """Single-writer lock on a store directory; raises StoreLocked if held."""
    store_dir = Path(store_dir)
    store_dir.mkdir(parents=True, exist_ok=True)
    lock = FileLock(str(store_dir / LOCK_FILE))
    try:
        lock.acquire(timeout=0)
    except Timeout as exc:
        raise StoreLocked(f"store '{store_dir}' is in use by another process") from exc
    return lock


def ingest_into_store(data_path: Union[str, Path], store_dir: Union[str, Path]) -> tuple[Dataset, CorrectionStore]:
    """Ingest a dataset file into a fresh store directory.

    Seeds the correction log from the dataset's ground truth and writes a
    snapshot so later opens skip the replay. Refuses a directory that
    already holds a log (re-seeding would duplicate history).
    """
    data_path = Path(data_path)
    store_dir = Path(store_dir)
    if not data_path.exists():
        raise IngestFailure(f"dataset file '{data_path}' does not exist")
    if (store_dir / LOG_FILE).exists():
        raise IngestFailure(f"store '{store_dir}' already contains a correction log")

    dataset = ingest_dataset(data_path.read_bytes())
    store_dir.mkdir(parents=True, exist_ok=True)
    (store_dir / DATASET_FILE).write_text(serialize_dataset(dataset), encoding="utf-8")

    store = CorrectionStore.open(dataset, store_dir / LOG_FILE)
    store.seed_from_ground_truth()
    store.write_snapshot(store_dir / SNAPSHOT_FILE)
    return dataset, store


def open_store_dir(store_dir: Union[str, Path]) -> tuple[Dataset, CorrectionStore]:
    """Open an ingested store directory; raises IngestFailure when missing."""
    store_dir = Path(store_dir)
    dataset_path = store_dir / DATASET_FILE
    if not dataset_path.exists():
        raise IngestFailure(f"store '{store_dir}' has no dataset; run ingest first")
    dataset = ingest_dataset(dataset_path.read_bytes())
    store = CorrectionStore.open(
        dataset, store_dir / LOG_FILE, snapshot_path=store_dir / SNAPSHOT_FILE
    )
    return dataset, store
