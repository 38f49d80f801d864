"""HTTP service exposing the engine to the review UI and other clients.

Every response is computed under the store lock from one consistent
snapshot; mutations append to the correction log before acknowledging.
Analytics are recomputed on demand (nothing is cached), so a read issued
after a write always reflects it.
"""

from __future__ import annotations

import socket
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from . import cooccurrence, corrections, graph as graphs, metrics
from .corrections import CorrectionStore
from .errors import (
    BadBinCount,
    BadRequest,
    BadThreshold,
    EmptySelection,
    NoPositives,
    ParseError,
    PortInUse,
    ReadOnlyStore,
    StoreLocked,
    UnknownClass,
    UnknownDetection,
    UnknownImage,
    UnknownLabel,
    UnknownObject,
    ValidationError,
    VismcaError,
    WrongSource,
)
from .model import Dataset, Verdict
from .storage import DATASET_FILE, acquire_lock, ingest_into_store, open_store_dir

_HTTP_STATUS = {
    BadRequest: 400,
    UnknownImage: 404,
    UnknownDetection: 404,
    UnknownObject: 404,
    UnknownClass: 404,
    UnknownLabel: 400,
    EmptySelection: 400,
    BadThreshold: 400,
    BadBinCount: 400,
    NoPositives: 400,
    WrongSource: 400,
    ParseError: 400,
    ValidationError: 400,
    ReadOnlyStore: 403,
    StoreLocked: 409,
}


@dataclass
class ServiceConfig:
    store_dir: Path
    dataset_path: Path
    port: int = 8080
    static_dir: Path | None = None
    read_only: bool = False


class LabelsBody(BaseModel):
    labels: list[str]
    difficult: bool = False


class VerdictBody(BaseModel):
    verdict: str


class BulkVerdictBody(BaseModel):
    ids: list[str]
    verdict: str


def _parse_verdict(value: str) -> Verdict:
    try:
        return Verdict(value)
    except ValueError:
        raise BadRequest(f"verdict must be one of tp|fp|unreviewed, got '{value}'")


def _record_dict(record: corrections.CorrectionRecord | None):
    if record is None:
        return None
    return {
        "image": record.image,
        "labels": sorted(record.labels),
        "difficult": record.difficult,
        "revision": record.revision,
        "updated_at": record.updated_at,
    }


def _class_metrics_dict(m: metrics.ClassMetrics) -> dict:
    return {
        "class": m.class_name,
        "ap": m.ap,
        "tp": m.tp,
        "fp": m.fp,
        "unreviewed": m.unreviewed,
        "positives": m.positives,
        "no_positives": m.positives == 0,
    }


def create_app(dataset: Dataset, store: CorrectionStore, read_only: bool = False) -> FastAPI:
    app = FastAPI(title="vismca", docs_url=None, redoc_url=None)

    @app.exception_handler(VismcaError)
    async def _vismca_error(_request: Request, exc: VismcaError):
        status = _HTTP_STATUS.get(type(exc), 400)
        return JSONResponse(
            status_code=status, content={"error": {"code": exc.code, "message": exc.message}}
        )

    def guard_writes():
        if read_only:
            raise ReadOnlyStore("service is running in read-only mode")

    @app.get("/api/dataset/summary")
    def dataset_summary():
        with store.lock:
            images, people, classes, detections = dataset.counts()
            return {
                "images": images,
                "people": people,
                "classes": classes,
                "detections": detections,
                "corrected_images": len(store.records),
                "reviewed_detections": sum(
                    1 for v in store.verdicts.values() if v is not Verdict.UNREVIEWED
                ),
                "log_seq": len(store.log),
            }

    @app.get("/api/images")
    def list_images(
        person: str | None = None,
        max_conf: float | None = None,
        unlabeled: bool | None = None,
        page: int = Query(default=1, ge=1),
        page_size: int = Query(default=50, ge=1, le=500),
    ):
        with store.lock:
            if max_conf is not None:
                ordered = metrics.low_confidence_images(dataset, max_conf)
            else:
                ordered = sorted(img.id for img in dataset.images)
            items = []
            for image_id in ordered:
                img = dataset.image_by_id[image_id]
                if person is not None and img.person != person:
                    continue
                record = store.records.get(image_id)
                if unlabeled and record is not None:
                    continue
                dets = dataset.detections_by_image[image_id]
                items.append(
                    {
                        "id": img.id,
                        "person": img.person,
                        "width": img.width,
                        "height": img.height,
                        "uri": img.uri,
                        "detections": len(dets),
                        "max_confidence": max((d.confidence for d in dets), default=None),
                        "labeled": record is not None,
                        "difficult": record.difficult if record else False,
                    }
                )
            total = len(items)
            start = (page - 1) * page_size
            return {
                "total": total,
                "page": page,
                "page_size": page_size,
                "items": items[start : start + page_size],
            }

    @app.get("/api/images/{image_id}")
    def image_detail(image_id: str):
        with store.lock:
            if image_id not in dataset.image_by_id:
                raise UnknownImage(f"no image '{image_id}'")
            img = dataset.image_by_id[image_id]
            detected, alternative = corrections.label_menu(dataset, image_id)
            return {
                "image": {
                    "id": img.id,
                    "person": img.person,
                    "width": img.width,
                    "height": img.height,
                    "uri": img.uri,
                },
                "detections": [
                    {
                        "id": d.id,
                        "class": d.class_name,
                        "bbox": [d.bbox.x, d.bbox.y, d.bbox.w, d.bbox.h],
                        "confidence": d.confidence,
                        "verdict": store.verdicts.get(d.id, Verdict.UNREVIEWED).value,
                    }
                    for d in dataset.detections_by_image[image_id]
                ],
                "record": _record_dict(store.records.get(image_id)),
                "label_menu": {
                    "detected": [[c, conf] for c, conf in detected],
                    "alternative": alternative,
                },
            }

    @app.post("/api/images/{image_id}/labels")
    def post_labels(image_id: str, body: LabelsBody):
        guard_writes()
        record = store.assign_labels(image_id, body.labels, body.difficult)
        return _record_dict(record)

    @app.post("/api/detections/{detection_id}/verdict")
    def post_verdict(detection_id: str, body: VerdictBody):
        guard_writes()
        seq = store.set_verdict(detection_id, _parse_verdict(body.verdict))
        return {"detection": detection_id, "verdict": body.verdict, "seq": seq}

    @app.post("/api/detections/verdicts")
    def post_bulk_verdicts(body: BulkVerdictBody):
        guard_writes()
        count = store.bulk_set_verdict(body.ids, _parse_verdict(body.verdict))
        return {"applied": count, "verdict": body.verdict}

    @app.get("/api/metrics/distribution")
    def metrics_distribution(bins: int = 10):
        with store.lock:
            hist = metrics.confidence_histogram(dataset, bins)
            return {"bin_edges": list(hist.bin_edges), "counts": list(hist.counts)}

    @app.get("/api/metrics/ap")
    def metrics_ap():
        with store.lock:
            return [_class_metrics_dict(m) for m in metrics.all_class_metrics(dataset, store)]

    @app.get("/api/metrics/coverage")
    def metrics_coverage():
        with store.lock:
            cov = metrics.coverage_report(dataset, store)
            return {
                "classes_total": cov.classes_total,
                "classes_detected": cov.classes_detected,
                "truth_pairs": cov.truth_pairs,
                "missed_pairs": cov.missed_pairs,
                "missed_fraction": cov.missed_fraction,
                "empty_truth": cov.empty_truth,
            }

    def _matrix():
        return cooccurrence.build_matrix(dataset, store)

    @app.get("/api/matrix")
    def matrix_json():
        with store.lock:
            matrix = _matrix()
            return {
                "cells": [
                    {
                        "person": cell.person,
                        "object": cell.object,
                        "detected_count": cell.detected_count,
                        "detected_image_count": cell.detected_image_count,
                        "mean_confidence": cell.mean_confidence,
                        "corrected_count": cell.corrected_count,
                    }
                    for key, cell in sorted(matrix.cells.items())
                ],
                "summary": {
                    "per_person_detected": matrix.summary.per_person_detected,
                    "per_person_corrected": matrix.summary.per_person_corrected,
                    "per_object_detected": matrix.summary.per_object_detected,
                    "per_object_corrected": matrix.summary.per_object_corrected,
                },
            }

    @app.get("/api/matrix.csv")
    def matrix_csv():
        with store.lock:
            return Response(
                content=cooccurrence.matrix_csv(_matrix()), media_type="text/csv; charset=utf-8"
            )

    def _graph(source: str) -> graphs.OwnershipGraph:
        try:
            parsed = graphs.GraphSource(source)
        except ValueError:
            raise BadRequest(f"source must be corrected|detected, got '{source}'")
        return graphs.build_graph(dataset, store, parsed)

    @app.get("/api/graph")
    def graph_json(source: str = "corrected"):
        with store.lock:
            return graphs.graph_to_dict(_graph(source))

    @app.get("/api/graph/ego")
    def graph_ego(object: str, neighbors: bool = False, source: str = "corrected"):
        with store.lock:
            ego = graphs.ego_network(_graph(source), object, include_neighbor_objects=neighbors)
            return graphs.ego_to_dict(ego)

    @app.get("/api/graph/shared")
    def graph_shared(k: int = Query(default=8, ge=1), mode: str = "at_least", source: str = "corrected"):
        try:
            parsed = graphs.ShareMode(mode)
        except ValueError:
            raise BadRequest(f"mode must be exact|at_least, got '{mode}'")
        with store.lock:
            shared = graphs.objects_shared_by(_graph(source), k, parsed)
            return [{"object": obj, "owners": n} for obj, n in shared]

    @app.get("/api/totem")
    def totem(group_size: int = Query(default=8, ge=1), min_images: int = Query(default=2, ge=1)):
        with store.lock:
            candidates = graphs.totem_candidates(
                _graph("corrected"), group_size=group_size, min_images=min_images
            )
            return {"group_size": group_size, "min_images": min_images, "candidates": candidates}

    @app.get("/api/suggestions/{image_id}")
    def suggestions(image_id: str, k: int = Query(default=5, ge=1), iou: float = 0.5):
        with store.lock:
            result = cooccurrence.suggest_labels(dataset, store, image_id, k=k, iou_threshold=iou)
            return {
                "image": result.image,
                "suggestions": [
                    {"class": s.class_name, "score": s.score, "reason": s.reason}
                    for s in result.suggestions
                ],
            }

    @app.get("/api/export.csv")
    def export_csv():
        with store.lock:
            return Response(
                content=corrections.export_csv(dataset, store),
                media_type="text/csv; charset=utf-8",
            )

    return app


def _check_port_free(port: int) -> None:
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind(("127.0.0.1", port))
    except OSError as exc:
        raise PortInUse(f"port {port} is already in use") from exc
    finally:
        probe.close()


def serve(config: ServiceConfig):
    """Build the app from a store directory and return a ready uvicorn server.

    Call ``.run()`` on the handle to block. The store directory is locked
    for the lifetime of the process unless running read-only.
    """
    import uvicorn

    store_dir = Path(config.store_dir)
    lock = None
    if not config.read_only:
        lock = acquire_lock(store_dir)
    try:
        if (store_dir / DATASET_FILE).exists():
            dataset, store = open_store_dir(store_dir)
        else:
            dataset, store = ingest_into_store(config.dataset_path, store_dir)
        app = create_app(dataset, store, read_only=config.read_only)
        if config.static_dir is not None:
            from fastapi.staticfiles import StaticFiles

            app.mount("/", StaticFiles(directory=str(config.static_dir), html=True), name="ui")
        _check_port_free(config.port)
        server = uvicorn.Server(uvicorn.Config(app, host="127.0.0.1", port=config.port, log_level="info"))
        server._vismca_lock = lock  # keep the lock alive with the server
        return server
    except Exception:
        if lock is not None:
            lock.release()
        raise
