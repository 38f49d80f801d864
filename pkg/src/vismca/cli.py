"""Batch command-line interface.

Exit codes: 0 success, 1 validation/ingest/storage error, 2 usage error.
With --json, errors are emitted as one JSON object on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .corrections import export_csv
from .errors import VismcaError
from .fixture import generate_fixture
from .graph import GraphSource, build_graph, totem_candidates
from .report import ReportParams, run_report
from .service import ServiceConfig, serve
from .storage import DATASET_FILE, acquire_lock, ingest_into_store, open_store_dir


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vismca", description=__doc__)
    parser.add_argument("--json", action="store_true", help="machine-readable errors on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate a dataset file and initialize a store")
    p.add_argument("--data", required=True, type=Path)
    p.add_argument("--store", required=True, type=Path)
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)

    p = sub.add_parser("serve", help="run the HTTP service over a store")
    p.add_argument("--store", required=True, type=Path)
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--static", type=Path, default=None)
    p.add_argument("--read-only", action="store_true")
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)

    p = sub.add_parser("export", help="write the corrected labels as CSV")
    p.add_argument("--store", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)

    p = sub.add_parser("analyze", help="run one analysis query")
    analyze_sub = p.add_subparsers(dest="query", required=True)
    t = analyze_sub.add_parser("totem", help="objects matching the shared-subgroup heuristic")
    t.add_argument("--store", required=True, type=Path)
    t.add_argument("--group-size", type=int, default=8)
    t.add_argument("--min-images", type=int, default=2)
    t.add_argument("--json", action="store_true", default=argparse.SUPPRESS)

    p = sub.add_parser("report", help="write the full analysis report as JSON")
    p.add_argument("--store", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)

    p = sub.add_parser("fixture", help="emit the synthetic challenge-style dataset")
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)

    return parser


def _cmd_ingest(args) -> int:
    lock = acquire_lock(args.store)
    try:
        dataset, store = ingest_into_store(args.data, args.store)
    finally:
        lock.release()
    images, people, classes, detections = dataset.counts()
    print(
        f"ingested {images} images, {people} people, {classes} classes, "
        f"{detections} detections; seeded {len(store.records)} corrections; snapshot written"
    )
    return 0


def _cmd_serve(args) -> int:
    config = ServiceConfig(
        store_dir=args.store,
        dataset_path=args.store / DATASET_FILE,
        port=args.port,
        static_dir=args.static,
        read_only=args.read_only,
    )
    server = serve(config)
    server.run()
    return 0


def _cmd_export(args) -> int:
    dataset, store = open_store_dir(args.store)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_bytes(export_csv(dataset, store))
    print(f"wrote {args.out}")
    return 0


def _cmd_analyze_totem(args) -> int:
    dataset, store = open_store_dir(args.store)
    graph = build_graph(dataset, store, GraphSource.CORRECTED)
    for candidate in totem_candidates(graph, group_size=args.group_size, min_images=args.min_images):
        print(candidate)
    return 0


def _cmd_report(args) -> int:
    document = run_report(args.store / DATASET_FILE, args.store, ReportParams())
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(document, encoding="utf-8")
    print(f"wrote {args.out}")
    return 0


def _cmd_fixture(args) -> int:
    doc = generate_fixture(seed=args.seed)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {args.out} (seed {args.seed})")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "ingest":
            return _cmd_ingest(args)
        if args.command == "serve":
            return _cmd_serve(args)
        if args.command == "export":
            return _cmd_export(args)
        if args.command == "analyze":
            return _cmd_analyze_totem(args)
        if args.command == "report":
            return _cmd_report(args)
        if args.command == "fixture":
            return _cmd_fixture(args)
        parser.error(f"unknown command {args.command}")
    except VismcaError as exc:
        if args.json:
            print(json.dumps({"error": {"code": exc.code, "message": exc.message}}), file=sys.stderr)
        else:
            print(f"error: {exc.message}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
