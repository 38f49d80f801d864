#!/usr/bin/env python3
"""Spin up the HTTP service over a freshly generated fixture store.

Usage: python scripts/serve_fixture.py [--port 8080] [--static frontend/dist]
Creates (or reuses) ./fixture-store/ next to the repo root.
"""

import argparse
import json
from pathlib import Path

from vismca.fixture import generate_fixture
from vismca.service import ServiceConfig, serve
from vismca.storage import DATASET_FILE


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--port", type=int, default=8080)
    parser.add_argument("--static", type=Path, default=None)
    parser.add_argument("--store", type=Path, default=Path("fixture-store"))
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    data_path = args.store / "fixture.json"
    if not (args.store / DATASET_FILE).exists():
        args.store.mkdir(parents=True, exist_ok=True)
        data_path.write_text(json.dumps(generate_fixture(seed=args.seed), indent=2))

    config = ServiceConfig(
        store_dir=args.store,
        dataset_path=data_path,
        port=args.port,
        static_dir=args.static,
    )
    print(f"serving store {args.store} on http://127.0.0.1:{args.port}")
    serve(config).run()


if __name__ == "__main__":
    main()
