#!/usr/bin/env python3
"""Write the service's OpenAPI description to docs/openapi.json.

Usage: python scripts/export_openapi.py [--corpus corpus] [--out docs/openapi.json]
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--corpus", default="corpus")
    ap.add_argument("--out", default="docs/openapi.json")
    args = ap.parse_args()

    from infoforge.service import create_app

    app = create_app(args.corpus, store_dir="/tmp/infoforge-openapi-store")
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(app.openapi(), indent=1, sort_keys=True) + "\n", encoding="utf-8")
    print(out)


if __name__ == "__main__":
    main()
