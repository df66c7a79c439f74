#!/usr/bin/env python3
"""Fetch benchmark datasets (TUDataset layout) into data/<NAME>/.

Developer tooling for machines with network access; the library itself
never downloads anything. Usage:

    python tools/fetch_tudataset.py MUTAG ENZYMES PROTEINS

Pass --base-url to use a mirror of the graph-benchmark collection.
"""

import argparse
import io
import sys
import urllib.request
import zipfile
from pathlib import Path

DEFAULT_BASE = "https://ls11-www.cs.tu-dortmund.de/people/morris/graphkerneldatasets"


def fetch(name: str, base_url: str, dest_root: Path) -> None:
    url = f"{base_url.rstrip('/')}/{name}.zip"
    print(f"downloading {url} ...", file=sys.stderr)
    with urllib.request.urlopen(url, timeout=120) as resp:
        payload = resp.read()
    dest_root.mkdir(parents=True, exist_ok=True)
    with zipfile.ZipFile(io.BytesIO(payload)) as zf:
        # Zips contain a single <NAME>/ directory with the flat files.
        zf.extractall(dest_root)
    marker = dest_root / name / f"{name}_A.txt"
    if not marker.is_file():
        raise SystemExit(f"unexpected archive layout: {marker} missing after extract")
    print(f"extracted to {dest_root / name}", file=sys.stderr)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("names", nargs="+", help="dataset names, e.g. MUTAG")
    parser.add_argument("--base-url", default=DEFAULT_BASE)
    parser.add_argument(
        "--dest",
        default=Path(__file__).resolve().parent.parent / "data",
        type=Path,
    )
    args = parser.parse_args()
    for name in args.names:
        fetch(name, args.base_url, args.dest)
    return 0


if __name__ == "__main__":
    sys.exit(main())
