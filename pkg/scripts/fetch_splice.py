#!/usr/bin/env python3
"""Download the UCI splice-junction dataset and regenerate
tests/data/splice.csv.gz (3190 rows, 60 sequence positions, 3 classes).

The repository already ships the fixture; run this only to rebuild it.
Tries the UCI archive first, then a maintained ARFF mirror on GitHub.
"""

import gzip
import io
import sys
import urllib.request
import zipfile
from pathlib import Path

UCI_ZIP = ("https://archive.ics.uci.edu/static/public/69/"
           "molecular+biology+splice+junction+gene+sequences.zip")
ARFF_MIRROR = ("https://raw.githubusercontent.com/renatopp/arff-datasets/"
               "master/classification/splice.arff")

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "splice.csv.gz"


def rows_from_uci(blob):
    """splice.data lines look like: CLASS, INSTANCE_NAME, SEQUENCE."""
    archive = zipfile.ZipFile(io.BytesIO(blob))
    name = next(n for n in archive.namelist() if n.endswith("splice.data"))
    rows = []
    for line in archive.read(name).decode().splitlines():
        if not line.strip():
            continue
        label, _, sequence = (part.strip() for part in line.split(","))
        rows.append(list(sequence) + [label])
    return rows


def rows_from_arff(blob):
    rows = []
    data_started = False
    for line in blob.decode().splitlines():
        line = line.strip()
        if not line or line.startswith("%"):
            continue
        if data_started:
            cells = [c.strip() for c in line.split(",")]
            rows.append(cells[1:])  # drop the instance name
        elif line.lower().startswith("@data"):
            data_started = True
    return rows


def main():
    for url, parse in ((UCI_ZIP, rows_from_uci), (ARFF_MIRROR, rows_from_arff)):
        try:
            print(f"fetching {url}")
            blob = urllib.request.urlopen(url, timeout=60).read()
            rows = parse(blob)
            break
        except Exception as exc:  # try the next mirror
            print(f"  failed: {exc}", file=sys.stderr)
    else:
        print("no source reachable", file=sys.stderr)
        return 1

    if len(rows) != 3190 or any(len(r) != 61 for r in rows):
        print(f"unexpected shape: {len(rows)} rows", file=sys.stderr)
        return 1
    header = [f"pos_{i}" for i in range(1, 61)] + ["class"]
    payload = "\n".join(
        [",".join(header)] + [",".join(r) for r in rows]
    ).encode() + b"\n"
    OUT.parent.mkdir(parents=True, exist_ok=True)
    with open(OUT, "wb") as raw:
        # fixed mtime keeps the artifact reproducible
        with gzip.GzipFile(fileobj=raw, mode="wb", compresslevel=9,
                           mtime=0) as fh:
            fh.write(payload)
    print(f"wrote {OUT}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
