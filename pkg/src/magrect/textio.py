"""Shared formatting for the CSV/JSON emitters.

All floats are serialized with 17 significant digits so that parsing an
emitted file recovers every value bit-exactly.
"""

from __future__ import annotations

import json
from pathlib import Path


def fmt(x) -> str:
    """Round-trip exact decimal representation of a float."""
    return format(float(x), ".17g")


def fmt_bool(b) -> str:
    return "true" if b else "false"


def metadata_comments(metadata: dict) -> list[str]:
    """Render metadata as '# key: value' comment lines for CSV headers."""
    lines = []
    for key, value in metadata.items():
        if isinstance(value, float):
            value = fmt(value)
        lines.append(f"# {key}: {value}")
    return lines


def write_csv(path, columns, rows, metadata=None) -> None:
    """Write a CSV file with optional leading comment metadata.

    `rows` is an iterable of tuples of pre-formatted strings, one per
    column.  A fixed '\\n' line ending keeps output byte-identical across
    platforms.
    """
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as f:
        if metadata:
            for line in metadata_comments(metadata):
                f.write(line + "\n")
        f.write(",".join(columns) + "\n")
        for row in rows:
            f.write(",".join(row) + "\n")


def read_csv(path):
    """Parse a CSV emitted by this package: returns (metadata, columns, rows).

    Comment lines are collected into the metadata dict as raw strings;
    data cells are returned as strings for the caller to convert.
    """
    metadata = {}
    columns = None
    rows = []
    with Path(path).open("r", encoding="utf-8") as f:
        for line in f:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].partition(":")
                metadata[key.strip()] = value.strip()
            elif columns is None:
                columns = line.split(",")
            else:
                rows.append(line.split(","))
    return metadata, columns, rows


def write_json(path, payload: dict) -> None:
    """Write a versioned JSON document ({'schema': 1, ...})."""
    doc = {"schema": 1}
    doc.update(payload)
    with Path(path).open("w", encoding="utf-8", newline="") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")
