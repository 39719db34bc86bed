"""CSV file formats.

All floats are serialized with 17 significant digits so a write/read
round trip reproduces the exact double.  Formats:

  vector file:    header `value`, one float per row (n = row count)
  ensemble file:  header `subject,<id1>,<id2>,...`, one row per subject
  tags sidecar:   header `id,tag`
  disc file:      header `id,tag,p1,p2`
  curve file:     header `n,probability`
"""

from __future__ import annotations

import csv

import numpy as np

from .errors import FileFormatError


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def read_vector(path) -> np.ndarray:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["value"]:
        raise FileFormatError(f"{path}: expected single-column header 'value'")
    try:
        values = [float(row[0]) for row in rows[1:] if row]
    except (ValueError, IndexError) as exc:
        raise FileFormatError(f"{path}: bad value row: {exc}") from exc
    if not values:
        raise FileFormatError(f"{path}: no data rows")
    return np.asarray(values)


def write_vector(path, values) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["value"])
        for v in np.asarray(values).ravel():
            out.writerow([fmt(v)])


def read_ensemble(path) -> tuple[list[str], np.ndarray]:
    """Returns (detector ids, n x m matrix of raw columns)."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or not rows[0] or rows[0][0].strip() != "subject":
        raise FileFormatError(f"{path}: expected header starting with 'subject'")
    ids = [c.strip() for c in rows[0][1:]]
    if not ids:
        raise FileFormatError(f"{path}: no detector columns")
    if len(set(ids)) != len(ids):
        raise FileFormatError(f"{path}: duplicate detector ids")
    data = []
    for row in rows[1:]:
        if not row:
            continue
        if len(row) != len(ids) + 1:
            raise FileFormatError(
                f"{path}: row has {len(row) - 1} values, expected {len(ids)}"
            )
        try:
            data.append([float(c) for c in row[1:]])
        except ValueError as exc:
            raise FileFormatError(f"{path}: bad value: {exc}") from exc
    if not data:
        raise FileFormatError(f"{path}: no data rows")
    return ids, np.asarray(data)


def write_ensemble(path, ids: list[str], matrix: np.ndarray, subjects=None) -> None:
    matrix = np.asarray(matrix)
    if subjects is None:
        subjects = [f"s{i + 1:04d}" for i in range(matrix.shape[0])]
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["subject", *ids])
        for label, row in zip(subjects, matrix):
            out.writerow([label, *(fmt(v) for v in row)])


def read_tags(path) -> dict[str, str]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["id", "tag"]:
        raise FileFormatError(f"{path}: expected header 'id,tag'")
    tags = {}
    for row in rows[1:]:
        if not row:
            continue
        if len(row) != 2:
            raise FileFormatError(f"{path}: bad tag row {row!r}")
        tags[row[0].strip()] = row[1].strip()
    return tags


def write_tags(path, tags: dict[str, str]) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["id", "tag"])
        for rid, tag in tags.items():
            out.writerow([rid, tag])


def write_disc(path, ids, tags, points: np.ndarray) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["id", "tag", "p1", "p2"])
        for rid, tag, (p1, p2) in zip(ids, tags, points):
            out.writerow([rid, tag, fmt(p1), fmt(p2)])


def read_disc(path) -> tuple[list[str], list[str], np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["id", "tag", "p1", "p2"]:
        raise FileFormatError(f"{path}: expected header 'id,tag,p1,p2'")
    ids, tags, pts = [], [], []
    for row in rows[1:]:
        if not row:
            continue
        ids.append(row[0])
        tags.append(row[1])
        pts.append((float(row[2]), float(row[3])))
    return ids, tags, np.asarray(pts)


def write_curve(path, points: list[tuple[int, float]]) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["n", "probability"])
        for n, p in points:
            out.writerow([n, fmt(p)])


def read_curve(path) -> list[tuple[int, float]]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["n", "probability"]:
        raise FileFormatError(f"{path}: expected header 'n,probability'")
    return [(int(r[0]), float(r[1])) for r in rows[1:] if r]
