"""
Dataset CSV files: columns x[, y], z_1..z_m with one row per location.

Two-dimensional datasets carry both x and y; one-dimensional datasets omit y.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import List, Tuple

import numpy as np

from besselk_ad.numerics.errors import DatasetError

# 17 significant digits round-trip any double; shared by every CSV writer
FLOAT_FORMAT = ".17g"


def dataset_fieldnames(dim: int, m: int) -> List[str]:
    coords = ["x", "y"][:dim]
    return coords + [f"z_{r}" for r in range(1, m + 1)]


def read_dataset_csv(path: str | Path) -> Tuple[np.ndarray, np.ndarray]:
    """Return (locations (n, d), replicates (m, n))."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Dataset file not found: {path}")

    with path.open(newline="") as f:
        reader = csv.DictReader(f)
        fields = [name.strip() for name in (reader.fieldnames or [])]
        if "x" not in fields:
            raise DatasetError(f"{path}: missing 'x' column")
        coords = ["x", "y"] if "y" in fields else ["x"]
        z_cols = sorted(
            (c for c in fields if c.startswith("z_") and c[2:].isdigit()), key=lambda c: int(c[2:])
        )
        if not z_cols:
            raise DatasetError(f"{path}: no z_1..z_m columns")
        expected = [f"z_{r}" for r in range(1, len(z_cols) + 1)]
        if z_cols != expected:
            raise DatasetError(f"{path}: replicate columns must be {', '.join(expected)}")

        locations: List[List[float]] = []
        values: List[List[float]] = []
        for lineno, row in enumerate(reader, start=2):
            row = {(k or "").strip(): v for k, v in row.items()}
            try:
                locations.append([float(row[c]) for c in coords])
                values.append([float(row[c]) for c in z_cols])
            except (TypeError, ValueError) as exc:
                raise DatasetError(f"{path}:{lineno}: {exc}") from exc

    if not locations:
        raise DatasetError(f"{path}: no data rows")
    return np.array(locations), np.array(values).T


def write_dataset_csv(
    path: str | Path, locations: np.ndarray, replicates: np.ndarray
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    locations = np.asarray(locations, dtype=float)
    if locations.ndim == 1:
        locations = locations[:, None]
    replicates = np.atleast_2d(np.asarray(replicates, dtype=float))
    dim, m = locations.shape[1], replicates.shape[0]
    fieldnames = dataset_fieldnames(dim, m)
    with path.open("w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(fieldnames)
        for i, loc in enumerate(locations):
            cells = list(loc) + list(replicates[:, i])
            writer.writerow([format(float(v), FLOAT_FORMAT) for v in cells])
    return path
