"""Output writers shared by the command-line scenarios and the demos."""

from __future__ import annotations

import csv
import hashlib

import numpy as np


def write_xy_csv(path, x, raw, normalized, x_label: str = "x") -> None:
    """Reconstruction CSV: one row per sample, columns (x, value_raw,
    value_normalized)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([x_label, "value_raw", "value_normalized"])
        for xi, r, n in zip(x, raw, normalized):
            writer.writerow([repr(float(xi)), repr(float(r)), repr(float(n))])


def write_pgm(path, values: np.ndarray) -> None:
    """8-bit binary portable graymap of a 2-D map, max-scaled, row-major."""
    v = np.asarray(values, dtype=float)
    if v.ndim != 2:
        raise ValueError("PGM output needs a 2-D array")
    peak = v.max()
    scaled = np.zeros_like(v) if peak <= 0 else v / peak
    pixels = np.round(255.0 * scaled).astype(np.uint8)
    header = f"P5\n{v.shape[1]} {v.shape[0]}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(pixels.tobytes())


def sha256_of(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()
