"""Delimited-text and PGM outputs.

Every CSV starts with one comment line recording the full parameter set,
then a header row.  Formatting goes through repr() for floats, so re-runs
with identical inputs produce byte-identical files.
"""
from __future__ import annotations

import csv
import pathlib
from typing import Iterable, Mapping, Sequence

import numpy as np

from .pointer import SampledPointer, UniformGrid1D


def _cell(value: object) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (complex, np.complexfloating)):
        return repr(complex(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def parameter_comment(params: Mapping[str, object]) -> str:
    parts = " ".join(f"{k}={_cell(params[k])}" for k in sorted(params))
    return f"# {parts}"


def write_csv(path: pathlib.Path, header: Sequence[str],
              rows: Iterable[Sequence[object]], params: Mapping[str, object]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(parameter_comment(params) + "\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])


def write_density_csv(path: pathlib.Path, grid_x: UniformGrid1D, grid_y: UniformGrid1D,
                      density: np.ndarray, params: Mapping[str, object]) -> None:
    """Row-major (x, y, value) dump of a 2D array indexed [iy, ix]."""
    xs, ys = grid_x.points(), grid_y.points()

    def rows():
        for iy in range(grid_y.n):
            for ix in range(grid_x.n):
                yield (float(xs[ix]), float(ys[iy]), float(density[iy, ix]))

    write_csv(path, ("x", "y", "value"), rows(), params)


def write_profile_csv(path: pathlib.Path, profile: SampledPointer,
                      params: Mapping[str, object]) -> None:
    xs = profile.grid.points()
    rows = ((float(xs[i]), float(profile.values[i].real), float(profile.values[i].imag))
            for i in range(profile.grid.n))
    write_csv(path, ("x", "re", "im"), rows, params)


def write_pgm(path: pathlib.Path, density: np.ndarray) -> None:
    """8-bit binary PGM, max-normalized; the top image row is the largest y."""
    arr = np.asarray(density, dtype=float)
    if arr.ndim != 2:
        raise ValueError("PGM export needs a 2D array")
    peak = arr.max()
    scaled = np.zeros_like(arr) if peak <= 0 else arr / peak
    pixels = np.flipud(np.round(scaled * 255).astype(np.uint8))
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{arr.shape[1]} {arr.shape[0]}\n255\n".encode("ascii"))
        fh.write(pixels.tobytes())
