"""Matplotlib renderings of the report outputs (always to files, never shown)."""
from __future__ import annotations

import pathlib
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .analysis import WeakValueReport
from .neutron import SweepTable
from .pointer import UniformGrid1D


def save_density_figure(path: pathlib.Path, grid_x: UniformGrid1D, grid_y: UniformGrid1D,
                        density: np.ndarray, title: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(5.0, 4.2))
    mesh = ax.pcolormesh(grid_x.points(), grid_y.points(), density,
                         shading="auto", cmap="viridis")
    fig.colorbar(mesh, ax=ax)
    ax.set_xlabel("pointer 1 position x")
    ax.set_ylabel("pointer 2 position y")
    ax.set_title(title)
    ax.set_aspect("equal")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_sweep_figure(path: pathlib.Path, tables: Mapping[str, SweepTable]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, axes = plt.subplots(1, 2, figsize=(9.0, 3.6), sharex=True)
    for name, table in tables.items():
        axes[0].plot(table.chi, table.p_d1, label=name)
        axes[1].plot(table.chi, table.p_d2, label=name)
    for ax, det in zip(axes, ("D1 (spin filtered)", "D2")):
        ax.set_xlabel("phase chi (rad)")
        ax.set_ylabel("probability")
        ax.set_title(det)
        ax.grid(True, alpha=0.3)
    axes[0].legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_shift_figure(path: pathlib.Path, reports: Sequence[WeakValueReport]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    names = [r.operator for r in reports]
    idx = np.arange(len(reports))
    fig, ax = plt.subplots(figsize=(5.6, 3.4))
    ax.bar(idx - 0.18, [r.predicted_shift for r in reports], width=0.36, label="predicted")
    ax.bar(idx + 0.18, [r.simulated_shift for r in reports], width=0.36, label="simulated")
    ax.set_xticks(idx, names)
    ax.set_ylabel("pointer shift")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
