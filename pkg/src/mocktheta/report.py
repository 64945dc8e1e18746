"""Figures for cusp ledgers and coefficient residues, rendered off-screen to files."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .eta import HolomorphyCertificate  # noqa: E402
from .series import Series  # noqa: E402

STYLE = {
    "figure.figsize": (7.0, 4.0),
    "figure.dpi": 110,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 9,
    "savefig.bbox": "tight",
}


def plot_cusp_margins(cert: HolomorphyCertificate, path) -> Path:
    """Scatter of every cusp margin against the cusp denominator; negatives in red."""
    c = np.array([e.cusp.c if not e.cusp.is_infinity else cert.level for e in cert.entries])
    margin = np.array([float(e.margin) for e in cert.entries])
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ok = margin >= 0
        ax.scatter(c[ok], margin[ok], s=8, color="tab:blue", label="margin >= 0")
        if (~ok).any():
            ax.scatter(c[~ok], margin[~ok], s=10, color="tab:red", label="negative margin")
        ax.axhline(0, color="black", lw=0.8)
        ax.set_xscale("log")
        ax.set_xlabel("cusp denominator c (infinity plotted at the level)")
        ax.set_ylabel("order + pole bound (local units)")
        ax.set_title(f"{cert.family}, m={cert.m}, eta {cert.quotient}, {cert.group}({cert.level})")
        ax.legend(loc="best")
        path = Path(path)
        fig.savefig(path)
        plt.close(fig)
    return path


def plot_residues(coeffs: Series, p: int, A: int, residues, path, limit: int | None = None) -> Path:
    """Heat map of ``a(An+B) mod p``: one row per ``B``, zero cells pale."""
    arr = coeffs.reduce(p).coeffs
    if limit is not None:
        arr = arr[: limit + 1]
    rows = sorted(range(A)) if A <= 64 else sorted(residues)
    width = len(arr) // A
    grid = np.full((len(rows), max(width, 1)), np.nan)
    for i, b in enumerate(rows):
        sub = np.asarray(arr[b::A][:width], dtype=float)
        grid[i, : len(sub)] = sub
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        im = ax.imshow(grid, aspect="auto", interpolation="nearest", cmap="viridis",
                       vmin=0, vmax=p - 1)
        ax.grid(False)
        ax.set_yticks(range(len(rows)))
        ax.set_yticklabels([f"{b}*" if b in set(residues) else str(b) for b in rows], fontsize=6)
        ax.set_xlabel("n")
        ax.set_ylabel("B (starred: claimed zero)")
        ax.set_title(f"a({A}n+B) mod {p}")
        fig.colorbar(im, ax=ax)
        path = Path(path)
        fig.savefig(path)
        plt.close(fig)
    return path
