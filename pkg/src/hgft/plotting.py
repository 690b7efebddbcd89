"""Matplotlib figures written next to the CSV/SVG/JSON outputs."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STATUS_COLORS = {
    "Holds": "tab:green",
    "Fails": "tab:red",
    "Boundary": "tab:orange",
    "NotApplicable": "tab:gray",
}


def image_figure(curve, path, title: str = "", centre: complex | None = None):
    """Image of the circle ``|z| = r`` under ``f``."""
    pts = curve.closed()
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.plot(pts.real, pts.imag, lw=0.8, color="k")
    ax.plot([0], [0], "+", color="tab:red", ms=8)
    if centre is not None:
        ax.plot([centre.real], [centre.imag], ".", color="tab:blue")
    ax.set_aspect("equal")
    ax.set_xlabel("Re f")
    ax.set_ylabel("Im f")
    ax.set_title(title or f"f(r e^(i theta)), r = {curve.r:g}", fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def quotient_figure(theta, values, path, lam: float = 0.0, title: str = ""):
    """``Re(e^{-i lam} h)`` along a circle, with the zero line marked."""
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.plot(theta, values, lw=0.8)
    ax.axhline(0, color="tab:red", lw=0.6, ls="--")
    ax.set_xlim(0, 2 * np.pi)
    ax.set_xlabel("theta")
    ax.set_ylabel("Re(e^(-i lambda) h)")
    ax.set_title(title or f"lambda = {lam:.6g}", fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def sweep_figure(records, path, key: str = "sufficient"):
    """Margins of one verdict across the sweep lattice, coloured by status."""
    fig, ax = plt.subplots(figsize=(6, 3.5))
    for i, rec in enumerate(records):
        verdict = rec.get(key) or {}
        status = verdict.get("status", "NotApplicable")
        margin = verdict.get("margin")
        if margin is None:
            continue
        ax.plot(i, margin, "o", ms=3, color=STATUS_COLORS.get(status, "k"))
    ax.axhline(0, color="k", lw=0.5)
    ax.set_xlabel("lattice index")
    ax.set_ylabel(f"{key} margin")
    ax.set_yscale("symlog", linthresh=1e-6)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
