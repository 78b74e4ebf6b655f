"""Matplotlib figures written next to the CSV reports (Agg backend)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _save(fig, path) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)


def plot_histograms(path, grad, wmc) -> None:
    """Log-probability of gradient and WMC values plus their magnitude CDFs."""
    fig, (a, b) = plt.subplots(1, 2, figsize=(10, 4))
    for h, label in ((grad, "gradient"), (wmc, "WMC")):
        lp = h.log_probability()
        ok = np.isfinite(lp)
        a.plot(h.centers[ok], lp[ok], label=label)
        b.plot(np.arange(len(h.abs_counts)), h.abs_cdf(), label=label)
    a.set_xlabel("value")
    a.set_ylabel("log p")
    a.legend()
    b.set_xscale("symlog", linthresh=1)
    b.set_xlabel("v")
    b.set_ylabel("P(|x| <= v)")
    b.legend()
    _save(fig, path)


def plot_scatter(path, samples, columns) -> None:
    x = samples[:, columns.index("wmc_fd")]
    y = samples[:, columns.index("area_flow")]
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.scatter(x, y, s=1, alpha=0.3)
    ax.set_xlabel("wmc_fd")
    ax.set_ylabel("area flow")
    _save(fig, path)


def plot_report(path, rows) -> None:
    """Per-iteration fidelity, regularization and total of a smoothing run."""
    rows = np.asarray(list(rows), dtype=np.float64)
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.5))
    for ax, col, name in zip(axes, (1, 2, 3), ("fidelity", "regularization", "total")):
        ax.plot(rows[:, 0], rows[:, col])
        ax.set_xlabel("iteration")
        ax.set_title(name)
    _save(fig, path)


def plot_bench(path, report) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    for t in sorted({r.threads for r in report.rows}):
        rows = sorted((r for r in report.rows if r.threads == t), key=lambda r: r.pixels)
        ax.loglog([r.pixels for r in rows], [r.median for r in rows], "o-", label=f"{t} thread(s)")
    ax.set_xlabel("pixels")
    ax.set_ylabel("median time (s)")
    ax.legend()
    _save(fig, path)


def plot_spectrum(path, mag, title="") -> None:
    fig, ax = plt.subplots(figsize=(5, 4))
    im = ax.imshow(np.fft.fftshift(mag), cmap="viridis")
    fig.colorbar(im, ax=ax)
    ax.set_title(title)
    _save(fig, path)
