"""Corpus statistics: gradient vs. WMC histograms, sparsity fit, and the
area-gradient scatter."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import CurveflowError, ParameterError, split_channels
from .imageio import load_image
from .operators import (
    area_flow_fd,
    area_gradient_fd,
    forward_gradient,
    gradient_norm,
    wmc_fd,
    wmc_half_laplace,
)

IMAGE_SUFFIXES = (".png", ".pgm", ".pnm", ".jpg", ".jpeg", ".tif", ".tiff", ".bmp")
LIMIT = 256


class FitError(CurveflowError, ValueError):
    pass


@dataclass
class HistogramStats:
    """Signed histogram with unit bins over ``[-256, 256]`` plus an exact
    magnitude tally ``abs_counts[v] = #{v - 1 < |x| <= v}`` (``v = 0``
    counts exact zeros)."""

    bin_edges: np.ndarray
    counts: np.ndarray
    abs_counts: np.ndarray

    @classmethod
    def empty(cls) -> "HistogramStats":
        edges = np.arange(-LIMIT, LIMIT + 1, dtype=np.float64)
        return cls(edges, np.zeros(2 * LIMIT, dtype=np.int64), np.zeros(LIMIT + 1, dtype=np.int64))

    @classmethod
    def from_values(cls, values) -> "HistogramStats":
        h = cls.empty()
        h.add(values)
        return h

    def add(self, values) -> None:
        v = np.clip(np.ravel(np.asarray(values, dtype=np.float64)), -LIMIT, LIMIT)
        # the last bin is closed so +256 lands inside
        k = np.minimum(np.floor(v).astype(np.int64) + LIMIT, 2 * LIMIT - 1)
        self.counts += np.bincount(k, minlength=2 * LIMIT)
        a = np.ceil(np.abs(v)).astype(np.int64)
        self.abs_counts += np.bincount(a, minlength=LIMIT + 1)

    def merge(self, other: "HistogramStats") -> "HistogramStats":
        return HistogramStats(self.bin_edges.copy(), self.counts + other.counts,
                              self.abs_counts + other.abs_counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])

    def probability(self) -> np.ndarray:
        return self.counts / max(self.total, 1)

    def log_probability(self) -> np.ndarray:
        """Natural log of the bin probabilities (``-inf`` for empty bins)."""
        with np.errstate(divide="ignore"):
            return np.log(self.probability())

    def abs_cdf(self) -> np.ndarray:
        """``cdf[v] = P(|x| <= v)`` for ``v = 0..256``."""
        return np.cumsum(self.abs_counts) / max(self.total, 1)


def list_images(directory) -> list[Path]:
    d = Path(directory)
    if not d.is_dir():
        raise FileNotFoundError(f"{d}: not a directory")
    files = sorted(p for p in d.iterdir() if p.suffix.lower() in IMAGE_SUFFIXES)
    if not files:
        raise FileNotFoundError(f"{d}: no images found")
    return files


def grey(img) -> np.ndarray:
    """Luma for RGB input (ITU-R 601 weights); grey input is returned as is."""
    ch = split_channels(img)
    if len(ch) == 1:
        return ch[0]
    return 0.299 * ch[0] + 0.587 * ch[1] + 0.114 * ch[2]


def image_stats(img) -> tuple[HistogramStats, HistogramStats]:
    u = grey(img)
    gx, gy = forward_gradient(u)
    grad = HistogramStats.empty()
    grad.add(gx)
    grad.add(gy)
    return grad, HistogramStats.from_values(wmc_half_laplace(u))


def corpus_stats(directory) -> tuple[HistogramStats, HistogramStats]:
    """Pooled histograms of signed forward differences (both axes) and of
    discrete WMC over every image in ``directory``."""
    grad, wmc = HistogramStats.empty(), HistogramStats.empty()
    for path in list_images(directory):
        g, w = image_stats(load_image(path))
        grad, wmc = grad.merge(g), wmc.merge(w)
    return grad, wmc


@dataclass
class SparsityFit:
    coef: float
    intercept: float
    r2: float
    bins_used: int


def fit_sparsity_model(h: HistogramStats) -> SparsityFit:
    """Least squares fit of ``-log p = coef * sqrt(|x|) + intercept``.

    Uses the non-empty bins' centres; the intercept absorbs the
    normalisation of ``p``.
    """
    keep = h.counts > 0
    if keep.sum() < 2:
        raise FitError("need at least two non-empty bins to fit")
    s = np.sqrt(np.abs(h.centers[keep]))
    y = -np.log(h.probability()[keep])
    if np.ptp(s) == 0:
        raise FitError("all non-empty bins have the same magnitude")
    X = np.column_stack([s, np.ones_like(s)])
    (coef, intercept), *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ np.array([coef, intercept])
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return SparsityFit(float(coef), float(intercept), r2, int(keep.sum()))


SCATTER_COLUMNS = ("area_gradient", "area_flow", "wmc_fd", "grad_norm")


def scatter_samples(images, max_samples: int = 100_000, seed: int = 0) -> np.ndarray:
    """Per-pixel rows ``(area_gradient_fd, area_flow_fd, wmc_fd, |grad U|)``
    pooled over images, uniformly subsampled without replacement to at most
    ``max_samples``.

    ``area_flow_fd`` is the area gradient rescaled by ``sqrt(1 + |grad U|^2)``;
    it is the column that tracks WMC closely at strong gradients.
    """
    parts = []
    for img in images:
        u = grey(img)
        cols = (area_gradient_fd(u), area_flow_fd(u), wmc_fd(u), gradient_norm(u))
        parts.append(np.column_stack([c.ravel() for c in cols]))
    if not parts:
        raise ParameterError("no images given")
    allp = np.concatenate(parts)
    if len(allp) > max_samples:
        rng = np.random.default_rng(seed)
        pick = np.sort(rng.choice(len(allp), size=max_samples, replace=False))
        allp = allp[pick]
    return allp


def area_grad_scatter(directory, out_csv=None, max_samples: int = 100_000, seed: int = 0) -> np.ndarray:
    """Scatter of the area-flow speed against finite-difference WMC over a
    corpus; optionally written as CSV."""
    samples = scatter_samples((load_image(p) for p in list_images(directory)), max_samples, seed)
    if out_csv is not None:
        write_csv(out_csv, SCATTER_COLUMNS, samples)
    return samples


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


def write_stats(prefix, grad: HistogramStats, wmc: HistogramStats, fit: SparsityFit | None) -> list[Path]:
    """Write histogram, CDF and fit CSVs; return the written paths."""
    prefix = str(prefix)
    paths = [Path(prefix + "hist.csv"), Path(prefix + "cdf.csv"), Path(prefix + "fit.csv")]
    lg, lw = grad.log_probability(), wmc.log_probability()
    write_csv(paths[0], ("bin_lo", "bin_hi", "grad_count", "wmc_count", "grad_logp", "wmc_logp"),
              zip(grad.bin_edges[:-1], grad.bin_edges[1:], grad.counts, wmc.counts, lg, lw))
    write_csv(paths[1], ("v", "grad_cdf", "wmc_cdf"),
              zip(range(LIMIT + 1), grad.abs_cdf(), wmc.abs_cdf()))
    rows = [] if fit is None else [(fit.coef, fit.intercept, fit.r2, fit.bins_used)]
    write_csv(paths[2], ("coef", "intercept", "r2", "bins"), rows)
    return paths
