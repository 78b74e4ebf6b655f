"""Regularization energies evaluated as plain pixel sums (unit pixel area)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import ParameterError, as_image
from .operators import DEFAULT_DIFF, DiffConfig, gradient, mean_curvature_fd, wmc_half_laplace

KINDS = ("tv", "tvl1", "epstv", "area", "mc", "wmc")


@dataclass(frozen=True)
class EnergyConfig:
    kind: str = "tv"
    q: float = 1.0
    eps: float = 0.0
    diff: DiffConfig = field(default=DEFAULT_DIFF)

    def __post_init__(self):
        object.__setattr__(self, "kind", self.kind.lower())
        if self.kind not in KINDS:
            raise ParameterError(f"unknown energy {self.kind!r}; choose from {', '.join(KINDS)}")
        if not self.q > 0:
            raise ParameterError(f"q must be > 0, got {self.q}")
        if not self.eps >= 0:
            raise ParameterError(f"eps must be >= 0, got {self.eps}")


def integrand(img, cfg: EnergyConfig) -> np.ndarray:
    """Per-pixel integrand whose sum is :func:`energy`."""
    u = as_image(img)
    kind = cfg.kind
    if kind in ("tv", "tvl1", "epstv", "area"):
        gx, gy = gradient(u)
        if kind == "tv":
            return np.hypot(gx, gy)
        if kind == "tvl1":
            return np.abs(gx) + np.abs(gy)
        offset = cfg.eps if kind == "epstv" else 1.0
        return np.sqrt(offset + gx * gx + gy * gy)
    if kind == "mc":
        return np.abs(mean_curvature_fd(u, cfg.diff)) ** cfg.q
    return np.abs(wmc_half_laplace(u)) ** cfg.q


def energy(img, cfg: EnergyConfig, mask=None) -> float:
    """Sum of :func:`integrand`, optionally restricted to a boolean mask."""
    vals = integrand(img, cfg)
    if mask is not None:
        vals = vals[np.asarray(mask, dtype=bool)]
    return float(np.sum(vals))


def eps_tv_curves(img, eps_values) -> tuple[np.ndarray, np.ndarray]:
    """Ratio ``EpsTV/TV`` and difference ``EpsTV - TV`` for each epsilon."""
    u = as_image(img)
    tv = energy(u, EnergyConfig("tv"))
    eps_tv = np.array([energy(u, EnergyConfig("epstv", eps=float(e))) for e in eps_values])
    ratio = eps_tv / tv if tv > 0 else np.full_like(eps_tv, np.inf)
    return ratio, eps_tv - tv


# -- sampled curves ----------------------------------------------------------


def menger_curvature(prev, cur, nxt) -> np.ndarray:
    """Curvature of the circle through three points (rows of ``(N, 2)`` arrays)."""
    a = np.linalg.norm(cur - prev, axis=1)
    b = np.linalg.norm(nxt - cur, axis=1)
    c = np.linalg.norm(nxt - prev, axis=1)
    cross = (cur - prev)[:, 0] * (nxt - prev)[:, 1] - (cur - prev)[:, 1] * (nxt - prev)[:, 0]
    return 2.0 * np.abs(cross) / (a * b * c)


def curve_energies(points, q: float = 1.0) -> tuple[float, float]:
    """Curvature energies of an open polyline, evaluated at ``points[1:-1]``.

    Returns ``(sum |k|^q, sum |k * ds|^q)`` where ``k`` is the three-point
    curvature and ``ds`` the local sample spacing. The first sum counts
    samples; the second weights each curvature by how much curve its sample
    stands for.
    """
    p = np.asarray(points, dtype=np.float64)
    if p.ndim != 2 or p.shape[1] != 2 or len(p) < 3:
        raise ParameterError("need at least three 2-D points")
    prev, cur, nxt = p[:-2], p[1:-1], p[2:]
    k = menger_curvature(prev, cur, nxt)
    ds = np.linalg.norm(nxt - prev, axis=1) / 2.0
    return float(np.sum(k ** q)), float(np.sum((k * ds) ** q))
