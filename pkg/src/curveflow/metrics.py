"""Structural similarity (SSIM) with a Gaussian window."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import correlate1d

from .core import ParameterError, split_channels


@dataclass(frozen=True)
class SsimConfig:
    window: int = 11
    sigma: float = 1.5
    k1: float = 0.01
    k2: float = 0.03
    data_range: float = 255.0

    def __post_init__(self):
        if self.window < 3 or self.window % 2 == 0:
            raise ParameterError(f"window must be odd and >= 3, got {self.window}")
        if not self.sigma > 0 or not self.data_range > 0:
            raise ParameterError("sigma and data_range must be positive")


def gaussian_taps(cfg: SsimConfig) -> np.ndarray:
    r = cfg.window // 2
    x = np.arange(-r, r + 1, dtype=np.float64)
    g = np.exp(-0.5 * (x / cfg.sigma) ** 2)
    return g / g.sum()


def _blur(img, taps):
    out = correlate1d(img, taps, axis=0, mode="reflect")
    return correlate1d(out, taps, axis=1, mode="reflect")


def ssim_map(a, b, cfg: SsimConfig = SsimConfig()) -> np.ndarray:
    """Local SSIM of two single-channel images (full size, reflect borders)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ParameterError(f"image sizes differ: {a.shape} vs {b.shape}")
    g = gaussian_taps(cfg)
    c1 = (cfg.k1 * cfg.data_range) ** 2
    c2 = (cfg.k2 * cfg.data_range) ** 2
    mu_a, mu_b = _blur(a, g), _blur(b, g)
    # population (biased) local moments
    var_a = _blur(a * a, g) - mu_a * mu_a
    var_b = _blur(b * b, g) - mu_b * mu_b
    cov = _blur(a * b, g) - mu_a * mu_b
    num = (2 * mu_a * mu_b + c1) * (2 * cov + c2)
    den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2)
    return num / den


def ssim(a, b, cfg: SsimConfig = SsimConfig()) -> float:
    """Mean SSIM, excluding a half-window border; RGB is averaged over channels.

    Identical inputs score exactly 1.
    """
    ca, cb = split_channels(a), split_channels(b)
    if len(ca) != len(cb) or ca[0].shape != cb[0].shape:
        raise ParameterError(f"image sizes differ: {np.shape(a)} vs {np.shape(b)}")
    r = cfg.window // 2
    scores = []
    for x, y in zip(ca, cb):
        if np.array_equal(x, y):
            scores.append(1.0)
            continue
        m = ssim_map(x, y, cfg)
        if m.shape[0] > 2 * r and m.shape[1] > 2 * r:
            m = m[r:-r, r:-r]
        scores.append(float(m.mean()))
    return float(np.mean(scores))
