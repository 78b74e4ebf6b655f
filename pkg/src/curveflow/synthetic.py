"""Synthetic test images and curves."""

from __future__ import annotations

import numpy as np

from .core import ParameterError


def ramp(shape, a: float = 1.0, b: float = 0.0, c: float = 0.0) -> np.ndarray:
    """Affine image ``a*x + b*y + c``."""
    y, x = np.indices(shape, dtype=np.float64)
    return a * x + b * y + c


def cone(size: int, center=None, spacing: float = 1.0) -> np.ndarray:
    """Radial distance ``sqrt(x^2 + y^2)`` from ``center`` (pixel units),
    scaled by ``spacing``."""
    if center is None:
        center = ((size - 1) / 2.0, (size - 1) / 2.0)
    y, x = np.indices((size, size), dtype=np.float64)
    return spacing * np.hypot(x - center[1], y - center[0])


def arc_samples(radius: float, per_quarter: int, quarters: int = 2) -> np.ndarray:
    """Points on a circular arc, ``per_quarter`` samples for every 90 degrees.

    Samples sit at the centres of equal sub-arcs; one extra sample on each
    end carries the neighbours needed for three-point curvature.
    """
    if per_quarter < 1 or quarters < 1:
        raise ParameterError("need at least one sample and one quarter")
    step = (np.pi / 2) / per_quarter
    n = per_quarter * quarters
    theta = (np.arange(-1, n + 1) + 0.5) * step
    return radius * np.column_stack([np.cos(theta), np.sin(theta)])


def step_edge(shape=(64, 64), low: float = 0.0, high: float = 100.0, column: int | None = None) -> np.ndarray:
    """Vertical step: ``low`` left of ``column``, ``high`` from it on."""
    h, w = shape
    column = w // 2 if column is None else column
    img = np.full(shape, float(low))
    img[:, column:] = high
    return img


def noisy_step(shape=(64, 64), low=0.0, high=100.0, noise=5.0, seed=0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return step_edge(shape, low, high) + rng.uniform(-noise, noise, shape)


def disc_step(size: int = 64, radius: float = 16.0, height: float = 100.0) -> np.ndarray:
    y, x = np.indices((size, size), dtype=np.float64)
    c = (size - 1) / 2.0
    return np.where(np.hypot(x - c, y - c) <= radius, height, 0.0)


def phantom_discs(size: int = 256, rows: int = 3, cols: int = 3, contrasts=None, radii=None,
                  background: float = 0.0) -> np.ndarray:
    """Grid of discs: radius varies by row, contrast by column.

    Defaults are radii halving from row to row and contrasts stepping from
    100 down to 25.
    """
    if contrasts is None:
        contrasts = np.linspace(100.0, 25.0, cols)
    if radii is None:
        cell = size / max(rows, cols)
        radii = [0.4 * cell / 2 ** i for i in range(rows)]
    contrasts = list(contrasts)
    radii = list(radii)
    if len(contrasts) != cols or len(radii) != rows:
        raise ParameterError("need one contrast per column and one radius per row")
    ch, cw = size / rows, size / cols
    if max(radii) > min(ch, cw) / 2 - 1:
        raise ParameterError("discs overlap or touch: radius too large for the grid")
    if min(radii) <= 0:
        raise ParameterError("radii must be positive")
    img = np.full((size, size), float(background))
    y, x = np.indices((size, size), dtype=np.float64)
    for i, r in enumerate(radii):
        cy = (i + 0.5) * ch - 0.5
        for j, c in enumerate(contrasts):
            cx = (j + 0.5) * cw - 0.5
            img[np.hypot(x - cx, y - cy) <= r] = background + c
    return img


def disc_centers(size: int, rows: int, cols: int) -> list[list[tuple[float, float]]]:
    ch, cw = size / rows, size / cols
    return [[((i + 0.5) * ch - 0.5, (j + 0.5) * cw - 0.5) for j in range(cols)] for i in range(rows)]


def flag_cross(size: int = 128) -> np.ndarray:
    """Flag with a cross on a textured background.

    Sharp-edged rectangles (flag, cross) plus sinusoidal texture with curved
    level lines: an egg-crate pattern behind the flag and wavy wrinkles on
    the cloth. The cross is flat at 235 on cloth averaging 70.
    """
    y, x = np.indices((size, size), dtype=np.float64)
    s = size / 128.0
    img = 170.0 + 12.0 * np.sin(2 * np.pi * x / (11 * s)) * np.sin(2 * np.pi * y / (13 * s))
    flag = (y >= 24 * s) & (y < 96 * s) & (x >= 20 * s) & (x < 108 * s)
    wrinkles = 70.0 + 10.0 * np.sin(2 * np.pi * x / (7 * s) + 2.0 * np.sin(2 * np.pi * y / (23 * s)))
    img[flag] = wrinkles[flag]
    cy, cx = 60 * s, 64 * s
    arm, half = 24 * s, 7 * s
    cross = flag & (
        ((np.abs(y - cy) < half) & (np.abs(x - cx) < arm))
        | ((np.abs(x - cx) < half) & (np.abs(y - cy) < arm))
    )
    img[cross] = 235.0
    return img


# rows/cols of a 128x128 flag_cross patch whose rows cross the left edge of
# the cross's upper arm (cloth ~70 on the left, cross 235 on the right)
FLAG_CROSS_EDGE = (slice(40, 50), slice(50, 64))
