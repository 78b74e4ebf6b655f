"""The four 3x3 Laplace kernels and the eight half-window Laplace kernels.

Weights are kept as exact fractions; ``Stencil3.weights`` holds the float
copy used for computation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as F

import numpy as np

from .core import ParameterError, Stencil3

_0 = F(0)
_1 = F(-1)


def _s(name, rows):
    return Stencil3(tuple(tuple(F(v) for v in r) for r in rows), name)


LAPLACE = (
    _s("k1", [[F(1, 8), F(1, 8), F(1, 8)],
              [F(1, 8), _1, F(1, 8)],
              [F(1, 8), F(1, 8), F(1, 8)]]),
    _s("k2", [[F(-1, 16), F(5, 16), F(-1, 16)],
              [F(5, 16), _1, F(5, 16)],
              [F(-1, 16), F(5, 16), F(-1, 16)]]),
    _s("k3", [[F(1, 20), F(1, 5), F(1, 20)],
              [F(1, 5), _1, F(1, 5)],
              [F(1, 20), F(1, 5), F(1, 20)]]),
    _s("k4", [[F(1, 12), F(1, 6), F(1, 12)],
              [F(1, 6), _1, F(1, 6)],
              [F(1, 12), F(1, 6), F(1, 12)]]),
)

# h1..h4: left, top, right, bottom half windows; h5..h8: the diagonal
# windows, each a 90 degree clockwise turn of the previous one.
HALF_LAPLACE = (
    _s("h1", [[F(1, 6), F(1, 6), _0],
              [F(1, 3), _1, _0],
              [F(1, 6), F(1, 6), _0]]),
    _s("h2", [[F(1, 6), F(1, 3), F(1, 6)],
              [F(1, 6), _1, F(1, 6)],
              [_0, _0, _0]]),
    _s("h3", [[_0, F(1, 6), F(1, 6)],
              [_0, _1, F(1, 3)],
              [_0, F(1, 6), F(1, 6)]]),
    _s("h4", [[_0, _0, _0],
              [F(1, 6), _1, F(1, 6)],
              [F(1, 6), F(1, 3), F(1, 6)]]),
    _s("h5", [[F(1, 6), F(1, 3), F(1, 12)],
              [F(1, 3), _1, _0],
              [F(1, 12), _0, _0]]),
    _s("h6", [[F(1, 12), F(1, 3), F(1, 6)],
              [_0, _1, F(1, 3)],
              [_0, _0, F(1, 12)]]),
    _s("h7", [[_0, _0, F(1, 12)],
              [_0, _1, F(1, 3)],
              [F(1, 12), F(1, 3), F(1, 6)]]),
    _s("h8", [[F(1, 12), _0, _0],
              [F(1, 3), _1, _0],
              [F(1, 6), F(1, 3), F(1, 12)]]),
)

_BY_NAME = {s.name: s for s in LAPLACE + HALF_LAPLACE}
NAMES = tuple(_BY_NAME)


@dataclass(frozen=True)
class KernelBank:
    laplace: tuple[Stencil3, ...] = LAPLACE
    half_laplace: tuple[Stencil3, ...] = HALF_LAPLACE

    def all(self) -> tuple[Stencil3, ...]:
        return self.laplace + self.half_laplace


BANK = KernelBank()


def kernel(name: str) -> Stencil3:
    """Look up one of ``k1..k4`` or ``h1..h8``."""
    try:
        return _BY_NAME[name.lower()]
    except KeyError:
        raise ParameterError(f"unknown kernel {name!r}; expected one of {', '.join(NAMES)}") from None


def rot90_cw(rows):
    """Rotate a 3x3 nested sequence 90 degrees clockwise."""
    return tuple(tuple(rows[2 - c][r] for c in range(3)) for r in range(3))


def mirror_lr(rows):
    return tuple(tuple(reversed(r)) for r in rows)


def mirror_tb(rows):
    return tuple(reversed(rows))


def frequency_response(s: Stencil3, wx, wy) -> np.ndarray:
    """Magnitude of the stencil's DTFT at angular frequencies ``(wx, wy)``."""
    wx = np.asarray(wx, dtype=np.float64)
    wy = np.asarray(wy, dtype=np.float64)
    acc = np.zeros(np.broadcast(wx, wy).shape, dtype=np.complex128)
    for dr, dc, w in s.taps():
        acc += w * np.exp(1j * (wx * dc + wy * dr))
    return np.abs(acc)


def spectral_magnitude(s: Stencil3, grid: int) -> np.ndarray:
    """``|DFT|`` of the stencil zero-padded to ``grid x grid``.

    The layout is numpy's FFT order, so the DC term is at ``[0, 0]``.
    """
    if grid < 8:
        raise ParameterError(f"grid must be >= 8, got {grid}")
    pad = np.zeros((grid, grid))
    pad[:3, :3] = s.weights
    return np.abs(np.fft.fft2(pad))


def rotate_spectrum(mag: np.ndarray) -> np.ndarray:
    """Resample an FFT-ordered spectrum under the 90 degree rotation
    ``(wx, wy) -> (-wy, wx)``."""
    n = mag.shape[0]
    ky, kx = np.indices(mag.shape)
    return mag[kx, (-ky) % n]


def ring_anisotropy(s: Stencil3, radius: float, samples: int = 720) -> float:
    """Spread (max - min) of the spectral magnitude around one frequency ring."""
    theta = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
    mag = frequency_response(s, radius * np.cos(theta), radius * np.sin(theta))
    return float(mag.max() - mag.min())


def anisotropy(s: Stencil3, rings: int = 64, samples: int = 720) -> float:
    """Worst ring spread over radii in (0, pi].

    A single mid-band ring is not enough: k3 is isotropic to fourth order and
    wins near the origin, while k4 stays flatter towards Nyquist.
    """
    radii = np.linspace(np.pi / rings, np.pi, rings)
    return max(ring_anisotropy(s, r, samples) for r in radii)


def kernels_csv_rows():
    """``name,row,c0,c1,c2`` rows with exact fractions for every kernel."""
    yield ["name", "row", "c0", "c1", "c2"]
    for s in BANK.all():
        for r, row in enumerate(s.exact):
            yield [s.name, r] + [str(v) for v in row]
