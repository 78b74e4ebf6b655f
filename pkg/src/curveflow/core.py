"""Image and stencil primitives shared by the rest of the package.

Images are plain 2-D ``float64`` numpy arrays indexed ``[row, col]``
(``y`` = row, ``x`` = column). Colour images are ``(H, W, 3)`` arrays and are
always processed one channel at a time.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np


class CurveflowError(Exception):
    """Base class for library errors."""


class ParameterError(CurveflowError, ValueError):
    """An argument or configuration value is out of its valid range."""


class FormatError(CurveflowError, ValueError):
    """Unsupported image layout or file format."""


class DivergenceError(CurveflowError, ArithmeticError):
    """An iterative scheme produced non-finite values."""

    def __init__(self, iteration: int, message: str = ""):
        self.iteration = iteration
        super().__init__(message or f"non-finite values at iteration {iteration}")


# -- threading ---------------------------------------------------------------

_THREADS = 1


def set_threads(n: int | None) -> None:
    """Set the number of row-block workers used by stencil operations.

    ``None`` or ``0`` selects ``os.cpu_count()``. Results never depend on this
    value: every pixel is computed by the same sequence of operations.
    """
    global _THREADS
    if n is None or n == 0:
        n = os.cpu_count() or 1
    if n < 0:
        raise ParameterError(f"thread count must be >= 0, got {n}")
    _THREADS = int(n)


def get_threads() -> int:
    return _THREADS


def map_row_blocks(
    height: int, fn: Callable[[int, int], None], threads: int | None = None
) -> None:
    """Call ``fn(y0, y1)`` over a partition of ``range(height)`` into row blocks."""
    threads = _THREADS if threads is None else threads
    nblocks = max(1, min(threads, height))
    bounds = np.linspace(0, height, nblocks + 1).astype(int)
    spans = [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    if len(spans) == 1:
        fn(*spans[0])
        return
    with ThreadPoolExecutor(max_workers=len(spans)) as pool:
        # list() re-raises worker exceptions
        list(pool.map(lambda s: fn(*s), spans))


# -- images ------------------------------------------------------------------


def as_image(img, *, copy: bool = False) -> np.ndarray:
    """Validate and widen a single-channel image to ``float64``."""
    arr = np.array(img, dtype=np.float64, copy=copy)
    if arr.ndim != 2:
        raise FormatError(f"expected a 2-D single-channel image, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise FormatError("image must be at least 1x1")
    return arr


def check_finite(img: np.ndarray, what: str = "image") -> None:
    if not np.all(np.isfinite(img)):
        raise ParameterError(f"{what} contains NaN or Inf")


def split_channels(img) -> list[np.ndarray]:
    """Split a grey ``(H, W)`` or RGB ``(H, W, 3)`` array into 2-D channels."""
    arr = np.asarray(img)
    if arr.ndim == 2:
        return [arr.astype(np.float64)]
    if arr.ndim == 3 and arr.shape[2] == 1:
        return [arr[:, :, 0].astype(np.float64)]
    if arr.ndim == 3 and arr.shape[2] == 3:
        return [arr[:, :, c].astype(np.float64) for c in range(3)]
    raise FormatError(f"unsupported channel layout {arr.shape}; need 1 or 3 channels")


def merge_channels(channels: Sequence[np.ndarray]) -> np.ndarray:
    """Inverse of :func:`split_channels`."""
    if len(channels) == 1:
        return np.asarray(channels[0], dtype=np.float64)
    if len(channels) == 3:
        return np.stack([np.asarray(c, dtype=np.float64) for c in channels], axis=2)
    raise FormatError(f"cannot merge {len(channels)} channels; need 1 or 3")


def per_channel(fn: Callable[[np.ndarray], np.ndarray], img) -> np.ndarray:
    """Apply a single-channel function to every channel of ``img``."""
    return merge_channels([fn(c) for c in split_channels(img)])


def to_uint8(img) -> np.ndarray:
    """Clamp to [0, 255] and round; used only when writing files."""
    return np.clip(np.rint(np.asarray(img, dtype=np.float64)), 0, 255).astype(np.uint8)


# -- stencils ----------------------------------------------------------------

_OFFSETS = [(dr, dc) for dr in (-1, 0, 1) for dc in (-1, 0, 1)]
_MAX_DENOMINATOR = 1 << 20


@dataclass(frozen=True)
class Stencil3:
    """A 3x3 stencil, ``exact[row][col]`` with row/col offsets -1..+1.

    Rows run top to bottom and columns left to right; the stencil is applied
    as a correlation (no flip).
    """

    exact: tuple[tuple[Fraction, ...], ...]
    name: str = ""
    weights: np.ndarray = field(init=False, repr=False, compare=False)
    numerators: np.ndarray = field(init=False, repr=False, compare=False)
    denominator: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        rows = tuple(tuple(Fraction(v) for v in row) for row in self.exact)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ParameterError("a Stencil3 needs exactly 3x3 weights")
        object.__setattr__(self, "exact", rows)
        w = np.array([[float(v) for v in row] for row in rows], dtype=np.float64)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        # integer numerators over a common denominator keep small-integer
        # data exact; fall back to plain weights for awkward rationals
        den = math.lcm(*(v.denominator for row in rows for v in row))
        if den <= _MAX_DENOMINATOR:
            num = np.array([[float(v * den) for v in row] for row in rows])
        else:
            num, den = w.copy(), 1
        num.setflags(write=False)
        object.__setattr__(self, "numerators", num)
        object.__setattr__(self, "denominator", float(den))

    @classmethod
    def from_array(cls, weights, name: str = "") -> "Stencil3":
        arr = np.asarray(weights, dtype=np.float64)
        if arr.shape != (3, 3):
            raise ParameterError(f"stencil must be 3x3, got {arr.shape}")
        return cls(tuple(tuple(Fraction(float(v)) for v in row) for row in arr), name)

    def taps(self) -> list[tuple[int, int, float]]:
        """Nonzero ``(dr, dc, weight)`` triples in row-major order."""
        return [(dr, dc, float(self.exact[dr + 1][dc + 1]))
                for dr, dc in _OFFSETS if self.exact[dr + 1][dc + 1] != 0]

    def scaled_taps(self) -> list[tuple[int, int, float]]:
        """Like :meth:`taps` but with the numerators; divide the sum by
        :attr:`denominator`."""
        return [(dr, dc, self.numerators[dr + 1, dc + 1])
                for dr, dc in _OFFSETS if self.exact[dr + 1][dc + 1] != 0]

    @property
    def zero_sum(self) -> bool:
        return self.total == 0

    @property
    def total(self) -> Fraction:
        return sum((v for row in self.exact for v in row), Fraction(0))

    @property
    def center(self) -> Fraction:
        return self.exact[1][1]


def pad_edge(img: np.ndarray, width: int = 1) -> np.ndarray:
    return np.pad(img, width, mode="edge")


def correlate_padded(padded: np.ndarray, s: Stencil3, y0: int, y1: int,
                     out: np.ndarray | None = None, tmp: np.ndarray | None = None) -> np.ndarray:
    """Rows ``y0:y1`` of the stencil response, given a 1-pixel edge-padded image.

    The stencil is applied as integer numerators ``n`` over a common
    denominator ``D``. Taps are accumulated in row-major order starting from
    zero and the sum is divided by ``D`` once, which fixes the floating point
    result of every pixel. Zero-sum stencils are evaluated as
    ``sum(n * (U_neighbour - U_centre)) / D`` over the off-centre taps, so
    flat neighbourhoods give exactly 0. ``out``/``tmp`` are optional scratch
    buffers of shape ``(y1 - y0, W)``.
    """
    w = padded.shape[1] - 2
    shape = (y1 - y0, w)
    if out is None:
        out = np.empty(shape)
    if tmp is None:
        tmp = np.empty(shape)
    out.fill(0.0)
    centre = padded[y0 + 1:y1 + 1, 1:1 + w]
    zero_sum = s.zero_sum
    for dr, dc, wt in s.scaled_taps():
        src = padded[y0 + 1 + dr:y1 + 1 + dr, 1 + dc:1 + dc + w]
        if zero_sum:
            if dr == 0 and dc == 0:
                continue
            np.subtract(src, centre, out=tmp)
            tmp *= wt
        else:
            np.multiply(src, wt, out=tmp)
        out += tmp
    if s.denominator != 1.0:
        out /= s.denominator
    return out


def convolve3(img, s: Stencil3, threads: int | None = None) -> np.ndarray:
    """Apply a 3x3 stencil with clamp-to-edge (Neumann) boundaries.

    ``out[y, x] = sum(s[dr, dc] * img[clamp(y + dr), clamp(x + dc)])``, see
    :func:`correlate_padded` for the evaluation order.
    """
    img = as_image(img)
    padded = pad_edge(img)
    out = np.empty_like(img)

    def block(y0, y1):
        out[y0:y1] = correlate_padded(padded, s, y0, y1)

    map_row_blocks(img.shape[0], block, threads)
    return out


# -- linear operators --------------------------------------------------------


class LinearOperator:
    """An imaging operator ``A`` with its adjoint.

    Subclasses implement :meth:`apply` and :meth:`adjoint`. ``shape_out``
    maps an input image shape to the output shape.
    """

    def apply(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def adjoint(self, v: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def shape_out(self, shape: tuple[int, int]) -> tuple[int, int]:
        return shape

    def __call__(self, u: np.ndarray) -> np.ndarray:
        return self.apply(u)


class IdentityOperator(LinearOperator):
    def apply(self, u):
        return np.array(u, dtype=np.float64, copy=True)

    def adjoint(self, v):
        return np.array(v, dtype=np.float64, copy=True)

    def __repr__(self):
        return "IdentityOperator()"


class StencilOperator(LinearOperator):
    """Correlation with a 3x3 stencil under replicate boundaries.

    The adjoint is built by scattering each output back onto the clamped
    source pixels, so it is exact including the borders.
    """

    def __init__(self, stencil: Stencil3):
        self.stencil = stencil

    def apply(self, u):
        return convolve3(u, self.stencil)

    def adjoint(self, v):
        v = as_image(v)
        h, w = v.shape
        out = np.zeros((h + 2, w + 2))
        for dr, dc, wt in self.stencil.scaled_taps():
            out[1 + dr:h + 1 + dr, 1 + dc:w + 1 + dc] += wt * v
        # fold the padding ring back onto the border pixels it replicates
        out[1, :] += out[0, :]
        out[h, :] += out[h + 1, :]
        out[:, 1] += out[:, 0]
        out[:, w] += out[:, w + 1]
        return out[1:h + 1, 1:w + 1] / self.stencil.denominator


def inner(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.sum(np.asarray(a) * np.asarray(b)))


def adjoint_mismatch(op: LinearOperator, shape: tuple[int, int], rng=None) -> float:
    """Gap between <Au, v> and <u, A^T v> for random ``u``, ``v``, relative
    to ``max(|Au| |v|, |u| |A^T v|, |u| |v|)`` (robust when both are ~0)."""
    rng = np.random.default_rng(rng)
    u = rng.standard_normal(shape)
    v = rng.standard_normal(op.shape_out(shape))
    au, atv = op.apply(u), op.adjoint(v)
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    scale = max(np.linalg.norm(au) * nv, nu * np.linalg.norm(atv), nu * nv, 1e-300)
    return abs(inner(au, v) - inner(u, atv)) / scale

