"""PGM/PNG reading and writing.

Files are decoded with Pillow. Pixel data is widened to ``float64`` on load
and clamped/rounded to 8 bits only when saving.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

from .core import FormatError, to_uint8

SUFFIXES = {".pgm": "PPM", ".pnm": "PPM", ".png": "PNG"}


def load_image(path) -> np.ndarray:
    """Read a grey (H, W) or RGB (H, W, 3) image as ``float64``.

    Palette and bilevel images are expanded; alpha channels and 16-bit
    data are rejected.
    """
    path = Path(path)
    try:
        with Image.open(path) as f:
            im = f.copy()
    except FileNotFoundError:
        raise
    except Exception as exc:
        raise FormatError(f"{path}: cannot decode image ({exc})") from exc
    if im.mode == "1":
        im = im.convert("L")
    elif im.mode == "P":
        im = im.convert("RGBA" if "transparency" in im.info else "RGB")
    if im.mode not in ("L", "RGB"):
        raise FormatError(f"{path}: unsupported pixel mode {im.mode!r} (need 8-bit grey or RGB)")
    return np.asarray(im, dtype=np.float64)


def save_image(path, img) -> None:
    """Write a grey or RGB array as PGM (P5, maxval 255) or PNG."""
    path = Path(path)
    fmt = SUFFIXES.get(path.suffix.lower())
    if fmt is None:
        raise FormatError(f"{path}: unknown image suffix (use .pgm or .png)")
    data = to_uint8(img)
    if data.ndim == 3 and data.shape[2] == 1:
        data = data[:, :, 0]
    if data.ndim == 3 and data.shape[2] == 3:
        if path.suffix.lower() == ".pgm":
            raise FormatError(f"{path}: PGM holds a single channel")
    elif data.ndim != 2:
        raise FormatError(f"cannot save array of shape {data.shape}")
    Image.fromarray(data).save(path, format=fmt)
