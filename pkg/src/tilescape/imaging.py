"""Deterministic PNG encoding shared by the renderers."""

from __future__ import annotations

import hashlib
import io

import numpy as np
from PIL import Image

# stored (uncompressed) deflate blocks keep bytes independent of the zlib build
PNG_SETTINGS = {"format": "PNG", "compress_level": 0, "optimize": False}


def encode_png(pixels: np.ndarray) -> bytes:
    """Encode an ``(h, w, 3)`` uint8 array."""
    img = Image.fromarray(np.ascontiguousarray(pixels, dtype=np.uint8), mode="RGB")
    buf = io.BytesIO()
    img.save(buf, **PNG_SETTINGS)
    return buf.getvalue()


def upscale(cells: np.ndarray, cell_px: int) -> np.ndarray:
    if cell_px < 1:
        raise ValueError("cell_px must be >= 1")
    return np.repeat(np.repeat(cells, cell_px, axis=0), cell_px, axis=1)


def color_for(key: str) -> tuple[int, int, int]:
    """Stable mid-tone color derived from a string."""
    d = hashlib.sha256(key.encode("utf-8")).digest()
    return 48 + d[0] % 176, 48 + d[1] % 176, 48 + d[2] % 176
