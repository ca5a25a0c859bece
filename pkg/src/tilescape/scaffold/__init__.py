"""Scene bundle compiler, preview renderer and navigation queries."""

from .bundle import NavGrid, SceneCompileError, compile_scene, find_path, placeholder_png, rle_decode, rle_encode, tree_hash
from .render import PREVIEW_CELL_PX, paint_order, preview_pixels, render_preview

__all__ = [
    "PREVIEW_CELL_PX",
    "NavGrid",
    "SceneCompileError",
    "compile_scene",
    "find_path",
    "paint_order",
    "placeholder_png",
    "preview_pixels",
    "render_preview",
    "rle_decode",
    "rle_encode",
    "tree_hash",
]
