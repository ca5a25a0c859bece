"""Layered preview render: floor, walls, objects (painter's order), characters."""

from __future__ import annotations

import numpy as np

from ..imaging import color_for, encode_png
from ..layout import SceneLayout, clip_rect

BACKGROUND = (24, 24, 28)
PREVIEW_CELL_PX = 16


def _shade(color, factor):
    return tuple(max(0, min(255, int(c * factor))) for c in color)


def _paint_fills(img, layer, width, height, px):
    for fill in layer:
        box = clip_rect(*fill.area, width, height)
        if box is None:
            continue
        x0, y0, x1, y1 = box
        img[y0 * px:y1 * px, x0 * px:x1 * px] = color_for(fill.asset_id)


def _paint_sprite(img, layout: SceneLayout, placement, px):
    asset = layout.assets.get(placement.asset_id)
    if asset is None:
        return
    x, y = placement.position
    bw, bh = asset.base_size
    vw, vh = asset.visual_size
    # visual box shares the footprint's bottom-left corner
    left, bottom = x * px, (y + bh) * px
    top, right = bottom - vh * px, left + vw * px
    H, W = img.shape[:2]
    t, b = max(top, 0), min(bottom, H)
    l, r = max(left, 0), min(right, W)
    if t >= b or l >= r:
        return
    color = color_for(placement.asset_id)
    img[t:b, l:r] = color
    edge = _shade(color, 0.55)
    if top >= 0:
        img[t, l:r] = edge
    if bottom <= H:
        img[b - 1, l:r] = edge
    if left >= 0:
        img[t:b, l] = edge
    if right <= W:
        img[t:b, r - 1] = edge


def paint_order(layout: SceneLayout, placements):
    """Sort by footprint bottom edge, then x, then asset id (stable for disjoint footprints)."""
    def key(p):
        asset = layout.assets.get(p.asset_id)
        h = asset.base_size[1] if asset else 1
        return (p.position[1] + h, p.position[0], p.asset_id, p.position[1])
    return sorted(placements, key=key)


def preview_pixels(layout: SceneLayout, cell_px: int = PREVIEW_CELL_PX) -> np.ndarray:
    if cell_px < 1:
        raise ValueError("cell_px must be >= 1")
    w, h = layout.width, layout.height
    img = np.empty((h * cell_px, w * cell_px, 3), dtype=np.uint8)
    img[:, :] = BACKGROUND
    _paint_fills(img, layout.floor_layer, w, h, cell_px)
    _paint_fills(img, layout.wall_layer, w, h, cell_px)
    for p in paint_order(layout, layout.object_layer):
        _paint_sprite(img, layout, p, cell_px)
    for p in paint_order(layout, layout.npc_layer):
        _paint_sprite(img, layout, p, cell_px)
    return img


def render_preview(layout: SceneLayout, cell_px: int = PREVIEW_CELL_PX) -> bytes:
    """PNG bytes of the layered preview."""
    return encode_png(preview_pixels(layout, cell_px))
