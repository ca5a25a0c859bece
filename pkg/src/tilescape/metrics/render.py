"""Green/red/black occupancy raster used by the density judge."""

from __future__ import annotations

import numpy as np

from ..imaging import encode_png, upscale
from ..layout import SceneLayout, rasterize

OCCUPANCY_CELL_PX = 8
GREEN = (0, 200, 0)
RED = (220, 0, 0)
BLACK = (0, 0, 0)


def occupancy_pixels(layout: SceneLayout, cell_px: int = OCCUPANCY_CELL_PX) -> np.ndarray:
    grids = rasterize(layout)
    cells = np.zeros((layout.height, layout.width, 3), dtype=np.uint8)
    cells[grids.floor_mask] = GREEN
    cells[grids.obstacle_mask | grids.wall_mask] = RED
    return upscale(cells, cell_px)


def render_occupancy(layout: SceneLayout, cell_px: int = OCCUPANCY_CELL_PX) -> bytes:
    """PNG bytes: floor green, walls and obstacle footprints red, everything else black."""
    return encode_png(occupancy_pixels(layout, cell_px))
