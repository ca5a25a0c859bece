"""Rasterize a layout into floor/wall/occupancy/navigation grids.

Grids are numpy arrays indexed ``[y, x]`` with origin at the top-left.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._kernels import label4
from .model import Cell, SceneLayout


@dataclass(frozen=True)
class Room:
    id: int
    cells: frozenset[Cell]

    @property
    def size(self) -> int:
        return len(self.cells)


@dataclass(frozen=True, eq=False)
class GridMaps:
    width: int
    height: int
    floor_mask: np.ndarray
    wall_mask: np.ndarray
    solid_occupancy: np.ndarray
    nav_mask: np.ndarray
    room_labels: np.ndarray
    rooms: tuple[Room, ...]
    door_cells: frozenset[Cell]
    floor_tiles: tuple[tuple[str | None, ...], ...]
    wall_tiles: tuple[tuple[str | None, ...], ...]
    obstacle_mask: np.ndarray

    def room_at(self, cell: Cell) -> int:
        x, y = cell
        return int(self.room_labels[y, x])


def clip_rect(x: int, y: int, w: int, h: int, width: int, height: int):
    """Clip a rect to the grid; returns (x0, y0, x1, y1) exclusive or None when empty."""
    x0, y0 = max(x, 0), max(y, 0)
    x1, y1 = min(x + w, width), min(y + h, height)
    if x0 >= x1 or y0 >= y1:
        return None
    return x0, y0, x1, y1


def _paint(layer, width, height):
    mask = np.zeros((height, width), dtype=bool)
    tiles = [[None] * width for _ in range(height)]
    for fill in layer:
        box = clip_rect(*fill.area, width, height)
        if box is None:
            continue
        x0, y0, x1, y1 = box
        mask[y0:y1, x0:x1] = True
        for cy in range(y0, y1):
            row = tiles[cy]
            for cx in range(x0, x1):
                row[cx] = fill.asset_id
    return mask, tuple(tuple(r) for r in tiles)


def footprint_mask(layout: SceneLayout, placements, width: int, height: int) -> np.ndarray:
    mask = np.zeros((height, width), dtype=bool)
    for p in placements:
        asset = layout.assets.get(p.asset_id)
        if asset is None:
            continue
        box = clip_rect(p.position[0], p.position[1], *asset.base_size, width, height)
        if box is not None:
            x0, y0, x1, y1 = box
            mask[y0:y1, x0:x1] = True
    return mask


def rasterize(layout: SceneLayout) -> GridMaps:
    """Rasterize layers; out-of-bounds areas are clipped (validation reports them)."""
    w, h = layout.width, layout.height
    floor, floor_tiles = _paint(layout.floor_layer, w, h)
    wall, wall_tiles = _paint(layout.wall_layer, w, h)

    solid_objs, obstacle_objs, door_objs = [], [], []
    for p in layout.object_layer:
        if p.asset_id not in layout.assets:
            continue
        physics, navigation = layout.resolved_properties(p.asset_id, "object_layer")
        if navigation == "walkable_door":
            door_objs.append(p)
        else:
            if physics == "solid":
                solid_objs.append(p)
            if navigation == "obstacle":
                obstacle_objs.append(p)

    solid = wall | footprint_mask(layout, solid_objs, w, h)
    obstacles = footprint_mask(layout, obstacle_objs, w, h)
    doors = footprint_mask(layout, door_objs, w, h)
    # doors re-open walls but not other objects' footprints
    nav = floor & ~(wall & ~doors) & ~obstacles

    labels, count = label4(floor & ~wall)
    cells_by_room: list[list[Cell]] = [[] for _ in range(count)]
    ys, xs = np.nonzero(labels >= 0)
    for y, x in zip(ys.tolist(), xs.tolist()):
        cells_by_room[labels[y, x]].append((x, y))
    rooms = tuple(Room(i, frozenset(c)) for i, c in enumerate(cells_by_room))

    door_ok = doors & (wall | nav)
    dy, dx = np.nonzero(door_ok)
    door_cells = frozenset(zip(dx.tolist(), dy.tolist()))
    return GridMaps(
        width=w,
        height=h,
        floor_mask=floor,
        wall_mask=wall,
        solid_occupancy=solid,
        nav_mask=nav,
        room_labels=labels,
        rooms=rooms,
        door_cells=door_cells,
        floor_tiles=floor_tiles,
        wall_tiles=wall_tiles,
        obstacle_mask=obstacles,
    )


def room_nav_components(grids: GridMaps) -> list[frozenset[int]]:
    """Set of navigation-component ids touched by each room."""
    labels, _ = label4(grids.nav_mask)
    out = []
    for room in grids.rooms:
        out.append(frozenset(int(labels[y, x]) for x, y in room.cells if labels[y, x] >= 0))
    return out
