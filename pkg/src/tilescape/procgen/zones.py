"""Twelve-zone room grid and the collision-avoiding Physical Placer."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .._kernels import label4
from ..layout import Placement, SceneLayout, rasterize

INTERIOR_ZONES = ("NW", "N", "NE", "W", "C", "E", "SW", "S", "SE")
WALL_ZONES = ("WALL_L", "WALL_C", "WALL_R")
ZONE_IDS = INTERIOR_ZONES + WALL_ZONES

Rect = tuple[int, int, int, int]
Cell = tuple[int, int]


def split_thirds(n: int) -> tuple[int, int, int]:
    """Sizes of three consecutive bands; the remainder goes to the last band."""
    base = n // 3
    return base, base, base + n % 3


@dataclass(frozen=True)
class ZoneMap:
    interior: Rect
    zones: dict[str, tuple[Cell, ...]]

    def cells(self, zone: str) -> tuple[Cell, ...]:
        return self.zones[zone]


def zone_partition(interior: Rect) -> ZoneMap:
    """Split a room interior into a 3x3 grid plus three bands of the top wall row."""
    x, y, w, h = interior
    if w < 1 or h < 1:
        raise ValueError("room interior must be at least 1x1")
    cols = split_thirds(w)
    rows = split_thirds(h)
    zones: dict[str, tuple[Cell, ...]] = {}
    y0 = y
    for r, rh in enumerate(rows):
        x0 = x
        for c, cw in enumerate(cols):
            zones[INTERIOR_ZONES[r * 3 + c]] = tuple(
                (cx, cy) for cy in range(y0, y0 + rh) for cx in range(x0, x0 + cw))
            x0 += cw
        y0 += rh
    x0 = x
    for name, cw in zip(WALL_ZONES, cols):
        zones[name] = tuple((cx, y - 1) for cx in range(x0, x0 + cw))
        x0 += cw
    return ZoneMap(interior, zones)


def ring_order(zone: str) -> list[str]:
    """Fallback zones around ``zone``: nearest ring first, clockwise from north."""
    if zone in WALL_ZONES:
        i = WALL_ZONES.index(zone)
        return sorted((z for z in WALL_ZONES if z != zone), key=lambda z: (abs(WALL_ZONES.index(z) - i), WALL_ZONES.index(z)))
    r0, c0 = divmod(INTERIOR_ZONES.index(zone), 3)

    def key(z):
        r, c = divmod(INTERIOR_ZONES.index(z), 3)
        dr, dc = r - r0, c - c0
        angle = math.atan2(dc, -dr) % (2 * math.pi)
        return max(abs(dr), abs(dc)), angle

    return sorted((z for z in INTERIOR_ZONES if z != zone), key=key)


@dataclass(frozen=True)
class PlacementDirective:
    asset_id: str
    zone: str
    count: int = 1
    orientation: str | None = None  # advisory only; footprints are not rotated

    def __post_init__(self):
        if self.zone not in ZONE_IDS:
            raise ValueError(f"unknown zone {self.zone!r}")
        if self.count < 1:
            raise ValueError("count must be >= 1")


@dataclass(frozen=True)
class PlacementFailure:
    directive: PlacementDirective
    index: int  # which copy of the directive failed
    reason: str


@dataclass(frozen=True)
class PlacementOutcome:
    layout: SceneLayout
    placed: tuple[Placement, ...]
    failures: tuple[PlacementFailure, ...]


@dataclass
class _RoomFrame:
    cells: set[Cell]
    bbox: Rect
    zones: ZoneMap
    wall_band: set[Cell]
    reserved: set[Cell]
    occupied: set[Cell]
    blocked: set[Cell]  # cells unavailable to navigation inside the room


def _room_frame(layout: SceneLayout, room_id: int) -> _RoomFrame:
    grids = rasterize(layout)
    if not 0 <= room_id < len(grids.rooms):
        raise ValueError(f"unknown room id {room_id}")
    cells = set(grids.rooms[room_id].cells)
    xs = [c[0] for c in cells]
    ys = [c[1] for c in cells]
    bbox = (min(xs), min(ys), max(xs) - min(xs) + 1, max(ys) - min(ys) + 1)
    zones = zone_partition(bbox)
    doors = grids.door_cells
    wall_band = {c for z in WALL_ZONES for c in zones.cells(z)
                 if 0 <= c[1] < layout.height and grids.wall_mask[c[1], c[0]] and c not in doors}
    reserved = set(doors)
    for dx, dy in doors:
        for nx, ny in ((dx, dy - 1), (dx - 1, dy), (dx + 1, dy), (dx, dy + 1)):
            if (nx, ny) in cells:
                reserved.add((nx, ny))
    occupied: set[Cell] = set()
    blocked: set[Cell] = set()
    for p in layout.object_layer:
        fp = layout.footprint(p)
        occupied.update(fp)
        _, nav = layout.resolved_properties(p.asset_id, "object_layer")
        if nav == "obstacle":
            blocked.update(c for c in fp if c in cells)
    return _RoomFrame(cells, bbox, zones, wall_band, reserved, occupied, blocked)


def _free_cells_connected(frame: _RoomFrame, extra_blocked: list[Cell]) -> bool:
    free = frame.cells - frame.blocked - set(extra_blocked)
    if not free:
        return False
    x, y, w, h = frame.bbox
    mask = np.zeros((h, w), dtype=bool)
    for cx, cy in free:
        mask[cy - y, cx - x] = True
    _, n = label4(mask)
    return n == 1


def _fits(layout: SceneLayout, frame: _RoomFrame, asset_id: str, anchor: Cell, on_wall: bool) -> list[Cell] | None:
    w, h = layout.assets[asset_id].base_size
    ax, ay = anchor
    cells = [(cx, cy) for cy in range(ay, ay + h) for cx in range(ax, ax + w)]
    if on_wall and layout.resolved_properties(asset_id, "object_layer")[0] == "solid":
        return None  # only non-solid decor may hang on walls
    allowed = frame.wall_band if on_wall else frame.cells
    for c in cells:
        if c not in allowed or c in frame.occupied or c in frame.reserved:
            return None
    if not on_wall:
        _, nav = layout.resolved_properties(asset_id, "object_layer")
        if nav == "obstacle" and not _free_cells_connected(frame, cells):
            return None
    return cells


def place_components(layout: SceneLayout, room_id: int, directives: list[PlacementDirective],
                     seed: int = 0) -> PlacementOutcome:
    """Place directives into a room without collisions.

    Each copy is anchored at the first free cell of its zone in row-major
    order, then of the surrounding zones in ring order. Footprints never
    overlap other objects or the cells in front of doors, and obstacle
    footprints keep the room's free cells 4-connected. ``seed`` is accepted
    for interface symmetry; the scan itself is deterministic.
    """
    del seed
    for d in directives:
        if d.asset_id not in layout.assets:
            raise ValueError(f"directive references unknown asset {d.asset_id!r}")
    frame = _room_frame(layout, room_id)
    placed: list[Placement] = []
    failures: list[PlacementFailure] = []
    for d in directives:
        on_wall = d.zone in WALL_ZONES
        order = [d.zone, *ring_order(d.zone)]
        for k in range(d.count):
            spot = None
            for zone in order:
                for anchor in sorted(frame.zones.cells(zone), key=lambda c: (c[1], c[0])):
                    cells = _fits(layout, frame, d.asset_id, anchor, on_wall)
                    if cells is not None:
                        spot = (anchor, cells)
                        break
                if spot:
                    break
            if spot is None:
                failures.append(PlacementFailure(d, k, f"no free position for {d.asset_id} in room {room_id}"))
                continue
            anchor, cells = spot
            frame.occupied.update(cells)
            _, nav = layout.resolved_properties(d.asset_id, "object_layer")
            if nav == "obstacle" and not on_wall:
                frame.blocked.update(cells)
            placed.append(Placement(d.asset_id, anchor))
    new_layout = replace(layout, object_layer=layout.object_layer + tuple(placed))
    return PlacementOutcome(new_layout, tuple(placed), tuple(failures))
