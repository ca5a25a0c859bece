"""Floorplan synthesis: non-convex envelope, periphery-to-center room carving,
door placement toward the core, and wall regularization.

The structure is a label grid indexed ``[y, x]``. Rooms are carved from
convex corners of the remaining public region inward, and every carve must
leave the public region 4-connected, so the leftover core forms the
circulation backbone that each room's door opens onto.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace

import numpy as np

from .._kernels import label4

OUTSIDE, PUBLIC, WALL, DOOR = 0, 1, 2, 3
ROOM_BASE = 4

Rect = tuple[int, int, int, int]  # x, y, w, h
Cell = tuple[int, int]


class InfeasibleLayoutError(ValueError):
    """The requested grid cannot host the requested rooms."""


@dataclass(frozen=True)
class ProcgenPriors:
    room_area_min: int = 12
    room_area_max: int = 80
    aspect_ratio_max: float = 2.0
    boundary_subrect_count_range: tuple[int, int] = (1, 3)
    wall_thickness: int = 1
    core_seed_fraction_range: tuple[float, float] = (0.6, 0.8)
    subrect_min: int = 3
    scan_attempts: int = 40

    def __post_init__(self):
        if self.room_area_min < 4:
            raise ValueError("room_area_min must be >= 4")
        if self.room_area_max < self.room_area_min:
            raise ValueError("room_area_max must be >= room_area_min")
        if self.aspect_ratio_max < 1:
            raise ValueError("aspect_ratio_max must be >= 1")
        if self.wall_thickness != 1:
            raise ValueError("wall_thickness is fixed at 1")
        lo, hi = self.core_seed_fraction_range
        if not 0 < lo <= hi <= 1:
            raise ValueError("core_seed_fraction_range must satisfy 0 < lo <= hi <= 1")
        lo, hi = self.boundary_subrect_count_range
        if not 0 <= lo <= hi:
            raise ValueError("boundary_subrect_count_range must satisfy 0 <= lo <= hi")

    @classmethod
    def from_mapping(cls, data: dict) -> "ProcgenPriors":
        kwargs = {}
        for key, value in data.items():
            if key not in cls.__dataclass_fields__:
                raise ValueError(f"unknown prior {key!r}")
            kwargs[key] = tuple(value) if isinstance(value, list) else value
        return cls(**kwargs)


@dataclass(frozen=True)
class RoomDescriptor:
    id: int
    rect: Rect  # interior cells
    function_tag: str | None = None
    door: Cell | None = None

    @property
    def area(self) -> int:
        return self.rect[2] * self.rect[3]

    def ring_rect(self) -> Rect:
        x, y, w, h = self.rect
        return x - 1, y - 1, w + 2, h + 2


@dataclass(frozen=True, eq=False)
class StructureGrid:
    width: int
    height: int
    labels: np.ndarray
    rooms: tuple[RoomDescriptor, ...]
    core_rect: Rect
    envelope_rects: tuple[Rect, ...]
    wall_runs: tuple[Rect, ...]
    seed: int
    requested_rooms: int
    infeasible: bool = False
    carve_log: tuple[int, ...] = field(default=())  # public-component count after each carve

    @property
    def core_centroid(self) -> tuple[float, float]:
        return core_centroid(self.core_rect)

    @property
    def core_cell(self) -> Cell:
        cx, cy = self.core_centroid
        return int(math.floor(cx)), int(math.floor(cy))

    def with_functions(self, tags: list[str]) -> "StructureGrid":
        rooms = tuple(replace(r, function_tag=t) for r, t in zip(self.rooms, tags))
        return replace(self, rooms=rooms)

    def public_mask(self) -> np.ndarray:
        return self.labels == PUBLIC

    def wall_mask(self) -> np.ndarray:
        return (self.labels == WALL) | (self.labels == DOOR)


def core_centroid(rect: Rect) -> tuple[float, float]:
    x, y, w, h = rect
    return x + (w - 1) / 2.0, y + (h - 1) / 2.0


def _init_seed(width: int, height: int, rng: random.Random, priors: ProcgenPriors) -> Rect:
    lo, hi = priors.core_seed_fraction_range
    cw = min(width, max(7, round(rng.uniform(lo, hi) * width)))
    ch = min(height, max(7, round(rng.uniform(lo, hi) * height)))
    return (width - cw) // 2, (height - ch) // 2, cw, ch


def _augment_shape(core: Rect, width: int, height: int, rng: random.Random, priors: ProcgenPriors) -> list[Rect]:
    """Attach edge sub-rectangles to the core (shape grammar)."""
    x, y, w, h = core
    lo, hi = priors.boundary_subrect_count_range
    wanted = rng.randint(lo, hi)
    rects = [core]
    span_min = priors.subrect_min + 2
    for _ in range(wanted * 4):
        if len(rects) - 1 >= wanted:
            break
        side = rng.choice(("top", "bottom", "left", "right"))
        margin = {"top": y, "bottom": height - (y + h), "left": x, "right": width - (x + w)}[side]
        edge = w if side in ("top", "bottom") else h
        if margin < priors.subrect_min or edge < span_min:
            continue
        depth = rng.randint(priors.subrect_min, margin)
        span = rng.randint(span_min, edge)
        off = rng.randint(0, edge - span)
        if side == "top":
            sub = (x + off, y - depth, span, depth)
        elif side == "bottom":
            sub = (x + off, y + h, span, depth)
        elif side == "left":
            sub = (x - depth, y + off, depth, span)
        else:
            sub = (x + w, y + off, depth, span)
        rects.append(sub)
    return rects


def _envelope_labels(rects: list[Rect], width: int, height: int) -> np.ndarray:
    inside = np.zeros((height, width), dtype=bool)
    for rx, ry, rw, rh in rects:
        inside[ry:ry + rh, rx:rx + rw] = True
    padded = np.pad(inside, 1, constant_values=False)
    interior = inside.copy()
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            interior &= padded[1 + dy:1 + dy + height, 1 + dx:1 + dx + width]
    labels = np.full((height, width), OUTSIDE, dtype=np.int16)
    labels[inside] = WALL
    labels[interior] = PUBLIC
    return labels


def has_thick_wall(labels: np.ndarray, region: Rect | None = None) -> bool:
    """True if any 2x2 block of wall/door cells exists (optionally near ``region``)."""
    wall = (labels == WALL) | (labels == DOOR)
    h, w = wall.shape
    if region is not None:
        rx, ry, rw, rh = region
        x0, y0 = max(rx - 1, 0), max(ry - 1, 0)
        x1, y1 = min(rx + rw + 1, w), min(ry + rh + 1, h)
        wall = wall[y0:y1, x0:x1]
    if wall.shape[0] < 2 or wall.shape[1] < 2:
        return False
    block = wall[:-1, :-1] & wall[1:, :-1] & wall[:-1, 1:] & wall[1:, 1:]
    return bool(block.any())


def convex_corners(labels: np.ndarray) -> list[tuple[int, int, int, int]]:
    """Convex corners of the public region as (x, y, sx, sy).

    ``(sx, sy)`` is the direction a room grows from that corner: the cells
    at ``(x - sx, y)`` and ``(x, y - sy)`` are not public.
    """
    h, w = labels.shape
    pub = labels == PUBLIC
    out = []
    ys, xs = np.nonzero(pub)
    for y, x in zip(ys.tolist(), xs.tolist()):
        for sy in (1, -1):
            for sx in (1, -1):
                bx, by = x - sx, y - sy
                if 0 <= bx < w and pub[y, bx]:
                    continue
                if 0 <= by < h and pub[by, x]:
                    continue
                out.append((x, y, sx, sy))
    return out


def door_candidates(labels: np.ndarray, room: RoomDescriptor) -> list[Cell]:
    """Wall cells on the room ring (corners excluded) that open onto public space."""
    h, w = labels.shape
    x, y, rw, rh = room.rect
    code = ROOM_BASE + room.id
    out = []
    sides = (
        [((cx, y - 1), (cx, y), (cx, y - 2)) for cx in range(x, x + rw)]
        + [((cx, y + rh), (cx, y + rh - 1), (cx, y + rh + 1)) for cx in range(x, x + rw)]
        + [((x - 1, cy), (x, cy), (x - 2, cy)) for cy in range(y, y + rh)]
        + [((x + rw, cy), (x + rw - 1, cy), (x + rw + 1, cy)) for cy in range(y, y + rh)]
    )
    for ring, inner, outer in sides:
        ox, oy = outer
        if not (0 <= ox < w and 0 <= oy < h):
            continue
        if labels[ring[1], ring[0]] in (WALL, DOOR) and labels[inner[1], inner[0]] == code and labels[oy, ox] == PUBLIC:
            out.append(ring)
    return out


def choose_door(candidates: list[Cell], centroid: tuple[float, float]) -> Cell:
    """Candidate nearest (Euclidean) to the centroid; ties go to the lowest (y, x)."""
    cx, cy = centroid
    return min(candidates, key=lambda p: (math.hypot(p[0] - cx, p[1] - cy), p[1], p[0]))


def _run_length(pub: np.ndarray, x: int, y: int, dx: int, dy: int) -> int:
    h, w = pub.shape
    n = 0
    while 0 <= x < w and 0 <= y < h and pub[y, x]:
        n += 1
        x += dx
        y += dy
    return n


def _dims(priors: ProcgenPriors, max_w: int, max_h: int) -> list[tuple[int, int]]:
    out = []
    for rw in range(2, max_w + 1):
        for rh in range(2, max_h + 1):
            area = rw * rh
            if area < priors.room_area_min or area > priors.room_area_max:
                continue
            if max(rw, rh) / min(rw, rh) > priors.aspect_ratio_max:
                continue
            out.append((rw, rh))
    return out


def _try_carve(labels: np.ndarray, rooms: list[RoomDescriptor], rect: Rect, room_id: int) -> np.ndarray | None:
    """Return the label grid after carving ``rect`` (interior) or None if invalid."""
    h, w = labels.shape
    x, y, rw, rh = rect
    if x < 1 or y < 1 or x + rw + 1 > w or y + rh + 1 > h:
        return None
    interior = labels[y:y + rh, x:x + rw]
    if not (interior == PUBLIC).all():
        return None
    ring = labels[y - 1:y + rh + 1, x - 1:x + rw + 1]
    if not np.isin(ring, (PUBLIC, WALL)).all():
        return None
    trial = labels.copy()
    new_ring = []
    for cy in range(y - 1, y + rh + 1):
        for cx in range(x - 1, x + rw + 1):
            on_ring = cy in (y - 1, y + rh) or cx in (x - 1, x + rw)
            if on_ring and trial[cy, cx] == PUBLIC:
                trial[cy, cx] = WALL
                new_ring.append((cx, cy))
    trial[y:y + rh, x:x + rw] = ROOM_BASE + room_id
    # new walls must face open public space at least two cells deep
    for cx, cy in new_ring:
        outward = []
        if cx == x - 1:
            outward.append((-1, 0))
        if cx == x + rw:
            outward.append((1, 0))
        if cy == y - 1:
            outward.append((0, -1))
        if cy == y + rh:
            outward.append((0, 1))
        for dx, dy in outward:
            for k in (1, 2):
                px, py = cx + dx * k, cy + dy * k
                if not (0 <= px < w and 0 <= py < h) or trial[py, px] != PUBLIC:
                    return None
    if has_thick_wall(trial, (x - 1, y - 1, rw + 2, rh + 2)):
        return None
    pub = trial == PUBLIC
    if not pub.any():
        return None
    _, n = label4(pub)
    if n != 1:
        return None
    candidate = RoomDescriptor(room_id, rect)
    for r in [*rooms, candidate]:
        if not door_candidates(trial, r):
            return None
    return trial


def _scan_region(labels, corner, rooms, priors, rng, room_id):
    x, y, sx, sy = corner
    pub = labels == PUBLIC
    max_w = _run_length(pub, x, y, sx, 0)
    max_h = _run_length(pub, x, y, 0, sy)
    dims = _dims(priors, max_w, max_h)
    rng.shuffle(dims)
    for rw, rh in dims[: priors.scan_attempts]:
        rx = x if sx > 0 else x - rw + 1
        ry = y if sy > 0 else y - rh + 1
        trial = _try_carve(labels, rooms, (rx, ry, rw, rh), room_id)
        if trial is not None:
            return (rx, ry, rw, rh), trial
    return None, None


def regularize_walls(labels: np.ndarray) -> list[Rect]:
    """Merge wall cells (doors included) into maximal straight runs.

    Horizontal runs of length >= 2 are taken first; every remaining cell is
    covered by the full vertical run through it. Raises if any wall is
    thicker than one cell.
    """
    if has_thick_wall(labels):
        raise ValueError("wall thickness exceeds one cell")
    wall = (labels == WALL) | (labels == DOOR)
    h, w = wall.shape
    covered = np.zeros_like(wall)
    runs: list[Rect] = []
    for y in range(h):
        x = 0
        while x < w:
            if not wall[y, x]:
                x += 1
                continue
            start = x
            while x < w and wall[y, x]:
                x += 1
            if x - start >= 2:
                runs.append((start, y, x - start, 1))
                covered[y, start:x] = True
    for x in range(w):
        for y in range(h):
            if wall[y, x] and not covered[y, x]:
                top = y
                while top > 0 and wall[top - 1, x]:
                    top -= 1
                bottom = y
                while bottom + 1 < h and wall[bottom + 1, x]:
                    bottom += 1
                runs.append((x, top, 1, bottom - top + 1))
                covered[top:bottom + 1, x] = True
    return runs


def synthesize_structure(seed: int, n_rooms: int, width: int, height: int,
                         priors: ProcgenPriors | None = None) -> StructureGrid:
    """Synthesize a floorplan with up to ``n_rooms`` rooms around a public core.

    Deterministic for fixed arguments. When the corner queue runs dry before
    ``n_rooms`` rooms are carved, the result carries ``infeasible=True`` and
    the rooms that were placed.
    """
    priors = priors or ProcgenPriors()
    if n_rooms < 0:
        raise InfeasibleLayoutError("n_rooms must be >= 0")
    if width < 7 or height < 7:
        raise InfeasibleLayoutError(f"grid {width}x{height} is too small (minimum 7x7)")
    if (width - 2) * (height - 2) < n_rooms * priors.room_area_min + 4:
        raise InfeasibleLayoutError(
            f"grid {width}x{height} cannot host {n_rooms} rooms of at least {priors.room_area_min} cells")
    rng = random.Random(seed)

    # non-convex boundary
    core = _init_seed(width, height, rng, priors)
    rects = _augment_shape(core, width, height, rng, priors)
    labels = _envelope_labels(rects, width, height)
    while len(rects) > 1 and has_thick_wall(labels):
        rects.pop()
        labels = _envelope_labels(rects, width, height)

    # topology-preserving partitioning; rooms share ~70% of the interior
    if n_rooms:
        budget = int((labels == PUBLIC).sum() * 0.7 / n_rooms)
        cap = max(priors.room_area_min, min(priors.room_area_max, budget))
        priors = replace(priors, room_area_max=cap)
    rooms: list[RoomDescriptor] = []
    tried: set[tuple[int, int, int, int]] = set()
    queue = sorted(convex_corners(labels))
    carve_log = []
    while len(rooms) < n_rooms and queue:
        corner = queue.pop(rng.randrange(len(queue)))
        tried.add(corner)
        rect, trial = _scan_region(labels, corner, rooms, priors, rng, len(rooms))
        if rect is None:
            continue
        labels = trial
        rooms.append(RoomDescriptor(len(rooms), rect))
        carve_log.append(label4(labels == PUBLIC)[1])
        queue = sorted(c for c in convex_corners(labels) if c not in tried)

    # circulation: one door per room, nearest the core centroid
    centroid = core_centroid(core)
    placed = []
    for room in rooms:
        door = choose_door(door_candidates(labels, room), centroid)
        labels[door[1], door[0]] = DOOR
        placed.append(replace(room, door=door))

    runs = regularize_walls(labels)
    return StructureGrid(
        width=width,
        height=height,
        labels=labels,
        rooms=tuple(placed),
        core_rect=core,
        envelope_rects=tuple(rects),
        wall_runs=tuple(runs),
        seed=seed,
        requested_rooms=n_rooms,
        infeasible=len(rooms) < n_rooms,
        carve_log=tuple(carve_log),
    )
