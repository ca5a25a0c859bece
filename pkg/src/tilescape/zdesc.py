"""Coordinate-free layout descriptions (Z): grammar, lint, parser and template writer.

Grammar, one item per line::

    SCENE: <scene name>
    DESCRIPTION: <free text>
    ROOMS:
    - <room>: <function>, <placement words>
    COMPONENTS:
    - <room>: <asset> (<zone words>), <asset> (<zone words>)
    CONNECTIONS:
    - <room> <-> <room> via <door asset>

An empty list section holds the single line ``- none``.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass

from .layout import SceneLayout, rasterize
from .procgen.zones import zone_partition

SECTIONS = ("SCENE", "DESCRIPTION", "ROOMS", "COMPONENTS", "CONNECTIONS")
COORD_RE = re.compile(r"\d+\s*[,x×]\s*\d+|[\[(]\s*-?\d+")
NAME_RE = re.compile(r"^[a-z][a-z0-9_]*$")

ZONE_WORDS = {
    "NW": "north-west corner", "N": "north side", "NE": "north-east corner",
    "W": "west side", "C": "center", "E": "east side",
    "SW": "south-west corner", "S": "south side", "SE": "south-east corner",
    "WALL_L": "left wall", "WALL_C": "center wall", "WALL_R": "right wall",
}


class ZGrammarError(ValueError):
    pass


def lint(text: str) -> list[str]:
    """Coordinate-like substrings found in ``text``."""
    return [m.group(0) for m in COORD_RE.finditer(text)]


@dataclass(frozen=True)
class ZRoom:
    name: str
    function: str
    placement: str


@dataclass(frozen=True)
class ZDesc:
    scene: str
    description: str = ""
    rooms: tuple[ZRoom, ...] = ()
    components: tuple[tuple[str, tuple[tuple[str, str], ...]], ...] = ()  # room -> ((asset, zone words), ...)
    connections: tuple[tuple[str, str, str], ...] = ()  # (room, room, door asset)

    def component_ids(self) -> list[str]:
        return [asset for _, items in self.components for asset, _ in items]

    def render(self) -> str:
        lines = [f"SCENE: {self.scene}", f"DESCRIPTION: {self.description}", "ROOMS:"]
        lines += [f"- {r.name}: {r.function}, {r.placement}" for r in self.rooms] or ["- none"]
        lines.append("COMPONENTS:")
        lines += [f"- {room}: " + ", ".join(f"{a} ({z})" for a, z in items) for room, items in self.components] or ["- none"]
        lines.append("CONNECTIONS:")
        lines += [f"- {a} <-> {b} via {d}" for a, b, d in self.connections] or ["- none"]
        return "\n".join(ln.rstrip() for ln in lines) + "\n"


_COMPONENT_RE = re.compile(r"([a-zA-Z0-9_]+)\s*\(([^()]*)\)")
_CONNECTION_RE = re.compile(r"^([a-z][a-z0-9_]*)\s*<->\s*([a-z][a-z0-9_]*)\s+via\s+([A-Za-z0-9_]+)$")


def parse_z(text: str) -> ZDesc:
    """Parse and lint a Z text. Raises ZGrammarError naming the offending line."""
    if not text or not text.strip():
        raise ZGrammarError("empty description")
    hits = lint(text)
    if hits:
        raise ZGrammarError(f"coordinate pattern {hits[0]!r} is not allowed")
    lines = [ln.rstrip() for ln in text.strip().splitlines() if ln.strip()]
    values: dict[str, str] = {}
    lists: dict[str, list[str]] = {"ROOMS": [], "COMPONENTS": [], "CONNECTIONS": []}
    order: list[str] = []
    current = None
    for n, ln in enumerate(lines, start=1):
        head, sep, rest = ln.partition(":")
        if sep and head.strip() in SECTIONS and not ln.startswith("-"):
            key = head.strip()
            if key in order:
                raise ZGrammarError(f"line {n}: duplicate section {key}")
            order.append(key)
            current = key
            if key in ("SCENE", "DESCRIPTION"):
                values[key] = rest.strip()
            elif rest.strip():
                raise ZGrammarError(f"line {n}: section {key} takes list items on following lines")
            continue
        if current not in lists or not ln.lstrip().startswith("-"):
            raise ZGrammarError(f"line {n}: unexpected text {ln!r}")
        item = ln.lstrip()[1:].strip()
        if item != "none":
            lists[current].append(item)
    if order != list(SECTIONS):
        missing = [s for s in SECTIONS if s not in order]
        raise ZGrammarError(f"missing section {missing[0]}" if missing else "sections out of order")
    if not values["SCENE"]:
        raise ZGrammarError("SCENE must not be empty")
    rooms = []
    for item in lists["ROOMS"]:
        name, sep, rest = item.partition(":")
        function, sep2, placement = rest.partition(",")
        if not sep or not sep2 or not NAME_RE.match(name.strip()):
            raise ZGrammarError(f"bad room item {item!r}")
        rooms.append(ZRoom(name.strip(), function.strip(), placement.strip()))
    names = {r.name for r in rooms}
    components = []
    for item in lists["COMPONENTS"]:
        room, sep, rest = item.partition(":")
        room = room.strip()
        found = _COMPONENT_RE.findall(rest)
        if not sep or not found:
            raise ZGrammarError(f"bad component item {item!r}")
        if room not in names and room != "elsewhere":
            raise ZGrammarError(f"component list for unknown room {room!r}")
        components.append((room, tuple((a, z.strip()) for a, z in found)))
    connections = []
    for item in lists["CONNECTIONS"]:
        m = _CONNECTION_RE.match(item)
        if not m:
            raise ZGrammarError(f"bad connection item {item!r}")
        connections.append(m.groups())
    return ZDesc(values["SCENE"], values["DESCRIPTION"], tuple(rooms), tuple(components), tuple(connections))


def _scrub(text: str) -> str:
    return " ".join(COORD_RE.sub("", text).split())


def _compass(dx: float, dy: float, w: int, h: int) -> str:
    horiz = "west" if dx < -w / 6 else "east" if dx > w / 6 else ""
    vert = "north" if dy < -h / 6 else "south" if dy > h / 6 else ""
    if horiz and vert:
        return f"{vert}-{horiz}"
    return vert or horiz or "center"


def describe_layout(layout: SceneLayout) -> ZDesc:
    """Deterministic template description of a layout."""
    grids = rasterize(layout)
    room_names: list[str] = []
    functions: list[str] = []
    seen: Counter[str] = Counter()
    for room in grids.rooms:
        tiles = Counter(grids.floor_tiles[y][x] for x, y in room.cells)
        top = sorted(tiles.items(), key=lambda kv: (-kv[1], kv[0] or ""))[0][0] or "room"
        base = re.sub(r"[^a-z0-9_]", "_", top.lower().removeprefix("floor_")) or "room"
        if not base[0].isalpha():
            base = "room_" + base
        seen[base] += 1
        suffix = "" if seen[base] == 1 else "_" + chr(ord("a") + seen[base] - 1)
        room_names.append(base + suffix)
        functions.append(base)

    rooms = []
    zones = []
    for room, name, function in zip(grids.rooms, room_names, functions):
        xs = [c[0] for c in room.cells]
        ys = [c[1] for c in room.cells]
        cx, cy = sum(xs) / len(xs), sum(ys) / len(ys)
        placement = _compass(cx - (layout.width - 1) / 2, cy - (layout.height - 1) / 2, layout.width, layout.height)
        rooms.append(ZRoom(name, function.replace("_", " "), placement))
        zmap = zone_partition((min(xs), min(ys), max(xs) - min(xs) + 1, max(ys) - min(ys) + 1))
        zones.append({c: z for z, cells in zmap.zones.items() for c in cells})

    by_room: dict[str, list[tuple[str, str]]] = {}
    door_links = []
    for p in layout.object_layer:
        if p.asset_id not in layout.assets:
            continue
        nav = layout.resolved_properties(p.asset_id, "object_layer")[1]
        if nav == "walkable_door":
            door_links.append(p)
            continue
        rid = grids.room_at(p.position) if layout.in_bounds(p.position) else -1
        zone = None
        if rid >= 0:
            zone = zones[rid].get(tuple(p.position))
        else:
            below = (p.position[0], p.position[1] + 1)
            if layout.in_bounds(below) and grids.room_at(below) >= 0:
                rid = grids.room_at(below)
                zone = zones[rid].get(tuple(p.position))
        room = room_names[rid] if rid >= 0 else "elsewhere"
        by_room.setdefault(room, []).append((p.asset_id, ZONE_WORDS.get(zone, "near the wall") if rid >= 0 else "outside"))
    order = {n: i for i, n in enumerate(room_names + ["elsewhere"])}
    components = tuple((r, tuple(items)) for r, items in sorted(by_room.items(), key=lambda kv: order[kv[0]]))

    connections = []
    for p in door_links:
        touching = set()
        for x, y in layout.footprint(p):
            for c in ((x, y - 1), (x - 1, y), (x + 1, y), (x, y + 1), (x, y)):
                if layout.in_bounds(c) and grids.room_at(c) >= 0:
                    touching.add(grids.room_at(c))
        ids = sorted(touching)
        a = room_names[ids[0]] if ids else "outside"
        b = room_names[ids[1]] if len(ids) > 1 else "outside"
        connections.append((a, b, p.asset_id))

    name = _scrub(layout.metadata.scene_name) or "untitled"
    return ZDesc(name, _scrub(layout.metadata.description), tuple(rooms), components, tuple(connections))
