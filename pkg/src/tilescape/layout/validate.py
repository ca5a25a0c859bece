"""Rule-based layout checks: collisions, wall overlap, bounds, references, connectivity."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from .model import Cell, SceneLayout
from .raster import GridMaps, clip_rect, rasterize, room_nav_components

HARD_CODES = (
    "blocked_door",
    "collision",
    "dangling_ref",
    "off_floor",
    "out_of_bounds",
    "unreachable_room",
    "wall_overlap",
)
WARNING_CODES = ("agent_size", "dangling_ref", "missing_property", "out_of_bounds", "property_mismatch")


@dataclass(frozen=True)
class Finding:
    code: str
    asset_id: str | None
    cells: tuple[Cell, ...]
    message: str
    related: tuple[str, ...] = ()
    # (layer name, index) of the placements involved
    refs: tuple[tuple[str, int], ...] = ()

    def sort_key(self):
        return (self.code, self.asset_id or "", self.cells[0] if self.cells else (-1, -1), self.message)

    def to_dict(self) -> dict:
        d = {"code": self.code, "asset_id": self.asset_id, "cells": [list(c) for c in self.cells], "message": self.message}
        if self.related:
            d["related"] = list(self.related)
        if self.refs:
            d["refs"] = [[layer, i] for layer, i in self.refs]
        return d


@dataclass(frozen=True)
class ValidationReport:
    hard: tuple[Finding, ...] = ()
    warnings: tuple[Finding, ...] = ()

    @property
    def clean(self) -> bool:
        return not self.hard

    def codes(self) -> list[str]:
        return [f.code for f in self.hard]

    def to_dict(self) -> dict:
        return {
            "clean": self.clean,
            "hard": [f.to_dict() for f in self.hard],
            "warnings": [f.to_dict() for f in self.warnings],
        }


@dataclass
class _Collector:
    hard: list[Finding] = field(default_factory=list)
    warnings: list[Finding] = field(default_factory=list)

    def report(self) -> ValidationReport:
        return ValidationReport(
            hard=tuple(sorted(self.hard, key=Finding.sort_key)),
            warnings=tuple(sorted(self.warnings, key=Finding.sort_key)),
        )


def _in_bounds(cells, layout: SceneLayout) -> tuple[Cell, ...]:
    return tuple(sorted(c for c in cells if layout.in_bounds(c)))


def validate(layout: SceneLayout, grids: GridMaps | None = None) -> ValidationReport:
    """Run every rule check. Problems are returned as findings, never raised."""
    out = _Collector()
    grids = grids if grids is not None else rasterize(layout)
    w, h = layout.width, layout.height

    for layer_name in ("floor_layer", "wall_layer"):
        for i, fill in enumerate(getattr(layout, layer_name)):
            box = clip_rect(*fill.area, w, h)
            cells = ()
            if box is not None:
                x0, y0, x1, y1 = box
                cells = ((x0, y0),)
            if fill.asset_id not in layout.assets:
                out.hard.append(Finding("dangling_ref", fill.asset_id, cells,
                                        f"{layer_name}[{i}] references undefined asset {fill.asset_id!r}",
                                        refs=((layer_name, i),)))
            x, y, fw, fh = fill.area
            if x < 0 or y < 0 or x + fw > w or y + fh > h:
                out.warnings.append(Finding("out_of_bounds", fill.asset_id, cells,
                                            f"{layer_name}[{i}] area {list(fill.area)} clipped to the grid",
                                            refs=((layer_name, i),)))

    solid: list[tuple[int, str, list[Cell]]] = []
    doors: list[tuple[int, str, list[Cell]]] = []
    for layer_name in ("object_layer", "npc_layer"):
        for i, p in enumerate(getattr(layout, layer_name)):
            ref = ((layer_name, i),)
            if p.asset_id not in layout.assets:
                cells = _in_bounds([p.position], layout)
                out.hard.append(Finding("dangling_ref", p.asset_id, cells,
                                        f"{layer_name}[{i}] references undefined asset {p.asset_id!r}", refs=ref))
                continue
            fp = layout.footprint(p)
            inside = _in_bounds(fp, layout)
            if len(inside) < len(fp):
                out.hard.append(Finding("out_of_bounds", p.asset_id, inside,
                                        f"{p.asset_id} at {list(p.position)} extends outside the "
                                        f"{w}x{h} grid", refs=ref))
            missing_floor = tuple(c for c in inside if not grids.floor_mask[c[1], c[0]])
            if missing_floor:
                out.hard.append(Finding("off_floor", p.asset_id, missing_floor,
                                        f"{p.asset_id} at {list(p.position)} has {len(missing_floor)} "
                                        "footprint cell(s) without floor", refs=ref))
            if layer_name != "object_layer":
                continue
            physics, navigation = layout.resolved_properties(p.asset_id, layer_name)
            if navigation == "walkable_door":
                doors.append((i, p.asset_id, list(inside)))
            elif physics == "solid":
                solid.append((i, p.asset_id, list(inside)))

    owners: dict[Cell, list[int]] = defaultdict(list)
    for k, (_, _, cells) in enumerate(solid):
        for c in cells:
            owners[c].append(k)
    overlaps: dict[tuple[int, int], list[Cell]] = defaultdict(list)
    for c, ks in owners.items():
        for a in range(len(ks)):
            for b in range(a + 1, len(ks)):
                overlaps[(ks[a], ks[b])].append(c)
    for (a, b), cells in overlaps.items():
        ia, ida, _ = solid[a]
        ib, idb, _ = solid[b]
        out.hard.append(Finding("collision", ida, tuple(sorted(cells)),
                                f"{ida} (object_layer[{ia}]) overlaps {idb} (object_layer[{ib}]) "
                                f"on {len(cells)} cell(s)",
                                related=(idb,), refs=(("object_layer", ia), ("object_layer", ib))))

    for i, asset_id, cells in solid:
        hit = tuple(c for c in cells if grids.wall_mask[c[1], c[0]])
        if hit:
            out.hard.append(Finding("wall_overlap", asset_id, hit,
                                    f"{asset_id} (object_layer[{i}]) intersects wall on {len(hit)} cell(s)",
                                    refs=(("object_layer", i),)))

    for di, door_id, door_cells in doors:
        door_set = set(door_cells)
        for i, asset_id, cells in solid:
            hit = tuple(sorted(door_set.intersection(cells)))
            if hit:
                out.hard.append(Finding("blocked_door", asset_id, hit,
                                        f"{asset_id} (object_layer[{i}]) blocks door {door_id} "
                                        f"(object_layer[{di}])",
                                        related=(door_id,), refs=(("object_layer", i), ("object_layer", di))))

    if len(grids.rooms) > 1:
        largest = max(grids.rooms, key=lambda r: (r.size, -r.id))
        comps = room_nav_components(grids)
        target = comps[largest.id]
        for room in grids.rooms:
            if room.id == largest.id or comps[room.id] & target:
                continue
            out.hard.append(Finding("unreachable_room", None, tuple(sorted(room.cells)),
                                    f"room {room.id} ({room.size} cells) has no navigation path to "
                                    f"room {largest.id}"))

    for asset_id in sorted(layout.assets):
        asset = layout.assets[asset_id]
        entry = layout.properties.get(asset_id)
        if entry is None:
            out.warnings.append(Finding("missing_property", asset_id, (),
                                        f"{asset_id} has no properties entry; defaults applied"))
        elif asset.is_character != entry.has_agent_fields:
            expect = "requires" if asset.is_character else "must not carry"
            out.warnings.append(Finding("property_mismatch", asset_id, (),
                                        f"{asset.kind} {asset_id} {expect} agent fields"))
        if asset.is_character and tuple(asset.base_size) != (1, 1):
            out.warnings.append(Finding("agent_size", asset_id, (),
                                        f"{asset.kind} {asset_id} has base_size {list(asset.base_size)}, expected [1, 1]"))
    for asset_id in sorted(layout.properties):
        if asset_id not in layout.assets:
            out.warnings.append(Finding("dangling_ref", asset_id, (),
                                        f"properties entry {asset_id!r} has no asset definition"))
    return out.report()
