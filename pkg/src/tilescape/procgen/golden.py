"""Turn a synthesized structure into a furnished, validator-clean layout."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

from ..chat import ChatClient, StubClient
from ..layout import AreaFill, Metadata, Placement, SceneLayout, rasterize
from .catalog import FURNITURE, RESIDENT, STRUCTURE_ITEMS, floor_asset_id, floor_item, furnishing_for
from .functions import assign_functions
from .structure import PUBLIC, ProcgenPriors, StructureGrid, synthesize_structure
from .zones import PlacementDirective, PlacementFailure, place_components

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GoldenResult:
    layout: SceneLayout
    structure: StructureGrid
    failures: tuple[PlacementFailure, ...]

    @property
    def infeasible(self) -> bool:
        return self.structure.infeasible


def structure_to_layout(structure: StructureGrid, name: str = "procgen", description: str = "") -> SceneLayout:
    """Floors, regularized walls and one door object per room; no furniture."""
    items = [STRUCTURE_ITEMS["floor_hall"], STRUCTURE_ITEMS["wall_plain"]]
    floor = [AreaFill("floor_hall", r) for r in structure.envelope_rects]
    for room in structure.rooms:
        item = floor_item(room.function_tag)
        if item not in items:
            items.append(item)
        floor.append(AreaFill(floor_asset_id(room.function_tag), room.rect))
    walls = [AreaFill("wall_plain", r) for r in structure.wall_runs]
    doors = [Placement("door_wood", r.door) for r in structure.rooms if r.door is not None]
    if doors:
        items.append(STRUCTURE_ITEMS["door_wood"])
    meta = Metadata(scene_name=name, grid_size=(structure.width, structure.height),
                    description=description, style_prompt="top-down pixel art interior")
    return SceneLayout(
        metadata=meta,
        assets={i.id: i.asset() for i in items},
        floor_layer=tuple(floor),
        wall_layer=tuple(walls),
        object_layer=tuple(doors),
        properties={i.id: i.properties() for i in items},
    )


def _with_catalog_assets(layout: SceneLayout, ids) -> SceneLayout:
    assets = dict(layout.assets)
    props = dict(layout.properties)
    for asset_id in ids:
        item = FURNITURE[asset_id] if asset_id in FURNITURE else RESIDENT
        assets[asset_id] = item.asset()
        props[asset_id] = item.properties()
    return replace(layout, assets=assets, properties=props)


def _resident_spot(structure: StructureGrid, layout: SceneLayout):
    grids = rasterize(layout)
    cx, cy = structure.core_centroid
    best = None
    for y in range(structure.height):
        for x in range(structure.width):
            if structure.labels[y, x] != PUBLIC or not grids.nav_mask[y, x]:
                continue
            key = (math.hypot(x - cx, y - cy), y, x)
            if best is None or key < best:
                best = key
    return None if best is None else (best[2], best[1])


def furnish(layout: SceneLayout, structure: StructureGrid) -> tuple[SceneLayout, tuple[PlacementFailure, ...]]:
    """Place each room's furnishing plan, then one resident in the public core."""
    grids = rasterize(layout)
    failures: list[PlacementFailure] = []
    for room in structure.rooms:
        plan = furnishing_for(room.function_tag)
        layout = _with_catalog_assets(layout, [a for a, _, _ in plan])
        rx, ry = room.rect[:2]
        room_id = grids.room_at((rx, ry))
        directives = [PlacementDirective(a, z, n) for a, z, n in plan]
        outcome = place_components(layout, room_id, directives, seed=structure.seed)
        layout = outcome.layout
        failures.extend(outcome.failures)
    spot = _resident_spot(structure, layout)
    if spot is not None:
        layout = _with_catalog_assets(layout, [RESIDENT.id])
        layout = replace(layout, npc_layer=(Placement(RESIDENT.id, spot),))
    used = {p.asset_id for p in layout.object_layer} | {p.asset_id for p in layout.npc_layer}
    used |= {f.asset_id for f in layout.floor_layer} | {f.asset_id for f in layout.wall_layer}
    # drop catalog entries whose every copy failed to fit
    assets = {k: v for k, v in layout.assets.items() if k in used}
    props = {k: v for k, v in layout.properties.items() if k in used}
    return replace(layout, assets=assets, properties=props), tuple(failures)


def generate_golden(seed: int, n_rooms: int, width: int, height: int,
                    priors: ProcgenPriors | None = None, scenario: str = "house",
                    client: ChatClient | None = None) -> GoldenResult:
    """Synthesize, tag and furnish one golden layout. Deterministic with the stub client."""
    structure = synthesize_structure(seed, n_rooms, width, height, priors)
    structure = assign_functions(structure, scenario, client or StubClient())
    tags = ", ".join(r.function_tag or "room" for r in structure.rooms)
    desc = f"A {scenario} floorplan with {len(structure.rooms)} rooms" + (f" ({tags})" if tags else "")
    layout = structure_to_layout(structure, name=f"procgen_{seed}", description=desc)
    layout, failures = furnish(layout, structure)
    if failures:
        logger.debug("seed %d: %d placement failures", seed, len(failures))
    return GoldenResult(layout, structure, failures)
