"""Scene layout types: metadata, asset definitions, layers and properties."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterator

ASSET_KINDS = ("tile", "object", "agent", "npc")
PHYSICS_VALUES = ("solid", "passable")
NAVIGATION_VALUES = ("walkable", "obstacle", "walkable_door")
LAYER_NAMES = ("floor_layer", "wall_layer", "object_layer", "npc_layer")

Cell = tuple[int, int]


@dataclass(frozen=True)
class Metadata:
    scene_name: str
    grid_size: tuple[int, int]
    description: str = ""
    style_prompt: str = ""
    extra: dict[str, Any] = field(default_factory=dict, compare=True)

    @property
    def width(self) -> int:
        return self.grid_size[0]

    @property
    def height(self) -> int:
        return self.grid_size[1]


@dataclass(frozen=True)
class AssetDef:
    id: str
    kind: str
    description: str
    base_size: tuple[int, int]
    visual_size: tuple[int, int]
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def is_character(self) -> bool:
        return self.kind in ("agent", "npc")


@dataclass(frozen=True)
class AreaFill:
    asset_id: str
    area: tuple[int, int, int, int]
    command: str = "fill_rect"
    extra: dict[str, Any] = field(default_factory=dict)

    def cells(self) -> Iterator[Cell]:
        x, y, w, h = self.area
        for cy in range(y, y + h):
            for cx in range(x, x + w):
                yield cx, cy


@dataclass(frozen=True)
class Placement:
    asset_id: str
    position: tuple[int, int]
    extra: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class PropertyEntry:
    physics: str | None = None
    navigation: str | None = None
    semantic_tag: str | None = None
    character_name: str | None = None
    is_agent: bool | None = None
    soul_file: str | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def has_agent_fields(self) -> bool:
        return self.character_name is not None or self.is_agent is not None or self.soul_file is not None


@dataclass(frozen=True)
class SceneLayout:
    """The layout quadruple: metadata, assets, layered placements, properties.

    Instances are treated as immutable; editing helpers return new objects.
    ``extra`` and ``layout_extra`` hold unknown top-level and ``layout``
    keys so they survive a parse/serialize round trip.
    """

    metadata: Metadata
    assets: dict[str, AssetDef] = field(default_factory=dict)
    floor_layer: tuple[AreaFill, ...] = ()
    wall_layer: tuple[AreaFill, ...] = ()
    object_layer: tuple[Placement, ...] = ()
    npc_layer: tuple[Placement, ...] = ()
    properties: dict[str, PropertyEntry] = field(default_factory=dict)
    extra: dict[str, Any] = field(default_factory=dict)
    layout_extra: dict[str, Any] = field(default_factory=dict)

    @property
    def width(self) -> int:
        return self.metadata.grid_size[0]

    @property
    def height(self) -> int:
        return self.metadata.grid_size[1]

    def footprint(self, placement: Placement) -> list[Cell]:
        """Cells covered by a placement's base size, unclipped. Empty for unknown assets."""
        asset = self.assets.get(placement.asset_id)
        if asset is None:
            return []
        x, y = placement.position
        w, h = asset.base_size
        return [(cx, cy) for cy in range(y, y + h) for cx in range(x, x + w)]

    def in_bounds(self, cell: Cell) -> bool:
        x, y = cell
        return 0 <= x < self.width and 0 <= y < self.height

    def resolved_properties(self, asset_id: str, layer: str | None = None) -> tuple[str, str]:
        """(physics, navigation) for an asset, with defaults for missing entries.

        Tiles default by layer (floor walkable, wall solid); objects default
        to passable/obstacle; characters to passable/walkable.
        """
        asset = self.assets.get(asset_id)
        entry = self.properties.get(asset_id)
        if asset is None:
            default = ("passable", "obstacle")
        elif asset.kind == "tile":
            default = ("solid", "obstacle") if layer == "wall_layer" else ("passable", "walkable")
        elif asset.is_character:
            default = ("passable", "walkable")
        else:
            default = ("passable", "obstacle")
        if entry is None:
            return default
        return (entry.physics or default[0], entry.navigation or default[1])


def empty_layout(width: int = 1, height: int = 1, name: str = "empty") -> SceneLayout:
    return SceneLayout(metadata=Metadata(scene_name=name, grid_size=(width, height)))
