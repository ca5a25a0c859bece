"""Layout quadruple: types, parsing, rasterization and validation."""

from .io import LayoutParseError, dumps_document, from_document, loads_lenient, parse_layout, repair_json_text, serialize_layout, to_document
from .model import (
    ASSET_KINDS,
    LAYER_NAMES,
    AreaFill,
    AssetDef,
    Cell,
    Metadata,
    Placement,
    PropertyEntry,
    SceneLayout,
    empty_layout,
)
from .raster import GridMaps, Room, clip_rect, footprint_mask, rasterize, room_nav_components
from .validate import Finding, ValidationReport, validate

__all__ = [
    "ASSET_KINDS",
    "LAYER_NAMES",
    "AreaFill",
    "AssetDef",
    "Cell",
    "Finding",
    "GridMaps",
    "LayoutParseError",
    "Metadata",
    "Placement",
    "PropertyEntry",
    "Room",
    "SceneLayout",
    "ValidationReport",
    "clip_rect",
    "dumps_document",
    "empty_layout",
    "footprint_mask",
    "from_document",
    "loads_lenient",
    "parse_layout",
    "rasterize",
    "repair_json_text",
    "room_nav_components",
    "serialize_layout",
    "to_document",
    "validate",
]
