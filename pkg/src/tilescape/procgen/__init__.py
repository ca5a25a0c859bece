"""Procedural golden-layout synthesis and room furnishing."""

from .functions import FunctionAssignmentError, assign_functions, stub_tags
from .golden import GoldenResult, furnish, generate_golden, structure_to_layout
from .structure import (
    DOOR,
    OUTSIDE,
    PUBLIC,
    ROOM_BASE,
    WALL,
    InfeasibleLayoutError,
    ProcgenPriors,
    RoomDescriptor,
    StructureGrid,
    choose_door,
    convex_corners,
    core_centroid,
    door_candidates,
    has_thick_wall,
    regularize_walls,
    synthesize_structure,
)
from .zones import (
    INTERIOR_ZONES,
    WALL_ZONES,
    ZONE_IDS,
    PlacementDirective,
    PlacementFailure,
    PlacementOutcome,
    ZoneMap,
    place_components,
    ring_order,
    split_thirds,
    zone_partition,
)

__all__ = [
    "DOOR", "OUTSIDE", "PUBLIC", "ROOM_BASE", "WALL",
    "INTERIOR_ZONES", "WALL_ZONES", "ZONE_IDS",
    "FunctionAssignmentError", "GoldenResult", "InfeasibleLayoutError", "PlacementDirective",
    "PlacementFailure", "PlacementOutcome", "ProcgenPriors", "RoomDescriptor", "StructureGrid", "ZoneMap",
    "assign_functions", "choose_door", "convex_corners", "core_centroid", "door_candidates", "furnish",
    "generate_golden", "has_thick_wall", "place_components", "regularize_walls", "ring_order",
    "split_thirds", "structure_to_layout", "stub_tags", "synthesize_structure", "zone_partition",
]
