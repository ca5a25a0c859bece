"""Built-in asset catalog and per-function furnishing plans for golden layouts."""

from __future__ import annotations

from dataclasses import dataclass

from ..layout import AssetDef, PropertyEntry


@dataclass(frozen=True)
class CatalogItem:
    id: str
    kind: str
    description: str
    base_size: tuple[int, int]
    visual_size: tuple[int, int]
    physics: str
    navigation: str
    semantic_tag: str

    def asset(self) -> AssetDef:
        return AssetDef(self.id, self.kind, self.description, self.base_size, self.visual_size)

    def properties(self) -> PropertyEntry:
        if self.kind in ("agent", "npc"):
            name = self.id.split("_", 1)[-1].title()
            return PropertyEntry(physics=self.physics, navigation=self.navigation, semantic_tag=self.semantic_tag,
                                 character_name=name, is_agent=self.kind == "agent", soul_file=f"souls/{self.id}.md")
        return PropertyEntry(physics=self.physics, navigation=self.navigation, semantic_tag=self.semantic_tag)


def _item(id, kind, desc, base, visual, physics, nav, tag):
    return CatalogItem(id, kind, desc, base, visual, physics, nav, tag)


STRUCTURE_ITEMS = {
    "floor_hall": _item("floor_hall", "tile", "Polished stone hallway floor", (1, 1), (1, 1), "passable", "walkable", "floor"),
    "wall_plain": _item("wall_plain", "tile", "Plain plastered interior wall", (1, 1), (1, 2), "solid", "obstacle", "wall"),
    "door_wood": _item("door_wood", "object", "Single wooden door", (1, 1), (1, 2), "passable", "walkable_door", "door"),
}

FLOOR_STYLES = {
    "bedroom": "Soft beige carpet floor",
    "living": "Warm oak plank floor",
    "kitchen": "Checkered ceramic kitchen tiles",
    "bathroom": "White hexagonal bathroom tiles",
    "study": "Dark walnut parquet floor",
    "storage": "Bare concrete floor",
    "dining": "Herringbone wooden floor",
    "reading": "Green felt reading room carpet",
    "archive": "Grey linoleum floor",
    "lounge": "Patterned lounge carpet",
}

FURNITURE = {item.id: item for item in (
    _item("bed_double", "object", "Double bed with white linen", (2, 3), (2, 3), "solid", "obstacle", "furniture"),
    _item("nightstand", "object", "Small wooden nightstand", (1, 1), (1, 1), "solid", "obstacle", "furniture"),
    _item("wardrobe", "object", "Tall wooden wardrobe", (2, 1), (2, 2), "solid", "obstacle", "furniture"),
    _item("sofa", "object", "Grey three seat sofa", (3, 1), (3, 2), "solid", "obstacle", "furniture"),
    _item("coffee_table", "object", "Low glass coffee table", (2, 1), (2, 1), "solid", "obstacle", "furniture"),
    _item("tv_stand", "object", "Black media console with television", (2, 1), (2, 2), "solid", "obstacle", "appliance"),
    _item("kitchen_counter", "object", "Marble kitchen counter with drawers", (3, 1), (3, 2), "solid", "obstacle", "furniture"),
    _item("stove", "object", "Four burner stove", (1, 1), (1, 2), "solid", "obstacle", "appliance"),
    _item("fridge", "object", "Silver double door fridge", (1, 1), (1, 2), "solid", "obstacle", "appliance"),
    _item("dining_table", "object", "Square wooden dining table", (2, 2), (2, 2), "solid", "obstacle", "furniture"),
    _item("chair_wood", "object", "Wooden dining chair", (1, 1), (1, 1), "passable", "walkable", "seat"),
    _item("toilet", "object", "White porcelain toilet", (1, 1), (1, 1), "solid", "obstacle", "fixture"),
    _item("bathtub", "object", "Enamel bathtub", (2, 1), (2, 1), "solid", "obstacle", "fixture"),
    _item("sink_basin", "object", "Wall mounted sink basin", (1, 1), (1, 1), "solid", "obstacle", "fixture"),
    _item("bookshelf", "object", "Tall bookshelf full of books", (2, 1), (2, 2), "solid", "obstacle", "furniture"),
    _item("desk", "object", "Writing desk with drawers", (2, 1), (2, 1), "solid", "obstacle", "furniture"),
    _item("office_chair", "object", "Swivel office chair", (1, 1), (1, 1), "passable", "walkable", "seat"),
    _item("crate", "object", "Stacked wooden crate", (1, 1), (1, 1), "solid", "obstacle", "container"),
    _item("shelf_metal", "object", "Metal storage shelf", (2, 1), (2, 2), "solid", "obstacle", "container"),
    _item("plant_potted", "object", "Potted green plant", (1, 1), (1, 2), "solid", "obstacle", "decoration"),
    _item("rug_round", "object", "Round woven rug", (2, 2), (2, 2), "passable", "walkable", "decoration"),
    _item("counter_bar", "object", "Coffee bar counter", (3, 1), (3, 2), "solid", "obstacle", "furniture"),
    _item("armchair", "object", "Upholstered reading armchair", (1, 1), (1, 1), "solid", "obstacle", "seat"),
    _item("painting_frame", "object", "Framed landscape painting", (1, 1), (1, 1), "passable", "walkable", "decoration"),
    _item("window_small", "object", "Small square window", (1, 1), (1, 1), "passable", "walkable", "window"),
    _item("wall_clock", "object", "Round wall clock", (1, 1), (1, 1), "passable", "walkable", "decoration"),
)}

RESIDENT = _item("npc_resident", "npc", "Resident character in casual clothes", (1, 1), (1, 2), "passable", "walkable", "character")

# (asset, zone, count); wall decor first, then large pieces, then small ones
FURNISHING: dict[str, tuple[tuple[str, str, int], ...]] = {
    "bedroom": (("window_small", "WALL_C", 1), ("bed_double", "NW", 1), ("nightstand", "N", 1),
                ("wardrobe", "NE", 1), ("rug_round", "C", 1)),
    "living": (("painting_frame", "WALL_C", 1), ("sofa", "S", 1), ("coffee_table", "C", 1),
               ("tv_stand", "N", 1), ("plant_potted", "SE", 1)),
    "kitchen": (("wall_clock", "WALL_L", 1), ("kitchen_counter", "N", 1), ("stove", "NE", 1),
                ("fridge", "NW", 1), ("dining_table", "C", 1), ("chair_wood", "S", 2)),
    "bathroom": (("window_small", "WALL_R", 1), ("bathtub", "NW", 1), ("toilet", "NE", 1), ("sink_basin", "E", 1)),
    "study": (("painting_frame", "WALL_L", 1), ("desk", "N", 1), ("office_chair", "C", 1),
              ("bookshelf", "NW", 1), ("plant_potted", "SE", 1)),
    "storage": (("shelf_metal", "NW", 1), ("shelf_metal", "NE", 1), ("crate", "SW", 2)),
    "dining": (("painting_frame", "WALL_C", 1), ("dining_table", "C", 1), ("chair_wood", "W", 2),
               ("plant_potted", "NE", 1)),
    "reading": (("window_small", "WALL_L", 1), ("bookshelf", "N", 2), ("armchair", "C", 2), ("rug_round", "S", 1)),
    "archive": (("shelf_metal", "N", 2), ("bookshelf", "W", 1), ("crate", "SE", 1)),
    "lounge": (("wall_clock", "WALL_C", 1), ("counter_bar", "N", 1), ("armchair", "SW", 2), ("plant_potted", "SE", 1)),
}
GENERIC_FURNISHING = (("painting_frame", "WALL_C", 1), ("desk", "N", 1), ("plant_potted", "SE", 1))


def floor_asset_id(tag: str | None) -> str:
    return f"floor_{tag}" if tag else "floor_hall"


def floor_item(tag: str | None) -> CatalogItem:
    if not tag:
        return STRUCTURE_ITEMS["floor_hall"]
    desc = FLOOR_STYLES.get(tag, f"Floor tiles for the {tag.replace('_', ' ')}")
    return _item(floor_asset_id(tag), "tile", desc, (1, 1), (1, 1), "passable", "walkable", "floor")


def furnishing_for(tag: str | None) -> tuple[tuple[str, str, int], ...]:
    return FURNISHING.get(tag or "", GENERIC_FURNISHING)
