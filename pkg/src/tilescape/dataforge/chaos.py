"""Leveled corruption of golden layouts with exact inverses ("Chaos Monkey").

Every op is a list of checked edits on the layout document; its inverse
is the reversed list of inverted edits. An op may only touch placements
and assets no earlier op in the same record touched, so the effect of
each op (in particular the L4 defects) survives the ops that follow.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field

from ..edits import MISSING, Edit, EditConflict, apply_edit_doc, invert
from ..layout import Cell, Finding, SceneLayout, from_document, rasterize, to_document, validate

logger = logging.getLogger(__name__)

LEVEL_KINDS: dict[int, tuple[str, ...]] = {
    1: ("retag_semantic", "reword_description"),
    2: ("resize_footprint", "flip_physics", "flip_navigation"),
    3: ("displace_object", "swap_components", "move_out_of_room"),
    4: ("force_collision", "delete_door", "block_door", "dangle_reference"),
}
LEVEL_WEIGHTS = (1, 2, 3, 4)
KIND_LEVEL = {kind: level for level, kinds in LEVEL_KINDS.items() for kind in kinds}
MIN_ISSUES, MAX_ISSUES = 2, 15
MAX_RESAMPLE = 50

SEMANTIC_POOL = ("furniture", "decoration", "appliance", "fixture", "container", "seat", "plant", "lighting", "misc")
REWORD_PREFIXES = ("Slightly worn", "Freshly painted", "Oddly shaped", "Antique", "Mass-produced")


class CorruptionError(ValueError):
    pass


class CorrectionConflict(RuntimeError):
    pass


@dataclass(frozen=True)
class CorruptionOp:
    level: int
    kind: str
    target: tuple[str, ...]  # asset ids the defect is attributed to
    cells: tuple[Cell, ...]  # grid cells the defect is attributed to
    edits: tuple[Edit, ...]
    instruction: str

    def __post_init__(self):
        if KIND_LEVEL.get(self.kind) != self.level:
            raise ValueError(f"kind {self.kind!r} does not belong to level {self.level}")

    @property
    def inverse(self) -> tuple[Edit, ...]:
        return tuple(invert(self.edits))

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "kind": self.kind,
            "target": list(self.target),
            "cells": [list(c) for c in self.cells],
            "edits": [e.to_dict() for e in self.edits],
            "instruction": self.instruction,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CorruptionOp":
        return cls(d["level"], d["kind"], tuple(d["target"]), tuple(tuple(c) for c in d["cells"]),
                   tuple(Edit.from_dict(e) for e in d["edits"]), d["instruction"])


@dataclass(frozen=True)
class CorruptionRecord:
    ops: tuple[CorruptionOp, ...]
    g_error: SceneLayout
    seed: int
    requested: int
    shortfall: bool = False

    @property
    def instructions(self) -> tuple[str, ...]:
        return tuple(op.instruction for op in self.ops)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "requested": self.requested,
            "shortfall": self.shortfall,
            "ops": [op.to_dict() for op in self.ops],
            "instructions": list(self.instructions),
            "g_error": to_document(self.g_error),
        }


def sample_level(rng: random.Random) -> int:
    return rng.choices((1, 2, 3, 4), weights=LEVEL_WEIGHTS)[0]


def compass(dx: float, dy: float) -> str:
    """Eight-way direction name for a vector in grid coordinates (y grows downward)."""
    if dx == 0 and dy == 0:
        return "center"
    names = ("east", "south-east", "south", "south-west", "west", "north-west", "north", "north-east")
    angle = math.atan2(dy, dx)
    return names[round(angle / (math.pi / 4)) % 8]


@dataclass
class _State:
    doc: dict
    layout: SceneLayout
    uids: list[int]  # stable identity for each object_layer entry
    next_uid: int
    touched_uids: set[int] = field(default_factory=set)
    touched_assets: set[str] = field(default_factory=set)  # asset-level edits
    placed_assets: set[str] = field(default_factory=set)  # assets of touched placements

    def apply(self, edits) -> None:
        for e in edits:
            apply_edit_doc(self.doc, e)
            if e.path[:2] == ("layout", "object_layer") and len(e.path) == 3:
                if e.op == "remove":
                    self.uids.pop(e.path[2])
                elif e.op == "insert":
                    self.uids.insert(e.path[2], self.next_uid)
                    self.next_uid += 1
        self.layout = from_document(self.doc)

    def trial(self, edits) -> SceneLayout:
        doc = to_document(self.layout)
        for e in edits:
            apply_edit_doc(doc, e)
        return from_document(doc)

    # -- candidate helpers -------------------------------------------------
    def objects(self):
        """(index, placement) for object placements free for placement-level ops."""
        out = []
        for i, p in enumerate(self.layout.object_layer):
            if self.uids[i] in self.touched_uids or p.asset_id in self.touched_assets:
                continue
            if p.asset_id not in self.layout.assets:
                continue
            out.append((i, p))
        return out

    def is_door(self, asset_id: str) -> bool:
        return self.layout.resolved_properties(asset_id, "object_layer")[1] == "walkable_door"

    def is_solid(self, asset_id: str) -> bool:
        return self.layout.resolved_properties(asset_id, "object_layer")[0] == "solid"

    def movable(self):
        return [(i, p) for i, p in self.objects() if not self.is_door(p.asset_id)]

    def free_asset(self, asset_id: str) -> bool:
        return asset_id not in self.touched_assets and asset_id not in self.placed_assets

    def touch_placements(self, *indices) -> None:
        for i in indices:
            self.touched_uids.add(self.uids[i])
            self.placed_assets.add(self.layout.object_layer[i].asset_id)


@dataclass(frozen=True)
class _Draft:
    op: CorruptionOp
    placements: tuple[int, ...] = ()  # object_layer indices involved
    assets: tuple[str, ...] = ()  # assets edited at definition level


def _pos_path(i):
    return ("layout", "object_layer", i, "position")


def _attributable(op: CorruptionOp, finding: Finding) -> bool:
    if finding.asset_id is not None and finding.asset_id in op.target:
        return True
    if set(finding.related) & set(op.target):
        return True
    return bool(set(finding.cells) & set(op.cells))


# -- op builders: each returns a _Draft (not yet applied) or None ------

def _retag_semantic(st: _State, rng: random.Random):
    cands = [a for a in sorted(st.layout.properties) if a in st.layout.assets and st.free_asset(a)
             and st.layout.properties[a].semantic_tag is not None]
    if not cands:
        return None
    a = rng.choice(cands)
    old = st.layout.properties[a].semantic_tag
    new = rng.choice([t for t in SEMANTIC_POOL if t != old])
    return _Draft(CorruptionOp(1, "retag_semantic", (a,), (),
                        (Edit("set", ("properties", a, "semantic_tag"), old, new),),
                        f"Restore the semantic tag of {a} to '{old}'."), assets=(a,))


def _reword_description(st: _State, rng: random.Random):
    cands = [a for a in sorted(st.layout.assets) if st.free_asset(a)]
    if not cands:
        return None
    a = rng.choice(cands)
    old = st.layout.assets[a].description
    new = f"{rng.choice(REWORD_PREFIXES)} {old[:1].lower()}{old[1:]}".strip()
    return _Draft(CorruptionOp(1, "reword_description", (a,), (),
                        (Edit("set", ("assets", a, "description"), old, new),),
                        f"Restore the description of {a} to: {old}"), assets=(a,))


def _object_assets(st: _State):
    return [a for a in sorted(st.layout.assets)
            if st.layout.assets[a].kind == "object" and not st.is_door(a) and st.free_asset(a)]


def _resize_footprint(st: _State, rng: random.Random):
    cands = _object_assets(st)
    if not cands:
        return None
    a = rng.choice(cands)
    w, h = st.layout.assets[a].base_size
    new = [w + 1, h] if rng.random() < 0.5 else [w, h + 1]
    return _Draft(CorruptionOp(2, "resize_footprint", (a,), (),
                        (Edit("set", ("assets", a, "base_size"), [w, h], new),),
                        f"Resize {a} back to a footprint of {w} by {h} cells."), assets=(a,))


def _flip(st: _State, rng: random.Random, key: str, values: tuple[str, str], kind: str):
    cands = _object_assets(st)
    if not cands:
        return None
    a = rng.choice(cands)
    resolved = st.layout.resolved_properties(a, "object_layer")[0 if key == "physics" else 1]
    new = values[1] if resolved == values[0] else values[0]
    edits = []
    if a not in st.layout.properties:
        edits.append(Edit("set", ("properties", a), MISSING, {}))
    entry = st.doc["properties"].get(a, {})
    edits.append(Edit("set", ("properties", a, key), entry.get(key, MISSING), new))
    return _Draft(CorruptionOp(2, kind, (a,), (), tuple(edits), f"Set the {key} of {a} back to {resolved}."), assets=(a,))


def _flip_physics(st, rng):
    return _flip(st, rng, "physics", ("solid", "passable"), "flip_physics")


def _flip_navigation(st, rng):
    return _flip(st, rng, "navigation", ("obstacle", "walkable"), "flip_navigation")


def _displace_object(st: _State, rng: random.Random):
    cands = st.movable()
    if not cands:
        return None
    i, p = rng.choice(cands)
    w, h = st.layout.assets[p.asset_id].base_size
    x, y = p.position
    moves = [(dx, dy) for dx in range(-3, 4) for dy in range(-3, 4) if (dx, dy) != (0, 0)
             and 0 <= x + dx and x + dx + w <= st.layout.width and 0 <= y + dy and y + dy + h <= st.layout.height]
    if not moves:
        return None
    dx, dy = rng.choice(moves)
    cells = tuple(st.layout.footprint(p))
    return _Draft(CorruptionOp(3, "displace_object", (p.asset_id,), cells,
                        (Edit("set", _pos_path(i), [x, y], [x + dx, y + dy]),),
                        f"Move {p.asset_id} {abs(dx) + abs(dy)} cells toward the {compass(-dx, -dy)}, "
                        f"back to ({x}, {y})."), placements=(i,))


def _swap_components(st: _State, rng: random.Random):
    cands = st.movable()
    pairs = [(a, b) for ai, a in enumerate(cands) for b in cands[ai + 1:] if a[1].asset_id != b[1].asset_id]
    if not pairs:
        return None
    (i, p), (j, q) = rng.choice(pairs)
    edits = (
        Edit("set", ("layout", "object_layer", i, "asset_id"), p.asset_id, q.asset_id),
        Edit("set", ("layout", "object_layer", j, "asset_id"), q.asset_id, p.asset_id),
    )
    return _Draft(CorruptionOp(3, "swap_components", (p.asset_id, q.asset_id), (tuple(p.position), tuple(q.position)), edits,
                        f"Swap {q.asset_id} at ({p.position[0]}, {p.position[1]}) and {p.asset_id} at "
                        f"({q.position[0]}, {q.position[1]}) back into their original places."), placements=(i, j))


def _move_out_of_room(st: _State, rng: random.Random):
    grids = rasterize(st.layout)
    if len(grids.rooms) < 2:
        return None
    cands = [(i, p) for i, p in st.movable() if st.layout.in_bounds(p.position) and grids.room_at(p.position) >= 0]
    if not cands:
        return None
    i, p = rng.choice(cands)
    home = grids.room_at(p.position)
    w, h = st.layout.assets[p.asset_id].base_size
    others = [r for r in grids.rooms if r.id != home]
    room = rng.choice(others)
    spots = sorted(c for c in room.cells if c[0] + w <= st.layout.width and c[1] + h <= st.layout.height)
    if not spots:
        return None
    x, y = rng.choice(spots)
    return _Draft(CorruptionOp(3, "move_out_of_room", (p.asset_id,), tuple(st.layout.footprint(p)),
                        (Edit("set", _pos_path(i), list(p.position), [x, y]),),
                        f"Move {p.asset_id} back into its original room at ({p.position[0]}, {p.position[1]})."),
                  placements=(i,))


def _force_collision(st: _State, rng: random.Random):
    solids = [(i, p) for i, p in st.movable() if st.is_solid(p.asset_id)]
    if len(solids) < 2:
        return None
    (i, p), (j, q) = rng.sample(solids, 2)
    x, y = p.position
    qx, qy = q.position
    cells = tuple(c for c in st.layout.footprint(q) if st.layout.in_bounds(c))
    return _Draft(CorruptionOp(4, "force_collision", (p.asset_id, q.asset_id), cells,
                        (Edit("set", _pos_path(i), [x, y], [qx, qy]),),
                        f"Move {p.asset_id} out of overlap with {q.asset_id} toward the {compass(x - qx, y - qy)}, "
                        f"to ({x}, {y})."), placements=(i, j))


def _doors(st: _State):
    return [(i, p) for i, p in st.objects() if st.is_door(p.asset_id)]


def _door_region(st: _State, p) -> tuple[Cell, ...]:
    cells = set()
    for x, y in st.layout.footprint(p):
        for c in ((x, y), (x, y - 1), (x - 1, y), (x + 1, y), (x, y + 1)):
            if st.layout.in_bounds(c):
                cells.add(c)
    return tuple(sorted(cells))


def _delete_door(st: _State, rng: random.Random):
    doors = _doors(st)
    if not doors:
        return None
    i, p = rng.choice(doors)
    old = st.doc["layout"]["object_layer"][i]
    op = CorruptionOp(4, "delete_door", (p.asset_id,), _door_region(st, p),
                      (Edit("remove", ("layout", "object_layer", i), old),),
                      f"Restore door {p.asset_id} at ({p.position[0]}, {p.position[1]}) to reconnect the room.")
    # only a door whose removal actually isolates a room counts as an L4 defect
    report = validate(st.trial(op.edits))
    if not any(f.code == "unreachable_room" and _attributable(op, f) for f in report.hard):
        return None
    return _Draft(op, placements=(i,))


def _block_door(st: _State, rng: random.Random):
    doors = _doors(st)
    solids = [(i, p) for i, p in st.movable() if st.is_solid(p.asset_id)]
    if not doors or not solids:
        return None
    di, d = rng.choice(doors)
    i, p = rng.choice(solids)
    x, y = p.position
    cells = tuple(c for c in st.layout.footprint(d) if st.layout.in_bounds(c))
    op = CorruptionOp(4, "block_door", (p.asset_id, d.asset_id), cells,
                        (Edit("set", _pos_path(i), [x, y], list(d.position)),),
                        f"Move {p.asset_id} off door {d.asset_id} toward the "
                        f"{compass(x - d.position[0], y - d.position[1])}, to ({x}, {y}).")
    return _Draft(op, placements=(i, di))


def _dangle_reference(st: _State, rng: random.Random):
    cands = st.movable()
    if not cands:
        return None
    i, p = rng.choice(cands)
    bad = f"{p.asset_id}_missing"
    while bad in st.layout.assets:
        bad += "_x"
    return _Draft(CorruptionOp(4, "dangle_reference", (p.asset_id, bad), (tuple(p.position),),
                        (Edit("set", ("layout", "object_layer", i, "asset_id"), p.asset_id, bad),),
                        f"Replace undefined asset {bad} with {p.asset_id}."), placements=(i,))


BUILDERS = {
    "retag_semantic": _retag_semantic,
    "reword_description": _reword_description,
    "resize_footprint": _resize_footprint,
    "flip_physics": _flip_physics,
    "flip_navigation": _flip_navigation,
    "displace_object": _displace_object,
    "swap_components": _swap_components,
    "move_out_of_room": _move_out_of_room,
    "force_collision": _force_collision,
    "delete_door": _delete_door,
    "block_door": _block_door,
    "dangle_reference": _dangle_reference,
}
def _commit(st: _State, draft: "_Draft") -> None:
    st.touch_placements(*draft.placements)
    st.touched_assets.update(draft.assets)
    st.apply(draft.op.edits)


def corrupt(golden: SceneLayout, k: int | None = None, seed: int = 0, *, allow_small: bool = False,
            kinds: dict[int, tuple[str, ...]] | None = None, check_clean: bool = True) -> CorruptionRecord:
    """Inject ``k`` leveled defects (k uniform in [2, 15] when None)."""
    rng = random.Random(seed)
    if k is None:
        k = rng.randint(MIN_ISSUES, MAX_ISSUES)
    low = 1 if allow_small else MIN_ISSUES
    if not low <= k <= MAX_ISSUES:
        raise CorruptionError(f"issue count {k} outside [{low}, {MAX_ISSUES}]")
    if check_clean and not validate(golden).clean:
        raise CorruptionError("golden layout is not validator-clean")
    kinds = kinds or LEVEL_KINDS
    doc = to_document(golden)
    st = _State(doc, from_document(doc), list(range(len(golden.object_layer))), len(golden.object_layer))
    ops: list[CorruptionOp] = []
    shortfall = False
    while len(ops) < k:
        draft = None
        for _ in range(MAX_RESAMPLE):
            level = sample_level(rng)
            if not kinds.get(level):
                continue
            draft = BUILDERS[rng.choice(kinds[level])](st, rng)
            if draft is not None:
                break
        if draft is None:
            shortfall = True
            logger.info("no applicable op after %d draws; stopping at %d of %d", MAX_RESAMPLE, len(ops), k)
            break
        _commit(st, draft)
        ops.append(draft.op)
    return CorruptionRecord(tuple(ops), st.layout, seed, k, shortfall)


def apply_corrections(g_error: SceneLayout, ops) -> SceneLayout:
    """Undo ``ops`` (last first) with conflict checking."""
    ops = list(ops)
    if not ops:
        return g_error
    doc = to_document(g_error)
    for n in range(len(ops) - 1, -1, -1):
        op = ops[n]
        try:
            for e in op.inverse:
                apply_edit_doc(doc, e)
        except EditConflict as exc:
            raise CorrectionConflict(f"op {n} ({op.kind}) no longer applies: {exc}") from None
    return from_document(doc)


@dataclass(frozen=True)
class OpDetection:
    op: CorruptionOp
    findings: tuple[Finding, ...]

    @property
    def semantic_only(self) -> bool:
        return not self.findings


def detectability_report(record: CorruptionRecord) -> list[OpDetection]:
    """Hard findings of ``g_error`` attributable to each op; ops without any are semantic-only."""
    report = validate(record.g_error)
    return [OpDetection(op, tuple(f for f in report.hard if _attributable(op, f))) for op in record.ops]
