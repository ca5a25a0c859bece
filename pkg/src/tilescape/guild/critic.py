"""Critic: turn validator findings (and optional judge verdicts) into corrections.

Rule corrections carry structured edits in the same form the Chaos Monkey
uses, so the stub Manager can apply them mechanically. They are derived
one at a time against a scratch copy of the layout, which keeps the edit
paths valid when they are replayed in order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .._kernels import label4
from ..chat import ChatClient
from ..dataforge.chaos import compass
from ..edits import MISSING, Edit, apply_edits
from ..layout import Finding, SceneLayout, rasterize, to_document, validate
from ..metrics.judge import JudgeInput, safe_judge

RELOCATE_CODES = ("collision", "wall_overlap", "out_of_bounds", "off_floor", "blocked_door")
MAX_RELOCATION_TRIALS = 400


@dataclass(frozen=True)
class Correction:
    code: str
    asset_id: str | None
    instruction: str
    edits: tuple[Edit, ...] = ()
    source: str = "rule"

    def to_dict(self) -> dict:
        return {"code": self.code, "asset_id": self.asset_id, "instruction": self.instruction,
                "edits": [e.to_dict() for e in self.edits], "source": self.source}


@dataclass(frozen=True)
class CorrectionSet:
    rule: tuple[Correction, ...] = ()
    judge: tuple[Correction, ...] = ()
    judge_degraded: bool = False

    @property
    def items(self) -> tuple[Correction, ...]:
        return self.rule + self.judge

    def __len__(self) -> int:
        return len(self.items)

    @property
    def empty(self) -> bool:
        return not self.items

    def instructions(self) -> list[str]:
        return [c.instruction for c in self.items]

    def to_dict(self) -> dict:
        return {"rule": [c.to_dict() for c in self.rule], "judge": [c.to_dict() for c in self.judge],
                "judge_degraded": self.judge_degraded}


def _object_refs(finding: Finding, layout: SceneLayout) -> list[int]:
    """Object placements a finding asks us to move (the door itself never moves)."""
    idx = [i for layer, i in finding.refs if layer == "object_layer"]
    if finding.code == "collision" and len(idx) == 2:
        return [max(idx)]
    if finding.code == "blocked_door" and idx:
        return [idx[0]]
    return idx


def _hard_for(report, index: int) -> int:
    return sum(1 for f in report.hard if ("object_layer", index) in f.refs)


def _relocate(layout: SceneLayout, index: int) -> tuple[int, int] | None:
    """Nearest anchor where the placement raises no hard finding and adds none elsewhere."""
    p = layout.object_layer[index]
    asset = layout.assets[p.asset_id]
    w, h = asset.base_size
    grids = rasterize(layout)
    others_solid = grids.wall_mask.copy()
    for j, q in enumerate(layout.object_layer):
        if j == index or q.asset_id not in layout.assets:
            continue
        physics, nav = layout.resolved_properties(q.asset_id, "object_layer")
        if physics == "solid" or nav == "walkable_door":
            for cx, cy in layout.footprint(q):
                if layout.in_bounds((cx, cy)):
                    others_solid[cy, cx] = True
    x0, y0 = p.position
    anchors = [(x, y) for y in range(layout.height - h + 1) for x in range(layout.width - w + 1)]
    anchors.sort(key=lambda a: (abs(a[0] - x0) + abs(a[1] - y0), a[1], a[0]))
    base = validate(layout)
    base_other = len(base.hard) - _hard_for(base, index)
    trials = 0
    for ax, ay in anchors:
        if (ax, ay) == (x0, y0):
            continue
        block_f = grids.floor_mask[ay:ay + h, ax:ax + w]
        block_s = others_solid[ay:ay + h, ax:ax + w]
        if not block_f.all() or block_s.any():
            continue
        trials += 1
        if trials > MAX_RELOCATION_TRIALS:
            return None
        trial = apply_edits(layout, [Edit("set", ("layout", "object_layer", index, "position"), [x0, y0], [ax, ay])])
        rep = validate(trial)
        if _hard_for(rep, index) == 0 and len(rep.hard) <= base_other:
            return ax, ay
    return None


def _wall_mounted(layout: SceneLayout, index: int) -> bool:
    grids = rasterize(layout)
    cells = [c for c in layout.footprint(layout.object_layer[index]) if layout.in_bounds(c)]
    return bool(cells) and 2 * sum(1 for x, y in cells if grids.wall_mask[y, x]) >= len(cells)


def _passable_edits(layout: SceneLayout, asset_id: str) -> tuple[Edit, ...]:
    doc = to_document(layout)
    entry = doc["properties"].get(asset_id)
    if entry is None:
        return (Edit("set", ("properties", asset_id), MISSING, {"physics": "passable"}),)
    return (Edit("set", ("properties", asset_id, "physics"), entry.get("physics", MISSING), "passable"),)


def _fix_object(layout: SceneLayout, finding: Finding, index: int) -> Correction:
    p = layout.object_layer[index]
    if finding.code == "wall_overlap" and _wall_mounted(layout, index):
        return Correction(finding.code, p.asset_id,
                          f"Mark {p.asset_id} as passable wall decor so it no longer collides with the wall.",
                          _passable_edits(layout, p.asset_id))
    spot = _relocate(layout, index)
    x, y = p.position
    if spot is None:
        return Correction(finding.code, p.asset_id, f"Move {p.asset_id} at ({x}, {y}) to free floor space; {finding.message}.")
    nx, ny = spot
    edit = Edit("set", ("layout", "object_layer", index, "position"), [x, y], [nx, ny])
    what = {"collision": "out of overlap with " + (finding.related[0] if finding.related else "another object"),
            "blocked_door": "off door " + (finding.related[0] if finding.related else ""),
            "wall_overlap": "off the wall", "out_of_bounds": "back inside the grid",
            "off_floor": "onto the floor"}[finding.code]
    return Correction(finding.code, p.asset_id,
                      f"Move {p.asset_id} {what} toward the {compass(nx - x, ny - y)}, from ({x}, {y}) to ({nx}, {ny}).",
                      (edit,))


def _door_asset(layout: SceneLayout):
    doors = sorted(a.id for a in layout.assets.values()
                   if a.kind == "object" and tuple(a.base_size) == (1, 1)
                   and layout.resolved_properties(a.id, "object_layer")[1] == "walkable_door")
    if doors:
        return doors[0], ()
    asset_id = "door_wood"
    while asset_id in layout.assets:
        asset_id += "_x"
    edits = (
        Edit("set", ("assets", asset_id), MISSING,
             {"type": "object", "description": "Single wooden door", "base_size": [1, 1], "visual_size": [1, 2]}),
        Edit("set", ("properties", asset_id), MISSING,
             {"physics": "passable", "navigation": "walkable_door", "semantic_tag": "door"}),
    )
    return asset_id, edits


def _fix_unreachable(layout: SceneLayout, finding: Finding) -> Correction:
    grids = rasterize(layout)
    labels, _ = label4(grids.nav_mask)
    room = set(finding.cells)
    largest = max(grids.rooms, key=lambda r: (r.size, -r.id))
    target = {int(labels[y, x]) for x, y in largest.cells if labels[y, x] >= 0}
    cx = sum(c[0] for c in room) / len(room)
    cy = sum(c[1] for c in room) / len(room)
    best = None
    for y in range(1, layout.height - 1):
        for x in range(1, layout.width - 1):
            if not grids.wall_mask[y, x] or not grids.floor_mask[y, x]:
                continue
            for (ax, ay), (bx, by) in (((x - 1, y), (x + 1, y)), ((x, y - 1), (x, y + 1))):
                for (ix, iy), (ox, oy) in (((ax, ay), (bx, by)), ((bx, by), (ax, ay))):
                    if (ix, iy) in room and grids.nav_mask[iy, ix] and labels[oy, ox] in target:
                        key = (math.hypot(x - cx, y - cy), y, x)
                        if best is None or key < best:
                            best = key
    if best is None:
        return Correction("unreachable_room", None, f"Open a passage into the isolated room; {finding.message}.")
    _, y, x = best
    door_id, asset_edits = _door_asset(layout)
    n = len(layout.object_layer)
    edits = asset_edits + (Edit("insert", ("layout", "object_layer", n), MISSING, {"asset_id": door_id, "position": [x, y]}),)
    return Correction("unreachable_room", door_id, f"Add {door_id} at ({x}, {y}) to reconnect the isolated room.", edits)


def rule_corrections(layout: SceneLayout) -> tuple[Correction, ...]:
    """Structured corrections for every hard finding, derived sequentially."""
    out: list[Correction] = []
    scratch = layout
    report = validate(scratch)
    if not report.hard:
        return ()

    def push(c: Correction):
        nonlocal scratch
        out.append(c)
        if c.edits:
            scratch = apply_edits(scratch, c.edits)

    # placement fixes, one per object
    handled: set[int] = set()
    for f in report.hard:
        if f.code in RELOCATE_CODES:
            for i in _object_refs(f, layout):
                if i in handled:
                    continue
                handled.add(i)
                current = validate(scratch)
                still = [g for g in current.hard if ("object_layer", i) in g.refs and g.code in RELOCATE_CODES]
                if not still:
                    continue
                push(_fix_object(scratch, still[0], i))
    # removals run from the highest index down so earlier indices stay valid
    removals = sorted({(layer, i) for f in report.hard if f.code == "dangling_ref" for layer, i in f.refs},
                      key=lambda r: (r[0], -r[1]))
    for layer, i in removals:
        entry = to_document(scratch)["layout"][layer][i]
        push(Correction("dangling_ref", entry["asset_id"],
                        f"Remove {layer} entry {i}: asset {entry['asset_id']} is not defined.",
                        (Edit("remove", ("layout", layer, i), entry),)))
    for _ in range(len(rasterize(scratch).rooms)):
        current = validate(scratch)
        isolated = [f for f in current.hard if f.code == "unreachable_room"]
        if not isolated:
            break
        c = _fix_unreachable(scratch, isolated[0])
        push(c)
        if not c.edits:
            break
    # anything left gets a text-only instruction so the set is never empty while findings remain
    leftover = validate(scratch).hard
    covered = {(c.code, c.asset_id) for c in out}
    for f in leftover:
        if (f.code, f.asset_id) not in covered:
            out.append(Correction(f.code, f.asset_id, f.message))
            covered.add((f.code, f.asset_id))
    if not out:
        out = [Correction(f.code, f.asset_id, f.message) for f in report.hard]
    return tuple(out)


def judge_corrections(layout: SceneLayout, scene_desc: str, judge: ChatClient) -> tuple[tuple[Correction, ...], bool]:
    """Semantic check through the OPS prompt. Returns (corrections, degraded)."""
    verdict = safe_judge("OPS", JudgeInput(scene_desc=scene_desc, layout=layout), judge)
    if verdict.failed:
        return (), True
    names = verdict.payload.get("unreasonable_objects") or []
    reason = verdict.payload.get("reason", "")
    out = tuple(Correction("semantic", str(n), f"Reconsider {n}: {reason}".strip(), (), "judge")
                for n in names if isinstance(n, str))
    if not out and verdict.payload.get("count", 0) > 0:
        out = (Correction("semantic", None, f"Fix semantically unreasonable objects: {reason}", (), "judge"),)
    return out, False


def critique(layout: SceneLayout, z: str = "", judge: ChatClient | None = None,
             scene_desc: str | None = None, extra_critics=()) -> CorrectionSet:
    """Rule corrections always; judge corrections when a judge is configured."""
    rule = list(rule_corrections(layout))
    for critic in extra_critics:
        rule.extend(critic(layout, z))
    judged: tuple[Correction, ...] = ()
    degraded = False
    if judge is not None:
        judged, degraded = judge_corrections(layout, scene_desc if scene_desc is not None else layout.metadata.description, judge)
    return CorrectionSet(tuple(rule), judged, degraded)
