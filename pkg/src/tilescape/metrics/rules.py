"""Rule-based metrics: collision-free rate, room connectivity, component existence.

These are engine definitions:
  CFR = 1 - (objects in >= 1 collision / wall_overlap / out_of_bounds finding) / objects
  RCS = connected unordered room pairs / all room pairs over the navigation grid
  CER = required components whose tokens meet some asset's id+description tokens / required
"""

from __future__ import annotations

from itertools import combinations

from ..assetlib import normalize
from ..layout import SceneLayout, rasterize, room_nav_components, validate
from ..zdesc import ZDesc, parse_z

CFR_CODES = ("collision", "wall_overlap", "out_of_bounds")


def cfr(layout: SceneLayout, report=None) -> float:
    n = len(layout.object_layer)
    if n == 0:
        return 1.0
    report = report or validate(layout)
    bad = set()
    for f in report.hard:
        if f.code in CFR_CODES:
            bad.update(i for layer, i in f.refs if layer == "object_layer")
    return 1.0 - len(bad) / n


def rcs(layout: SceneLayout, grids=None) -> float:
    grids = grids or rasterize(layout)
    if len(grids.rooms) <= 1:
        return 1.0
    comps = room_nav_components(grids)
    pairs = list(combinations(range(len(grids.rooms)), 2))
    ok = sum(1 for a, b in pairs if comps[a] & comps[b])
    return ok / len(pairs)


def required_from_z(z: str | ZDesc) -> list[frozenset[str]]:
    desc = parse_z(z) if isinstance(z, str) else z
    out = []
    for asset in desc.component_ids():
        tokens = normalize(asset)
        if tokens and tokens not in out:
            out.append(tokens)
    return out


def cer(required, layout: SceneLayout) -> float:
    required = [frozenset(r) for r in required]
    if not required:
        return 1.0
    pools = [normalize(a.id + " " + a.description) for a in layout.assets.values()]
    hit = sum(1 for req in required if any(req & pool for pool in pools))
    return hit / len(required)
