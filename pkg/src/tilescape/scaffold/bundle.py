"""Scene bundle compilation and navigation queries.

Bundle layout::

    scene.json    canonical layout, rasterized tile grids, asset manifest, resolved properties
    nav.json      run-length encoded walkable mask, door cells, spawn points
    preview.png   layered render
    assets/       one PNG per asset definition (library copy or placeholder)

``nav.json`` stores the walkable mask row-major as alternating run lengths
that always start with a run of non-walkable cells (possibly of length 0).
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import shutil
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .._kernels import shortest_path
from ..imaging import color_for, encode_png, upscale
from ..layout import SceneLayout, rasterize, to_document, validate
from .render import PREVIEW_CELL_PX, render_preview

logger = logging.getLogger(__name__)

Cell = tuple[int, int]


class SceneCompileError(RuntimeError):
    pass


def rle_encode(mask: np.ndarray) -> list[int]:
    flat = np.asarray(mask, dtype=bool).ravel()
    runs = []
    current = False
    n = 0
    for v in flat.tolist():
        if v == current:
            n += 1
        else:
            runs.append(n)
            current = v
            n = 1
    runs.append(n)
    return runs


def rle_decode(runs: list[int], width: int, height: int) -> np.ndarray:
    if sum(runs) != width * height:
        raise ValueError(f"run lengths sum to {sum(runs)}, expected {width * height}")
    flat = np.zeros(width * height, dtype=bool)
    pos = 0
    for i, n in enumerate(runs):
        if i % 2:
            flat[pos:pos + n] = True
        pos += n
    return flat.reshape(height, width)


@dataclass(frozen=True, eq=False)
class NavGrid:
    width: int
    height: int
    walkable: np.ndarray  # nav cells plus door cells
    doors: tuple[Cell, ...]
    spawns: tuple[dict, ...] = ()

    @classmethod
    def from_layout(cls, layout: SceneLayout) -> "NavGrid":
        grids = rasterize(layout)
        walkable = grids.nav_mask.copy()
        for x, y in grids.door_cells:
            walkable[y, x] = True
        return cls(layout.width, layout.height, walkable, tuple(sorted(grids.door_cells, key=lambda c: (c[1], c[0]))),
                   tuple(_spawns(layout, grids, walkable)))

    def to_dict(self) -> dict:
        return {
            "width": self.width,
            "height": self.height,
            "encoding": "rle-row-major-start-blocked",
            "walkable_runs": rle_encode(self.walkable),
            "doors": [list(c) for c in self.doors],
            "spawns": list(self.spawns),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NavGrid":
        mask = rle_decode(d["walkable_runs"], d["width"], d["height"])
        return cls(d["width"], d["height"], mask, tuple(tuple(c) for c in d["doors"]), tuple(d.get("spawns", ())))

    @classmethod
    def load(cls, path: str | Path) -> "NavGrid":
        path = Path(path)
        if path.is_dir():
            path = path / "nav.json"
        return cls.from_dict(json.loads(path.read_text(encoding="utf-8")))


def _spawns(layout: SceneLayout, grids, walkable) -> list[dict]:
    out = []
    for room in grids.rooms:
        cells = sorted((c for c in room.cells if walkable[c[1], c[0]]), key=lambda c: (c[1], c[0]))
        if cells:
            out.append({"room": room.id, "cell": list(cells[0])})
    for p in layout.npc_layer:
        if layout.in_bounds(p.position):
            out.append({"asset_id": p.asset_id, "cell": list(p.position)})
    return out


def find_path(nav: NavGrid, start: Cell, goal: Cell) -> list[Cell] | None:
    """Shortest 4-connected path over walkable and door cells (neighbors: up, left, right, down)."""
    for c in (start, goal):
        if not (0 <= c[0] < nav.width and 0 <= c[1] < nav.height):
            raise ValueError(f"cell {c} outside the {nav.width}x{nav.height} grid")
    return shortest_path(nav.walkable, tuple(start), tuple(goal))


def _json_bytes(obj) -> bytes:
    return (json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=False) + "\n").encode("utf-8")


def placeholder_png(asset_id: str, size: tuple[int, int], cell_px: int = PREVIEW_CELL_PX) -> bytes:
    w, h = size
    cells = np.empty((h, w, 3), dtype=np.uint8)
    cells[:, :] = color_for(asset_id)
    return encode_png(upscale(cells, cell_px))


def _grid_rows(tiles) -> list[list[str | None]]:
    return [list(row) for row in tiles]


def compile_scene(layout: SceneLayout, asset_resolution: dict[str, str | None] | None, out_dir: str | Path,
                  *, force: bool = False, cell_px: int = PREVIEW_CELL_PX) -> Path:
    """Write a scene bundle to ``out_dir`` (replacing bundle files already there)."""
    report = validate(layout)
    if report.hard and not force:
        codes = sorted({f.code for f in report.hard})
        raise SceneCompileError(f"layout has {len(report.hard)} hard finding(s) ({', '.join(codes)}); use force")
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        assets_dir = out / "assets"
        if assets_dir.exists():
            shutil.rmtree(assets_dir)
        assets_dir.mkdir()
    except OSError as exc:
        raise SceneCompileError(f"cannot write bundle to {out}: {exc}") from exc
    asset_resolution = asset_resolution or {}

    manifest = {}
    for asset_id in sorted(layout.assets):
        asset = layout.assets[asset_id]
        src = asset_resolution.get(asset_id)
        target = assets_dir / f"{asset_id}.png"
        if src and Path(src).is_file():
            data = Path(src).read_bytes()
            source = "library:" + Path(src).name
        else:
            if src:
                logger.warning("asset %s: %s not found, using placeholder", asset_id, src)
            data = placeholder_png(asset_id, asset.visual_size, cell_px)
            source = "placeholder"
        target.write_bytes(data)
        manifest[asset_id] = {"file": f"assets/{asset_id}.png", "source": source,
                              "sha256": hashlib.sha256(data).hexdigest()}

    grids = rasterize(layout)
    nav = NavGrid.from_layout(layout)
    props = {}
    for asset_id in sorted(layout.assets):
        layer = "wall_layer" if any(f.asset_id == asset_id for f in layout.wall_layer) else "object_layer"
        physics, navigation = layout.resolved_properties(asset_id, layer)
        props[asset_id] = {"physics": physics, "navigation": navigation}
    scene = {
        "layout": to_document(layout),
        "grids": {
            "floor": _grid_rows(grids.floor_tiles),
            "wall": _grid_rows(grids.wall_tiles),
            "solid_runs": rle_encode(grids.solid_occupancy),
        },
        "asset_manifest": manifest,
        "resolved_properties": props,
        "validation": report.to_dict(),
    }
    (out / "scene.json").write_bytes(_json_bytes(scene))
    (out / "nav.json").write_bytes(_json_bytes(nav.to_dict()))
    (out / "preview.png").write_bytes(render_preview(layout, cell_px))
    return out


def tree_hash(root: str | Path) -> str:
    """SHA-256 over relative paths and contents of every file under ``root``."""
    root = Path(root)
    h = hashlib.sha256()
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames.sort()
        for name in sorted(filenames):
            path = Path(dirpath) / name
            h.update(path.relative_to(root).as_posix().encode("utf-8") + b"\0")
            h.update(hashlib.sha256(path.read_bytes()).digest())
    return h.hexdigest()
