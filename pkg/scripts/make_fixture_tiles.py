"""Regenerate the bundled fixture tile library (deterministic placeholder art)."""

from __future__ import annotations

import csv
import hashlib
import sys
from pathlib import Path

from PIL import Image, ImageDraw

CELL = 16

# (file stem, w, h, tokens)
TILES = [
    ("armchair_red", 1, 1, "armchair,chair,seat,red"),
    ("bathtub_white", 2, 1, "bathtub,bath,tub,bathroom"),
    ("bed_double_linen", 2, 3, "bed,double,linen,bedroom"),
    ("bed_single_blue", 1, 2, "bed,single,blue,bedroom"),
    ("bench_park", 3, 1, "bench,park,seat,garden"),
    ("bookshelf_tall", 2, 2, "bookshelf,shelf,books,tall"),
    ("bookshelf_wide", 3, 2, "bookshelf,shelf,books,wide"),
    ("chair_wood", 1, 1, "chair,wood,wooden,seat"),
    ("coffee_table_glass", 2, 1, "coffee,table,glass,low"),
    ("counter_bar", 3, 1, "counter,bar,coffee,cafe"),
    ("counter_kitchen", 3, 2, "counter,kitchen,sink,marble"),
    ("crate_wood", 1, 1, "crate,box,wooden,storage"),
    ("desk_writing", 2, 1, "desk,writing,drawers,office"),
    ("dining_table_square", 2, 2, "dining,table,square,wooden"),
    ("door_glass", 3, 2, "door,glass,entrance"),
    ("door_wood", 1, 1, "door,wood,wooden"),
    ("flower_bush_red", 1, 1, "flower,bush,red,garden"),
    ("floor_carpet_beige", 1, 1, "floor,carpet,beige,soft"),
    ("floor_concrete", 1, 1, "floor,concrete,bare"),
    ("floor_grass", 1, 1, "floor,grass,garden,lawn"),
    ("floor_oak_plank", 1, 1, "floor,oak,plank,wood"),
    ("floor_stone_hall", 1, 1, "floor,stone,hallway,polished"),
    ("floor_tile_checker", 1, 1, "floor,tiles,checkered,ceramic,kitchen"),
    ("fridge_silver", 1, 2, "fridge,silver,double,door,kitchen"),
    ("lamp_floor", 1, 1, "lamp,floor,light"),
    ("nightstand_wood", 1, 1, "nightstand,wooden,bedside"),
    ("painting_landscape", 1, 1, "painting,frame,framed,landscape"),
    ("piano_upright", 2, 1, "piano,upright,music"),
    ("plant_fern", 1, 2, "plant,fern,indoor,green,potted"),
    ("rug_persian", 3, 2, "rug,persian,carpet"),
    ("rug_round", 2, 2, "rug,round,woven"),
    ("shelf_metal", 2, 2, "shelf,metal,storage"),
    ("sink_basin", 1, 1, "sink,basin,bathroom"),
    ("sofa_grey", 3, 1, "sofa,couch,grey,seat"),
    ("stove_burner", 1, 2, "stove,burner,oven,kitchen"),
    ("toilet_porcelain", 1, 1, "toilet,porcelain,bathroom"),
    ("tv_console", 2, 2, "tv,television,media,console"),
    ("wall_brick", 1, 2, "wall,brick,red"),
    ("wall_plaster", 1, 2, "wall,plaster,plastered,plain"),
    ("wardrobe_tall", 2, 2, "wardrobe,closet,tall,wooden"),
    ("window_arched", 3, 2, "window,arched,large"),
    ("window_square", 1, 1, "window,square,small"),
]


def color_for(name: str) -> tuple[int, int, int]:
    d = hashlib.sha256(name.encode()).digest()
    return 64 + d[0] % 160, 64 + d[1] % 160, 64 + d[2] % 160


def main(out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for stem, w, h, tokens in TILES:
        img = Image.new("RGB", (w * CELL, h * CELL), color_for(stem))
        ImageDraw.Draw(img).rectangle([0, 0, w * CELL - 1, h * CELL - 1], outline=(32, 32, 32))
        img.save(out / f"{stem}.png", compress_level=9)
        rows.append([f"{stem}.png", w, h, tokens])
    with open(out / "manifest.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["path", "w", "h", "tokens"])
        writer.writerows(sorted(rows))


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parents[1] / "src/tilescape/data/tiles")
