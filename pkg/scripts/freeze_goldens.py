"""Freeze oracle-computed golden files under tests/data.

The oracles in tests/oracles.py share no code with the package; their
output is written once and then compared against the engine by the tests.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

import oracles  # noqa: E402


def scholar_hub_report() -> dict:
    doc = json.loads((ROOT / "tests/data/scholar_hub.json").read_text(encoding="utf-8"))
    hard = sorted(
        [code, asset, sorted([list(c) for c in cells]) if cells is not None else None]
        for code, asset, cells in oracles.hard_findings(doc)
    )
    g = oracles.grid_sets(doc)
    return {
        "hard": hard,
        "missing_property": oracles.missing_properties(doc),
        "rooms": len(oracles.rooms(doc)),
        "nav_cells": len(g["nav"]),
        "door_cells": len(g["doors"]),
    }




def render_hashes() -> dict:
    """PNG digests of the two renders of the reference scene fixture (pixels are checked separately)."""
    import hashlib

    from tilescape.layout import parse_layout
    from tilescape.metrics import render_occupancy
    from tilescape.scaffold import render_preview

    layout = parse_layout((ROOT / "tests/data/scholar_hub.json").read_text(encoding="utf-8"))
    return {
        "occupancy": hashlib.sha256(render_occupancy(layout)).hexdigest(),
        "preview": hashlib.sha256(render_preview(layout)).hexdigest(),
    }


def main() -> None:
    out = ROOT / "tests/data/scholar_hub.report.json"
    out.write_text(json.dumps(scholar_hub_report(), indent=1, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {out}")
    out = ROOT / "tests/data/render_hashes.json"
    out.write_text(json.dumps(render_hashes(), indent=1, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
