from __future__ import annotations

import json
import sys
from functools import lru_cache
from pathlib import Path

import pytest
from hypothesis import settings
from hypothesis import strategies as st

DATA = Path(__file__).parent / "data"
sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def scholar_hub_text() -> str:
    return (DATA / "scholar_hub.json").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def scholar_hub_doc(scholar_hub_text) -> dict:
    return json.loads(scholar_hub_text)


@pytest.fixture(scope="session")
def scholar_hub(scholar_hub_text):
    from tilescape.layout import parse_layout

    return parse_layout(scholar_hub_text)


@lru_cache(maxsize=None)
def golden(seed: int, n_rooms: int = 4, width: int = 30, height: int = 28):
    from tilescape.procgen import generate_golden

    return generate_golden(seed, n_rooms, width, height)


@pytest.fixture(scope="session")
def golden_layout():
    return golden(42).layout


@st.composite
def layout_docs(draw, max_side: int = 10):
    """Small random documents that exercise every rule (possibly out of bounds)."""
    W = draw(st.integers(3, max_side))
    H = draw(st.integers(3, max_side))
    rect = st.tuples(st.integers(-2, W), st.integers(-2, H), st.integers(1, W), st.integers(1, H))
    assets = {
        "floor": {"type": "tile", "description": "floor", "base_size": [1, 1], "visual_size": [1, 1]},
        "wall": {"type": "tile", "description": "wall", "base_size": [1, 1], "visual_size": [1, 1]},
        "door": {"type": "object", "description": "door", "base_size": [1, 1], "visual_size": [1, 2]},
    }
    props = {"door": {"physics": "passable", "navigation": "walkable_door"}}
    n_obj = draw(st.integers(0, 4))
    for k in range(n_obj):
        w, h = draw(st.integers(1, 3)), draw(st.integers(1, 3))
        assets[f"obj{k}"] = {"type": "object", "description": f"object {k}", "base_size": [w, h], "visual_size": [w, h]}
        if draw(st.booleans()):
            props[f"obj{k}"] = {"physics": draw(st.sampled_from(["solid", "passable"])),
                                "navigation": draw(st.sampled_from(["walkable", "obstacle"]))}
    ids = sorted(assets) + ["ghost"]
    pos = st.tuples(st.integers(-1, W), st.integers(-1, H)).map(list)
    objects = draw(st.lists(st.builds(lambda a, p: {"asset_id": a, "position": p},
                                      st.sampled_from([i for i in ids if i not in ("floor", "wall")]), pos), max_size=6))
    doc = {
        "metadata": {"scene_name": "rand", "grid_size": [W, H], "description": "", "style_prompt": ""},
        "assets": assets,
        "layout": {
            "floor_layer": [{"asset_id": "floor", "command": "fill_rect", "area": list(r)}
                            for r in draw(st.lists(rect, min_size=1, max_size=3))],
            "wall_layer": [{"asset_id": "wall", "command": "fill_rect", "area": list(r)}
                           for r in draw(st.lists(rect, max_size=3))],
            "object_layer": objects,
            "npc_layer": [],
        },
        "properties": props,
    }
    return doc


# acceptance reporting -------------------------------------------------------

_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion, then assert it."""

    def check(number: int, title: str, ok: bool, detail: str) -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}: {detail}"
        _ACCEPTANCE[number] = line
        print(line)
        assert ok, line

    return check


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[n])
