from __future__ import annotations

from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import golden
from tilescape.layout import empty_layout, rasterize
from tilescape.zdesc import ZGrammarError, describe_layout, lint, parse_z

GOOD = """SCENE: tiny_home
DESCRIPTION: A small home.
ROOMS:
- bedroom: sleeping, north-west
- kitchen: cooking, south
COMPONENTS:
- bedroom: bed_double (north side), lamp_floor (left wall)
- kitchen: stove_burner (center)
CONNECTIONS:
- bedroom <-> kitchen via door_wood
"""


def test_parse_good():
    z = parse_z(GOOD)
    assert [r.name for r in z.rooms] == ["bedroom", "kitchen"]
    assert z.component_ids() == ["bed_double", "lamp_floor", "stove_burner"]
    assert z.connections == (("bedroom", "kitchen", "door_wood"),)
    assert parse_z(z.render()) == z


@pytest.mark.parametrize("text, match", [
    ("", "empty"),
    (GOOD.replace("ROOMS:", "ROOMS: x"), "list items"),
    (GOOD.replace("CONNECTIONS:\n- bedroom <-> kitchen via door_wood\n", ""), "missing section CONNECTIONS"),
    (GOOD.replace("(center)", "(3, 4)"), "coordinate"),
    (GOOD.replace("- kitchen: stove", "- attic: stove"), "unknown room"),
    (GOOD.replace("<->", "--"), "bad connection"),
])
def test_grammar_errors(text, match):
    with pytest.raises(ZGrammarError, match=match):
        parse_z(text)


@pytest.mark.parametrize("text, hits", [
    ("at 3,4", ["3,4"]), ("size 2x3", ["2x3"]), ("pos [5", ["[5"]), ("(12 and 3)", ["(12"]),
    ("a two by three table", []), ("room 3 of 4", []),
])
def test_lint(text, hits):
    assert lint(text) == hits


def test_empty_layout_gives_minimal_description():
    z = describe_layout(empty_layout(4, 4, "void"))
    assert z.rooms == () and z.components == () and z.connections == ()
    assert parse_z(z.render()) == z


def test_two_room_template():
    res = golden(5, 2, 24, 24)
    layout = res.layout
    assert len(res.structure.rooms) == 2
    z = describe_layout(layout)
    grids = rasterize(layout)
    assert len(z.rooms) == len(grids.rooms)
    doors = {p.asset_id for p in layout.object_layer
             if layout.resolved_properties(p.asset_id, "object_layer")[1] == "walkable_door"}
    expect = Counter(p.asset_id for p in layout.object_layer if p.asset_id not in doors)
    assert Counter(z.component_ids()) == expect
    assert len(z.connections) == len(res.structure.rooms)


@settings(max_examples=10)
@given(seed=st.integers(0, 500), n=st.integers(0, 8))
def test_template_output_lints_and_round_trips(seed, n):
    z = describe_layout(golden(seed, n, 30, 30).layout)
    text = z.render()
    assert lint(text) == []
    assert parse_z(text) == z


def test_scholar_hub_description(scholar_hub):
    text = describe_layout(scholar_hub).render()
    assert lint(text) == []
    assert parse_z(text).scene == "The Verdant Scholar's Hub"
