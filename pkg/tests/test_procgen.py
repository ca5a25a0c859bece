from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import golden
from tilescape.chat import StubClient, TransportError
from tilescape.layout import AreaFill, AssetDef, Metadata, PropertyEntry, SceneLayout, rasterize, serialize_layout, validate
from tilescape.metrics import rcs
from tilescape.procgen import (
    DOOR,
    INTERIOR_ZONES,
    WALL_ZONES,
    FunctionAssignmentError,
    InfeasibleLayoutError,
    PlacementDirective,
    ProcgenPriors,
    assign_functions,
    choose_door,
    door_candidates,
    generate_golden,
    place_components,
    ring_order,
    stub_tags,
    synthesize_structure,
    zone_partition,
)


def test_zero_rooms_gives_single_public_region():
    res = generate_golden(0, 0, 20, 16)
    assert res.structure.rooms == ()
    assert validate(res.layout).clean
    assert len(rasterize(res.layout).rooms) == 1


def test_seed_42_five_rooms():
    res = generate_golden(42, 5, 30, 24)
    assert len(res.structure.rooms) == 5 and not res.infeasible
    assert validate(res.layout).clean
    assert rcs(res.layout) == 1.0
    assert all(r.door is not None for r in res.structure.rooms)


@settings(max_examples=15)
@given(seed=st.integers(0, 10_000), n=st.integers(1, 8), w=st.integers(24, 40), h=st.integers(24, 40))
def test_structure_invariants(seed, n, w, h):
    s = synthesize_structure(seed, n, w, h)
    # public region stays one component after every carve
    assert all(k == 1 for k in s.carve_log)
    assert len(s.rooms) <= n and s.infeasible == (len(s.rooms) < n)
    cx, cy = s.core_centroid
    for room in s.rooms:
        cands = door_candidates(s.labels, room)
        assert room.door in cands
        best = min(math.hypot(x - cx, y - cy) for x, y in cands)
        assert math.hypot(room.door[0] - cx, room.door[1] - cy) == best
        assert s.labels[room.door[1], room.door[0]] == DOOR
    for x, y, rw, rh in s.wall_runs:
        assert rw == 1 or rh == 1  # straight, one cell thick


@settings(max_examples=10)
@given(seed=st.integers(0, 10_000), n=st.integers(3, 8))
def test_golden_is_clean_and_deterministic(seed, n):
    a = generate_golden(seed, n, 30, 30)
    b = generate_golden(seed, n, 30, 30)
    assert serialize_layout(a.layout) == serialize_layout(b.layout)
    report = validate(a.layout)
    assert report.clean
    assert rcs(a.layout) == 1.0
    grids = rasterize(a.layout)
    doors = grids.door_cells
    for room in a.structure.rooms:
        x, y, rw, rh = room.rect
        ring = {(cx, y - 1) for cx in range(x, x + rw)} | {(cx, y + rh) for cx in range(x, x + rw)} \
            | {(x - 1, cy) for cy in range(y, y + rh)} | {(x + rw, cy) for cy in range(y, y + rh)}
        assert ring & doors


def test_door_choice_picks_nearest_candidate():
    centroid = (10.0, 10.0)
    near, far = (10, 13), (15, 12)  # distances 3.0 and ~5.39
    assert choose_door([far, near], centroid) == near
    assert choose_door([(11, 10), (9, 10)], centroid) == (9, 10)  # tie -> lowest (y, x)


def test_infeasible_requests():
    with pytest.raises(InfeasibleLayoutError):
        synthesize_structure(0, 5, 3, 10)
    s = synthesize_structure(0, 8, 14, 14)
    assert s.infeasible and len(s.rooms) < 8
    assert validate(generate_golden(0, 8, 14, 14).layout).clean


def test_priors_from_mapping():
    assert ProcgenPriors.from_mapping({"room_area_min": 16}).room_area_min == 16
    with pytest.raises(ValueError):
        ProcgenPriors.from_mapping({"rooms": 3})
    with pytest.raises(ValueError):
        ProcgenPriors(aspect_ratio_max=0.5)


# zones ----------------------------------------------------------------------

def test_zone_partition_exact_thirds():
    zm = zone_partition((0, 0, 9, 6))
    for z in INTERIOR_ZONES:
        xs = {c[0] for c in zm.cells(z)}
        ys = {c[1] for c in zm.cells(z)}
        assert len(xs) == 3 and len(ys) == 2
    assert all(len(zone_partition((0, 0, 3, 3)).cells(z)) == 1 for z in INTERIOR_ZONES)


def test_zone_partition_remainder_to_last():
    zm = zone_partition((0, 0, 4, 4))
    widths = [len({c[0] for c in zm.cells(z)}) for z in ("NW", "N", "NE")]
    assert widths == [1, 1, 2]


@given(x=st.integers(0, 5), y=st.integers(1, 5), w=st.integers(1, 20), h=st.integers(1, 20))
def test_zone_partition_matches_oracle(x, y, w, h):
    zm = zone_partition((x, y, w, h))
    interior = [c for z in INTERIOR_ZONES for c in zm.cells(z)]
    assert sorted(interior) == sorted((cx, cy) for cy in range(y, y + h) for cx in range(x, x + w))
    cols, rows = oracles.thirds(x, x + w), oracles.thirds(y, y + h)
    for r, (y0, y1) in enumerate(rows):
        for c, (x0, x1) in enumerate(cols):
            expect = {(cx, cy) for cy in range(y0, y1) for cx in range(x0, x1)}
            assert set(zm.cells(INTERIOR_ZONES[r * 3 + c])) == expect
    for name, (x0, x1) in zip(WALL_ZONES, cols):
        assert set(zm.cells(name)) == {(cx, y - 1) for cx in range(x0, x1)}


def test_ring_order():
    assert ring_order("C") == ["N", "NE", "E", "SE", "S", "SW", "W", "NW"]
    assert ring_order("NW")[:3] == ["N", "C", "W"]
    assert ring_order("WALL_L") == ["WALL_C", "WALL_R"]


# placer ---------------------------------------------------------------------

def _one_room(extra_assets=()):
    assets = {
        "floor": AssetDef("floor", "tile", "floor", (1, 1), (1, 1)),
        "wall": AssetDef("wall", "tile", "wall", (1, 1), (1, 1)),
        "table": AssetDef("table", "object", "table", (2, 2), (2, 2)),
        "crate": AssetDef("crate", "object", "crate", (1, 1), (1, 1)),
        "rug": AssetDef("rug", "object", "rug", (2, 2), (2, 2)),
        "hall": AssetDef("hall", "object", "hall", (9, 9), (9, 9)),
    }
    props = {
        "table": PropertyEntry("solid", "obstacle"),
        "crate": PropertyEntry("solid", "obstacle"),
        "rug": PropertyEntry("passable", "walkable"),
        "hall": PropertyEntry("solid", "obstacle"),
    }
    walls = (AreaFill("wall", (0, 0, 10, 1)), AreaFill("wall", (0, 7, 10, 1)),
             AreaFill("wall", (0, 1, 1, 6)), AreaFill("wall", (9, 1, 1, 6)))
    return SceneLayout(Metadata("room", (10, 8)), assets, (AreaFill("floor", (0, 0, 10, 8)),), walls, (), (), props)


def _oracle_anchor(layout, asset, zone):
    """Brute-force scan: zone then ring order, anchors row-major, first fit."""
    grids = rasterize(layout)
    room = set(grids.rooms[0].cells)
    occupied = {c for p in layout.object_layer for c in layout.footprint(p)}
    blocked = {c for p in layout.object_layer for c in layout.footprint(p)
               if layout.resolved_properties(p.asset_id, "object_layer")[1] == "obstacle"}
    xs, ys = [c[0] for c in room], [c[1] for c in room]
    zm = zone_partition((min(xs), min(ys), max(xs) - min(xs) + 1, max(ys) - min(ys) + 1))
    w, h = layout.assets[asset].base_size
    for z in [zone, *ring_order(zone)]:
        for ax, ay in sorted(zm.cells(z), key=lambda c: (c[1], c[0])):
            cells = {(cx, cy) for cy in range(ay, ay + h) for cx in range(ax, ax + w)}
            if not cells <= room or cells & occupied:
                continue
            obstacle = layout.resolved_properties(asset, "object_layer")[1] == "obstacle"
            if obstacle and len(oracles.components(room - blocked - cells)) != 1:
                continue
            return ax, ay
    return None


def test_place_in_empty_room_uses_first_zone_cell():
    out = place_components(_one_room(), 0, [PlacementDirective("table", "C")])
    assert out.placed[0].position == (3, 3)
    assert validate(out.layout).clean


def test_fallback_matches_brute_force_scan():
    layout = place_components(_one_room(), 0, [PlacementDirective("rug", "C")]).layout
    out = place_components(layout, 0, [PlacementDirective("crate", "C")])
    assert out.placed[0].position == _oracle_anchor(layout, "crate", "C")
    assert out.placed[0].position != (3, 3)


@settings(max_examples=25)
@given(st.lists(st.tuples(st.sampled_from(["table", "crate", "rug"]), st.sampled_from(INTERIOR_ZONES)), max_size=6))
def test_placer_matches_oracle_sequentially(directives):
    layout = _one_room()
    for asset, zone in directives:
        expect = _oracle_anchor(layout, asset, zone)
        out = place_components(layout, 0, [PlacementDirective(asset, zone)])
        got = out.placed[0].position if out.placed else None
        assert got == expect
        layout = out.layout
        assert validate(layout).clean


def test_oversized_directive_fails():
    out = place_components(_one_room(), 0, [PlacementDirective("hall", "C")])
    assert out.placed == () and len(out.failures) == 1


def test_directive_validation():
    with pytest.raises(ValueError):
        PlacementDirective("table", "ZZ")
    with pytest.raises(ValueError):
        place_components(_one_room(), 0, [PlacementDirective("sofa", "C")])


# functions ------------------------------------------------------------------

def test_stub_tags_follow_keyword_table():
    assert stub_tags("cafe library", 3) == ["kitchen", "dining", "lounge"]
    assert stub_tags("cafe library", 3) == stub_tags("cafe library", 3)


def test_assign_functions_stub_and_zero_rooms():
    s = synthesize_structure(3, 4, 30, 30)
    tagged = assign_functions(s, "cafe library", StubClient())
    assert [r.function_tag for r in tagged.rooms] == stub_tags("cafe library", len(s.rooms))
    empty = synthesize_structure(0, 0, 20, 16)
    assert assign_functions(empty, "house", StubClient()) is empty


def test_assign_functions_repairs_once_then_fails():
    s = synthesize_structure(3, 4, 30, 30)
    client = StubClient({"assign_functions": lambda m: "no idea"})
    with pytest.raises(FunctionAssignmentError):
        assign_functions(s, "house", client)
    assert len(client.calls) == 2
    replies = iter(["garbage", '{"functions": ' + str(["study"] * len(s.rooms)).replace("'", '"') + "}"])
    client = StubClient({"assign_functions": lambda m: next(replies)})
    assert {r.function_tag for r in assign_functions(s, "house", client).rooms} == {"study"}


def test_assign_functions_propagates_transport_status():
    def boom(m):
        raise TransportError("down", 503)

    with pytest.raises(TransportError) as err:
        assign_functions(synthesize_structure(3, 4, 30, 30), "house", StubClient({"assign_functions": boom}))
    assert err.value.status == 503


def test_golden_helper_is_cached():
    assert golden(42) is golden(42)
