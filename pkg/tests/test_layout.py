from __future__ import annotations

import json

import pytest
from hypothesis import given

import oracles
from conftest import DATA, layout_docs
from tilescape.layout import (
    LayoutParseError,
    from_document,
    loads_lenient,
    parse_layout,
    rasterize,
    repair_json_text,
    serialize_layout,
    to_document,
    validate,
)


def _cells(mask):
    ys, xs = mask.nonzero()
    return set(zip(xs.tolist(), ys.tolist()))


def _engine_hard(layout):
    out = set()
    for f in validate(layout).hard:
        cells = None if f.code == "dangling_ref" else frozenset(f.cells)
        out.add((f.code, f.asset_id, cells))
    return out


def test_scholar_hub_parses_with_expected_shape(scholar_hub):
    assert scholar_hub.metadata.grid_size == (35, 28)
    assert len(scholar_hub.object_layer) == 39
    assert len(scholar_hub.npc_layer) == 4
    assert len(scholar_hub.assets) == 30


def test_scholar_hub_raw_text_needs_lenient_parse():
    raw = (DATA / "scholar_hub_raw.txt").read_text(encoding="utf-8")
    with pytest.raises(LayoutParseError):
        parse_layout(raw)
    assert to_document(loads_lenient(raw)) == to_document(parse_layout((DATA / "scholar_hub.json").read_text()))


def test_serialization_round_trip_is_byte_identical(scholar_hub):
    text = serialize_layout(scholar_hub)
    assert serialize_layout(parse_layout(text)) == text
    assert parse_layout(text) == scholar_hub


def test_scholar_hub_report_matches_frozen_oracle(scholar_hub, scholar_hub_doc):
    golden = json.loads((DATA / "scholar_hub.report.json").read_text(encoding="utf-8"))
    frozen = {(c, a, frozenset(tuple(x) for x in cells)) for c, a, cells in golden["hard"]}
    assert frozen == oracles.hard_findings(scholar_hub_doc)
    assert _engine_hard(scholar_hub) == frozen
    report = validate(scholar_hub)
    missing = sorted(f.asset_id for f in report.warnings if f.code == "missing_property")
    assert missing == golden["missing_property"]
    assert "rug_persian" in missing
    sink = [f for f in report.hard if f.asset_id == "kitchen_sink_counter"]
    assert [f.code for f in sink] == ["wall_overlap"]
    grids = rasterize(scholar_hub)
    assert len(grids.rooms) == golden["rooms"]
    assert int(grids.nav_mask.sum()) == golden["nav_cells"]


@given(layout_docs())
def test_rasterize_matches_cellwise_oracle(doc):
    layout = from_document(doc)
    grids = rasterize(layout)
    ref = oracles.grid_sets(doc)
    assert _cells(grids.floor_mask) == ref["floor"]
    assert _cells(grids.wall_mask) == ref["wall"]
    assert _cells(grids.nav_mask) == ref["nav"]
    assert sorted(map(frozenset, (r.cells for r in grids.rooms)), key=sorted) == \
        sorted(map(frozenset, oracles.rooms(doc)), key=sorted)


@given(layout_docs())
def test_validator_matches_brute_force_oracle(doc):
    assert _engine_hard(from_document(doc)) == oracles.hard_findings(doc)


@given(layout_docs())
def test_document_round_trip(doc):
    layout = from_document(doc)
    text = serialize_layout(layout)
    assert parse_layout(text) == layout
    assert serialize_layout(parse_layout(text)) == text


def test_validation_is_deterministic(scholar_hub):
    assert validate(scholar_hub).to_dict() == validate(scholar_hub).to_dict()


@pytest.mark.parametrize("mutate, field", [
    (lambda d: d.pop("layout"), "layout"),
    (lambda d: d["metadata"].pop("grid_size"), "metadata.grid_size"),
    (lambda d: d["assets"]["rug_persian"].update(type="carpet"), "assets.rug_persian.type"),
    (lambda d: d["properties"]["bookshelf_wide"].update(physics="soft"), "properties.bookshelf_wide.physics"),
])
def test_parse_errors_name_the_field(scholar_hub_doc, mutate, field):
    doc = json.loads(json.dumps(scholar_hub_doc))
    mutate(doc)
    with pytest.raises(LayoutParseError) as err:
        from_document(doc)
    assert field in str(err.value)


def test_syntax_error_reports_position():
    with pytest.raises(LayoutParseError) as err:
        parse_layout('{"metadata": ')
    assert err.value.line == 1


def test_duplicate_keys_rejected():
    with pytest.raises(LayoutParseError, match="duplicate"):
        parse_layout('{"metadata": {}, "metadata": {}}')


@pytest.mark.parametrize("wrap", [
    "```json\n{body}\n```",
    "```\n{body}\n```",
    "Here is the layout:\n```json\n{body}\n```\nDone.",
])
def test_repair_strips_fences(scholar_hub_text, wrap):
    layout = loads_lenient(wrap.format(body=scholar_hub_text))
    assert layout.metadata.grid_size == (35, 28)


def test_repair_fixes_trailing_commas_and_literals():
    text = '{"a": [1, 2,], "b": True, "c": None,}'
    assert json.loads(repair_json_text(text)) == {"a": [1, 2], "b": True, "c": None}


def test_unknown_keys_survive_round_trip(scholar_hub_doc):
    doc = json.loads(json.dumps(scholar_hub_doc))
    doc["custom"] = {"x": 1}
    doc["layout"]["decal_layer"] = []
    again = to_document(from_document(doc))
    assert again["custom"] == {"x": 1}
    assert again["layout"]["decal_layer"] == []
