from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import DATA
from tilescape.assetlib import (
    AssetEntry,
    LibraryIndex,
    ManifestError,
    RetrievalQuery,
    build_index,
    bundled_library,
    normalize,
    retrieve_asset,
    retrieve_traced,
)


def test_normalize_examples():
    assert normalize("A large silver double-door fridge.") == {"large", "silver", "double", "door", "fridge"}
    assert normalize("") == frozenset()
    assert normalize("the The THE") == frozenset()
    assert normalize("kitchen_sink_counter") == {"kitchen", "sink", "counter"}


def _write_manifest(tmp_path, rows, header="path,w,h,tokens"):
    (tmp_path / "manifest.csv").write_text("\n".join([header, *rows]) + "\n", encoding="utf-8")
    return tmp_path


def test_build_index_small_and_empty(tmp_path):
    lib = build_index(_write_manifest(tmp_path, ['c.png,1,1,chair', 'a.png,2,2,"table,wood"', 'b.png,1,2,lamp']))
    assert len(lib) == 3
    assert [e.path for e in lib] == ["a.png", "b.png", "c.png"]
    empty = tmp_path / "empty"
    empty.mkdir()
    assert len(build_index(_write_manifest(empty, []))) == 0


@pytest.mark.parametrize("rows, header, match", [
    (["a.png,1,1,chair", "a.png,2,2,table"], "path,w,h,tokens", "duplicate"),
    (["a.png,x,1,chair"], "path,w,h,tokens", "integers"),
    (["a.png,1,1,the"], "path,w,h,tokens", "no tokens"),
    (["a.png,1,1,chair"], "file,w,h,tokens", "header"),
])
def test_manifest_errors(tmp_path, rows, header, match):
    with pytest.raises(ManifestError, match=match):
        build_index(_write_manifest(tmp_path, rows, header))


def test_missing_manifest(tmp_path):
    with pytest.raises(ManifestError):
        build_index(tmp_path)


def test_bundled_library_matches_directory_listing():
    lib = bundled_library()
    listing = (DATA / "tiles_listing.txt").read_text(encoding="utf-8").split()
    assert [e.path for e in lib] == listing
    assert all(lib.resolve(e.path).is_file() for e in lib)


def test_retrieval_examples():
    assert retrieve_asset(RetrievalQuery("table", "", (2, 4)), LibraryIndex(None, ())) is None
    lib = LibraryIndex.from_entries([
        AssetEntry("a.png", frozenset({"table"}), (2, 2)),
        AssetEntry("b.png", frozenset({"table"}), (2, 3)),
        AssetEntry("c.png", frozenset({"table"}), (4, 4)),
    ])
    trace = retrieve_traced(RetrievalQuery("table", "", (2, 4)), lib)
    assert (trace.path, trace.penalty) == ("b.png", 1)
    assert not trace.early_exit and trace.probes == 3


def test_perfect_match_stops_the_scan():
    lib = LibraryIndex.from_entries([
        AssetEntry("a.png", frozenset({"sofa"}), (3, 1)),
        AssetEntry("b.png", frozenset({"sofa"}), (2, 1)),
        AssetEntry("c.png", frozenset({"sofa"}), (2, 1)),
    ])
    trace = retrieve_traced(RetrievalQuery("sofa", "", (2, 1)), lib)
    assert trace.path == "b.png" and trace.early_exit and trace.probes == 2


def test_bundled_fridge():
    q = RetrievalQuery("fridge_double_door", "A large silver double-door fridge.", (2, 2))
    assert retrieve_asset(q, bundled_library()) is not None


WORDS = ["chair", "table", "bed", "lamp", "red", "oak", "sofa", "rug", "desk", "plant"]


@st.composite
def libraries(draw):
    n = draw(st.integers(0, 12))
    entries = []
    for i in range(n):
        toks = frozenset(draw(st.lists(st.sampled_from(WORDS), min_size=1, max_size=3)))
        entries.append(AssetEntry(f"e{i:02d}.png", toks, (draw(st.integers(1, 4)), draw(st.integers(1, 4)))))
    return LibraryIndex.from_entries(entries)


@given(lib=libraries(), ident=st.lists(st.sampled_from(WORDS + ["the", "zzz"]), min_size=1, max_size=3),
       dims=st.tuples(st.integers(1, 4), st.integers(1, 4)))
def test_retrieval_matches_brute_force(lib, ident, dims):
    q = RetrievalQuery("_".join(ident), "", dims)
    trace = retrieve_traced(q, lib)
    entries = [(e.path, e.tokens, e.dimensions) for e in lib]
    assert trace.path == oracles.retrieve(q.tokens(), dims, entries)
    zero = any(set(q.tokens()) & set(t) and d == dims for _, t, d in entries)
    assert trace.early_exit == zero
