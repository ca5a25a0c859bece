"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

from __future__ import annotations

import json
import random
import time
from collections import Counter
from itertools import combinations

import numpy as np

import oracles
from conftest import DATA, golden
from tilescape.assetlib import AssetEntry, LibraryIndex, RetrievalQuery, retrieve_traced
from tilescape.chat import HttpChatClient, StubClient
from tilescape.cli import _golden_args, main
from tilescape.dataforge import (
    DENSITIES,
    LEVEL_KINDS,
    GoldenEntry,
    apply_corrections,
    corrupt,
    detectability_report,
    emit_dataset_a,
    emit_dataset_b,
    sample_level,
    simulate_instruction,
)
from tilescape.guild import Correction, PipelineConfig, describe, run_pipeline
from tilescape.layout import from_document, parse_layout, rasterize, serialize_layout, to_document, validate
from tilescape.metrics import cfr, rcs, score_layout
from tilescape.procgen import generate_golden
from tilescape.scaffold import NavGrid, find_path, tree_hash
from tilescape.zdesc import parse_z


def _room_has_door(room_cells, doors) -> bool:
    for x, y in doors:
        if any(n in room_cells for n in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1))):
            return True
    return False


def test_c01_procgen_soundness(acceptance):
    t0 = time.perf_counter()
    bad = []
    for seed in range(100):
        n, w, h = _golden_args(seed, None, None, None)
        layout = generate_golden(seed, n, w, h).layout
        grids = rasterize(layout)
        hard = validate(layout).hard
        doors = set(grids.door_cells)
        undoored = [r.id for r in grids.rooms if not _room_has_door(set(r.cells), doors)]
        if hard or cfr(layout) != 1.0 or rcs(layout) != 1.0 or undoored:
            bad.append(seed)
    elapsed = time.perf_counter() - t0
    acceptance(1, "procgen soundness", not bad and elapsed < 60,
               f"{100 - len(bad)}/100 clean (CFR=RCS=1, doors in every room), {elapsed:.1f}s (<60s)")


def test_c02_chaos_fidelity(acceptance):
    rng = random.Random(2024)
    counts = Counter(sample_level(rng) for _ in range(10_000))
    shares = {lvl: counts[lvl] / 10_000 for lvl in (1, 2, 3, 4)}
    freq_ok = all(abs(shares[l] - t) <= 0.02 for l, t in zip((1, 2, 3, 4), (0.1, 0.2, 0.3, 0.4)))
    goldens = [golden(i, 3 + i % 4, 28 + i, 30) for i in range(5)]
    pick = random.Random(7)
    counts_ok = restored = 0
    for trial in range(100):
        g = goldens[pick.randrange(len(goldens))].layout
        rec = corrupt(g, seed=pick.randrange(10**6))
        counts_ok += 2 <= rec.requested <= 15 and 2 <= len(rec.ops) <= 15
        back = apply_corrections(rec.g_error, rec.ops)
        restored += to_document(back) == to_document(g) and serialize_layout(back) == serialize_layout(g)
    levels = " ".join(f"L{l}={shares[l]:.3f}" for l in (1, 2, 3, 4))
    acceptance(2, "chaos monkey fidelity", freq_ok and counts_ok == 100 and restored == 100,
               f"{levels} (target .1/.2/.3/.4 +-.02); issue counts in [2,15] {counts_ok}/100; round trip {restored}/100")


def test_c03_detectability(acceptance):
    total = detected = 0
    seed = 0
    while total < 500:
        g = golden(seed % 6, 3 + seed % 5, 30, 30).layout
        rec = corrupt(g, k=5, seed=seed, kinds={4: LEVEL_KINDS[4]})
        for det in detectability_report(rec):
            assert det.op.level == 4
            total += 1
            detected += bool(det.findings)
        seed += 1
    acceptance(3, "L4 detectability", detected == total, f"{detected}/{total} L4 ops raise an attributable hard finding")


WORDS = ["chair", "table", "bed", "lamp", "red", "oak", "sofa", "rug", "desk", "plant", "the", "a"]


def test_c04_retrieval(acceptance):
    rng = random.Random(4)
    agree = exits_ok = zero_cases = 0
    for case in range(1000):
        entries = []
        for i in range(rng.randint(0, 15)):
            toks = frozenset(rng.sample(WORDS[:10], rng.randint(1, 3)))
            entries.append(AssetEntry(f"e{i:02d}.png", toks, (rng.randint(1, 4), rng.randint(1, 4))))
        lib = LibraryIndex.from_entries(entries)
        ident = "_".join(rng.sample(WORDS + ["zzz"], rng.randint(1, 3)))
        dims = (rng.randint(1, 4), rng.randint(1, 4))
        q = RetrievalQuery(ident, "", dims)
        trace = retrieve_traced(q, lib)
        rows = [(e.path, e.tokens, e.dimensions) for e in lib]
        agree += trace.path == oracles.retrieve(q.tokens(), dims, rows)
        zero = any(set(q.tokens()) & set(t) and d == dims for _, t, d in rows)
        zero_cases += zero
        exits_ok += trace.early_exit == zero
    acceptance(4, "asset retrieval", agree == 1000 and exits_ok == 1000,
               f"oracle agreement {agree}/1000; early exit correct {exits_ok}/1000 ({zero_cases} perfect-match cases)")


def test_c05_connectivity(acceptance):
    rng = np.random.default_rng(5)
    reach_ok = len_ok = 0
    for _ in range(200):
        h, w = rng.integers(2, 30, size=2)
        mask = rng.random((h, w)) < rng.uniform(0.3, 0.8)
        walk = {(x, y) for y in range(h) for x in range(w) if mask[y, x]}
        comp = {c: k for k, cs in enumerate(oracles.components(walk)) for c in cs}
        start = (int(rng.integers(w)), int(rng.integers(h)))
        goal = (int(rng.integers(w)), int(rng.integers(h)))
        path = find_path(NavGrid(int(w), int(h), mask, ()), start, goal)
        reachable = start in comp and goal in comp and comp[start] == comp[goal]
        reach_ok += (path is not None) == reachable
        expect = oracles.bfs_path_length(walk, start, goal)
        if path is None:
            len_ok += expect is None
        else:
            steps_ok = all(abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1 and b in walk for a, b in zip(path, path[1:]))
            len_ok += steps_ok and path[0] == start and path[-1] == goal and len(path) - 1 == expect
    acceptance(5, "connectivity engine", reach_ok == 200 and len_ok == 200,
               f"reachability {reach_ok}/200 vs flood fill; minimal length {len_ok}/200 vs BFS")


def test_c06_scholar_hub(acceptance, scholar_hub_text, scholar_hub_doc):
    layout = parse_layout(scholar_hub_text)
    text = serialize_layout(layout)
    round_trip = serialize_layout(parse_layout(text)) == text and parse_layout(text) == layout
    frozen = json.loads((DATA / "scholar_hub.report.json").read_text(encoding="utf-8"))
    want = {(c, a, frozenset(tuple(x) for x in cells)) for c, a, cells in frozen["hard"]}
    report = validate(layout)
    got = {(f.code, f.asset_id, frozenset(f.cells)) for f in report.hard}
    missing = sorted(f.asset_id for f in report.warnings if f.code == "missing_property")
    grids = rasterize(layout)
    sink = ("wall_overlap", "kitchen_sink_counter") in {(c, a) for c, a, _ in got}
    ok = (round_trip and got == want == oracles.hard_findings(scholar_hub_doc) and missing == frozen["missing_property"]
          and "rug_persian" in missing and sink and len(grids.rooms) == frozen["rooms"]
          and int(grids.nav_mask.sum()) == frozen["nav_cells"] and len(grids.door_cells) == frozen["door_cells"])
    acceptance(6, "reference scene conformance", ok,
               f"round trip {'ok' if round_trip else 'broken'}; {len(got)} hard findings match golden "
               f"(sink/wall {'found' if sink else 'missing'}); missing properties {missing}")


def test_c07_pipeline_protocol(acceptance):
    def one_issue(layout, z):
        return [Correction("style", None, "Make the scene cosier.")]

    stuck = run_pipeline("A library cafe", PipelineConfig(StubClient(), extra_critics=(one_issue,)))
    clean = run_pipeline("A library cafe", PipelineConfig(StubClient()))
    again = run_pipeline("A library cafe", PipelineConfig(StubClient()))
    stuck2 = run_pipeline("A library cafe", PipelineConfig(StubClient(), extra_critics=(one_issue,)))
    ok = (stuck.status == "max_rounds" and stuck.round == 4 and clean.status == "clean" and clean.round <= 1
          and clean.transcript_hash() == again.transcript_hash() and stuck.transcript_hash() == stuck2.transcript_hash())
    acceptance(7, "pipeline protocol", ok,
               f"always-one-issue -> {stuck.status} at round {stuck.round}; clean stub -> {clean.status} "
               f"at round {clean.round}; transcript hash {clean.transcript_hash()[:12]} stable")


def test_c08_dataset_emission(acceptance, tmp_path):
    entries = []
    for seed in range(6):
        g = generate_golden(seed, *_golden_args(seed, None, None, None)).layout
        entries.append(GoldenEntry(g, describe(g), tuple(corrupt(g, seed=seed * 10 + j) for j in range(2)), seed))
    a = emit_dataset_a(entries, tmp_path / "a.jsonl")
    pairs = [(simulate_instruction(e.z, d), e.z, d) for e in entries for d in DENSITIES]
    b = emit_dataset_b(pairs, tmp_path / "b.jsonl", seeds=[e.seed for e in entries])
    lines = a.read_text(encoding="utf-8").splitlines() + b.read_text(encoding="utf-8").splitlines()
    parsed = 0
    for line in lines:
        try:
            json.loads(line)
            parsed += 1
        except ValueError:
            pass
    rows_a = [json.loads(x) for x in a.read_text(encoding="utf-8").splitlines()]
    rows_b = [json.loads(x) for x in b.read_text(encoding="utf-8").splitlines()]
    kinds = {r["kind"] for r in rows_a}
    gold_clean = all(validate(from_document(r["output"])).clean for r in rows_a)
    for r in rows_a:
        if r["kind"] == "generate":
            parse_z(r["input"])
    densities = {r["density"] for r in rows_b}
    ok = kinds == {"generate", "correct"} and gold_clean and densities == {"short", "medium", "long"} and parsed == len(lines)
    acceptance(8, "dataset emission", ok,
               f"A kinds {sorted(kinds)}; gold re-validates {'clean' if gold_clean else 'DIRTY'}; "
               f"B densities {sorted(densities)}; {parsed}/{len(lines)} JSONL lines re-parse")


def test_c09_determinism(acceptance, tmp_path):
    hashes = {}
    for run in ("one", "two"):
        d = tmp_path / run
        main(["gen", "--seed", "10", "--count", "4", "--out", str(d / "gen"), "--z"])
        main(["perturb", "--in", str(d / "gen" / "procgen_10.json"), "--seed", "3", "--out", str(d / "perturb.json")])
        main(["compile", "--in", str(d / "gen" / "procgen_10.json"), "--out", str(d / "bundle")])
        main(["craft", "--stub", "--prompt", "A library cafe", "--out", str(d / "craft")])
        hashes[run] = {k: tree_hash(d / k) if (d / k).is_dir() else tree_hash_file(d / k)
                       for k in ("gen", "perturb.json", "bundle", "craft")}
    same = [k for k in hashes["one"] if hashes["one"][k] == hashes["two"][k]]
    acceptance(9, "determinism", len(same) == 4, f"identical across two runs: {', '.join(same) or 'none'} (4 expected)")


def tree_hash_file(path):
    import hashlib

    return hashlib.sha256(path.read_bytes()).hexdigest()


def test_c10_metric_isolation(acceptance):
    corpus = []
    for seed in range(25):
        g = golden(seed, 3 + seed % 4, 28, 28).layout
        corpus.append(g)
        corpus.append(corrupt(g, seed=seed).g_error)
    dead = HttpChatClient(url="http://127.0.0.1:9/v1", retries=0, timeout=0.5)
    same = 0
    for layout in corpus:
        base = score_layout(layout).rule_metrics()
        with_stub = score_layout(layout, judge=StubClient()).rule_metrics()
        with_dead = score_layout(layout, judge=dead, metrics=("OPS",)).rule_metrics()
        same += base == with_stub == with_dead
    acceptance(10, "metric isolation", same == len(corpus) == 50,
               f"rule metrics identical with and without judges on {same}/{len(corpus)} scenes")
