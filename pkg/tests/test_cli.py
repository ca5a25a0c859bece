from __future__ import annotations

import json

import pytest

from conftest import DATA
from tilescape.cli import EXIT_FINDINGS, EXIT_OK, EXIT_TRANSPORT, EXIT_USAGE, main
from tilescape.scaffold import tree_hash

SCHOLAR_HUB = str(DATA / "scholar_hub.json")

HELP_FLAGS = {
    "gen": ["--seed", "--count", "--rooms", "--width", "--height", "--workers", "--out", "--z"],
    "validate": ["--in", "--json"],
    "perturb": ["--in", "--issues", "--seed", "--allow-small", "--out"],
    "dataset": ["--seed", "--count", "--corruptions", "--out", "--workers"],
    "score": ["--in", "--z", "--csv", "--judge", "--judge-url", "--judge-stub"],
    "compile": ["--in", "--assets", "--out", "--force"],
    "craft": ["--prompt", "--prompt-file", "--endpoint", "--stub", "--fixtures", "--image-url", "--max-rounds", "--out"],
}


@pytest.mark.parametrize("cmd", sorted(HELP_FLAGS))
def test_help_lists_flags(cmd, capsys):
    assert main([cmd, "--help"]) == EXIT_OK
    out = capsys.readouterr().out
    for flag in HELP_FLAGS[cmd]:
        assert flag in out


def test_usage_errors(capsys):
    assert main([]) == EXIT_USAGE
    assert main(["gen", "--seed", "x"]) == EXIT_USAGE
    assert main(["validate"]) == EXIT_USAGE
    assert main(["craft", "--out", "o"]) == EXIT_USAGE


def test_gen_writes_layouts(tmp_path, capsys):
    assert main(["gen", "--seed", "3", "--count", "2", "--rooms", "4", "--width", "30", "--height", "28",
                 "--out", str(tmp_path), "--z", "--workers", "1"]) == EXIT_OK
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["procgen_3.json", "procgen_3.z.txt", "procgen_4.json", "procgen_4.z.txt"]
    assert "ok" in capsys.readouterr().out


def test_gen_infeasible_exit(capsys):
    assert main(["gen", "--rooms", "4", "--width", "3", "--height", "3", "--workers", "1"]) == EXIT_FINDINGS
    assert "infeasible" in capsys.readouterr().out


def test_validate_exit_codes(tmp_path, capsys):
    assert main(["validate", "--in", SCHOLAR_HUB]) == EXIT_FINDINGS
    out = capsys.readouterr().out
    assert "4 hard finding(s)" in out and "kitchen_sink_counter" in out
    main(["gen", "--seed", "1", "--out", str(tmp_path), "--workers", "1"])
    capsys.readouterr()
    clean = next(tmp_path.glob("*.json"))
    assert main(["validate", "--in", str(clean), "--json"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["hard"] == []
    assert main(["validate", "--in", str(tmp_path / "missing.json")]) == EXIT_USAGE
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert main(["validate", "--in", str(bad)]) == EXIT_FINDINGS


def test_perturb_and_score(tmp_path, capsys):
    main(["gen", "--seed", "2", "--rooms", "4", "--width", "30", "--height", "28", "--out", str(tmp_path), "--workers", "1"])
    src = str(tmp_path / "procgen_2.json")
    rec = tmp_path / "rec.json"
    assert main(["perturb", "--in", src, "--issues", "4", "--seed", "7", "--out", str(rec)]) == EXIT_OK
    assert len(json.loads(rec.read_text())["ops"]) == 4
    capsys.readouterr()
    assert main(["score", "--in", src]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["metrics"]["cfr"] == 1.0
    assert main(["score", "--in", src, SCHOLAR_HUB, "--judge-stub", "--csv", str(tmp_path / "s.csv")]) == EXIT_OK
    assert len((tmp_path / "s.csv").read_text().splitlines()) == 3
    assert main(["score", "--in", src, "--judge"]) == EXIT_USAGE


def test_dataset_commands(tmp_path, capsys):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert main(["dataset", "a", "--count", "2", "--out", str(a), "--workers", "1"]) == EXIT_OK
    assert main(["dataset", "b", "--count", "2", "--out", str(b), "--workers", "1"]) == EXIT_OK
    for path in (a, b):
        assert all(json.loads(line) for line in path.read_text().splitlines())


def test_compile_force(tmp_path, capsys):
    assert main(["compile", "--in", SCHOLAR_HUB, "--out", str(tmp_path / "b")]) == EXIT_FINDINGS
    assert main(["compile", "--in", SCHOLAR_HUB, "--out", str(tmp_path / "b"), "--force"]) == EXIT_OK
    assert (tmp_path / "b" / "nav.json").is_file()


def test_craft_stub_and_transport(tmp_path, capsys, monkeypatch):
    assert main(["craft", "--stub", "--prompt", "A library cafe", "--out", str(tmp_path / "r")]) == EXIT_OK
    assert "status=clean" in capsys.readouterr().out
    assert (tmp_path / "r" / "bundle" / "scene.json").is_file()
    monkeypatch.delenv("WC_CHAT_URL", raising=False)
    assert main(["craft", "--prompt", "x", "--out", str(tmp_path / "n")]) == EXIT_USAGE
    assert main(["craft", "--prompt", "x", "--endpoint", "http://127.0.0.1:9/v1",
                 "--out", str(tmp_path / "t")]) == EXIT_TRANSPORT


def test_config_file_defaults(tmp_path, capsys):
    cfg = tmp_path / "c.toml"
    cfg.write_text("rooms = 3\nwidth = 26\nheight = 26\nworkers = 1\n")
    assert main(["--config", str(cfg), "gen", "--seed", "4"]) == EXIT_OK
    assert "26x26" in capsys.readouterr().out
    cfg.write_text("not = [valid")
    assert main(["--config", str(cfg), "gen"]) == EXIT_USAGE


def test_reruns_are_byte_identical(tmp_path):
    for run in ("x", "y"):
        d = tmp_path / run
        main(["gen", "--seed", "0", "--count", "3", "--out", str(d / "gen"), "--workers", "2"])
        main(["perturb", "--in", str(d / "gen" / "procgen_0.json"), "--seed", "1", "--out", str(d / "p.json")])
        main(["compile", "--in", str(d / "gen" / "procgen_0.json"), "--out", str(d / "bundle")])
        main(["craft", "--stub", "--prompt", "cafe", "--out", str(d / "craft")])
    assert tree_hash(tmp_path / "x") == tree_hash(tmp_path / "y")


def test_config_priors_table(tmp_path, capsys):
    cfg = tmp_path / "c.toml"
    cfg.write_text("workers = 1\n[priors]\nroom_area_max = 30\ncore_seed_fraction_range = [0.6, 0.7]\n")
    out = tmp_path / "g"
    assert main(["--config", str(cfg), "gen", "--seed", "5", "--rooms", "4", "--width", "30", "--height", "30",
                 "--out", str(out)]) == EXIT_OK
    default = tmp_path / "d"
    main(["gen", "--seed", "5", "--rooms", "4", "--width", "30", "--height", "30", "--out", str(default), "--workers", "1"])
    assert (out / "procgen_5.json").read_bytes() != (default / "procgen_5.json").read_bytes()
    cfg.write_text("[priors]\nroom_area_min = 1\n")
    assert main(["--config", str(cfg), "gen"]) == EXIT_USAGE
    cfg.write_text("[priors]\nbogus = 1\n")
    assert main(["--config", str(cfg), "gen"]) == EXIT_USAGE
