"""JSONL writers for Dataset A (Z -> G, (G_err, C) -> G) and Dataset B (I -> Z)."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from ..layout import SceneLayout, to_document
from ..zdesc import ZDesc, parse_z
from .chaos import CorruptionRecord

DENSITIES = ("short", "medium", "long")


@dataclass(frozen=True)
class GoldenEntry:
    """One golden layout, its description Z and the corruption records derived from it."""

    golden: SceneLayout
    z: str
    records: tuple[CorruptionRecord, ...] = ()
    seed: int | None = None


def _line(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def dataset_a_records(entries) -> list[dict]:
    out = []
    for entry in entries:
        gold = to_document(entry.golden)
        out.append({"kind": "generate", "input": entry.z, "output": gold})
        for rec in entry.records:
            out.append({
                "kind": "correct",
                "input": {"g_error": to_document(rec.g_error), "corrections": list(rec.instructions)},
                "output": gold,
            })
    return out


def _write_jsonl(path: Path, rows: list[dict], manifest: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = "".join(_line(r) + "\n" for r in rows)
    path.write_text(text, encoding="utf-8")
    manifest = dict(manifest, lines=len(rows), sha256=hashlib.sha256(text.encode("utf-8")).hexdigest())
    side = path.with_suffix(".manifest.json")
    side.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return path


def emit_dataset_a(entries, path: str | Path) -> Path:
    """Write one generate record per golden followed by its correct records."""
    entries = list(entries)
    rows = dataset_a_records(entries)
    manifest = {
        "dataset": "A",
        "goldens": len(entries),
        "seeds": [e.seed for e in entries],
        "corruption_seeds": [[r.seed for r in e.records] for e in entries],
        "kinds": {k: sum(r["kind"] == k for r in rows) for k in ("generate", "correct")},
    }
    return _write_jsonl(Path(path), rows, manifest)


def _words(name: str) -> str:
    return name.replace("_", " ")


def _join(items: list[str]) -> str:
    if len(items) <= 1:
        return "".join(items)
    return ", ".join(items[:-1]) + " and " + items[-1]


def simulate_instruction(z: str | ZDesc, density: str) -> str:
    """Template user instruction at one of three verbosity levels."""
    if density not in DENSITIES:
        raise ValueError(f"density must be one of {DENSITIES}, got {density!r}")
    desc = parse_z(z) if isinstance(z, str) else z
    head = desc.description.split(". ")[0].rstrip(".") if desc.description else _words(desc.scene)
    parts = [f"Create {head[:1].lower()}{head[1:]}."]
    if density in ("medium", "long") and desc.rooms:
        names = [_words(r.function) for r in desc.rooms]
        parts.append(f"It should have {len(names)} areas: {_join(names)}.")
    if density == "long":
        for room, items in desc.components:
            assets = sorted({_words(a) for a, _ in items})
            parts.append(f"The {_words(room)} holds {_join(assets)}.")
        for a, b, _ in desc.connections:
            parts.append(f"The {_words(a)} opens onto the {_words(b)}.")
    return " ".join(parts)


def emit_dataset_b(pairs, path: str | Path, seeds=None) -> Path:
    """Write (instruction, Z, density) triples, one per line, in the given order."""
    rows = []
    for instruction, z, density in pairs:
        if density not in DENSITIES:
            raise ValueError(f"density must be one of {DENSITIES}, got {density!r}")
        rows.append({"instruction": instruction, "density": density, "output": z})
    manifest = {"dataset": "B", "seeds": list(seeds or []),
                "densities": {d: sum(r["density"] == d for r in rows) for d in DENSITIES}}
    return _write_jsonl(Path(path), rows, manifest)


@dataclass
class ReviewItem:
    """Long-tail sample queued for manual review: findings plus the layout file."""

    layout_path: str
    findings: list[dict] = field(default_factory=list)


def export_review_queue(items, path: str | Path) -> Path:
    rows = [{"layout": i.layout_path, "findings": i.findings} for i in items]
    path = Path(path)
    path.write_text("".join(_line(r) + "\n" for r in rows), encoding="utf-8")
    return path
