"""Library index and the two-stage retrieval: token filter, then Manhattan dimension ranking.

The manifest is a CSV file ``manifest.csv`` at the library root with a
header row ``path,w,h,tokens``; ``tokens`` is a comma-separated list, so it
is quoted when it holds more than one token.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

MANIFEST_NAME = "manifest.csv"
_SPLIT = re.compile(r"[^a-z0-9]+")


class ManifestError(ValueError):
    pass


@lru_cache(maxsize=1)
def stopwords() -> frozenset[str]:
    text = resources.files("tilescape.data").joinpath("stopwords.txt").read_text(encoding="utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


def normalize(text: str) -> frozenset[str]:
    """Lowercase, split on anything non-alphanumeric (underscores too), drop stop words."""
    stop = stopwords()
    return frozenset(t for t in _SPLIT.split(text.lower()) if t and t not in stop)


@dataclass(frozen=True)
class AssetEntry:
    path: str
    tokens: frozenset[str]
    dimensions: tuple[int, int]

    def __post_init__(self):
        if not self.tokens:
            raise ValueError(f"entry {self.path!r} has no tokens")
        if min(self.dimensions) < 1:
            raise ValueError(f"entry {self.path!r} has non-positive dimensions")


@dataclass(frozen=True)
class RetrievalQuery:
    asset_id: str
    description: str
    target_dims: tuple[int, int]

    def __post_init__(self):
        if min(self.target_dims) < 1:
            raise ValueError("target_dims must be >= 1")

    def tokens(self) -> frozenset[str]:
        return normalize(self.asset_id + " " + self.description)


@dataclass(frozen=True)
class LibraryIndex:
    root: Path | None
    entries: tuple[AssetEntry, ...] = ()

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def resolve(self, path: str) -> Path:
        return (self.root / path) if self.root is not None else Path(path)

    @classmethod
    def from_entries(cls, entries, root: Path | None = None) -> "LibraryIndex":
        entries = sorted(entries, key=lambda e: e.path)
        seen = set()
        for e in entries:
            if e.path in seen:
                raise ManifestError(f"duplicate path {e.path!r}")
            seen.add(e.path)
        return cls(root, tuple(entries))


def _parse_manifest(path: Path) -> list[AssetEntry]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from exc
    rows = list(csv.reader(text.splitlines()))
    if not rows:
        return []
    header = [c.strip() for c in rows[0]]
    if header != ["path", "w", "h", "tokens"]:
        raise ManifestError(f"{path}: expected header path,w,h,tokens, got {','.join(header)}")
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 4:
            raise ManifestError(f"{path}:{lineno}: expected 4 columns, got {len(row)}")
        rel, w, h, toks = (c.strip() for c in row)
        try:
            dims = (int(w), int(h))
        except ValueError:
            raise ManifestError(f"{path}:{lineno}: dimensions must be integers") from None
        tokens = normalize(toks.replace(",", " "))
        try:
            out.append(AssetEntry(rel, tokens, dims))
        except ValueError as exc:
            raise ManifestError(f"{path}:{lineno}: {exc}") from None
    return out


def build_index(root: str | Path) -> LibraryIndex:
    """Index a library directory from its manifest; entries are ordered by path."""
    root = Path(root)
    entries = _parse_manifest(root / MANIFEST_NAME)
    paths = [e.path for e in entries]
    dupes = sorted({p for p in paths if paths.count(p) > 1})
    if dupes:
        raise ManifestError(f"duplicate path {dupes[0]!r} in {root / MANIFEST_NAME}")
    return LibraryIndex.from_entries(entries, root)


def bundled_library() -> LibraryIndex:
    """The small fixture tile library shipped with the package."""
    return build_index(Path(str(resources.files("tilescape.data").joinpath("tiles"))))


@dataclass
class RetrievalTrace:
    path: str | None = None
    penalty: int | None = None
    probes: int = 0  # entries visited before returning
    early_exit: bool = False
    matched: list[int] = field(default_factory=list)  # indices passing the token filter


def retrieve_traced(query: RetrievalQuery, index: LibraryIndex) -> RetrievalTrace:
    q = query.tokens()
    tw, th = query.target_dims
    trace = RetrievalTrace()
    best = None
    for i, entry in enumerate(index.entries):
        trace.probes += 1
        if not (q & entry.tokens):
            continue
        trace.matched.append(i)
        w, h = entry.dimensions
        penalty = abs(tw - w) + abs(th - h)
        if best is None or penalty < best:
            best = penalty
            trace.path, trace.penalty = entry.path, penalty
            if penalty == 0:
                trace.early_exit = True
                break
    return trace


def retrieve_asset(query: RetrievalQuery, index: LibraryIndex) -> str | None:
    """Path of the token-matching entry with the smallest Manhattan size penalty.

    Ties keep the first entry in index order; a zero penalty stops the scan.
    """
    return retrieve_traced(query, index).path
