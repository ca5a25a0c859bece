"""Checked, invertible edits on the canonical layout document.

An edit addresses a value by a path of keys and list indices into the
document produced by ``to_document``. Each edit records the value it
expects to find, so replaying an edit against a layout that has drifted
raises ``EditConflict`` instead of silently clobbering data.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from typing import Any

from .layout import SceneLayout, from_document, to_document

Path = tuple[Any, ...]


class _Missing:
    def __repr__(self):
        return "MISSING"

    def __reduce__(self):
        return (_missing, ())


def _missing():
    return MISSING


MISSING: Any = _Missing()


class EditConflict(RuntimeError):
    """The document no longer matches the state an edit expects."""


@dataclass(frozen=True)
class Edit:
    """``set`` replaces (or adds/drops a mapping key via MISSING); ``insert``/``remove`` act on lists."""

    op: str
    path: Path
    old: Any = MISSING
    new: Any = MISSING

    def __post_init__(self):
        if self.op not in ("set", "insert", "remove"):
            raise ValueError(f"unknown edit op {self.op!r}")

    @property
    def inverse(self) -> "Edit":
        if self.op == "set":
            return Edit("set", self.path, self.new, self.old)
        if self.op == "insert":
            return Edit("remove", self.path, self.new, MISSING)
        return Edit("insert", self.path, MISSING, self.old)

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"op": self.op, "path": list(self.path)}
        if self.old is not MISSING:
            d["old"] = self.old
        if self.new is not MISSING:
            d["new"] = self.new
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Edit":
        return cls(d["op"], tuple(d["path"]), d.get("old", MISSING), d.get("new", MISSING))


def _walk(doc: Any, path: Path) -> Any:
    node = doc
    for key in path:
        try:
            node = node[key]
        except (KeyError, IndexError, TypeError):
            raise EditConflict(f"path {list(path)} does not exist") from None
    return node


def _same(a: Any, b: Any) -> bool:
    return json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def apply_edit_doc(doc: dict, edit: Edit) -> None:
    """Apply one edit to a document in place."""
    parent = _walk(doc, edit.path[:-1])
    key = edit.path[-1]
    if edit.op == "set":
        if isinstance(parent, dict):
            current = parent.get(key, MISSING)
        elif isinstance(parent, list) and isinstance(key, int) and 0 <= key < len(parent):
            current = parent[key]
        else:
            raise EditConflict(f"path {list(edit.path)} does not exist")
        if current is MISSING or edit.old is MISSING:
            if current is not edit.old:
                raise EditConflict(f"{list(edit.path)}: expected {edit.old!r}, found {current!r}")
        elif not _same(current, edit.old):
            raise EditConflict(f"{list(edit.path)}: expected {edit.old!r}, found {current!r}")
        if edit.new is MISSING:
            if not isinstance(parent, dict):
                raise EditConflict(f"{list(edit.path)}: cannot unset a list element")
            del parent[key]
        else:
            parent[key] = copy.deepcopy(edit.new)
        return
    if not isinstance(parent, list) or not isinstance(key, int):
        raise EditConflict(f"{list(edit.path)} is not a list position")
    if edit.op == "insert":
        if not 0 <= key <= len(parent):
            raise EditConflict(f"{list(edit.path)}: insert position out of range")
        parent.insert(key, copy.deepcopy(edit.new))
        return
    if not 0 <= key < len(parent):
        raise EditConflict(f"{list(edit.path)}: remove position out of range")
    if not _same(parent[key], edit.old):
        raise EditConflict(f"{list(edit.path)}: expected {edit.old!r}, found {parent[key]!r}")
    del parent[key]


def apply_edits(layout: SceneLayout, edits) -> SceneLayout:
    """Apply edits in order; all-or-nothing."""
    edits = list(edits)
    if not edits:
        return layout
    doc = to_document(layout)
    for e in edits:
        apply_edit_doc(doc, e)
    return from_document(doc)


def invert(edits) -> list[Edit]:
    return [e.inverse for e in reversed(list(edits))]
