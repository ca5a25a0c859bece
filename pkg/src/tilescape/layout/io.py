"""Parsing and canonical serialization of layout documents (JSON)."""

from __future__ import annotations

import json
import re
from typing import Any

from .model import (
    ASSET_KINDS,
    LAYER_NAMES,
    NAVIGATION_VALUES,
    PHYSICS_VALUES,
    AreaFill,
    AssetDef,
    Metadata,
    Placement,
    PropertyEntry,
    SceneLayout,
)

_METADATA_KEYS = ("scene_name", "grid_size", "description", "style_prompt")
_ASSET_KEYS = ("type", "description", "base_size", "visual_size")
_PROPERTY_KEYS = ("physics", "navigation", "semantic_tag", "character_name", "is_agent", "soul_file")


class LayoutParseError(ValueError):
    """Raised for malformed layout documents.

    ``field`` names the offending path (dotted) when known; ``line`` and
    ``column`` are set for syntax errors.
    """

    def __init__(self, message: str, *, field: str | None = None, line: int | None = None, column: int | None = None):
        self.field = field
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}, column {column})"
        elif field is not None:
            where = f" (field {field})"
        super().__init__(message + where)


def _reject_duplicates(pairs):
    seen: dict[str, Any] = {}
    for key, value in pairs:
        if key in seen:
            raise LayoutParseError(f"duplicate key {key!r}", field=key)
        seen[key] = value
    return seen


def _int_pair(value: Any, path: str, *, positive: bool) -> tuple[int, int]:
    return tuple(_int_list(value, 2, path, positive=positive))  # type: ignore[return-value]


def _int_list(value: Any, n: int, path: str, *, positive: bool) -> list[int]:
    if not isinstance(value, list) or len(value) != n:
        raise LayoutParseError(f"expected a list of {n} integers", field=path)
    out = []
    for v in value:
        if isinstance(v, bool) or not isinstance(v, int):
            raise LayoutParseError(f"non-integer value {v!r}", field=path)
        out.append(v)
    if positive and any(v < 1 for v in out):
        raise LayoutParseError(f"sizes must be >= 1, got {out}", field=path)
    return out


def _text(obj: dict, key: str, path: str, *, required: bool) -> str:
    if key not in obj:
        if required:
            raise LayoutParseError(f"missing required field {path}.{key}", field=f"{path}.{key}")
        return ""
    value = obj[key]
    if not isinstance(value, str):
        raise LayoutParseError("expected text", field=f"{path}.{key}")
    return value


def _section(doc: dict, key: str) -> Any:
    if key not in doc:
        raise LayoutParseError(f"missing required section {key!r}", field=key)
    return doc[key]


def _extras(obj: dict, known: tuple[str, ...]) -> dict[str, Any]:
    return {k: v for k, v in obj.items() if k not in known}


def from_document(doc: Any) -> SceneLayout:
    """Build a SceneLayout from an already-decoded JSON object."""
    if not isinstance(doc, dict):
        raise LayoutParseError("layout document must be a JSON object")
    meta = _section(doc, "metadata")
    if not isinstance(meta, dict):
        raise LayoutParseError("metadata must be an object", field="metadata")
    if "grid_size" not in meta:
        raise LayoutParseError("missing required field metadata.grid_size", field="metadata.grid_size")
    metadata = Metadata(
        scene_name=_text(meta, "scene_name", "metadata", required=True),
        grid_size=_int_pair(meta["grid_size"], "metadata.grid_size", positive=True),
        description=_text(meta, "description", "metadata", required=False),
        style_prompt=_text(meta, "style_prompt", "metadata", required=False),
        extra=_extras(meta, _METADATA_KEYS),
    )

    raw_assets = _section(doc, "assets")
    if not isinstance(raw_assets, dict):
        raise LayoutParseError("assets must be an object", field="assets")
    assets = {}
    for asset_id, raw in raw_assets.items():
        path = f"assets.{asset_id}"
        if not isinstance(raw, dict):
            raise LayoutParseError("asset definition must be an object", field=path)
        kind = raw.get("type")
        if kind not in ASSET_KINDS:
            raise LayoutParseError(f"asset type must be one of {ASSET_KINDS}, got {kind!r}", field=f"{path}.type")
        for key in ("base_size", "visual_size"):
            if key not in raw:
                raise LayoutParseError(f"missing required field {path}.{key}", field=f"{path}.{key}")
        assets[asset_id] = AssetDef(
            id=asset_id,
            kind=kind,
            description=_text(raw, "description", path, required=False),
            base_size=_int_pair(raw["base_size"], f"{path}.base_size", positive=True),
            visual_size=_int_pair(raw["visual_size"], f"{path}.visual_size", positive=True),
            extra=_extras(raw, _ASSET_KEYS),
        )

    raw_layout = _section(doc, "layout")
    if not isinstance(raw_layout, dict):
        raise LayoutParseError("layout must be an object", field="layout")
    layers: dict[str, tuple] = {}
    for name in LAYER_NAMES:
        entries = raw_layout.get(name, [])
        if not isinstance(entries, list):
            raise LayoutParseError("layer must be a list", field=f"layout.{name}")
        parsed = []
        for i, raw in enumerate(entries):
            path = f"layout.{name}[{i}]"
            if not isinstance(raw, dict):
                raise LayoutParseError("layer entry must be an object", field=path)
            asset_id = raw.get("asset_id")
            if not isinstance(asset_id, str):
                raise LayoutParseError("missing asset_id", field=f"{path}.asset_id")
            if name in ("floor_layer", "wall_layer"):
                command = raw.get("command", "fill_rect")
                if command != "fill_rect":
                    raise LayoutParseError(f"unsupported command {command!r}", field=f"{path}.command")
                if "area" not in raw:
                    raise LayoutParseError("missing area", field=f"{path}.area")
                x, y, w, h = _int_list(raw["area"], 4, f"{path}.area", positive=False)
                if w < 1 or h < 1:
                    raise LayoutParseError("area width and height must be >= 1", field=f"{path}.area")
                parsed.append(AreaFill(asset_id, (x, y, w, h), command, _extras(raw, ("asset_id", "command", "area"))))
            else:
                if "position" not in raw:
                    raise LayoutParseError("missing position", field=f"{path}.position")
                pos = _int_pair(raw["position"], f"{path}.position", positive=False)
                parsed.append(Placement(asset_id, pos, _extras(raw, ("asset_id", "position"))))
        layers[name] = tuple(parsed)

    raw_props = _section(doc, "properties")
    if not isinstance(raw_props, dict):
        raise LayoutParseError("properties must be an object", field="properties")
    properties = {}
    for asset_id, raw in raw_props.items():
        path = f"properties.{asset_id}"
        if not isinstance(raw, dict):
            raise LayoutParseError("property entry must be an object", field=path)
        physics = raw.get("physics")
        if physics is not None and physics not in PHYSICS_VALUES:
            raise LayoutParseError(f"physics must be one of {PHYSICS_VALUES}", field=f"{path}.physics")
        navigation = raw.get("navigation")
        if navigation is not None and navigation not in NAVIGATION_VALUES:
            raise LayoutParseError(f"navigation must be one of {NAVIGATION_VALUES}", field=f"{path}.navigation")
        is_agent = raw.get("is_agent")
        if is_agent is not None and not isinstance(is_agent, bool):
            raise LayoutParseError("is_agent must be a boolean", field=f"{path}.is_agent")
        for key in ("semantic_tag", "character_name", "soul_file"):
            if key in raw and not isinstance(raw[key], str):
                raise LayoutParseError("expected text", field=f"{path}.{key}")
        properties[asset_id] = PropertyEntry(
            physics=physics,
            navigation=navigation,
            semantic_tag=raw.get("semantic_tag"),
            character_name=raw.get("character_name"),
            is_agent=is_agent,
            soul_file=raw.get("soul_file"),
            extra=_extras(raw, _PROPERTY_KEYS),
        )

    return SceneLayout(
        metadata=metadata,
        assets=assets,
        floor_layer=layers["floor_layer"],
        wall_layer=layers["wall_layer"],
        object_layer=layers["object_layer"],
        npc_layer=layers["npc_layer"],
        properties=properties,
        extra=_extras(doc, ("metadata", "assets", "layout", "properties")),
        layout_extra=_extras(raw_layout, LAYER_NAMES),
    )


def parse_layout(text: str | bytes) -> SceneLayout:
    """Parse a layout document. Strict JSON; see :func:`loads_lenient` for repair."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as exc:
        raise LayoutParseError(f"syntax error: {exc.msg}", line=exc.lineno, column=exc.colno) from None
    return from_document(doc)


def to_document(layout: SceneLayout) -> dict[str, Any]:
    """Canonical JSON-ready dict (fixed field order, sorted asset/property keys)."""
    m = layout.metadata
    meta = {
        "scene_name": m.scene_name,
        "grid_size": list(m.grid_size),
        "description": m.description,
        "style_prompt": m.style_prompt,
    }
    meta.update(sorted(m.extra.items()))
    assets = {}
    for asset_id in sorted(layout.assets):
        a = layout.assets[asset_id]
        entry = {
            "type": a.kind,
            "description": a.description,
            "base_size": list(a.base_size),
            "visual_size": list(a.visual_size),
        }
        entry.update(sorted(a.extra.items()))
        assets[asset_id] = entry

    def fill(f: AreaFill) -> dict:
        d = {"asset_id": f.asset_id, "command": f.command, "area": list(f.area)}
        d.update(sorted(f.extra.items()))
        return d

    def place(p: Placement) -> dict:
        d = {"asset_id": p.asset_id, "position": list(p.position)}
        d.update(sorted(p.extra.items()))
        return d

    lay = {
        "floor_layer": [fill(f) for f in layout.floor_layer],
        "wall_layer": [fill(f) for f in layout.wall_layer],
        "object_layer": [place(p) for p in layout.object_layer],
        "npc_layer": [place(p) for p in layout.npc_layer],
    }
    lay.update(sorted(layout.layout_extra.items()))
    props = {}
    for asset_id in sorted(layout.properties):
        p = layout.properties[asset_id]
        entry = {}
        for key in _PROPERTY_KEYS:
            value = getattr(p, key)
            if value is not None:
                entry[key] = value
        entry.update(sorted(p.extra.items()))
        props[asset_id] = entry
    doc = {"metadata": meta, "assets": assets, "layout": lay, "properties": props}
    doc.update(sorted(layout.extra.items()))
    return doc


def _inline(value: Any) -> str:
    return json.dumps(value, ensure_ascii=False, separators=(", ", ": "), sort_keys=False)


def _block(items: list[tuple[str | None, str]], indent: int, brackets: str) -> str:
    if not items:
        return brackets
    pad = "  " * (indent + 1)
    lines = []
    for key, rendered in items:
        prefix = f"{json.dumps(key, ensure_ascii=False)}: " if key is not None else ""
        lines.append(pad + prefix + rendered)
    return brackets[0] + "\n" + ",\n".join(lines) + "\n" + "  " * indent + brackets[1]


def dumps_document(doc: dict[str, Any]) -> str:
    """Render a canonical document: one line per asset, layer entry and property."""
    meta = _block([(k, _inline(v)) for k, v in doc["metadata"].items()], 1, "{}")
    assets = _block([(k, _inline(v)) for k, v in doc["assets"].items()], 1, "{}")
    layer_items = []
    for key, value in doc["layout"].items():
        if key in LAYER_NAMES:
            layer_items.append((key, _block([(None, _inline(e)) for e in value], 2, "[]")))
        else:
            layer_items.append((key, _inline(value)))
    layout = _block(layer_items, 1, "{}")
    props = _block([(k, _inline(v)) for k, v in doc["properties"].items()], 1, "{}")
    top = [("metadata", meta), ("assets", assets), ("layout", layout), ("properties", props)]
    top += [(k, _inline(v)) for k, v in doc.items() if k not in ("metadata", "assets", "layout", "properties")]
    return _block(top, 0, "{}") + "\n"


def serialize_layout(layout: SceneLayout) -> str:
    return dumps_document(to_document(layout))


_FENCE = re.compile(r"```[a-zA-Z0-9_-]*\s*\n(.*?)```", re.S)


def _replace_outside_strings(text: str, mapping: dict[str, str]) -> str:
    """Replace bare identifiers (``True``, ``None``...) that occur outside string literals."""
    out = []
    i = 0
    in_string = False
    n = len(text)
    while i < n:
        ch = text[i]
        if in_string:
            out.append(ch)
            if ch == "\\" and i + 1 < n:
                out.append(text[i + 1])
                i += 2
                continue
            if ch == '"':
                in_string = False
            i += 1
            continue
        if ch == '"':
            in_string = True
            out.append(ch)
            i += 1
            continue
        if ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            out.append(mapping.get(word, word))
            i = j
            continue
        out.append(ch)
        i += 1
    return "".join(out)


def _strip_trailing_commas(text: str) -> str:
    out = []
    in_string = False
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if in_string:
            out.append(ch)
            if ch == "\\" and i + 1 < n:
                out.append(text[i + 1])
                i += 2
                continue
            if ch == '"':
                in_string = False
        elif ch == '"':
            in_string = True
            out.append(ch)
        elif ch == ",":
            j = i + 1
            while j < n and text[j] in " \t\r\n":
                j += 1
            if j < n and text[j] in "}]":
                i += 1
                continue
            out.append(ch)
        else:
            out.append(ch)
        i += 1
    return "".join(out)


def repair_json_text(text: str) -> str:
    """Best-effort structural repair of model-emitted JSON.

    Strips Markdown code fences, maps Python literals to JSON, drops trailing
    commas and wraps a bare ``"key": value, ...`` body in braces.
    """
    match = _FENCE.search(text)
    if match:
        text = match.group(1)
    text = text.strip()
    text = _replace_outside_strings(text, {"True": "true", "False": "false", "None": "null"})
    text = _strip_trailing_commas(text)
    if text.startswith('"'):
        # body of an object without its opening brace
        text = "{" + text
        if text.count("{") > text.count("}"):
            text += "}"
    return text


def loads_lenient(text: str) -> SceneLayout:
    """Parse after :func:`repair_json_text`; falls back to strict errors if repair fails."""
    try:
        return parse_layout(text)
    except LayoutParseError as exc:
        if exc.line is None:
            raise
    return parse_layout(repair_json_text(text))
