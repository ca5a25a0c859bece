"""Room function assignment through the chat client, with a keyword-table stub."""

from __future__ import annotations

import json
import logging
import re

from ..chat import STUB_HANDLERS, ChatClient, Messages, user_text
from ..jsonblock import extract_json_block
from .structure import StructureGrid

logger = logging.getLogger(__name__)

STAGE = "assign_functions"
TAG_RE = re.compile(r"^[a-z][a-z0-9_]{0,31}$")

# scenario keyword -> function tags handed out in order
KEYWORD_TABLE: dict[str, tuple[str, ...]] = {
    "cafe": ("kitchen", "dining", "lounge", "storage"),
    "coffee": ("kitchen", "lounge", "dining"),
    "restaurant": ("kitchen", "dining", "storage"),
    "library": ("reading", "archive", "study"),
    "office": ("study", "lounge", "storage"),
    "school": ("study", "reading", "storage"),
    "apartment": ("bedroom", "living", "kitchen", "bathroom"),
    "house": ("living", "bedroom", "kitchen", "bathroom", "study"),
    "home": ("living", "bedroom", "kitchen", "bathroom", "study"),
}
DEFAULT_TAGS = ("bedroom", "living", "kitchen", "bathroom", "study", "storage")

SYSTEM_PROMPT = (
    "You assign a functional role to each room of a building floorplan. "
    "Reply with a JSON object {\"functions\": [...]} holding one lowercase tag per room, in room order."
)


class FunctionAssignmentError(RuntimeError):
    pass


def stub_tags(scenario: str, n: int) -> list[str]:
    words = re.findall(r"[a-z]+", scenario.lower())
    pool: list[str] = []
    for word in words:
        for tag in KEYWORD_TABLE.get(word, ()):
            if tag not in pool:
                pool.append(tag)
    for tag in DEFAULT_TAGS:
        if tag not in pool:
            pool.append(tag)
    return [pool[i % len(pool)] for i in range(n)]


def _stub_handler(messages: Messages) -> str:
    request = json.loads(extract_json_block(user_text(messages)) or "{}")
    tags = stub_tags(request.get("scenario", ""), len(request.get("rooms", [])))
    return json.dumps({"functions": tags})


STUB_HANDLERS[STAGE] = _stub_handler


def _parse_tags(reply: str, n: int) -> list[str] | None:
    blob = extract_json_block(reply)
    if blob is None:
        return None
    data = json.loads(blob)
    tags = data.get("functions") if isinstance(data, dict) else None
    if not isinstance(tags, list) or len(tags) != n:
        return None
    if not all(isinstance(t, str) and TAG_RE.match(t) for t in tags):
        return None
    return tags


def assign_functions(structure: StructureGrid, scenario: str, client: ChatClient) -> StructureGrid:
    """Give every room a function tag. One repair retry on a malformed reply."""
    if not structure.rooms:
        return structure
    request = {
        "scenario": scenario,
        "rooms": [{"id": r.id, "width": r.rect[2], "height": r.rect[3]} for r in structure.rooms],
    }
    messages: Messages = [
        {"role": "system", "content": SYSTEM_PROMPT},
        {"role": "user", "content": json.dumps(request, sort_keys=True)},
    ]
    reply = client.complete(STAGE, messages)
    tags = _parse_tags(reply, len(structure.rooms))
    if tags is None:
        logger.info("malformed function tags, asking for a repair")
        messages = messages + [
            {"role": "assistant", "content": reply},
            {"role": "user", "content": f"Invalid reply. Return only {{\"functions\": [...]}} with exactly "
                                        f"{len(structure.rooms)} lowercase tags."},
        ]
        reply = client.complete(STAGE, messages)
        tags = _parse_tags(reply, len(structure.rooms))
    if tags is None:
        raise FunctionAssignmentError(f"could not parse function tags after one repair: {reply[:200]!r}")
    return structure.with_functions(tags)
