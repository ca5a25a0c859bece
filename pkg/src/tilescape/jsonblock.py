"""Locate the first well-formed JSON object embedded in free text."""

from __future__ import annotations

import json


def extract_json_block(text: str) -> str | None:
    """Return the first balanced ``{...}`` span of ``text`` that parses as JSON."""
    decoder = json.JSONDecoder()
    start = text.find("{")
    while start != -1:
        try:
            _, end = decoder.raw_decode(text, start)
            return text[start:end]
        except ValueError:
            start = text.find("{", start + 1)
    return None
