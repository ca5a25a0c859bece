"""Judge adapters: fill the evaluation prompts, call a chat endpoint, parse the verdict."""

from __future__ import annotations

import base64
import json
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from ..chat import STUB_HANDLERS, ChatClient, Messages, TransportError
from ..jsonblock import extract_json_block
from ..layout import SceneLayout, dumps_document, to_document

logger = logging.getLogger(__name__)

JUDGE_METRICS = ("OPS", "OVD", "PAC", "VSA-V")
PROMPT_FILES = {"OPS": "ops.txt", "OVD": "ovd.txt", "PAC": "pac.txt", "VSA-V": "vh.txt"}
COUNT_METRICS = ("OPS", "PAC")
MAX_REPAIRS = 2
REPAIR_TEXT = "Your reply could not be parsed. Return only the JSON object described above."


@lru_cache(maxsize=None)
def prompt_template(metric: str) -> str:
    return resources.files("tilescape.data.prompts").joinpath(PROMPT_FILES[metric]).read_text(encoding="utf-8")


def stage_name(metric: str) -> str:
    return "judge_" + metric.lower().replace("-", "_")


@dataclass
class JudgeVerdict:
    metric: str
    raw: str = ""
    payload: dict | None = None
    attempts: int = 0
    failed: bool = False
    error: str = ""

    @property
    def value(self) -> float | None:
        if self.payload is None:
            return None
        return self.payload["count" if self.metric in COUNT_METRICS else "score"]

    def to_dict(self) -> dict:
        return {"metric": self.metric, "value": self.value, "payload": self.payload, "attempts": self.attempts,
                "failed": self.failed, "error": self.error, "raw": self.raw}


@dataclass
class JudgeInput:
    """What a judge sees: layout text for OPS/PAC, an image for OVD/VSA-V."""

    scene_desc: str = ""
    layout: SceneLayout | None = None
    image_png: bytes | None = None
    extra: dict = field(default_factory=dict)


def pac_data(layout: SceneLayout) -> str:
    items = [{"name": a.id, "description": a.description, "base_size": list(a.base_size),
              "visual_size": list(a.visual_size)} for a in sorted(layout.assets.values(), key=lambda a: a.id)]
    return json.dumps(items, ensure_ascii=False)


def build_messages(metric: str, item: JudgeInput) -> Messages:
    if metric not in JUDGE_METRICS:
        raise ValueError(f"unknown judge metric {metric!r}")
    template = prompt_template(metric)
    if metric == "OPS":
        if item.layout is None:
            raise ValueError("OPS needs a layout")
        text = template.format(scene_desc=item.scene_desc, design_data_str=dumps_document(to_document(item.layout)))
    elif metric == "PAC":
        if item.layout is None:
            raise ValueError("PAC needs a layout")
        text = template.format(data_str=pac_data(item.layout))
    elif metric == "OVD":
        text = template.format(scene_desc=item.scene_desc)
    else:
        text = template.format()
    if metric in ("OVD", "VSA-V"):
        if item.image_png is None:
            raise ValueError(f"{metric} needs an image")
        url = "data:image/png;base64," + base64.b64encode(item.image_png).decode("ascii")
        content = [{"type": "text", "text": text}, {"type": "image_url", "image_url": {"url": url}}]
        return [{"role": "user", "content": content}]
    return [{"role": "user", "content": text}]


def parse_verdict(metric: str, raw: str) -> dict | None:
    blob = extract_json_block(raw)
    if blob is None:
        return None
    data = json.loads(blob)
    if not isinstance(data, dict):
        return None
    if metric in COUNT_METRICS:
        count = data.get("count")
        if not isinstance(count, int) or isinstance(count, bool) or count < 0:
            return None
    else:
        score = data.get("score")
        if not isinstance(score, (int, float)) or isinstance(score, bool) or not 0 <= score <= 10:
            return None
    return data


def judge_score(metric: str, item: JudgeInput, client: ChatClient) -> JudgeVerdict:
    """Ask the judge; up to two repair turns on unparseable replies. Transport errors propagate."""
    messages = build_messages(metric, item)
    verdict = JudgeVerdict(metric)
    for attempt in range(MAX_REPAIRS + 1):
        verdict.attempts = attempt + 1
        raw = client.complete(stage_name(metric), messages)
        verdict.raw = raw
        payload = parse_verdict(metric, raw)
        if payload is not None:
            verdict.payload = payload
            return verdict
        messages = messages + [{"role": "assistant", "content": raw}, {"role": "user", "content": REPAIR_TEXT}]
    verdict.failed = True
    verdict.error = "unparseable judge reply"
    logger.warning("%s judge reply unparseable after %d attempts", metric, verdict.attempts)
    return verdict


def safe_judge(metric: str, item: JudgeInput, client: ChatClient) -> JudgeVerdict:
    """judge_score that turns transport failures into a failed verdict."""
    try:
        return judge_score(metric, item, client)
    except TransportError as exc:
        return JudgeVerdict(metric, failed=True, error=str(exc))


# offline judges: nothing unreasonable, middling scores
STUB_HANDLERS[stage_name("OPS")] = lambda m: json.dumps({"unreasonable_objects": [], "count": 0, "reason": "stub"})
STUB_HANDLERS[stage_name("PAC")] = lambda m: json.dumps({"violation_objects": [], "count": 0, "reason": "stub"})
STUB_HANDLERS[stage_name("OVD")] = lambda m: json.dumps({"score": 5, "reason": "stub"})
STUB_HANDLERS[stage_name("VSA-V")] = lambda m: json.dumps({"score": 5, "reason": "stub"})
