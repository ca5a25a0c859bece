"""The design loop: Enricher, Manager, Critic and Artist over a chat endpoint.

Every model call goes through a :class:`RecordingClient` so a run leaves a
complete JSONL transcript. In stub mode the Manager's refine step applies
the structured edits carried by rule corrections instead of asking a model.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Callable

import httpx

from ..assetlib import LibraryIndex, RetrievalQuery, bundled_library, retrieve_asset
from ..chat import STUB_HANDLERS, ChatClient, ConfigError, Messages, TransportError
from ..edits import EditConflict, apply_edits
from ..layout import LayoutParseError, SceneLayout, dumps_document, parse_layout, repair_json_text, serialize_layout, to_document, validate
from ..scaffold import SceneCompileError, compile_scene
from ..zdesc import ZGrammarError, describe_layout, parse_z
from .critic import Correction, CorrectionSet, critique

logger = logging.getLogger(__name__)

T_MAX = 4
ENRICH_REPAIRS = 2
DESCRIBE_REPAIRS = 2
MANAGER_RETRIES = 1
REFINE_ATTEMPTS = 3
STATUSES = ("clean", "max_rounds", "failed")

Critic = Callable[[SceneLayout, str], list[Correction]]


class GuildError(RuntimeError):
    """A stage gave up. ``stage`` names it for the pipeline state and the CLI."""

    def __init__(self, stage: str, message: str):
        self.stage = stage
        super().__init__(f"{stage}: {message}")


@lru_cache(maxsize=None)
def role_prompt(name: str) -> str:
    return resources.files("tilescape.data.guild").joinpath(f"{name}.txt").read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def stub_fixture(name: str) -> str:
    return resources.files("tilescape.data.stub").joinpath(name).read_text(encoding="utf-8")


STUB_HANDLERS["enrich"] = lambda m: stub_fixture("scholar_hub.z.txt")
STUB_HANDLERS["manager"] = lambda m: stub_fixture("scholar_hub.json")


class RecordingClient(ChatClient):
    """Forwards calls and keeps every prompt and reply (or error) in order."""

    def __init__(self, inner: ChatClient, log: list[dict] | None = None):
        self.inner = inner
        self.stub = inner.stub
        self.model = inner.model
        self.log = log if log is not None else []

    def complete(self, stage: str, messages: Messages) -> str:
        entry = {"seq": len(self.log), "stage": stage, "model": self.model, "messages": messages}
        self.log.append(entry)
        try:
            reply = self.inner.complete(stage, messages)
        except TransportError as exc:
            entry["error"] = str(exc)
            raise
        entry["reply"] = reply
        return reply

    def note(self, stage: str, **payload) -> None:
        """Record a step that did not call the endpoint."""
        self.log.append({"seq": len(self.log), "stage": stage, "local": True, **payload})


def transcript_jsonl(log: list[dict]) -> str:
    return "".join(json.dumps(e, sort_keys=True, ensure_ascii=False, separators=(",", ":")) + "\n" for e in log)


def _repair_turn(messages: Messages, reply: str, problem: str) -> Messages:
    return messages + [{"role": "assistant", "content": reply},
                       {"role": "user", "content": f"That reply was rejected: {problem}. Reply again in the required format."}]


def enrich(instruction: str, client: ChatClient) -> str:
    """Instruction to coordinate-free description, with up to two grammar repairs."""
    if not instruction or not instruction.strip():
        raise GuildError("enrich", "empty instruction")
    messages = [{"role": "system", "content": role_prompt("enrich")}, {"role": "user", "content": instruction.strip()}]
    problem = ""
    for _ in range(ENRICH_REPAIRS + 1):
        reply = client.complete("enrich", messages)
        try:
            parse_z(reply)
            return reply.strip() + "\n"
        except ZGrammarError as exc:
            problem = str(exc)
            messages = _repair_turn(messages, reply, problem)
    raise GuildError("enrich", f"description rejected after {ENRICH_REPAIRS} repairs: {problem}")


def _parse_reply(reply: str) -> SceneLayout:
    try:
        return parse_layout(reply)
    except LayoutParseError as first:
        repaired = repair_json_text(reply)
        if repaired == reply:
            raise first
        return parse_layout(repaired)


def generate_layout(z: str, client: ChatClient) -> SceneLayout:
    """Ground a description into a layout; structural repair, then one retry."""
    try:
        parse_z(z)
    except ZGrammarError as exc:
        raise GuildError("manager", f"invalid description: {exc}") from None
    messages = [{"role": "system", "content": role_prompt("manager")}, {"role": "user", "content": z}]
    problem = ""
    for _ in range(MANAGER_RETRIES + 1):
        reply = client.complete("manager", messages)
        try:
            return _parse_reply(reply)
        except LayoutParseError as exc:
            problem = str(exc)
            messages = _repair_turn(messages, reply, problem)
    raise GuildError("manager", f"unparseable layout: {problem}")


def refine(layout: SceneLayout, corrections: CorrectionSet, client: ChatClient) -> SceneLayout:
    """Apply a correction set: structured edits in stub mode, a model round trip otherwise."""
    if corrections.empty:
        raise ValueError("refine needs at least one correction")
    if client.stub:
        out = layout
        for n, c in enumerate(corrections.items):
            if not c.edits:
                continue
            try:
                out = apply_edits(out, c.edits)
            except EditConflict as exc:
                raise GuildError("refine", f"correction {n} ({c.code}) no longer applies: {exc}") from None
        if isinstance(client, RecordingClient):
            client.note("refine", corrections=corrections.to_dict(), applied=sum(1 for c in corrections.items if c.edits))
        return out
    numbered = "\n".join(f"{i + 1}. {text}" for i, text in enumerate(corrections.instructions()))
    messages = [
        {"role": "system", "content": role_prompt("refine")},
        {"role": "user", "content": f"Scene document:\n{dumps_document(to_document(layout))}\n\nCorrections:\n{numbered}"},
    ]
    problem = ""
    for _ in range(REFINE_ATTEMPTS):
        reply = client.complete("refine", messages)
        try:
            return _parse_reply(reply)
        except LayoutParseError as exc:
            problem = str(exc)
            messages = _repair_turn(messages, reply, problem)
    raise GuildError("refine", f"unparseable layout after {REFINE_ATTEMPTS} attempts: {problem}")


def describe(layout: SceneLayout, client: ChatClient | None = None) -> str:
    """Coordinate-free description of a clean layout (template unless a live client is given)."""
    report = validate(layout)
    if report.hard:
        raise ValueError(f"describe needs a clean layout; {len(report.hard)} hard finding(s)")
    if client is None or client.stub:
        return describe_layout(layout).render()
    messages = [{"role": "system", "content": role_prompt("describe")},
                {"role": "user", "content": dumps_document(to_document(layout))}]
    problem = ""
    for _ in range(DESCRIBE_REPAIRS + 1):
        reply = client.complete("describe", messages)
        try:
            parse_z(reply)
            return reply.strip() + "\n"
        except ZGrammarError as exc:
            problem = str(exc)
            messages = _repair_turn(messages, reply, problem)
    raise GuildError("describe", f"description rejected after {DESCRIBE_REPAIRS} repairs: {problem}")


@dataclass
class ArtistResult:
    resolution: dict[str, str | None]
    requests: list[dict]


def artist(layout: SceneLayout, library: LibraryIndex, *, image_url: str | None = None,
           out_dir: Path | None = None, timeout: float = 60.0) -> ArtistResult:
    """Retrieve a library image per asset; emit a generation request for every miss.

    Requests are only sent when ``image_url`` is set; a reply body is taken
    as PNG bytes and used in place of the placeholder.
    """
    resolution: dict[str, str | None] = {}
    requests = []
    style = layout.metadata.style_prompt
    for asset_id in sorted(layout.assets):
        asset = layout.assets[asset_id]
        path = retrieve_asset(RetrievalQuery(asset_id, asset.description, tuple(asset.visual_size)), library)
        resolution[asset_id] = str(library.resolve(path)) if path else None
        if path is None:
            prompt = f"{asset.description}. {style}".strip(". ") if style else asset.description
            requests.append({"asset_id": asset_id, "prompt": prompt, "size": list(asset.visual_size), "kind": asset.kind})
    if image_url and requests:
        if out_dir is None:
            raise ConfigError("an output directory is required to store generated images")
        gen_dir = Path(out_dir) / "generated"
        gen_dir.mkdir(parents=True, exist_ok=True)
        with httpx.Client(timeout=timeout) as http:
            for req in requests:
                try:
                    resp = http.post(image_url, json=req)
                except httpx.HTTPError as exc:
                    raise TransportError(f"image request for {req['asset_id']} failed: {exc}") from None
                if resp.status_code >= 400:
                    raise TransportError(f"image endpoint rejected {req['asset_id']}", resp.status_code)
                target = gen_dir / f"{req['asset_id']}.png"
                target.write_bytes(resp.content)
                resolution[req["asset_id"]] = str(target)
    return ArtistResult(resolution, requests)


@dataclass
class PipelineConfig:
    client: ChatClient | None
    judge: ChatClient | None = None
    t_max: int = T_MAX
    out_dir: str | Path | None = None
    library: LibraryIndex | None = None
    extra_critics: tuple[Critic, ...] = ()
    image_url: str | None = None


@dataclass
class PipelineState:
    instruction: str
    z: str = ""
    layouts: list[SceneLayout] = field(default_factory=list)
    corrections: list[CorrectionSet] = field(default_factory=list)
    round: int = 0
    status: str | None = None
    stage: str | None = None  # failing stage when status is "failed"
    error: str = ""
    transport_error: bool = False
    requests: list[dict] = field(default_factory=list)
    bundle: Path | None = None
    transcript: list[dict] = field(default_factory=list)

    @property
    def layout(self) -> SceneLayout | None:
        return self.layouts[-1] if self.layouts else None

    def transcript_hash(self) -> str:
        return hashlib.sha256(transcript_jsonl(self.transcript).encode("utf-8")).hexdigest()

    def to_dict(self) -> dict:
        rounds = []
        for t, layout in enumerate(self.layouts):
            entry = {"round": t, "hard_findings": len(validate(layout).hard)}
            if t < len(self.corrections):
                entry["corrections"] = self.corrections[t].to_dict()
            rounds.append(entry)
        return {"instruction": self.instruction, "z": self.z, "round": self.round, "status": self.status,
                "stage": self.stage, "error": self.error, "rounds": rounds,
                "bundle": "bundle" if self.bundle is not None else None,
                "transcript_sha256": self.transcript_hash()}


def _fail(state: PipelineState, stage: str, exc: Exception) -> PipelineState:
    state.status, state.stage, state.error = "failed", stage, str(exc)
    state.transport_error = isinstance(exc, TransportError)
    logger.error("pipeline failed in %s: %s", stage, exc)
    return state


def run_pipeline(instruction: str, config: PipelineConfig) -> PipelineState:
    """Run the full loop. Stage failures end in status ``failed``; a missing client raises."""
    if config.client is None:
        raise ConfigError("pipeline needs a chat client (use the stub client for offline runs)")
    if config.t_max < 0:
        raise ConfigError("t_max must be >= 0")
    state = PipelineState(instruction)
    client = RecordingClient(config.client, state.transcript)
    judge = RecordingClient(config.judge, state.transcript) if config.judge is not None else None
    out_dir = Path(config.out_dir) if config.out_dir is not None else None

    stage = "enrich"
    try:
        state.z = enrich(instruction, client)
        stage = "manager"
        layout = generate_layout(state.z, client)
        state.layouts.append(layout)
        while True:
            stage = "critic"
            cs = critique(layout, state.z, judge=judge, extra_critics=config.extra_critics)
            state.corrections.append(cs)
            if cs.empty:
                state.status = "clean"
                break
            if state.round >= config.t_max:
                state.status = "max_rounds"
                break
            stage = "refine"
            layout = refine(layout, cs, client)
            state.layouts.append(layout)
            state.round += 1
        stage = "artist"
        art = artist(layout, config.library or bundled_library(), image_url=config.image_url, out_dir=out_dir)
        state.requests = art.requests
        if out_dir is not None:
            stage = "scaffold"
            state.bundle = compile_scene(layout, art.resolution, out_dir / "bundle", force=state.status != "clean")
    except GuildError as exc:
        _fail(state, exc.stage, exc)
    except (TransportError, ZGrammarError, LayoutParseError, EditConflict, SceneCompileError, ConfigError, OSError) as exc:
        _fail(state, stage, exc)
    if out_dir is not None:
        write_outputs(state, out_dir)
    return state


def write_outputs(state: PipelineState, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "z.txt").write_text(state.z, encoding="utf-8")
    if state.layout is not None:
        (out_dir / "layout.json").write_text(serialize_layout(state.layout), encoding="utf-8")
    (out_dir / "requests.json").write_text(json.dumps(state.requests, sort_keys=True, indent=1) + "\n", encoding="utf-8")
    (out_dir / "transcript.jsonl").write_text(transcript_jsonl(state.transcript), encoding="utf-8")
    (out_dir / "state.json").write_text(json.dumps(state.to_dict(), sort_keys=True, indent=1) + "\n", encoding="utf-8")
