"""Design loop orchestration: enrich, generate, critique, refine, draw, compile."""

from .critic import Correction, CorrectionSet, critique, judge_corrections, rule_corrections
from .pipeline import (
    T_MAX,
    ArtistResult,
    GuildError,
    PipelineConfig,
    PipelineState,
    RecordingClient,
    artist,
    describe,
    enrich,
    generate_layout,
    refine,
    role_prompt,
    run_pipeline,
    transcript_jsonl,
)

__all__ = [
    "T_MAX",
    "ArtistResult",
    "Correction",
    "CorrectionSet",
    "GuildError",
    "PipelineConfig",
    "PipelineState",
    "RecordingClient",
    "artist",
    "critique",
    "describe",
    "enrich",
    "generate_layout",
    "judge_corrections",
    "refine",
    "role_prompt",
    "rule_corrections",
    "run_pipeline",
    "transcript_jsonl",
]
