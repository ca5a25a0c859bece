"""Chaos Monkey corruption plus Dataset A/B emission."""

from .chaos import (
    KIND_LEVEL,
    LEVEL_KINDS,
    LEVEL_WEIGHTS,
    CorrectionConflict,
    CorruptionError,
    CorruptionOp,
    CorruptionRecord,
    OpDetection,
    apply_corrections,
    compass,
    corrupt,
    detectability_report,
    sample_level,
)
from .datasets import (
    DENSITIES,
    GoldenEntry,
    ReviewItem,
    dataset_a_records,
    emit_dataset_a,
    emit_dataset_b,
    export_review_queue,
    simulate_instruction,
)

__all__ = [
    "DENSITIES",
    "GoldenEntry",
    "ReviewItem",
    "dataset_a_records",
    "emit_dataset_a",
    "emit_dataset_b",
    "export_review_queue",
    "simulate_instruction",
    "KIND_LEVEL",
    "LEVEL_KINDS",
    "LEVEL_WEIGHTS",
    "CorrectionConflict",
    "CorruptionError",
    "CorruptionOp",
    "CorruptionRecord",
    "OpDetection",
    "apply_corrections",
    "compass",
    "corrupt",
    "detectability_report",
    "sample_level",
]
