"""Evaluation metrics: rule-based CFR/RCS/CER and judge-proxied OPS/OVD/PAC/VSA-V."""

from .judge import JUDGE_METRICS, JudgeInput, JudgeVerdict, build_messages, judge_score, parse_verdict, prompt_template, safe_judge
from .render import OCCUPANCY_CELL_PX, occupancy_pixels, render_occupancy
from .report import MetricReport, score_layout, summary_csv
from .rules import CFR_CODES, cer, cfr, rcs, required_from_z

__all__ = [
    "CFR_CODES",
    "JUDGE_METRICS",
    "OCCUPANCY_CELL_PX",
    "JudgeInput",
    "JudgeVerdict",
    "MetricReport",
    "build_messages",
    "cer",
    "cfr",
    "judge_score",
    "occupancy_pixels",
    "parse_verdict",
    "prompt_template",
    "rcs",
    "render_occupancy",
    "required_from_z",
    "safe_judge",
    "score_layout",
    "summary_csv",
]
