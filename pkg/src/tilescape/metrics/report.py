"""Per-scene metric reports and the corpus CSV summary."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from ..chat import ChatClient
from ..layout import SceneLayout, validate
from .judge import JUDGE_METRICS, JudgeInput, JudgeVerdict, safe_judge
from .render import render_occupancy
from .rules import cer, cfr, rcs

FIELD_FOR = {"OPS": "ops", "OVD": "ovd", "PAC": "pac", "VSA-V": "vsa_v"}
CSV_FIELDS = ("scene", "cfr", "rcs", "cer", "ops", "ovd", "pac", "vsa_v", "vsa_c")


@dataclass
class MetricReport:
    scene: str
    cfr: float
    rcs: float
    cer: float
    ops: float | None = None
    ovd: float | None = None
    pac: float | None = None
    vsa_v: float | None = None
    vsa_c: float | None = None  # merged from an external scorer, never computed here
    provenance: dict[str, str] = field(default_factory=dict)
    verdicts: list[JudgeVerdict] = field(default_factory=list)

    def rule_metrics(self) -> tuple[float, float, float]:
        return self.cfr, self.rcs, self.cer

    def merge_external(self, vsa_c: float) -> None:
        self.vsa_c = vsa_c
        self.provenance["vsa_c"] = "external"

    def to_dict(self) -> dict:
        return {
            "scene": self.scene,
            "metrics": {k: getattr(self, k) for k in CSV_FIELDS[1:]},
            "provenance": dict(sorted(self.provenance.items())),
            "verdicts": [v.to_dict() for v in self.verdicts],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def score_layout(layout: SceneLayout, *, required=None, scene_desc: str | None = None,
                 judge: ChatClient | None = None, metrics=JUDGE_METRICS) -> MetricReport:
    """Rule metrics always; judge metrics only when a judge client is given."""
    report = validate(layout)
    rep = MetricReport(
        scene=layout.metadata.scene_name,
        cfr=cfr(layout, report),
        rcs=rcs(layout),
        cer=cer(required or [], layout),
        provenance={"cfr": "rule", "rcs": "rule", "cer": "rule"},
    )
    desc = scene_desc if scene_desc is not None else layout.metadata.description
    for metric in JUDGE_METRICS:
        name = FIELD_FOR[metric]
        if judge is None or metric not in metrics:
            rep.provenance[name] = "skipped"
            continue
        item = JudgeInput(scene_desc=desc, layout=layout)
        if metric == "OVD":
            item.image_png = render_occupancy(layout)
        elif metric == "VSA-V":
            from ..scaffold.render import render_preview

            item.image_png = render_preview(layout)
        verdict = safe_judge(metric, item, judge)
        rep.verdicts.append(verdict)
        if verdict.failed:
            rep.provenance[name] = "skipped"
        else:
            setattr(rep, name, verdict.value)
            rep.provenance[name] = "judge"
    return rep


def summary_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for r in reports:
        row = [r.scene]
        for name in CSV_FIELDS[1:]:
            v = getattr(r, name)
            row.append("" if v is None else f"{v:.6g}")
        writer.writerow(row)
    return buf.getvalue()
