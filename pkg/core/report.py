"""
批量试验报告
文本表格与 JSON 两种输出，JSON 用 jsonschema 校验结构
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List

import jsonschema

from utils.helpers import dump_json, ordinal

BATCH_REPORT_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "required": ["base_seed", "trials", "successes", "success_rate", "rows"],
    "properties": {
        "base_seed": {"type": "integer", "minimum": 0},
        "trials": {"type": "integer", "minimum": 1},
        "successes": {"type": "integer", "minimum": 0},
        "success_rate": {"type": "number", "minimum": 0, "maximum": 1},
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["trial", "seed", "outcome", "reason", "at_turn_index",
                             "elapsed", "distance", "turns"],
                "properties": {
                    "trial": {"type": "integer", "minimum": 1},
                    "seed": {"type": "integer", "minimum": 0},
                    "outcome": {"enum": ["Success", "Failure"]},
                    "reason": {"enum": [None, "SensorMisread", "IncompleteTurn",
                                        "Collision", "Stuck", "Timeout"]},
                    "at_turn_index": {"type": ["integer", "null"], "minimum": 0},
                    "elapsed": {"type": "number", "minimum": 0},
                    "distance": {"type": "number", "minimum": 0},
                    "turns": {"type": "integer", "minimum": 0},
                },
            },
        },
    },
}


def result_text(record) -> str:
    """表格中的结果列，例如 "Successfully left maze" 或 "Failed at 2nd turn" """
    if record.outcome.success:
        return "Successfully left maze"
    index = record.outcome.at_turn_index or 0
    if index == 0:
        return "Failed before 1st turn"
    return f"Failed at {ordinal(index)} turn"


@dataclass
class BatchReport:
    """批量试验结果，records 按试验序号排列"""
    base_seed: int
    records: List[Any] = field(default_factory=list)

    @property
    def trials(self) -> int:
        return len(self.records)

    @property
    def successes(self) -> int:
        return sum(1 for r in self.records if r.outcome.success)

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials if self.records else 0.0

    def to_dict(self) -> Dict[str, Any]:
        rows = []
        for index, record in enumerate(self.records, start=1):
            mode = record.outcome.mode
            rows.append({
                "trial": index,
                "seed": record.seed,
                "outcome": record.outcome.name,
                "reason": mode.value if mode else None,
                "at_turn_index": record.outcome.at_turn_index,
                "elapsed": round(record.elapsed, 6),
                "distance": round(record.distance, 6),
                "turns": record.turn_count,
            })
        return {
            "base_seed": self.base_seed,
            "trials": self.trials,
            "successes": self.successes,
            "success_rate": self.success_rate,
            "rows": rows,
        }

    def to_json(self) -> str:
        data = self.to_dict()
        jsonschema.validate(data, BATCH_REPORT_SCHEMA)
        return dump_json(data)

    def to_text(self) -> str:
        header = ("No.", "Result", "Reason", "Time(s)", "Distance(cm)", "Turns")
        table = [header]
        for index, record in enumerate(self.records, start=1):
            mode = record.outcome.mode
            table.append((
                f"Trial {index}",
                result_text(record),
                mode.label if mode else "",
                f"{record.elapsed:.2f}",
                f"{record.distance:.1f}",
                str(record.turn_count),
            ))
        widths = [max(len(row[i]) for row in table) for i in range(len(header))]
        lines = [" | ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()
                 for row in table]
        lines.insert(1, "-+-".join("-" * w for w in widths))
        lines.append(f"success rate: {self.successes}/{self.trials} ({self.success_rate * 100:.1f}%)")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SweepPoint:
    """误读概率扫描的一个点"""
    misread_prob: float
    trials: int
    successes: int

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials if self.trials else 0.0


def sweep_to_text(points: List[SweepPoint]) -> str:
    lines = ["misread_prob,trials,successes,success_rate"]
    lines.extend(f"{p.misread_prob:.6f},{p.trials},{p.successes},{p.success_rate:.6f}" for p in points)
    return "\n".join(lines) + "\n"
