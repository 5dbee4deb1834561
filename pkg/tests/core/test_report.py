"""
批量报告测试
"""
import json

import pytest

from core.harness import FailureMode, Outcome, Terminal, TraceRow, TrialConfig, TrialRecord, run_batch
from core.report import BATCH_REPORT_SCHEMA, BatchReport, SweepPoint, result_text, sweep_to_text


def _record(success=True, mode=None, at_turn_index=None, elapsed=37.0, turns=6):
    row = TraceRow(0.0, 15.0, 45.0, 0.0, 75.0, 6.0, 6.0, 'DriveForward', '')
    return TrialRecord(seed=11, outcome=Outcome(success=success, mode=mode, at_turn_index=at_turn_index,
                                                at_time=None if success else elapsed),
                       elapsed=elapsed, distance=435.0, turn_count=turns,
                       terminal=Terminal.EXITED if success else Terminal.COLLISION, trace=[row])


@pytest.mark.sim
class TestResultText:
    """结果列文本"""

    def test_success(self):
        assert result_text(_record()) == "Successfully left maze"

    def test_failure_before_first_turn(self):
        assert result_text(_record(False, FailureMode.STUCK, 0, turns=0)) == "Failed before 1st turn"

    @pytest.mark.parametrize("index, expected", [(1, "1st"), (2, "2nd"), (3, "3rd"), (4, "4th")])
    def test_failure_at_turn(self, index, expected):
        record = _record(False, FailureMode.COLLISION, index, turns=index)
        assert result_text(record) == f"Failed at {expected} turn"


@pytest.mark.sim
class TestBatchReport:
    """文本表格与 JSON"""

    @pytest.fixture
    def mixed_report(self):
        return BatchReport(base_seed=1, records=[
            _record(),
            _record(False, FailureMode.SENSOR_MISREAD, 2, elapsed=12.5, turns=2),
        ])

    def test_counts(self, mixed_report):
        assert mixed_report.trials == 2
        assert mixed_report.successes == 1
        assert mixed_report.success_rate == 0.5

    def test_text_table(self, mixed_report):
        lines = mixed_report.to_text().splitlines()
        assert lines[0].split(" | ")[0].strip() == "No."
        assert set(lines[1]) <= {'-', '+'}
        assert lines[2].startswith("Trial 1 ")
        assert "Successfully left maze" in lines[2]
        assert "Failed at 2nd turn" in lines[3]
        assert "Sensor misread" in lines[3]
        assert "12.50" in lines[3]
        assert lines[-1] == "success rate: 1/2 (50.0%)"

    def test_columns_aligned(self, mixed_report):
        lines = mixed_report.to_text().splitlines()[:4]
        positions = {line.index("|") for line in lines if "|" in line}
        assert len(positions) == 1

    def test_json_matches_schema(self, trial_runner, mixed_report):
        data = json.loads(mixed_report.to_json())
        trial_runner.assert_json_schema(data, BATCH_REPORT_SCHEMA)
        assert data["rows"][1]["reason"] == "SensorMisread"
        assert data["rows"][1]["at_turn_index"] == 2
        assert data["rows"][0]["reason"] is None

    def test_real_batch_json(self, trial_runner, corridor_maze):
        report = run_batch(TrialConfig(corridor_maze, seed=4), trials=3)
        data = json.loads(report.to_json())
        trial_runner.assert_json_schema(data, BATCH_REPORT_SCHEMA)
        assert data["base_seed"] == 4
        assert [row["trial"] for row in data["rows"]] == [1, 2, 3]
        assert data["success_rate"] == 1.0


@pytest.mark.sim
class TestSweepText:
    """扫描结果 CSV"""

    def test_sweep_lines(self):
        text = sweep_to_text([SweepPoint(0.0, 10, 10), SweepPoint(0.05, 10, 3)])
        assert text == ("misread_prob,trials,successes,success_rate\n"
                        "0.000000,10,10,1.000000\n"
                        "0.050000,10,3,0.300000\n")
