"""
仿真试验测试基类
提供试验运行与常用断言
"""
import math
from typing import Any, Dict, List, Optional

from jsonschema import ValidationError, validate

from core.controller import ControllerParams
from core.harness import FailureMode, TrialConfig, TrialRecord, run_trial
from core.maze import Maze
from core.robot import NoiseModel, RobotSpec
from utils.logger import get_logger

logger = get_logger(__name__)


class TrialTestBase:
    """仿真试验测试基类"""

    def __init__(self, spec: Optional[RobotSpec] = None, params: Optional[ControllerParams] = None):
        """
        初始化

        Args:
            spec: 默认机器人参数
            params: 默认控制器参数
        """
        self.spec = spec or RobotSpec()
        self.params = params or ControllerParams()
        self.records: List[TrialRecord] = []

    def setup_method(self):
        """测试方法设置"""
        logger.debug("开始仿真测试")

    def teardown_method(self):
        """测试方法清理"""
        logger.debug(f"仿真测试结束，共运行 {len(self.records)} 次试验")
        self.records.clear()

    def make_config(self, maze: Maze, **overrides) -> TrialConfig:
        """
        构造试验配置

        Args:
            maze: 迷宫
            **overrides: TrialConfig 字段覆盖(spec, params, noise, seed, timeout)
        """
        fields: Dict[str, Any] = {'spec': self.spec, 'params': self.params, 'noise': NoiseModel(),
                                  'seed': 1, 'timeout': 300.0}
        fields.update(overrides)
        return TrialConfig(maze=maze, **fields)

    def run(self, maze: Maze, **overrides) -> TrialRecord:
        """运行一次试验并记录"""
        record = run_trial(self.make_config(maze, **overrides))
        self.records.append(record)
        logger.debug(f"试验结果: {record.summary_line()}")
        return record

    def assert_success(self, record: TrialRecord) -> None:
        assert record.outcome.success, f"试验应成功，实际: {record.summary_line()}"

    def assert_failure(self, record: TrialRecord, mode: Optional[FailureMode] = None) -> None:
        """
        断言试验失败

        Args:
            record: 试验记录
            mode: 期望的失败原因(None 表示只检查失败)
        """
        assert not record.outcome.success, "试验应失败，实际成功"
        if mode is not None:
            assert record.outcome.mode is mode, \
                f"失败原因不匹配，期望: {mode.value}，实际: {record.outcome.mode.value}"

    def assert_trace_consistent(self, record: TrialRecord) -> None:
        """t 按控制周期严格递增，里程等于各步位移之和，终止时间不超过超时"""
        dt = self.spec.control_period
        trace = record.trace
        for previous, current in zip(trace, trace[1:]):
            assert math.isclose(current.t - previous.t, dt, abs_tol=1e-9), \
                f"t 未按控制周期递增: {previous.t} -> {current.t}"
        travelled = sum(math.hypot(b.x - a.x, b.y - a.y) for a, b in zip(trace, trace[1:]))
        assert math.isclose(record.distance, travelled, abs_tol=1e-6), \
            f"里程不一致: odometer={record.distance} trace={travelled}"
        start, end = trace[0], trace[-1]
        assert record.distance >= math.hypot(end.x - start.x, end.y - start.y) - 1e-9

    def assert_json_schema(self, data: Any, schema: Dict[str, Any]) -> None:
        try:
            validate(instance=data, schema=schema)
            logger.debug("JSON schema 断言通过")
        except ValidationError as e:
            raise AssertionError(f"JSON schema 验证失败: {e.message}")
