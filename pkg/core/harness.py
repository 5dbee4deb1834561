"""
仿真试验框架
闭环运行 控制器 × 机器人模型 × 迷宫，检测出口/碰撞/卡死/超时，按失败原因分类，输出 trace 与批量报告
"""
import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import List, Optional, Sequence

import numpy as np

from core.controller import (ControllerParams, ControllerState, Phase, controller_step,
                             heading_snap)
from core.errors import CalibrationError, ConfigError, TraceError, UnreachableExitError
from core.geometry import crossed_exit
from core.maze import Maze
from core.report import BatchReport, SweepPoint
from core.robot import (NoiseModel, Pose, RobotSpec, SensorReading, angle_diff,
                        check_collision, sense, step_kinematics)
from utils.logger import get_logger

logger = get_logger(__name__)

TRACE_COLUMNS = ('t', 'x', 'y', 'theta', 'front', 'left', 'right', 'phase', 'event')

# 判定误读导致失败的时间窗口(控制周期数)
MISREAD_WINDOW = 2


class FailureMode(Enum):
    """失败原因，优先级按声明顺序"""
    SENSOR_MISREAD = 'SensorMisread'
    INCOMPLETE_TURN = 'IncompleteTurn'
    COLLISION = 'Collision'
    STUCK = 'Stuck'
    TIMEOUT = 'Timeout'

    @property
    def label(self) -> str:
        return {
            FailureMode.SENSOR_MISREAD: 'Sensor misread',
            FailureMode.INCOMPLETE_TURN: 'Incomplete turn',
            FailureMode.COLLISION: 'Collision',
            FailureMode.STUCK: 'Stuck',
            FailureMode.TIMEOUT: 'Timeout',
        }[self]


class Terminal(Enum):
    """试验的终止原因"""
    EXITED = 'exit'
    COLLISION = 'collision'
    STUCK = 'stuck'
    TIMEOUT = 'timeout'


@dataclass(frozen=True)
class TrialConfig:
    """单次试验配置"""
    maze: Maze
    spec: RobotSpec = field(default_factory=RobotSpec)
    params: ControllerParams = field(default_factory=ControllerParams)
    noise: NoiseModel = field(default_factory=NoiseModel)
    seed: int = 1
    timeout: float = 300.0

    def __post_init__(self):
        if not self.timeout > 0:
            raise ConfigError(f"timeout 必须为正: {self.timeout}")
        if self.seed < 0:
            raise ConfigError(f"seed 不能为负: {self.seed}")
        self.spec.check_fits(self.maze)


@dataclass(frozen=True)
class TraceRow:
    """每个控制周期一行: 周期开始时的位姿、本周期读数、转移后的阶段与事件"""
    t: float
    x: float
    y: float
    theta: float
    front: float
    left: float
    right: float
    phase: str
    event: str = ''

    @property
    def events(self) -> List[str]:
        return [e for e in self.event.split(';') if e]


@dataclass(frozen=True)
class Outcome:
    """试验结果: 成功，或失败(原因、失败时的转弯序号、时间)"""
    success: bool
    mode: Optional[FailureMode] = None
    at_turn_index: Optional[int] = None
    at_time: Optional[float] = None

    @property
    def name(self) -> str:
        return 'Success' if self.success else 'Failure'


@dataclass(frozen=True)
class TrialRecord:
    """单次试验记录"""
    seed: int
    outcome: Outcome
    elapsed: float
    distance: float
    turn_count: int
    terminal: Terminal
    trace: List[TraceRow] = field(default_factory=list, compare=True)
    turn_tolerance: float = math.radians(0.5)

    def trace_csv(self) -> str:
        return write_trace_csv(self.trace)

    def summary_line(self) -> str:
        reason = self.outcome.mode.value if self.outcome.mode else '-'
        return (f"outcome={self.outcome.name} turns={self.turn_count} time={self.elapsed:.2f} "
                f"distance={self.distance:.1f} reason={reason}")


# ---- trace CSV ----

def _fmt(value: float) -> str:
    return f"{value:.6f}"


def write_trace_csv(rows: Sequence[TraceRow]) -> str:
    """trace CSV: 列固定，数值 6 位小数，LF 换行"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(TRACE_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row.t), _fmt(row.x), _fmt(row.y), _fmt(row.theta),
                         _fmt(row.front), _fmt(row.left), _fmt(row.right), row.phase, row.event])
    return buffer.getvalue()


def read_trace_csv(text: str) -> List[TraceRow]:
    """从 CSV 文本恢复 trace"""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise TraceError("trace 文件为空")
    if tuple(header) != TRACE_COLUMNS:
        raise TraceError(f"trace 列不匹配: {header}")
    rows = []
    for line_no, values in enumerate(reader, start=2):
        if len(values) != len(TRACE_COLUMNS):
            raise TraceError(f"第 {line_no} 行列数错误")
        try:
            numbers = [float(v) for v in values[:7]]
        except ValueError as e:
            raise TraceError(f"第 {line_no} 行数值错误: {e}")
        rows.append(TraceRow(*numbers, phase=values[7], event=values[8]))
    return rows


# ---- 试验 ----

_TRANSITION_EVENTS = {
    (Phase.DRIVE_FORWARD, Phase.REVERSING): 'stop',
    (Phase.TURNING, Phase.DRIVE_FORWARD): 'turn_done',
    (Phase.DECIDING, Phase.STUCK): 'stuck',
}


def run_trial(config: TrialConfig) -> TrialRecord:
    """
    运行单次闭环试验

    每个控制周期: 感知 → 控制器 → 运动学 → 出口/碰撞检查。
    终止于出口、碰撞、卡死或超时；给定种子完全确定(trace 逐字节一致)。

    Raises:
        UnreachableExitError: 迷宫出口不可达
    """
    maze, spec, params, noise = config.maze, config.spec, config.params, config.noise
    if maze.exit_cell not in maze.reachable_cells():
        raise UnreachableExitError(f"迷宫不合法: 出口 {maze.exit_cell} 不可达")

    rng = np.random.default_rng(config.seed)
    dt = spec.control_period
    max_ticks = int(math.floor(config.timeout / dt + 1e-9))
    snap = noise.is_zero

    x, y = maze.cell_center(maze.start)
    pose = Pose(x, y, maze.start_heading.angle)
    state = ControllerState()
    trace: List[TraceRow] = []
    reading: Optional[SensorReading] = None
    terminal = Terminal.TIMEOUT
    ticks = 0

    for tick in range(max_ticks):
        ticks = tick + 1
        reading = sense(maze, pose, spec, noise, rng)
        events = [f"misread:{channel}" for channel in reading.misread]

        turn_error = 0.0
        if state.phase is Phase.DECIDING and noise.turn_error_sigma > 0:
            turn_error = float(rng.normal(0.0, noise.turn_error_sigma))

        previous = state.phase
        state, actuation = controller_step(state, reading, pose, params, spec, turn_error)
        if previous is Phase.DECIDING and state.phase is Phase.TURNING:
            events.append(f"turn:{state.direction.value}")
        elif (previous, state.phase) in _TRANSITION_EVENTS:
            events.append(_TRANSITION_EVENTS[(previous, state.phase)])

        trace.append(TraceRow(tick * dt, pose.x, pose.y, pose.theta, reading.front,
                              reading.left, reading.right, state.phase.value, ';'.join(events)))

        if state.phase is Phase.STUCK:
            terminal = Terminal.STUCK
            break
        if snap and previous is Phase.TURNING and state.phase is Phase.DRIVE_FORWARD:
            pose = Pose(pose.x, pose.y, heading_snap(pose.theta))

        pose = step_kinematics(pose, actuation.v, actuation.omega, dt)
        if crossed_exit(maze, pose.x, pose.y):
            state = replace(state, phase=Phase.EXITED)
            terminal = Terminal.EXITED
            break
        if check_collision(maze, pose, spec):
            terminal = Terminal.COLLISION
            break

    elapsed = ticks * dt
    last = reading or SensorReading(0.0, 0.0, 0.0)
    trace.append(TraceRow(elapsed, pose.x, pose.y, pose.theta, last.front, last.left,
                          last.right, state.phase.value, terminal.value))

    if terminal is Terminal.EXITED:
        outcome = Outcome(success=True)
    else:
        outcome = Outcome(success=False, at_turn_index=state.turn_count, at_time=elapsed)
    record = TrialRecord(seed=config.seed, outcome=outcome, elapsed=elapsed,
                         distance=state.odometer, turn_count=state.turn_count,
                         terminal=terminal, trace=trace, turn_tolerance=params.turn_tolerance)
    if not outcome.success:
        record = replace(record, outcome=replace(outcome, mode=classify_failure(record)))

    logger.debug(f"试验 seed={config.seed}: {record.summary_line()}")
    return record


def _last_index(rows: Sequence[TraceRow], predicate) -> Optional[int]:
    for index in range(len(rows) - 1, -1, -1):
        if predicate(rows[index]):
            return index
    return None


def classify_failure(record: TrialRecord) -> FailureMode:
    """
    按优先级归类失败

    1. SensorMisread: 致错转移(终止周期、最后一次停车、最后一次转向决策)之前 2 个控制周期内出现过误读
    2. IncompleteTurn: 最后一次完成的转向航向误差超过角度容差
    3. 否则按终止原因: Collision / Stuck / Timeout

    Raises:
        ValueError: 记录是成功的
    """
    if record.outcome.success or record.terminal is Terminal.EXITED:
        raise ValueError("不能对成功的试验归类失败原因")

    # 最后一行是终止行，不对应控制周期
    rows = record.trace[:-1]
    if rows:
        faults = {len(rows) - 1}
        for marker in ('stop', 'turn:'):
            index = _last_index(rows, lambda r, m=marker: any(e.startswith(m) for e in r.events))
            if index is not None:
                faults.add(index)
        for fault in faults:
            window = rows[max(0, fault - MISREAD_WINDOW):fault + 1]
            if any(e.startswith('misread') for row in window for e in row.events):
                return FailureMode.SENSOR_MISREAD

        done = _last_index(rows, lambda r: 'turn_done' in r.events)
        if done is not None:
            theta = rows[done].theta
            if abs(angle_diff(theta, heading_snap(theta))) > record.turn_tolerance:
                return FailureMode.INCOMPLETE_TURN

    return {
        Terminal.COLLISION: FailureMode.COLLISION,
        Terminal.STUCK: FailureMode.STUCK,
        Terminal.TIMEOUT: FailureMode.TIMEOUT,
    }[record.terminal]


# ---- 批量 ----

def derive_trial_seed(seed: int, index: int) -> int:
    """
    第 index 次试验的种子

    用 numpy SeedSequence 把 (seed, index) 哈希成 64 位整数，与执行顺序无关。
    """
    state = np.random.SeedSequence(entropy=seed, spawn_key=(index,)).generate_state(1, dtype=np.uint64)
    return int(state[0])


def run_batch(config: TrialConfig, trials: int, jobs: int = 1) -> BatchReport:
    """
    批量试验

    Args:
        config: 基础配置(seed 作为派生种子的根)
        trials: 试验次数
        jobs: 并行进程数，结果始终按试验序号收集

    Returns:
        BatchReport: 每次试验的记录与成功率
    """
    if trials < 1:
        raise ConfigError(f"trials 必须至少为 1: {trials}")
    configs = [replace(config, seed=derive_trial_seed(config.seed, i)) for i in range(trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            records = list(executor.map(run_trial, configs))
    else:
        records = [run_trial(c) for c in configs]
    report = BatchReport(base_seed=config.seed, records=records)
    logger.info(f"批量试验完成: {report.successes}/{trials} 成功 (seed={config.seed}, jobs={jobs})")
    return report


def run_sweep(config: TrialConfig, misread_probs: Sequence[float], trials: int,
              jobs: int = 1) -> List[SweepPoint]:
    """误读概率扫描: 其余参数固定，逐个概率跑批量试验"""
    points = []
    for prob in misread_probs:
        noise = replace(config.noise, misread_prob=float(prob))
        report = run_batch(replace(config, noise=noise), trials, jobs)
        points.append(SweepPoint(misread_prob=float(prob), trials=trials,
                                 successes=report.successes))
        logger.info(f"misread_prob={prob}: 成功率 {report.success_rate:.3f}")
    return points


# ---- 校准 ----

def _max_safe_speed(spec: RobotSpec, params: ControllerParams) -> float:
    """
    一个控制周期内的前进量不能越过“停车距离 - 机体半径”的余量

    Raises:
        CalibrationError: 停车时机体已经贴墙或压墙，任何速度都不安全
    """
    margin = spec.sensors['front'].forward + params.front_stop - spec.body_radius
    if margin <= 0:
        raise CalibrationError(
            f"停车余量非正: 前传感器前置 {spec.sensors['front'].forward} + front_stop "
            f"{params.front_stop} - 机体半径 {spec.body_radius} = {margin:.3f} cm")
    return 0.95 * margin / spec.control_period


def calibrate_speed(maze: Maze, target_time: float, spec: Optional[RobotSpec] = None,
                    params: Optional[ControllerParams] = None, tolerance: float = 0.005,
                    max_iterations: int = 60) -> float:
    """
    二分线速度，使无噪声试验用时落在 target_time 的 tolerance 相对误差内

    Raises:
        ConfigError: target_time 不为正
        CalibrationError: 控制器在该迷宫上失败，或目标用时无法达到
    """
    if not target_time > 0:
        raise ConfigError(f"目标用时必须为正: {target_time}")
    spec = spec or RobotSpec()
    params = params or ControllerParams()
    timeout = max(300.0, 20 * target_time)

    def elapsed_at(speed: float) -> float:
        record = run_trial(TrialConfig(maze, spec.with_speed(speed), params, NoiseModel(),
                                       seed=0, timeout=timeout))
        if record.outcome.success:
            return record.elapsed
        if record.terminal is Terminal.TIMEOUT:
            return math.inf
        raise CalibrationError(
            f"控制器在速度 {speed:.4f} cm/s 下失败: {record.outcome.mode.value}")

    hi = _max_safe_speed(spec, params)
    if elapsed_at(hi) > target_time * (1 + tolerance):
        raise CalibrationError(f"最大安全速度 {hi:.3f} cm/s 下仍无法在 {target_time}s 内完成")
    lo = hi / 2
    while elapsed_at(lo) < target_time:
        lo /= 2
        if lo < 1e-3:
            raise CalibrationError(f"目标用时 {target_time}s 过长")

    speed = (lo + hi) / 2
    for iteration in range(max_iterations):
        speed = (lo + hi) / 2
        elapsed = elapsed_at(speed)
        logger.debug(f"校准第 {iteration + 1} 轮: speed={speed:.6f} elapsed={elapsed:.3f}")
        if abs(elapsed - target_time) <= tolerance * target_time:
            break
        if elapsed > target_time:
            lo = speed
        else:
            hi = speed
    logger.info(f"校准速度: {speed:.6f} cm/s (目标 {target_time}s)")
    return speed
