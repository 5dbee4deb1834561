"""
爬山控制器
直行，前方距离到 10cm 停下，后退 5cm，比较左右距离，向距离更大的一侧转 90°，重复直到出口。
控制器是纯状态转移函数，状态归单次试验所有。
"""
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Dict, Optional, Tuple

from core.errors import ConfigError
from core.robot import Pose, RobotSpec, SensorReading, angle_diff, normalize_angle

REVERSE_EPS = 1e-9


class TieBreak(Enum):
    """左右读数相等时的选择策略"""
    PREFER_LEFT = 'left'
    PREFER_RIGHT = 'right'


class Turn(Enum):
    LEFT = 'left'
    RIGHT = 'right'

    @property
    def sign(self) -> int:
        return 1 if self is Turn.LEFT else -1


class Phase(Enum):
    DRIVE_FORWARD = 'DriveForward'
    REVERSING = 'Reversing'
    DECIDING = 'Deciding'
    TURNING = 'Turning'
    EXITED = 'Exited'
    STUCK = 'Stuck'


@dataclass(frozen=True)
class ControllerParams:
    """控制器阈值"""
    front_stop: float = 10.0
    reverse_distance: float = 5.0
    turn_angle: float = math.pi / 2
    tie_break: TieBreak = TieBreak.PREFER_RIGHT
    decision_margin: float = 0.0
    turn_tolerance: float = math.radians(0.5)

    def __post_init__(self):
        if not self.front_stop > 0:
            raise ConfigError(f"front_stop 必须为正: {self.front_stop}")
        if self.reverse_distance < 0:
            raise ConfigError(f"reverse_distance 不能为负: {self.reverse_distance}")
        if not 0 < self.turn_angle <= math.pi:
            raise ConfigError(f"turn_angle 必须在 (0, π] 内: {self.turn_angle}")
        if self.decision_margin < 0:
            raise ConfigError(f"decision_margin 不能为负: {self.decision_margin}")
        if not self.turn_tolerance > 0:
            raise ConfigError(f"turn_tolerance 必须为正: {self.turn_tolerance}")

    @classmethod
    def from_config(cls, cfg: Dict[str, Any]) -> 'ControllerParams':
        return cls(
            front_stop=float(cfg.get('front_stop', 10.0)),
            reverse_distance=float(cfg.get('reverse_distance', 5.0)),
            turn_angle=math.radians(float(cfg.get('turn_angle_deg', 90.0))),
            tie_break=TieBreak(cfg.get('tie_break', 'right')),
            decision_margin=float(cfg.get('decision_margin', 0.0)),
            turn_tolerance=math.radians(float(cfg.get('turn_tolerance_deg', 0.5))),
        )


@dataclass(frozen=True)
class ControllerState:
    """
    有限状态机状态

    remaining 仅在 Reversing 下有意义，target/direction 仅在 Turning 下有意义。
    turn_count 只在 Deciding→Turning 时加一；odometer 单调不减，包含后退行程。
    """
    phase: Phase = Phase.DRIVE_FORWARD
    turn_count: int = 0
    odometer: float = 0.0
    remaining: float = 0.0
    target: float = 0.0
    direction: Optional[Turn] = None


@dataclass(frozen=True)
class Actuation:
    """速度指令: v cm/s(负值为后退)，omega rad/s"""
    v: float = 0.0
    omega: float = 0.0


STOP = Actuation(0.0, 0.0)


def decide_turn(reading: SensorReading, params: ControllerParams) -> Turn:
    """贪心选择: 向侧向距离更大的一侧转，相等时按策略"""
    if reading.left > reading.right + params.decision_margin:
        return Turn.LEFT
    if reading.right > reading.left + params.decision_margin:
        return Turn.RIGHT
    return Turn.LEFT if params.tie_break is TieBreak.PREFER_LEFT else Turn.RIGHT


def heading_snap(theta: float) -> float:
    """最接近的 π/2 整数倍，位于 [0, 2π)"""
    return normalize_angle(round(normalize_angle(theta) / (math.pi / 2)) * (math.pi / 2))


def controller_step(state: ControllerState, reading: SensorReading, pose: Pose,
                    params: ControllerParams, spec: RobotSpec,
                    turn_error: float = 0.0) -> Tuple[ControllerState, Actuation]:
    """
    单个控制周期的状态转移

    Args:
        state: 当前状态(不能是 Exited/Stuck)
        reading: 本周期读数
        pose: 本周期位姿
        params: 控制器参数
        spec: 机器人参数
        turn_error: 本次转向的角度误差(仅 Deciding→Turning 时使用)，转向角为 turn_angle - |turn_error|

    Returns:
        (新状态, 速度指令)；发生阶段切换的周期指令为停止
    """
    dt = spec.control_period
    phase = state.phase

    if phase in (Phase.EXITED, Phase.STUCK):
        raise ValueError(f"终止状态 {phase.value} 不能继续推进")

    if phase is Phase.DRIVE_FORWARD:
        if reading.front <= params.front_stop:
            return replace(state, phase=Phase.REVERSING, remaining=params.reverse_distance), STOP
        v = spec.linear_speed
        return replace(state, odometer=state.odometer + v * dt), Actuation(v, 0.0)

    if phase is Phase.REVERSING:
        if state.remaining <= REVERSE_EPS:
            return replace(state, phase=Phase.DECIDING, remaining=0.0), STOP
        # 最后一步只退剩余距离
        v = min(spec.linear_speed, state.remaining / dt)
        return (replace(state, remaining=state.remaining - v * dt, odometer=state.odometer + v * dt),
                Actuation(-v, 0.0))

    if phase is Phase.DECIDING:
        if reading.left <= params.front_stop and reading.right <= params.front_stop:
            return replace(state, phase=Phase.STUCK), STOP
        turn = decide_turn(reading, params)
        angle = max(params.turn_angle - abs(turn_error), 0.0)
        target = normalize_angle(pose.theta + turn.sign * angle)
        return replace(state, phase=Phase.TURNING, target=target, direction=turn,
                       turn_count=state.turn_count + 1), STOP

    # TURNING
    diff = angle_diff(state.target, pose.theta)
    if abs(diff) <= params.turn_tolerance:
        return replace(state, phase=Phase.DRIVE_FORWARD, direction=None), STOP
    # 按指令方向计算剩余角度(turn_angle = π 时 diff 的符号不可靠)
    sign = state.direction.sign if state.direction is not None else (1 if diff > 0 else -1)
    remaining = normalize_angle(sign * (state.target - pose.theta))
    omega = sign * min(spec.angular_speed, remaining / dt)
    return state, Actuation(0.0, omega)
