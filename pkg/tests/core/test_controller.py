"""
爬山控制器状态转移测试
"""
import math

import numpy as np
import pytest

from core.controller import (STOP, ControllerParams, ControllerState, Phase, TieBreak, Turn,
                             controller_step, decide_turn, heading_snap)
from core.errors import ConfigError
from core.robot import Pose, RobotSpec, SensorReading

SPEC = RobotSpec()
PARAMS = ControllerParams()
POSE_EAST = Pose(45.0, 45.0, 0.0)


def _reading(front=100.0, left=50.0, right=50.0) -> SensorReading:
    return SensorReading(front, left, right)


@pytest.mark.controller
class TestDriveAndReverse:
    """直行与后退"""

    def test_drive_forward_when_clear(self):
        state, act = controller_step(ControllerState(), _reading(front=50.0), POSE_EAST, PARAMS, SPEC)
        assert state.phase is Phase.DRIVE_FORWARD
        assert act.v == SPEC.linear_speed
        assert act.omega == 0.0
        assert state.odometer == pytest.approx(SPEC.linear_speed * SPEC.control_period)

    def test_stop_at_front_threshold(self):
        state, act = controller_step(ControllerState(), _reading(front=10.0), POSE_EAST, PARAMS, SPEC)
        assert state.phase is Phase.REVERSING
        assert state.remaining == 5.0
        assert act == STOP

    def test_reverse_at_full_speed(self):
        start = ControllerState(phase=Phase.REVERSING, remaining=5.0)
        state, act = controller_step(start, _reading(), POSE_EAST, PARAMS, SPEC)
        step = SPEC.linear_speed * SPEC.control_period
        assert act.v == -SPEC.linear_speed
        assert state.remaining == pytest.approx(5.0 - step)
        assert state.odometer == pytest.approx(step)

    def test_last_reverse_step_is_partial(self):
        start = ControllerState(phase=Phase.REVERSING, remaining=0.5)
        state, act = controller_step(start, _reading(), POSE_EAST, PARAMS, SPEC)
        assert act.v == pytest.approx(-10.0)
        assert state.remaining == pytest.approx(0.0, abs=1e-12)

    def test_reverse_done(self):
        start = ControllerState(phase=Phase.REVERSING, remaining=0.0)
        state, act = controller_step(start, _reading(), POSE_EAST, PARAMS, SPEC)
        assert state.phase is Phase.DECIDING
        assert act == STOP


@pytest.mark.controller
class TestDeciding:
    """转向决策"""

    def test_turn_toward_larger_clearance(self):
        start = ControllerState(phase=Phase.DECIDING)
        state, act = controller_step(start, _reading(left=66.0, right=6.0), POSE_EAST, PARAMS, SPEC)
        assert state.phase is Phase.TURNING
        assert state.direction is Turn.LEFT
        assert state.target == pytest.approx(math.pi / 2)
        assert state.turn_count == 1
        assert act == STOP

    def test_right_turn_target_wraps(self):
        start = ControllerState(phase=Phase.DECIDING)
        state, _ = controller_step(start, _reading(left=6.0, right=66.0), POSE_EAST, PARAMS, SPEC)
        assert state.direction is Turn.RIGHT
        assert state.target == pytest.approx(3 * math.pi / 2)

    def test_tie_break(self):
        assert decide_turn(_reading(left=30.0, right=30.0), PARAMS) is Turn.RIGHT
        prefer_left = ControllerParams(tie_break=TieBreak.PREFER_LEFT)
        assert decide_turn(_reading(left=30.0, right=30.0), prefer_left) is Turn.LEFT

    @pytest.mark.parametrize("tie_break", list(TieBreak))
    def test_decision_ignores_common_offset(self, tie_break):
        params = ControllerParams(tie_break=tie_break)
        rng = np.random.default_rng(21)
        for _ in range(500):
            left, right = (float(v) for v in rng.integers(0, 251, size=2))
            if rng.random() < 0.2:
                right = left
            offset = float(rng.integers(1, 1000))
            assert decide_turn(_reading(left=left + offset, right=right + offset), params) is \
                decide_turn(_reading(left=left, right=right), params)

    def test_decision_margin_counts_as_tie(self):
        params = ControllerParams(decision_margin=5.0)
        assert decide_turn(_reading(left=33.0, right=30.0), params) is Turn.RIGHT
        assert decide_turn(_reading(left=36.0, right=30.0), params) is Turn.LEFT

    def test_stuck_when_both_sides_blocked(self):
        start = ControllerState(phase=Phase.DECIDING)
        state, act = controller_step(start, _reading(left=6.0, right=10.0), POSE_EAST, PARAMS, SPEC)
        assert state.phase is Phase.STUCK
        assert state.turn_count == 0
        assert act == STOP

    def test_turn_error_shortens_turn(self):
        start = ControllerState(phase=Phase.DECIDING)
        state, _ = controller_step(start, _reading(left=66.0, right=6.0), POSE_EAST, PARAMS, SPEC,
                                   turn_error=-0.2)
        assert state.target == pytest.approx(math.pi / 2 - 0.2)


@pytest.mark.controller
class TestTurning:
    """原地转向"""

    def test_rotate_at_angular_speed(self):
        start = ControllerState(phase=Phase.TURNING, target=math.pi / 2, direction=Turn.LEFT)
        state, act = controller_step(start, _reading(), POSE_EAST, PARAMS, SPEC)
        assert state.phase is Phase.TURNING
        assert act.v == 0.0
        assert act.omega == pytest.approx(SPEC.angular_speed)

    def test_last_turn_step_does_not_overshoot(self):
        start = ControllerState(phase=Phase.TURNING, target=math.pi / 2, direction=Turn.LEFT)
        pose = Pose(45.0, 45.0, math.pi / 2 - 0.05)
        _, act = controller_step(start, _reading(), pose, PARAMS, SPEC)
        assert act.omega == pytest.approx(1.0)

    def test_right_turn_across_zero(self):
        start = ControllerState(phase=Phase.TURNING, target=3 * math.pi / 2, direction=Turn.RIGHT)
        _, act = controller_step(start, _reading(), POSE_EAST, PARAMS, SPEC)
        assert act.omega == pytest.approx(-SPEC.angular_speed)

    def test_turn_done_within_tolerance(self):
        start = ControllerState(phase=Phase.TURNING, target=math.pi / 2, direction=Turn.LEFT)
        pose = Pose(45.0, 45.0, math.pi / 2 - 0.005)
        state, act = controller_step(start, _reading(), pose, PARAMS, SPEC)
        assert state.phase is Phase.DRIVE_FORWARD
        assert state.direction is None
        assert act == STOP

    @pytest.mark.parametrize("phase", [Phase.EXITED, Phase.STUCK])
    def test_terminal_phase_cannot_advance(self, phase):
        with pytest.raises(ValueError):
            controller_step(ControllerState(phase=phase), _reading(), POSE_EAST, PARAMS, SPEC)

    def test_heading_snap(self):
        assert heading_snap(1.5) == pytest.approx(math.pi / 2)
        assert heading_snap(6.2) == 0.0
        assert heading_snap(3.0) == pytest.approx(math.pi)


@pytest.mark.controller
class TestControllerParams:
    """参数校验"""

    @pytest.mark.parametrize("kwargs", [
        {'front_stop': 0.0},
        {'reverse_distance': -1.0},
        {'turn_angle': 0.0},
        {'turn_angle': 4.0},
        {'decision_margin': -1.0},
    ])
    def test_invalid_params(self, kwargs):
        with pytest.raises(ConfigError):
            ControllerParams(**kwargs)

    def test_config_defaults_match_code_defaults(self, app_config):
        assert ControllerParams.from_config(app_config.get_controller_config()) == ControllerParams()
