"""
机器人模型
连续位姿、物理/传感器几何、超声波感知与噪声、独轮车运动学
"""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, NamedTuple, Tuple

import numpy as np

from core.errors import ConfigError
from core.geometry import check_collision as _check_collision
from core.geometry import crossed_exit, ray_cast
from core.maze import Maze

TWO_PI = 2 * math.pi
CHANNELS = ('front', 'left', 'right')


def normalize_angle(theta: float) -> float:
    """归一化到 [0, 2π)"""
    theta = math.fmod(theta, TWO_PI)
    if theta < 0:
        theta += TWO_PI
    if theta >= TWO_PI:
        theta = 0.0
    return theta


def angle_diff(target: float, current: float) -> float:
    """target - current，折算到 (-π, π]"""
    diff = math.fmod(target - current, TWO_PI)
    if diff <= -math.pi:
        diff += TWO_PI
    elif diff > math.pi:
        diff -= TWO_PI
    return diff


@dataclass(frozen=True)
class Pose:
    """平面位姿: x, y (cm)，theta (rad，东为 0，逆时针为正)"""
    x: float
    y: float
    theta: float

    def __post_init__(self):
        object.__setattr__(self, 'theta', normalize_angle(self.theta))


class SensorMount(NamedTuple):
    """传感器安装: 机体坐标系中的前向/左向偏移(cm)与射线相对航向角(rad)"""
    forward: float
    lateral: float
    angle: float


def default_mounts(body_radius: float) -> Dict[str, SensorMount]:
    """前传感器在中心，侧传感器在机体边缘"""
    return {
        'front': SensorMount(0.0, 0.0, 0.0),
        'left': SensorMount(0.0, body_radius, math.pi / 2),
        'right': SensorMount(0.0, -body_radius, -math.pi / 2),
    }


@dataclass(frozen=True)
class RobotSpec:
    """机器人物理与传感器几何"""
    body_radius: float = 9.0
    max_range: float = 250.0
    linear_speed: float = 14.6
    angular_speed: float = math.pi / 2
    control_period: float = 0.05
    sensors: Dict[str, SensorMount] = field(default=None, compare=True, hash=False)

    def __post_init__(self):
        if self.sensors is None:
            object.__setattr__(self, 'sensors', default_mounts(self.body_radius))
        if not self.body_radius > 0:
            raise ConfigError(f"body_radius 必须为正: {self.body_radius}")
        if not self.max_range > self.body_radius:
            raise ConfigError(f"max_range({self.max_range}) 必须大于 body_radius({self.body_radius})")
        if not self.control_period > 0:
            raise ConfigError(f"control_period 必须为正: {self.control_period}")
        if not self.linear_speed > 0:
            raise ConfigError(f"linear_speed 必须为正: {self.linear_speed}")
        if not self.angular_speed > 0:
            raise ConfigError(f"angular_speed 必须为正: {self.angular_speed}")
        missing = set(CHANNELS) - set(self.sensors)
        if missing:
            raise ConfigError(f"缺少传感器: {sorted(missing)}")

    def check_fits(self, maze: Maze) -> None:
        """机器人必须能放进走廊: 2·r < cell_size"""
        if not 2 * self.body_radius < maze.cell_size:
            raise ConfigError(f"机体直径 {2 * self.body_radius} 不小于走廊宽度 {maze.cell_size}")

    def with_speed(self, linear_speed: float) -> 'RobotSpec':
        return RobotSpec(self.body_radius, self.max_range, linear_speed,
                         self.angular_speed, self.control_period, dict(self.sensors))

    @classmethod
    def from_config(cls, cfg: Dict[str, Any]) -> 'RobotSpec':
        """由配置字典(config.yaml 的 robot 节)构造"""
        radius = float(cfg.get('body_radius', 9.0))
        sensors = default_mounts(radius)
        for name, values in (cfg.get('sensors') or {}).items():
            forward, lateral, angle_deg = values
            if lateral is None:
                lateral = sensors[name].lateral
            sensors[name] = SensorMount(float(forward), float(lateral), math.radians(float(angle_deg)))
        return cls(
            body_radius=radius,
            max_range=float(cfg.get('max_range', 250.0)),
            linear_speed=float(cfg.get('linear_speed', 14.6)),
            angular_speed=float(cfg.get('angular_speed', math.pi / 2)),
            control_period=float(cfg.get('control_period', 0.05)),
            sensors=sensors,
        )


@dataclass(frozen=True)
class NoiseModel:
    """
    噪声模型

    gaussian_sigma: 读数高斯噪声标准差 cm
    misread_prob: 每个通道每次读数被 [0, max_range] 均匀样本替换的概率
    turn_error_sigma: 每次转向的角度误差标准差 rad，转向以 turn_angle - |误差| 完成
    """
    gaussian_sigma: float = 0.0
    misread_prob: float = 0.0
    turn_error_sigma: float = 0.0

    def __post_init__(self):
        if min(self.gaussian_sigma, self.misread_prob, self.turn_error_sigma) < 0:
            raise ConfigError("噪声参数不能为负")
        if self.misread_prob > 1:
            raise ConfigError(f"misread_prob 不能大于 1: {self.misread_prob}")

    @property
    def is_zero(self) -> bool:
        return self.gaussian_sigma == 0 and self.misread_prob == 0 and self.turn_error_sigma == 0

    @classmethod
    def from_config(cls, cfg: Dict[str, Any]) -> 'NoiseModel':
        return cls(
            gaussian_sigma=float(cfg.get('gaussian_sigma', 0.0)),
            misread_prob=float(cfg.get('misread_prob', 0.0)),
            turn_error_sigma=math.radians(float(cfg.get('turn_error_sigma_deg', 0.0))),
        )


@dataclass(frozen=True)
class SensorReading:
    """一次控制周期的三路超声波读数 cm；misread 记录被误读替换的通道"""
    front: float
    left: float
    right: float
    misread: Tuple[str, ...] = ()


def sensor_origin(pose: Pose, mount: SensorMount) -> Tuple[Tuple[float, float], Tuple[float, float]]:
    """传感器在板坐标系中的安装点与射线方向"""
    cos_t, sin_t = math.cos(pose.theta), math.sin(pose.theta)
    origin = (pose.x + mount.forward * cos_t - mount.lateral * sin_t,
              pose.y + mount.forward * sin_t + mount.lateral * cos_t)
    ray = pose.theta + mount.angle
    return origin, (math.cos(ray), math.sin(ray))


def _past_exit(maze: Maze, point: Tuple[float, float]) -> bool:
    """安装点已穿过出口边(机体中心仍在板内时，侧向安装点可能先出板)"""
    x, y = point
    inside = 0 < x < maze.width and 0 < y < maze.height
    return not inside and crossed_exit(maze, x, y)


def sense(maze: Maze, pose: Pose, spec: RobotSpec, noise: NoiseModel,
          rng: np.random.Generator) -> SensorReading:
    """
    读取三路超声波

    每个通道依次: 射线距离 + 高斯噪声，钳制到 [0, max_range]，再以 misread_prob 概率替换为均匀样本。
    随机数抽取顺序固定(front, left, right)，给定 rng 状态结果确定；噪声全零时不消耗随机数。
    安装点已穿过出口边的通道按 max_range 计。
    """
    values = {}
    misread = []
    for channel in CHANNELS:
        origin, direction = sensor_origin(pose, spec.sensors[channel])
        if _past_exit(maze, origin):
            distance = spec.max_range
        else:
            distance = ray_cast(maze, origin, direction)
        if noise.gaussian_sigma > 0:
            distance += float(rng.normal(0.0, noise.gaussian_sigma))
        distance = min(max(distance, 0.0), spec.max_range)
        if noise.misread_prob > 0 and float(rng.random()) < noise.misread_prob:
            distance = float(rng.uniform(0.0, spec.max_range))
            misread.append(channel)
        values[channel] = distance
    return SensorReading(values['front'], values['left'], values['right'], tuple(misread))


def step_kinematics(pose: Pose, v: float, omega: float, dt: float) -> Pose:
    """
    独轮车模型的精确圆弧积分

    |omega| < 1e-9 时直线前进 v·dt；否则转弯半径 v/omega 的闭式圆弧。
    """
    if not dt > 0:
        raise ConfigError(f"dt 必须为正: {dt}")
    theta = pose.theta
    if abs(omega) < 1e-9:
        return Pose(pose.x + v * dt * math.cos(theta), pose.y + v * dt * math.sin(theta), theta)
    radius = v / omega
    theta_next = theta + omega * dt
    return Pose(pose.x + radius * (math.sin(theta_next) - math.sin(theta)),
                pose.y - radius * (math.cos(theta_next) - math.cos(theta)),
                theta_next)


def check_collision(maze: Maze, pose: Pose, spec: RobotSpec) -> bool:
    """圆形机体是否碰墙或从出口以外离开板"""
    return _check_collision(maze, pose.x, pose.y, spec.body_radius)
