"""核心模块"""
from .config_manager import ConfigManager, config
from .errors import (MazeSimError, ConfigError, MazeError, MazeParseError, UnreachableExitError,
                     InfeasibleMazeError, GeometryError, CalibrationError, TraceError)
from .maze import Maze, WallEdge, CellIndex, Heading, parse_maze, serialize_maze, build_maze
from .maze_validator import ValidationReport, validate
from .maze_generator import generate_intermediate
from .robot import Pose, RobotSpec, NoiseModel, SensorReading, sense, step_kinematics
from .geometry import ray_cast
from .controller import ControllerParams, ControllerState, Phase, TieBreak, controller_step
from .search import CorridorGraph, CellPath, Stuck, build_graph, solve_bfs, graph_hill_climb
from .harness import (TrialConfig, TrialRecord, TraceRow, FailureMode, run_trial,
                      classify_failure, run_batch, run_sweep, calibrate_speed)
from .report import BatchReport
from .renderer import RenderStyle, render

__all__ = [
    'ConfigManager', 'config',
    'MazeSimError', 'ConfigError', 'MazeError', 'MazeParseError', 'UnreachableExitError',
    'InfeasibleMazeError', 'GeometryError', 'CalibrationError', 'TraceError',
    'Maze', 'WallEdge', 'CellIndex', 'Heading', 'parse_maze', 'serialize_maze', 'build_maze',
    'ValidationReport', 'validate', 'generate_intermediate',
    'Pose', 'RobotSpec', 'NoiseModel', 'SensorReading', 'sense', 'step_kinematics', 'ray_cast',
    'ControllerParams', 'ControllerState', 'Phase', 'TieBreak', 'controller_step',
    'CorridorGraph', 'CellPath', 'Stuck', 'build_graph', 'solve_bfs', 'graph_hill_climb',
    'TrialConfig', 'TrialRecord', 'TraceRow', 'FailureMode', 'run_trial',
    'classify_failure', 'run_batch', 'run_sweep', 'calibrate_speed',
    'BatchReport', 'RenderStyle', 'render',
]
