#!/usr/bin/env python
"""
迷宫仿真命令行工具
maze validate|solve|generate, sim run|batch|calibrate|sweep, render

退出码: 0 成功, 1 试验或校验失败, 2 用法/解析错误, 130 用户中断
"""
import argparse
import sys
from pathlib import Path
from typing import List, Optional

# 添加项目根目录到路径
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from core.config_manager import config
from core.controller import ControllerParams, TieBreak
from core.errors import MazeSimError
from core.harness import (TrialConfig, calibrate_speed, read_trace_csv, run_batch, run_sweep,
                          run_trial)
from core.maze import Maze, parse_maze, serialize_maze
from core.maze_generator import generate_intermediate
from core.maze_validator import validate
from core.renderer import RenderStyle, render
from core.report import sweep_to_text
from core.robot import NoiseModel, RobotSpec
from core.search import Stuck, build_graph, graph_hill_climb, solve_bfs
from utils.helpers import dump_json, load_text, save_text
from utils.logger import Logger, get_logger

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_INTERRUPTED = 130


def _load_maze(path: str) -> Maze:
    return parse_maze(load_text(path), wall_height=float(config.get('maze.wall_height', 15.0)))


def _emit(text: str, output: Optional[str]) -> None:
    """写文件或输出到标准输出"""
    if output:
        save_text(text, output)
        logger.info(f"已写出: {output}")
    else:
        sys.stdout.write(text)


def _parse_probs(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(',') if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"概率列表格式错误: {text}")


def _parse_show(text: str) -> List[str]:
    return [item.strip() for item in text.split(',') if item.strip()]


def build_trial_config(maze: Maze, args: argparse.Namespace) -> TrialConfig:
    """
    合并配置: 命令行参数 > config.yaml > 代码默认值

    Args:
        maze: 迷宫
        args: 解析后的命令行参数

    Returns:
        TrialConfig: 试验配置
    """
    spec = RobotSpec.from_config(config.get_robot_config())
    if args.speed is not None:
        spec = spec.with_speed(args.speed)

    controller_cfg = dict(config.get_controller_config())
    if args.front_stop is not None:
        controller_cfg['front_stop'] = args.front_stop
    if args.reverse is not None:
        controller_cfg['reverse_distance'] = args.reverse
    if args.tie_break is not None:
        controller_cfg['tie_break'] = args.tie_break
    params = ControllerParams.from_config(controller_cfg)

    noise_cfg = dict(config.get_noise_config())
    if args.noise_sigma is not None:
        noise_cfg['gaussian_sigma'] = args.noise_sigma
    if args.misread_prob is not None:
        noise_cfg['misread_prob'] = args.misread_prob
    if args.turn_sigma is not None:
        noise_cfg['turn_error_sigma_deg'] = args.turn_sigma
    noise = NoiseModel.from_config(noise_cfg)

    sim_cfg = config.get_simulation_config()
    seed = args.seed if args.seed is not None else int(sim_cfg.get('seed', 1))
    timeout = args.timeout if args.timeout is not None else float(sim_cfg.get('timeout', 300.0))
    return TrialConfig(maze=maze, spec=spec, params=params, noise=noise, seed=seed, timeout=timeout)


# ---- maze ----

def cmd_validate(args: argparse.Namespace) -> int:
    report = validate(_load_maze(args.maze_file))
    sys.stdout.write(report.to_text())
    return EXIT_OK if report.ok else EXIT_FAILURE


def cmd_solve(args: argparse.Namespace) -> int:
    maze = _load_maze(args.maze_file)
    graph = build_graph(maze)
    if args.method == 'bfs':
        result = solve_bfs(graph)
    else:
        tie_break = TieBreak(args.tie_break or config.get('controller.tie_break', 'right'))
        result = graph_hill_climb(graph, maze, tie_break)
    if isinstance(result, Stuck):
        logger.warning(f"爬山在格 {result.at} 处受阻")
        sys.stdout.write(f"stuck at {result.at}\n")
        return EXIT_FAILURE
    if args.format == 'json':
        sys.stdout.write(dump_json(result.to_json()))
    else:
        sys.stdout.write(' '.join(str(cell) for cell in result.cells) + '\n')
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    seed = args.seed if args.seed is not None else int(config.get('simulation.seed', 1))
    maze = generate_intermediate(args.cols, args.rows, args.turns, seed,
                                 cell_size=float(config.get('maze.cell_size', 30.0)))
    _emit(serialize_maze(maze), args.output)
    return EXIT_OK


# ---- sim ----

def cmd_run(args: argparse.Namespace) -> int:
    maze = _load_maze(args.maze_file)
    trial_config = build_trial_config(maze, args)
    record = run_trial(trial_config)
    if args.trace:
        save_text(record.trace_csv(), args.trace)
        logger.info(f"trace 已写出: {args.trace}")
    if args.render:
        style_cfg = dict(config.get_render_config())
        style_cfg['format'] = args.format or ('ascii' if args.render.endswith('.txt') else 'svg')
        save_text(render(maze, record.trace, RenderStyle.from_config(style_cfg), trial_config.spec),
                  args.render)
        logger.info(f"渲染已写出: {args.render}")
    sys.stdout.write(record.summary_line() + '\n')
    return EXIT_OK if record.outcome.success else EXIT_FAILURE


def cmd_batch(args: argparse.Namespace) -> int:
    maze = _load_maze(args.maze_file)
    trial_config = build_trial_config(maze, args)
    sim_cfg = config.get_simulation_config()
    trials = args.trials if args.trials is not None else int(sim_cfg.get('trials', 4))
    jobs = args.jobs if args.jobs is not None else int(sim_cfg.get('jobs', 1))
    report = run_batch(trial_config, trials, jobs)
    _emit(report.to_json() if args.format == 'json' else report.to_text(), args.output)
    return EXIT_OK


def cmd_calibrate(args: argparse.Namespace) -> int:
    maze = _load_maze(args.maze_file)
    trial_config = build_trial_config(maze, args)
    target = args.target if args.target is not None else float(
        config.get('simulation.calibration_target', 37.0))
    speed = calibrate_speed(maze, target, trial_config.spec, trial_config.params)
    sys.stdout.write(f"linear_speed={speed:.6f}\n")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    maze = _load_maze(args.maze_file)
    trial_config = build_trial_config(maze, args)
    jobs = args.jobs if args.jobs is not None else int(config.get('simulation.jobs', 1))
    points = run_sweep(trial_config, args.misread_probs, args.trials, jobs)
    _emit(sweep_to_text(points), args.output)
    return EXIT_OK


# ---- render ----

def cmd_render(args: argparse.Namespace) -> int:
    maze = _load_maze(args.maze_file)
    trace = read_trace_csv(load_text(args.trace_csv))
    style_cfg = dict(config.get_render_config())
    if args.format is not None:
        style_cfg['format'] = args.format
    if args.scale is not None:
        style_cfg['scale'] = args.scale
    if args.show is not None:
        style_cfg['show'] = args.show
    _emit(render(maze, trace, RenderStyle.from_config(style_cfg)), args.output)
    return EXIT_OK


def _add_trial_flags(parser: argparse.ArgumentParser) -> None:
    """单次/批量试验共用的参数(角度单位为度)"""
    parser.add_argument('maze_file', help='迷宫文件路径')
    parser.add_argument('--seed', type=int, default=None, help='随机种子(非负整数)')
    parser.add_argument('--noise-sigma', type=float, default=None, metavar='CM', help='读数高斯噪声标准差')
    parser.add_argument('--misread-prob', type=float, default=None, metavar='P', help='每通道误读概率')
    parser.add_argument('--turn-sigma', type=float, default=None, metavar='DEG', help='转向误差标准差')
    parser.add_argument('--speed', type=float, default=None, metavar='CM/S', help='线速度')
    parser.add_argument('--timeout', type=float, default=None, metavar='S', help='超时')
    parser.add_argument('--tie-break', choices=['left', 'right'], default=None, help='左右相等时的选择')
    parser.add_argument('--front-stop', type=float, default=None, metavar='CM', help='前方停止距离(默认 10)')
    parser.add_argument('--reverse', type=float, default=None, metavar='CM', help='后退距离(默认 5)')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='maze_sim',
        description='迷宫避障机器人仿真器 - 迷宫校验/求解/生成、闭环试验、批量统计、轨迹渲染'
    )
    parser.add_argument('--log-level', default=None, help='日志级别(DEBUG, INFO, WARNING, ERROR)')
    groups = parser.add_subparsers(dest='group', required=True)

    # maze
    maze_parser = groups.add_parser('maze', help='迷宫操作')
    maze_cmds = maze_parser.add_subparsers(dest='command', required=True)

    p = maze_cmds.add_parser('validate', help='校验迷宫')
    p.add_argument('maze_file', help='迷宫文件路径')
    p.set_defaults(func=cmd_validate)

    p = maze_cmds.add_parser('solve', help='求解迷宫路径')
    p.add_argument('maze_file', help='迷宫文件路径')
    p.add_argument('--method', choices=['bfs', 'hill'], default='bfs', help='求解方法')
    p.add_argument('--tie-break', choices=['left', 'right'], default=None, help='爬山平局策略')
    p.add_argument('--format', choices=['json', 'text'], default='json', help='输出格式')
    p.set_defaults(func=cmd_solve)

    p = maze_cmds.add_parser('generate', help='生成中级迷宫')
    p.add_argument('--cols', type=int, default=8, help='列数')
    p.add_argument('--rows', type=int, default=4, help='行数')
    p.add_argument('--turns', type=int, default=6, help='拐角数')
    p.add_argument('--seed', type=int, default=None, help='随机种子')
    p.add_argument('-o', '--output', default=None, help='输出文件(默认标准输出)')
    p.set_defaults(func=cmd_generate)

    # sim
    sim_parser = groups.add_parser('sim', help='仿真试验')
    sim_cmds = sim_parser.add_subparsers(dest='command', required=True)

    p = sim_cmds.add_parser('run', help='单次试验')
    _add_trial_flags(p)
    p.add_argument('--trace', default=None, help='trace CSV 输出路径')
    p.add_argument('--render', default=None, help='渲染输出路径')
    p.add_argument('--format', choices=['svg', 'ascii'], default=None,
                   help='渲染格式(缺省时按 --render 扩展名: .txt 为 ascii，其余为 svg)')
    p.set_defaults(func=cmd_run)

    p = sim_cmds.add_parser('batch', help='批量试验')
    _add_trial_flags(p)
    p.add_argument('--trials', type=int, default=None, help='试验次数')
    p.add_argument('--jobs', type=int, default=None, metavar='N', help='并行进程数')
    p.add_argument('--format', choices=['text', 'json'], default='text', help='报告格式')
    p.add_argument('-o', '--output', default=None, help='输出文件(默认标准输出)')
    p.set_defaults(func=cmd_batch)

    p = sim_cmds.add_parser('calibrate', help='按目标用时校准线速度')
    _add_trial_flags(p)
    p.add_argument('--target', type=float, default=None, metavar='S', help='目标用时(默认 37)')
    p.set_defaults(func=cmd_calibrate)

    p = sim_cmds.add_parser('sweep', help='误读概率扫描')
    _add_trial_flags(p)
    p.add_argument('--misread-probs', type=_parse_probs, default=[0.0, 0.001, 0.01, 0.05],
                   help='逗号分隔的误读概率')
    p.add_argument('--trials', type=int, default=200, help='每个概率的试验次数')
    p.add_argument('--jobs', type=int, default=None, metavar='N', help='并行进程数')
    p.add_argument('-o', '--output', default=None, help='输出文件(默认标准输出)')
    p.set_defaults(func=cmd_sweep)

    # render
    p = groups.add_parser('render', help='渲染 trace')
    p.add_argument('trace_csv', help='trace CSV 路径')
    p.add_argument('maze_file', help='迷宫文件路径')
    p.add_argument('--format', choices=['svg', 'ascii'], default=None, help='渲染格式')
    p.add_argument('--scale', type=float, default=None, help='每厘米像素数(svg)')
    p.add_argument('--show', type=_parse_show, default=None, help='叠加层: path,sensor_rays,phases')
    p.add_argument('-o', '--output', default=None, help='输出文件(默认标准输出)')
    p.set_defaults(func=cmd_render)

    return parser


def _configure_logging(level: Optional[str]) -> None:
    log_cfg = config.get_logging_config()
    Logger.configure(
        level=level or log_cfg.get('level', 'INFO'),
        log_file=log_cfg.get('file'),
        fmt=log_cfg.get('format', '%(asctime)s - %(name)s - %(levelname)s - %(message)s'),
        max_bytes=int(log_cfg.get('max_bytes', 10485760)),
        backup_count=int(log_cfg.get('backup_count', 5)),
    )


def main(argv: Optional[List[str]] = None) -> int:
    """主函数，返回退出码"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse 的用法错误为 2，--help 为 0
        return int(e.code or 0)

    _configure_logging(args.log_level)
    try:
        return args.func(args)
    except KeyboardInterrupt:
        logger.warning("⚠️  被用户中断")
        return EXIT_INTERRUPTED
    except (MazeSimError, OSError) as e:
        logger.error(f"❌ {e}")
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
