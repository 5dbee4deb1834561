"""
轨迹渲染
把迷宫与 trace 画成 SVG 或 ASCII；相同输入输出字节完全一致
"""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, List, Optional, Sequence

from core.errors import ConfigError, TraceError
from core.harness import TraceRow
from core.maze import CellIndex, Maze, serialize_maze
from core.robot import CHANNELS, Pose, RobotSpec, sensor_origin

SHOW_FLAGS = frozenset({'path', 'sensor_rays', 'phases'})
RENDER_FORMATS = ('svg', 'ascii')

MARGIN_PX = 10.0
START_TOLERANCE = 1e-6


@dataclass(frozen=True)
class RenderStyle:
    """渲染样式: format 为 svg 或 ascii，scale 为每厘米像素数(仅 svg)，show 为叠加层"""
    format: str = 'svg'
    scale: float = 2.0
    show: FrozenSet[str] = field(default_factory=lambda: frozenset({'path'}))

    def __post_init__(self):
        if self.format not in RENDER_FORMATS:
            raise ConfigError(f"不支持的渲染格式: {self.format}")
        if not self.scale > 0:
            raise ConfigError(f"scale 必须为正: {self.scale}")
        object.__setattr__(self, 'show', frozenset(self.show))
        unknown = self.show - SHOW_FLAGS
        if unknown:
            raise ConfigError(f"未知的叠加层: {sorted(unknown)}")

    @classmethod
    def from_config(cls, cfg: Dict[str, Any]) -> 'RenderStyle':
        return cls(
            format=cfg.get('format', 'svg'),
            scale=float(cfg.get('scale', 2.0)),
            show=frozenset(cfg.get('show') or ['path']),
        )


class SvgBuilder:
    """按顺序拼接 SVG 元素，数值统一保留两位小数"""

    def __init__(self, width: float, height: float):
        self.svg = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.2f}" '
            f'height="{height:.2f}" viewBox="0 0 {width:.2f} {height:.2f}">\n'
        )

    def group_start(self, css_class: str) -> None:
        self.svg += f'<g class="{css_class}">\n'

    def group_end(self) -> None:
        self.svg += '</g>\n'

    def line(self, x1, y1, x2, y2, css_class: str, stroke: str, width: float = 1.0) -> None:
        self.svg += (f'<line class="{css_class}" x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" '
                     f'y2="{y2:.2f}" stroke="{stroke}" stroke-width="{width:.2f}"/>\n')

    def polyline(self, points, css_class: str, stroke: str) -> None:
        coords = ' '.join(f'{x:.2f},{y:.2f}' for x, y in points)
        self.svg += (f'<polyline class="{css_class}" points="{coords}" fill="none" '
                     f'stroke="{stroke}" stroke-width="1.50"/>\n')

    def circle(self, x, y, r, css_class: str, fill: str) -> None:
        self.svg += f'<circle class="{css_class}" cx="{x:.2f}" cy="{y:.2f}" r="{r:.2f}" fill="{fill}"/>\n'

    def get_svg(self) -> str:
        return f"{self.svg}</svg>\n"


def check_trace_fits(maze: Maze, trace: Sequence[TraceRow]) -> None:
    """
    trace 必须是在这个迷宫里跑出来的: 第一行位于起点格中心，位置落在迷宫板内
    (最后一行可以越过出口，允许一个格的余量)，依次经过的格两两连通

    Raises:
        TraceError: trace 与迷宫不匹配
    """
    if not trace:
        return
    start_x, start_y = maze.cell_center(maze.start)
    first = trace[0]
    if abs(first.x - start_x) > START_TOLERANCE or abs(first.y - start_y) > START_TOLERANCE:
        raise TraceError(
            f"trace 第 1 行位置 ({first.x:.2f}, {first.y:.2f}) 不是起点格 {maze.start} 的中心 "
            f"({start_x:.2f}, {start_y:.2f})")
    slack = maze.cell_size
    for index, row in enumerate(trace):
        if not (-slack <= row.x <= maze.width + slack and -slack <= row.y <= maze.height + slack):
            raise TraceError(
                f"trace 第 {index + 1} 行位置 ({row.x:.2f}, {row.y:.2f}) 超出 "
                f"{maze.cols}x{maze.rows} 迷宫范围")
        if index < len(trace) - 1 and maze.cell_of(row.x, row.y) is None:
            raise TraceError(f"trace 第 {index + 1} 行位置 ({row.x:.2f}, {row.y:.2f}) 不在迷宫格内")
    cells = visited_cells(maze, trace)
    for here, there in zip(cells, cells[1:]):
        if not _connected(maze, here, there):
            raise TraceError(f"trace 从格 {here} 直接到达格 {there}，两格在迷宫中不连通")


def _connected(maze: Maze, here: CellIndex, there: CellIndex) -> bool:
    """相邻且连通；一个周期内斜跨格角时，两条折线中任一条连通即可"""
    if there in maze.open_neighbors(here):
        return True
    if abs(here.col - there.col) == 1 and abs(here.row - there.row) == 1:
        corners = (CellIndex(there.col, here.row), CellIndex(here.col, there.row))
        return any(mid in maze.open_neighbors(here) and there in maze.open_neighbors(mid)
                   for mid in corners)
    return False


def visited_cells(maze: Maze, trace: Sequence[TraceRow]) -> List:
    """trace 依次经过的格(相邻重复合并)"""
    cells = []
    for row in trace:
        cell = maze.cell_of(row.x, row.y)
        if cell is not None and (not cells or cells[-1] != cell):
            cells.append(cell)
    return cells


def render_svg(maze: Maze, trace: Sequence[TraceRow], style: RenderStyle,
               spec: Optional[RobotSpec] = None) -> str:
    scale = style.scale
    width = maze.width * scale + 2 * MARGIN_PX
    height = maze.height * scale + 2 * MARGIN_PX

    def to_px(x: float, y: float):
        # 板坐标 y 向上，SVG y 向下
        return MARGIN_PX + x * scale, MARGIN_PX + (maze.height - y) * scale

    svg = SvgBuilder(width, height)
    svg.group_start('walls')
    for wall in sorted(maze.walls):
        (x1, y1), (x2, y2) = wall.segment(maze.cell_size)
        svg.line(*to_px(x1, y1), *to_px(x2, y2), 'wall', '#000000', 2.0)
    svg.group_end()

    (x1, y1), (x2, y2) = maze.exit.segment(maze.cell_size)
    svg.line(*to_px(x1, y1), *to_px(x2, y2), 'exit', '#2ca02c', 2.0)
    sx, sy = to_px(*maze.cell_center(maze.start))
    svg.circle(sx, sy, 3.0, 'start', '#1f77b4')

    if trace and 'path' in style.show:
        svg.group_start('trajectory')
        svg.polyline([to_px(row.x, row.y) for row in trace], 'path', '#d62728')
        for row in trace:
            if any(e.startswith('turn:') for e in row.events):
                svg.circle(*to_px(row.x, row.y), 2.5, 'turn', '#ff7f0e')
        svg.group_end()

    if trace and 'phases' in style.show:
        svg.group_start('phases')
        for row in trace:
            if 'stop' in row.events:
                svg.circle(*to_px(row.x, row.y), 1.5, 'stop', '#9467bd')
            elif any(e.startswith('misread') for e in row.events):
                svg.circle(*to_px(row.x, row.y), 1.5, 'misread', '#8c564b')
        svg.group_end()

    if trace and 'sensor_rays' in style.show:
        spec = spec or RobotSpec()
        svg.group_start('sensor_rays')
        for row in trace:
            if not any(e.startswith('turn:') for e in row.events):
                continue
            pose = Pose(row.x, row.y, row.theta)
            for channel in CHANNELS:
                (ox, oy), (dx, dy) = sensor_origin(pose, spec.sensors[channel])
                distance = getattr(row, channel)
                if not math.isfinite(distance):
                    continue
                svg.line(*to_px(ox, oy), *to_px(ox + dx * distance, oy + dy * distance),
                         'ray', '#7f7f7f', 0.5)
        svg.group_end()

    return svg.get_svg()


def render_ascii(maze: Maze, trace: Sequence[TraceRow]) -> str:
    """迷宫文本网格，经过的格标为 '*'(起点保留 'S')"""
    grid = [list(line) for line in serialize_maze(maze).splitlines()[1:]]
    for cell in visited_cells(maze, trace):
        i = 2 * (maze.rows - 1 - cell.row) + 1
        j = 2 * cell.col + 1
        if grid[i][j] != 'S':
            grid[i][j] = '*'
    return '\n'.join(''.join(line) for line in grid) + '\n'


def render(maze: Maze, trace: Sequence[TraceRow], style: RenderStyle,
           spec: Optional[RobotSpec] = None) -> str:
    """
    渲染迷宫与轨迹

    Args:
        maze: 迷宫
        trace: 轨迹(可为空，只画迷宫)
        style: 渲染样式
        spec: 画传感器射线时使用的安装几何，默认 RobotSpec()

    Raises:
        TraceError: trace 与迷宫不匹配
    """
    check_trace_fits(maze, trace)
    if style.format == 'ascii':
        return render_ascii(maze, trace)
    return render_svg(maze, trace, style, spec)
