"""
迷宫校验
连通性、路径唯一性、贪心可解性与死胡同检查
"""
from dataclasses import dataclass, field
from typing import List, Optional

from core.maze import CellIndex, Maze
from core.search import CellPath, build_graph, direction_between, solve_bfs
from utils.logger import get_logger

logger = get_logger(__name__)


@dataclass
class ValidationReport:
    """校验报告，violations 为可读的问题描述"""
    connected: bool = False
    unique_path: bool = False
    greedy_admissible: bool = False
    dead_end_cells: List[CellIndex] = field(default_factory=list)
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.connected and self.unique_path and self.greedy_admissible

    def to_text(self) -> str:
        lines = [
            f"connected={str(self.connected).lower()}",
            f"unique_path={str(self.unique_path).lower()}",
            f"greedy_admissible={str(self.greedy_admissible).lower()}",
            "dead_end_cells=" + (" ".join(str(c) for c in self.dead_end_cells) or "-"),
        ]
        lines.extend(f"violation: {text}" for text in self.violations)
        return '\n'.join(lines) + '\n'


def _is_unique(graph, path: CellPath) -> bool:
    """路径上每条边都是桥 ⇔ 起点到出口的简单路径唯一"""
    for a, b in zip(path.cells, path.cells[1:]):
        if solve_bfs(graph, banned_edge=frozenset((a, b))) is not None:
            return False
    return True


def _greedy_violations(maze: Maze, path: CellPath) -> List[str]:
    """沿路径检查每个格上贪心选择是否与路径一致"""
    violations = []
    heading = maze.start_heading
    for index in range(len(path.cells) - 1):
        cell, nxt = path.cells[index], path.cells[index + 1]
        move = direction_between(cell, nxt)
        if maze.is_open(cell, heading):
            if move != heading:
                violations.append(f"格 {cell} 直行开放但路径转向 {move.value}，贪心会直行")
        else:
            left = maze.clearance_cells(cell, heading.left)
            right = maze.clearance_cells(cell, heading.right)
            greedy = heading.left if left > right else (heading.right if right > left else None)
            if greedy is None:
                violations.append(f"决策格 {cell} 两侧净空相等({left})")
            elif greedy != move:
                violations.append(
                    f"决策格 {cell} 净空较大的一侧 {greedy.value} 不在出口路径上")
        heading = move
    return violations


def validate(maze: Maze) -> ValidationReport:
    """
    校验迷宫

    connected: 出口从起点可达；unique_path: 起点到出口的简单路径唯一；
    greedy_admissible: 连通、路径唯一，且每个决策格上净空严格更大的一侧都在路径上；
    dead_end_cells: 除起点外走廊度为 1 的可达格。
    """
    report = ValidationReport()
    reachable = maze.reachable_cells()
    report.dead_end_cells = sorted(
        cell for cell in reachable
        if cell != maze.start and maze.corridor_degree(cell) == 1
    )
    for cell in report.dead_end_cells:
        report.violations.append(f"死胡同: 格 {cell}")

    report.connected = maze.exit_cell in reachable
    if not report.connected:
        report.violations.append(f"出口格 {maze.exit_cell} 从起点 {maze.start} 不可达")
        return report

    graph = build_graph(maze)
    path: Optional[CellPath] = solve_bfs(graph)
    report.unique_path = _is_unique(graph, path)
    if not report.unique_path:
        report.violations.append("起点到出口存在多条简单路径(迷宫含环)")

    greedy = _greedy_violations(maze, path)
    report.violations.extend(greedy)
    report.greedy_admissible = report.unique_path and not greedy

    logger.debug(f"校验结果: connected={report.connected} unique={report.unique_path} "
                 f"greedy={report.greedy_admissible} dead_ends={len(report.dead_end_cells)}")
    return report
