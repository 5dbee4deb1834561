"""
图搜索预言机
在走廊图上做 BFS(基准真值)与抽象爬山搜索，二者一致即说明迷宫对贪心策略可解
"""
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

from core.controller import TieBreak
from core.errors import MazeError, UnreachableExitError
from core.maze import CellIndex, Heading, Maze, NEIGHBOR_ORDER
from utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class CorridorGraph:
    """走廊图: 节点为从起点可达的格，边为无墙相邻关系(邻接表按 E, N, W, S 排序)"""
    nodes: FrozenSet[CellIndex]
    adjacency: Dict[CellIndex, Tuple[CellIndex, ...]]
    start: CellIndex
    exit_cell: CellIndex

    @property
    def edges(self) -> FrozenSet[FrozenSet[CellIndex]]:
        return frozenset(frozenset((a, b)) for a, neighbors in self.adjacency.items() for b in neighbors)


@dataclass(frozen=True)
class CellPath:
    """从起点到出口格的格序列"""
    cells: Tuple[CellIndex, ...]

    def __post_init__(self):
        if not self.cells:
            raise MazeError("路径不能为空")
        object.__setattr__(self, 'cells', tuple(CellIndex(*c) for c in self.cells))

    @property
    def moves(self) -> int:
        return len(self.cells) - 1

    def to_json(self) -> List[List[int]]:
        return [[cell.col, cell.row] for cell in self.cells]

    def __len__(self) -> int:
        return len(self.cells)


@dataclass(frozen=True)
class Stuck:
    """爬山在 at 处两侧都被堵住(或将要重访格)"""
    cells: Tuple[CellIndex, ...]
    at: CellIndex


def build_graph(maze: Maze) -> CorridorGraph:
    """
    构建走廊图

    Raises:
        UnreachableExitError: 出口不可达
    """
    nodes = maze.reachable_cells()
    if maze.exit_cell not in nodes:
        raise UnreachableExitError(f"出口 {maze.exit_cell} 从起点 {maze.start} 不可达")
    adjacency = {cell: tuple(maze.open_neighbors(cell)) for cell in sorted(nodes)}
    return CorridorGraph(frozenset(nodes), adjacency, maze.start, maze.exit_cell)


def solve_bfs(graph: CorridorGraph, banned_edge: Optional[FrozenSet[CellIndex]] = None) -> Optional[CellPath]:
    """
    BFS 最短路径(按边数)，邻居顺序 E, N, W, S 决定平局

    Args:
        graph: 走廊图
        banned_edge: 可选，搜索时忽略的一条边(用于唯一性检查)

    Returns:
        CellPath；仅在 banned_edge 切断连通时返回 None
    """
    queue = deque([graph.start])
    came_from: Dict[CellIndex, Optional[CellIndex]] = {graph.start: None}

    while queue:
        current = queue.popleft()
        if current == graph.exit_cell:
            return CellPath(tuple(_reconstruct_path(current, came_from)))
        for neighbor in graph.adjacency[current]:
            if banned_edge is not None and frozenset((current, neighbor)) == banned_edge:
                continue
            if neighbor not in came_from:
                came_from[neighbor] = current
                queue.append(neighbor)

    return None


def _reconstruct_path(current: CellIndex, came_from: Dict[CellIndex, Optional[CellIndex]]) -> List[CellIndex]:
    total_path = [current]
    while came_from.get(current) is not None:
        current = came_from[current]
        total_path.append(current)
    total_path.reverse()
    return total_path


def direction_between(a: CellIndex, b: CellIndex) -> Heading:
    """相邻格 a → b 的方向"""
    for heading in NEIGHBOR_ORDER:
        if a.step(heading) == b:
            return heading
    raise MazeError(f"格 {a} 与 {b} 不相邻")


def path_corners(cells: Tuple[CellIndex, ...], start_heading: Heading) -> List[Tuple[CellIndex, str]]:
    """
    路径上的拐角及转向('L' 或 'R')

    起点处的方向以 start_heading 为准；起点不会是拐角。
    """
    corners = []
    heading = start_heading
    for index in range(len(cells) - 1):
        move = direction_between(cells[index], cells[index + 1])
        if index > 0 and move != heading:
            corners.append((cells[index], 'L' if move == heading.left else 'R'))
        heading = move
    return corners


def graph_hill_climb(graph: CorridorGraph, maze: Maze,
                     tie_break: TieBreak = TieBreak.PREFER_RIGHT) -> Union[CellPath, Stuck]:
    """
    图上的爬山搜索

    能直行就直行；直行被堵时走向以格计的净空更大的一侧，平局按 tie_break；
    两侧都堵返回 Stuck。每个格至多访问一次，步数受节点数约束。
    """
    cell = graph.start
    heading = maze.start_heading
    cells = [cell]
    visited = {cell}

    for _ in range(len(graph.nodes) + 1):
        if cell == graph.exit_cell:
            return CellPath(tuple(cells))
        if not maze.is_open(cell, heading):
            left = maze.clearance_cells(cell, heading.left)
            right = maze.clearance_cells(cell, heading.right)
            if left == 0 and right == 0:
                logger.debug(f"爬山在 {cell} 处两侧受阻")
                return Stuck(tuple(cells), cell)
            if left > right:
                heading = heading.left
            elif right > left:
                heading = heading.right
            else:
                heading = heading.left if tie_break is TieBreak.PREFER_LEFT else heading.right
            if not maze.is_open(cell, heading):
                # 选中的一侧只有出口边，而出口边不在当前格
                return Stuck(tuple(cells), cell)
        cell = cell.step(heading)
        if cell in visited:
            return Stuck(tuple(cells), cell)
        visited.add(cell)
        cells.append(cell)

    return Stuck(tuple(cells), cell)


def path_length_cm(path: CellPath, cell_size: float) -> float:
    """路径长度 = 步数 × 格边长"""
    return path.moves * float(cell_size)
