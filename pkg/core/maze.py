"""
迷宫核心模块
走廊迷宫的表示、解析与序列化

坐标约定: x 向东(列)增加，y 向北(行)增加，原点在板的西南角；
格 (c, r) 占据 [c·cell, (c+1)·cell] × [r·cell, (r+1)·cell]。
墙是格边界上无限薄的线段。
"""
import math
import re
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Set, Tuple

from core.errors import MazeError, MazeParseError, UnreachableExitError
from utils.logger import get_logger

logger = get_logger(__name__)

Point = Tuple[float, float]
Segment = Tuple[Point, Point]


class Heading(Enum):
    """基本方向，同时用作格的边(side)"""

    N = 'N'
    E = 'E'
    S = 'S'
    W = 'W'

    @property
    def delta(self) -> Tuple[int, int]:
        return _DELTAS[self]

    @property
    def angle(self) -> float:
        """对应的航向角(rad)，东为 0，逆时针为正"""
        return _ANGLES[self]

    @property
    def left(self) -> 'Heading':
        return _LEFT[self]

    @property
    def right(self) -> 'Heading':
        return _RIGHT[self]

    @property
    def opposite(self) -> 'Heading':
        return _LEFT[_LEFT[self]]

    @classmethod
    def from_angle(cls, theta: float) -> 'Heading':
        """最接近 theta 的基本方向"""
        quarter = int(round((theta % (2 * math.pi)) / (math.pi / 2))) % 4
        return (cls.E, cls.N, cls.W, cls.S)[quarter]


_DELTAS = {Heading.N: (0, 1), Heading.E: (1, 0), Heading.S: (0, -1), Heading.W: (-1, 0)}
_ANGLES = {Heading.E: 0.0, Heading.N: math.pi / 2, Heading.W: math.pi, Heading.S: 3 * math.pi / 2}
_LEFT = {Heading.N: Heading.W, Heading.W: Heading.S, Heading.S: Heading.E, Heading.E: Heading.N}
_RIGHT = {value: key for key, value in _LEFT.items()}

# BFS 的邻居顺序
NEIGHBOR_ORDER = (Heading.E, Heading.N, Heading.W, Heading.S)


class CellIndex(NamedTuple):
    """格索引(从 0 开始)"""
    col: int
    row: int

    def step(self, heading: Heading) -> 'CellIndex':
        dc, dr = heading.delta
        return CellIndex(self.col + dc, self.row + dr)

    def __str__(self) -> str:
        return f"({self.col},{self.row})"


@dataclass(frozen=True, order=True)
class WallEdge:
    """
    格的一条边

    规范形式: 内部边只以南北方向的 N 边或东西方向的 E 边存储一次，
    即 (c, r) 的 S 边记为 (c, r-1) 的 N 边，W 边记为 (c-1, r) 的 E 边；
    板边界上的边引用板内的格。
    """
    cell: CellIndex
    side: Heading = field(compare=False)
    _side_key: str = field(init=False, repr=False, compare=True)

    def __post_init__(self):
        object.__setattr__(self, 'cell', CellIndex(*self.cell))
        object.__setattr__(self, '_side_key', self.side.value)

    def canonical(self) -> 'WallEdge':
        col, row = self.cell
        if self.side is Heading.S and row > 0:
            return WallEdge(CellIndex(col, row - 1), Heading.N)
        if self.side is Heading.W and col > 0:
            return WallEdge(CellIndex(col - 1, row), Heading.E)
        return self

    def segment(self, cell_size: float) -> Segment:
        """边在板坐标系中的线段端点"""
        x0 = self.cell.col * cell_size
        y0 = self.cell.row * cell_size
        x1 = x0 + cell_size
        y1 = y0 + cell_size
        if self.side is Heading.N:
            return (x0, y1), (x1, y1)
        if self.side is Heading.S:
            return (x0, y0), (x1, y0)
        if self.side is Heading.E:
            return (x1, y0), (x1, y1)
        return (x0, y0), (x0, y1)


def edge(col: int, row: int, side: str) -> WallEdge:
    """便捷构造规范化的边，例如 edge(0, 1, 'N')"""
    return WallEdge(CellIndex(col, row), Heading(side)).canonical()


@dataclass(frozen=True)
class Maze:
    """走廊迷宫(构造后不可变，可在并发试验间只读共享)"""

    cols: int
    rows: int
    walls: FrozenSet[WallEdge]
    start: CellIndex
    start_heading: Heading
    exit: WallEdge
    cell_size: float = 30.0
    wall_height: float = 15.0

    def __post_init__(self):
        object.__setattr__(self, 'walls', frozenset(self.walls))
        object.__setattr__(self, 'start', CellIndex(*self.start))
        self._check_structure()

    def _check_structure(self) -> None:
        """检查结构不变量(不含可达性)"""
        if self.cols < 1 or self.rows < 1:
            raise MazeError(f"网格尺寸非法: cols={self.cols}, rows={self.rows}")
        if not self.cell_size > 0:
            raise MazeError(f"cell_size 必须为正: {self.cell_size}")
        if not self.in_bounds(self.start):
            raise MazeError(f"起点 {self.start} 超出网格")
        if self.exit != self.exit.canonical() or not self.in_bounds(self.exit.cell):
            raise MazeError(f"出口边非法: {self.exit}")
        if not self.is_boundary(self.exit):
            raise MazeError(f"出口 {self.exit.cell} {self.exit.side.value} 不在边界上")
        if self.exit in self.walls:
            raise MazeError("出口边不能同时是墙")
        for wall in self.walls:
            if wall != wall.canonical() or not self.in_bounds(wall.cell):
                raise MazeError(f"墙不是规范形式或超出网格: {wall}")
        for boundary in self.boundary_edges():
            if boundary != self.exit and boundary not in self.walls:
                raise MazeError(f"边界边 {boundary.cell} {boundary.side.value} 必须是墙")

    # ---- 网格查询 ----

    @property
    def width(self) -> float:
        return self.cols * self.cell_size

    @property
    def height(self) -> float:
        return self.rows * self.cell_size

    @property
    def exit_cell(self) -> CellIndex:
        return self.exit.cell

    def in_bounds(self, cell: Tuple[int, int]) -> bool:
        return 0 <= cell[0] < self.cols and 0 <= cell[1] < self.rows

    def is_boundary(self, wall: WallEdge) -> bool:
        """边是否在板的边界上"""
        return not self.in_bounds(wall.cell.step(wall.side))

    def boundary_edges(self) -> List[WallEdge]:
        """所有边界边(规范形式)，顺序固定"""
        edges = []
        for col in range(self.cols):
            edges.append(WallEdge(CellIndex(col, 0), Heading.S))
            edges.append(WallEdge(CellIndex(col, self.rows - 1), Heading.N))
        for row in range(self.rows):
            edges.append(WallEdge(CellIndex(0, row), Heading.W))
            edges.append(WallEdge(CellIndex(self.cols - 1, row), Heading.E))
        return edges

    def is_walled(self, cell: CellIndex, side: Heading) -> bool:
        return WallEdge(cell, side).canonical() in self.walls

    def is_exit(self, cell: CellIndex, side: Heading) -> bool:
        return WallEdge(cell, side).canonical() == self.exit

    def is_open(self, cell: CellIndex, side: Heading) -> bool:
        """能否从 cell 经 side 走到板内相邻格"""
        return self.in_bounds(cell.step(side)) and not self.is_walled(cell, side)

    def open_neighbors(self, cell: CellIndex) -> List[CellIndex]:
        """按 E, N, W, S 顺序返回连通的相邻格"""
        return [cell.step(side) for side in NEIGHBOR_ORDER if self.is_open(cell, side)]

    def corridor_degree(self, cell: CellIndex) -> int:
        """走廊度: 开放邻居数，出口边计为一个开口"""
        degree = len(self.open_neighbors(cell))
        if cell == self.exit_cell:
            degree += 1
        return degree

    def clearance_cells(self, cell: CellIndex, heading: Heading) -> float:
        """
        从 cell 沿 heading 直到第一堵墙之间的开放格数

        穿过出口边时为无穷大(对应超声波读数被钳制到最大量程)。
        """
        count = 0
        current = cell
        while True:
            if self.is_exit(current, heading):
                return math.inf
            if not self.is_open(current, heading):
                return count
            current = current.step(heading)
            count += 1

    def reachable_cells(self) -> Set[CellIndex]:
        """从起点洪泛可达的格集合"""
        seen = {self.start}
        queue = deque([self.start])
        while queue:
            current = queue.popleft()
            for neighbor in self.open_neighbors(current):
                if neighbor not in seen:
                    seen.add(neighbor)
                    queue.append(neighbor)
        return seen

    def cell_of(self, x: float, y: float) -> Optional[CellIndex]:
        """点所在的格；板外返回 None"""
        if not (0 <= x <= self.width and 0 <= y <= self.height):
            return None
        col = min(int(x // self.cell_size), self.cols - 1)
        row = min(int(y // self.cell_size), self.rows - 1)
        return CellIndex(col, row)

    def cell_center(self, cell: CellIndex) -> Point:
        return ((cell.col + 0.5) * self.cell_size, (cell.row + 0.5) * self.cell_size)

    @cached_property
    def _segments_by_cell(self) -> Dict[CellIndex, Tuple[Segment, ...]]:
        """每个格四周的墙线段，碰撞检测只查询局部"""
        table: Dict[CellIndex, List[Segment]] = {}
        for wall in sorted(self.walls):
            segment = wall.segment(self.cell_size)
            table.setdefault(wall.cell, []).append(segment)
            neighbor = wall.cell.step(wall.side)
            if self.in_bounds(neighbor):
                table.setdefault(neighbor, []).append(segment)
        return {cell: tuple(segments) for cell, segments in table.items()}

    def segments_near(self, cell: CellIndex) -> List[Segment]:
        """cell 及其 8 邻域内的墙线段"""
        segments: List[Segment] = []
        for dc in (-1, 0, 1):
            for dr in (-1, 0, 1):
                segments.extend(self._segments_by_cell.get(CellIndex(cell.col + dc, cell.row + dr), ()))
        return segments

    def exit_span(self) -> Tuple[Heading, float, Tuple[float, float]]:
        """出口所在平面: (方向, 平面坐标, 沿边的区间)"""
        (x0, y0), (x1, y1) = self.exit.segment(self.cell_size)
        side = self.exit.side
        if side in (Heading.N, Heading.S):
            return side, y0, (x0, x1)
        return side, x0, (y0, y1)


def build_maze(cols: int, rows: int, passages: Iterable[WallEdge], start: Tuple[int, int],
               heading: Heading, exit_edge: WallEdge, cell_size: float = 30.0,
               wall_height: float = 15.0) -> Maze:
    """
    由打开的内部通道构造迷宫: 除 passages 与出口外所有边都是墙

    Args:
        cols: 列数
        rows: 行数
        passages: 打开的内部边
        start: 起点格
        heading: 起始航向
        exit_edge: 出口边(边界上)
        cell_size: 格边长 cm
        wall_height: 墙高 cm(仅元数据)

    Returns:
        Maze: 迷宫
    """
    opened = {p.canonical() for p in passages}
    exit_edge = exit_edge.canonical()
    walls = set()
    for col in range(cols):
        for row in range(rows):
            cell = CellIndex(col, row)
            for side in Heading:
                wall = WallEdge(cell, side).canonical()
                if wall not in opened and wall != exit_edge:
                    walls.add(wall)
    return Maze(cols=cols, rows=rows, walls=frozenset(walls), start=CellIndex(*start),
                start_heading=heading, exit=exit_edge, cell_size=cell_size,
                wall_height=wall_height)


def passages_along(cells: Iterable[Tuple[int, int]]) -> List[WallEdge]:
    """相邻格序列之间的通道边"""
    cells = [CellIndex(*c) for c in cells]
    result = []
    for a, b in zip(cells, cells[1:]):
        for side in Heading:
            if a.step(side) == b:
                result.append(WallEdge(a, side).canonical())
                break
        else:
            raise MazeError(f"格 {a} 与 {b} 不相邻")
    return result


# ---- 文件格式 ----

HEADER_RE = re.compile(
    r'^maze v1 cols=(\d+) rows=(\d+) cell=([0-9]+(?:\.[0-9]+)?) '
    r'start=(\d+),(\d+) heading=([NSEW])$'
)


def _format_number(value: float) -> str:
    value = float(value)
    return str(int(value)) if value.is_integer() else repr(value)


def parse_maze(text: str, wall_height: float = 15.0) -> Maze:
    """
    解析迷宫文件

    Args:
        text: 文件内容(UTF-8 文本，必须以换行结尾)
        wall_height: 墙高元数据

    Returns:
        Maze: 满足全部不变量的迷宫

    Raises:
        MazeParseError: 语法错误、缺少起点、出口缺失或重复、网格非矩形
        UnreachableExitError: 出口不可达
    """
    if not text:
        raise MazeParseError("空文件", 1, 1)
    if not text.endswith('\n'):
        raise MazeParseError("文件必须以换行结尾", text.count('\n') + 1)
    lines = text[:-1].split('\n')

    match = HEADER_RE.match(lines[0])
    if not match:
        raise MazeParseError(f"文件头格式错误: {lines[0]!r}", 1, 1)
    cols, rows = int(match.group(1)), int(match.group(2))
    cell_size = float(match.group(3))
    header_start = CellIndex(int(match.group(4)), int(match.group(5)))
    heading = Heading(match.group(6))
    if cols < 1 or rows < 1 or cell_size <= 0:
        raise MazeParseError(f"网格尺寸非法: cols={cols} rows={rows} cell={match.group(3)}", 1)

    grid = lines[1:]
    width, height = 2 * cols + 1, 2 * rows + 1
    if len(grid) != height:
        raise MazeParseError(f"非矩形网格: 期望 {height} 行，实际 {len(grid)} 行", len(lines))
    for index, line in enumerate(grid):
        if len(line) != width:
            raise MazeParseError(f"非矩形网格: 期望 {width} 列，实际 {len(line)} 列", index + 2)

    walls: Set[WallEdge] = set()
    exits: List[Tuple[WallEdge, int, int]] = []
    starts: List[CellIndex] = []

    for i, line in enumerate(grid):
        line_no = i + 2
        for j, char in enumerate(line):
            col_no = j + 1
            if i % 2 == 0 and j % 2 == 0:
                if char != '#':
                    raise MazeParseError(f"角点必须为 '#'，实际 {char!r}", line_no, col_no)
                continue
            if i % 2 == 1 and j % 2 == 1:
                cell = CellIndex(j // 2, rows - 1 - i // 2)
                if char == 'S':
                    starts.append(cell)
                elif char != '.':
                    raise MazeParseError(f"格位置只能是 '.' 或 'S'，实际 {char!r}", line_no, col_no)
                continue
            # 墙槽位
            if i % 2 == 0:
                # 水平墙: 位于第 i 行，属于其下方格的 N 边
                col = j // 2
                row = rows - 1 - i // 2
                wall = (WallEdge(CellIndex(col, row), Heading.N) if row >= 0
                        else WallEdge(CellIndex(col, 0), Heading.S))
            else:
                col = j // 2
                row = rows - 1 - i // 2
                wall = (WallEdge(CellIndex(col - 1, row), Heading.E) if col >= 1
                        else WallEdge(CellIndex(0, row), Heading.W))
            wall = wall.canonical()
            boundary = i in (0, height - 1) or j in (0, width - 1)
            if char == '#':
                walls.add(wall)
            elif char == 'E':
                if not boundary:
                    raise MazeParseError("出口 'E' 只能位于边界", line_no, col_no)
                exits.append((wall, line_no, col_no))
            elif char == ' ':
                if boundary:
                    raise MazeParseError("边界槽位必须为 '#' 或 'E'", line_no, col_no)
            else:
                raise MazeParseError(f"墙槽位只能是 '#'、' ' 或 'E'，实际 {char!r}", line_no, col_no)

    if not starts:
        raise MazeParseError("missing start: 网格中没有 'S'")
    if len(starts) > 1:
        raise MazeParseError(f"起点重复: {len(starts)} 个 'S'")
    if starts[0] != header_start:
        raise MazeParseError(f"起点 {starts[0]} 与文件头 start={header_start.col},{header_start.row} 不一致", 1)
    if not exits:
        raise MazeParseError("missing exit: 边界上没有 'E'")
    if len(exits) > 1:
        _, line_no, col_no = exits[1]
        raise MazeParseError(f"multiple exits: {len(exits)} 个 'E'", line_no, col_no)

    maze = Maze(cols=cols, rows=rows, walls=frozenset(walls), start=header_start,
                start_heading=heading, exit=exits[0][0], cell_size=cell_size,
                wall_height=wall_height)
    if maze.exit_cell not in maze.reachable_cells():
        raise UnreachableExitError(f"出口 {maze.exit_cell} 从起点 {maze.start} 不可达")
    logger.debug(f"解析迷宫 {cols}x{rows}，墙 {len(walls)} 条")
    return maze


def serialize_maze(maze: Maze) -> str:
    """
    序列化为规范文本，parse_maze(serialize_maze(m)) == m

    Raises:
        UnreachableExitError: 迷宫不合法(出口不可达)
    """
    if maze.exit_cell not in maze.reachable_cells():
        raise UnreachableExitError(f"无法序列化: 出口 {maze.exit_cell} 不可达")

    width, height = 2 * maze.cols + 1, 2 * maze.rows + 1
    grid = [['#'] * width for _ in range(height)]
    for col in range(maze.cols):
        for row in range(maze.rows):
            i = 2 * (maze.rows - 1 - row) + 1
            j = 2 * col + 1
            grid[i][j] = 'S' if (col, row) == maze.start else '.'
            cell = CellIndex(col, row)
            # 只写每个格的 N 边与 E 边，外加 S/W 边界
            for side, (di, dj) in ((Heading.N, (-1, 0)), (Heading.E, (0, 1)),
                                   (Heading.S, (1, 0)), (Heading.W, (0, -1))):
                if side in (Heading.S, Heading.W) and not maze.is_boundary(WallEdge(cell, side)):
                    continue
                if maze.is_exit(cell, side):
                    grid[i + di][j + dj] = 'E'
                elif not maze.is_walled(cell, side):
                    grid[i + di][j + dj] = ' '

    header = (f"maze v1 cols={maze.cols} rows={maze.rows} cell={_format_number(maze.cell_size)} "
              f"start={maze.start.col},{maze.start.row} heading={maze.start_heading.value}")
    return '\n'.join([header] + [''.join(row) for row in grid]) + '\n'
