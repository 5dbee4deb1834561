"""
“中级”迷宫生成器
生成只有一条走廊路径、恰好 turns 个拐角、出口在路径末端正前方的迷宫
"""
from typing import List, Optional, Tuple

import numpy as np

from core.errors import InfeasibleMazeError
from core.maze import CellIndex, Heading, Maze, WallEdge, build_maze, passages_along
from utils.logger import get_logger

logger = get_logger(__name__)

HEADINGS = (Heading.N, Heading.E, Heading.S, Heading.W)


def _search_path(cols: int, rows: int, turns: int, min_each: int, start: CellIndex,
                 heading: Heading, rng: np.random.Generator, budget: int) -> Optional[List[CellIndex]]:
    """
    随机化深度优先搜索一条自回避路径

    终止条件: 拐角数恰为 turns、左右拐角各至少 min_each、正前方是板外(出口)。
    使用显式栈，扩展次数受 budget 限制。
    """
    def in_bounds(cell: CellIndex) -> bool:
        return 0 <= cell.col < cols and 0 <= cell.row < rows

    path = [start]
    visited = {start}
    # 栈帧: (航向, 左拐数, 右拐数, 候选动作迭代器)
    stack: List[Tuple[Heading, int, int, list]] = []

    def options(cell: CellIndex, h: Heading, lefts: int, rights: int) -> list:
        moves = [(h, lefts, rights)]
        # 起点只能直行
        if lefts + rights < turns and len(path) > 1:
            moves.append((h.left, lefts + 1, rights))
            moves.append((h.right, lefts, rights + 1))
        order = rng.permutation(len(moves))
        return [moves[i] for i in order]

    stack.append((heading, 0, 0, options(start, heading, 0, 0)))
    expansions = 0
    while stack:
        h, lefts, rights, pending = stack[-1]
        cell = path[-1]
        if (len(path) > 1 and lefts + rights == turns and lefts >= min_each
                and rights >= min_each and not in_bounds(cell.step(h))):
            return path
        expansions += 1
        if expansions > budget:
            return None
        advanced = False
        while pending:
            move, new_lefts, new_rights = pending.pop()
            nxt = cell.step(move)
            if in_bounds(nxt) and nxt not in visited:
                path.append(nxt)
                visited.add(nxt)
                stack.append((move, new_lefts, new_rights, options(nxt, move, new_lefts, new_rights)))
                advanced = True
                break
        if not advanced:
            stack.pop()
            visited.discard(path.pop())
            if not path:
                return None
    return None


def generate_intermediate(cols: int, rows: int, turns: int, rng_seed: int,
                          cell_size: float = 30.0, max_attempts: int = 64,
                          budget: int = 20000) -> Maze:
    """
    生成中级迷宫

    Args:
        cols: 列数
        rows: 行数
        turns: 路径拐角数(恰好)
        rng_seed: 随机种子
        cell_size: 格边长 cm
        max_attempts: 随机起点尝试次数
        budget: 每次尝试的搜索扩展上限

    Returns:
        Maze: 路径唯一、无死胡同、对贪心可解的迷宫；turns ≥ 4 时左右拐角各至少 2 个

    Raises:
        InfeasibleMazeError: 参数无法满足
    """
    if cols < 1 or rows < 1 or turns < 0:
        raise InfeasibleMazeError(f"参数非法: cols={cols} rows={rows} turns={turns}")
    if cols * rows < turns + 2:
        raise InfeasibleMazeError(f"{cols}x{rows} 网格容纳不下 {turns} 个拐角")

    min_each = 2 if turns >= 4 else 0
    rng = np.random.default_rng(rng_seed)
    for attempt in range(max_attempts):
        start = CellIndex(int(rng.integers(cols)), int(rng.integers(rows)))
        heading = HEADINGS[int(rng.integers(4))]
        path = _search_path(cols, rows, turns, min_each, start, heading, rng, budget)
        if path is None:
            continue
        last = path[-1]
        final_heading = heading
        if len(path) > 1:
            dc, dr = last.col - path[-2].col, last.row - path[-2].row
            final_heading = next(h for h in HEADINGS if h.delta == (dc, dr))
        maze = build_maze(cols, rows, passages_along(path), start, heading,
                          WallEdge(last, final_heading), cell_size=cell_size)
        logger.debug(f"生成迷宫 {cols}x{rows} turns={turns} seed={rng_seed}: "
                     f"第 {attempt + 1} 次尝试，路径 {len(path)} 格")
        return maze

    raise InfeasibleMazeError(
        f"无法在 {cols}x{rows} 网格中放置 {turns} 个拐角(seed={rng_seed}，尝试 {max_attempts} 次)")
