"""
几何查询
精确的网格射线投射(理想超声波束)与圆形机体碰撞检测
"""
import math
from typing import Optional, Tuple

from core.errors import GeometryError
from core.maze import CellIndex, Heading, Maze, Point, Segment

_VERTEX_EPS = 1e-12


def ray_cast(maze: Maze, origin: Point, direction: Tuple[float, float],
             max_distance: Optional[float] = None) -> float:
    """
    从 origin 沿 direction 到第一段墙的欧氏距离

    按格逐边推进(DDA)，每次交点参数都由整数格坐标直接计算，
    因此沿射线平移起点时结果精确地减少平移量。穿过出口边离开板时返回 inf。

    Args:
        maze: 迷宫
        origin: 起点(必须严格位于板内)
        direction: 单位方向向量
        max_distance: 可选上限

    Returns:
        float: 距离 cm
    """
    x, y = origin
    dx, dy = direction
    if not (0 < x < maze.width and 0 < y < maze.height):
        raise GeometryError(f"射线起点 ({x:.3f}, {y:.3f}) 不在板内")
    if dx == 0 and dy == 0:
        raise GeometryError("射线方向不能为零向量")

    cs = maze.cell_size
    col = min(int(x // cs), maze.cols - 1)
    row = min(int(y // cs), maze.rows - 1)
    step_c = 1 if dx > 0 else (-1 if dx < 0 else 0)
    step_r = 1 if dy > 0 else (-1 if dy < 0 else 0)
    side_x = Heading.E if step_c > 0 else Heading.W
    side_y = Heading.N if step_r > 0 else Heading.S

    def cap(t: float) -> float:
        return t if max_distance is None else min(t, max_distance)

    while True:
        t_x = ((col + (step_c > 0)) * cs - x) / dx if step_c else math.inf
        t_y = ((row + (step_r > 0)) * cs - y) / dy if step_r else math.inf
        if max_distance is not None and min(t_x, t_y) > max_distance:
            return max_distance
        cell = CellIndex(col, row)

        if step_c and step_r and abs(t_x - t_y) <= _VERTEX_EPS * max(1.0, abs(t_x)):
            # 恰好穿过格点: 触碰到任一相邻墙段的端点即视为命中
            diagonal_x = CellIndex(col + step_c, row)
            diagonal_y = CellIndex(col, row + step_r)
            touched = [(cell, side_x), (cell, side_y)]
            if maze.in_bounds(diagonal_x):
                touched.append((diagonal_x, side_y))
            if maze.in_bounds(diagonal_y):
                touched.append((diagonal_y, side_x))
            if any(maze.is_walled(c, s) for c, s in touched):
                return cap(t_x)
            if maze.is_exit(cell, side_x) or maze.is_exit(cell, side_y):
                return cap(math.inf)
            col += step_c
            row += step_r
        elif t_x < t_y:
            if maze.is_exit(cell, side_x):
                return cap(math.inf)
            if maze.is_walled(cell, side_x):
                return cap(t_x)
            col += step_c
        else:
            if maze.is_exit(cell, side_y):
                return cap(math.inf)
            if maze.is_walled(cell, side_y):
                return cap(t_y)
            row += step_r

        if not maze.in_bounds((col, row)):
            # 只可能经由格点离开板
            return cap(math.inf)


def point_segment_distance(point: Point, segment: Segment) -> float:
    """点到线段(闭区间)的距离"""
    (px, py), ((x0, y0), (x1, y1)) = point, segment
    sx, sy = x1 - x0, y1 - y0
    length_sq = sx * sx + sy * sy
    if length_sq == 0:
        return math.hypot(px - x0, py - y0)
    t = max(0.0, min(1.0, ((px - x0) * sx + (py - y0) * sy) / length_sq))
    return math.hypot(px - (x0 + t * sx), py - (y0 + t * sy))


def crossed_exit(maze: Maze, x: float, y: float) -> bool:
    """机器人中心是否已越过出口边所在平面且位于出口区间内"""
    side, plane, (low, high) = maze.exit_span()
    if side is Heading.N:
        return y >= plane and low <= x <= high
    if side is Heading.S:
        return y <= plane and low <= x <= high
    if side is Heading.E:
        return x >= plane and low <= y <= high
    return x <= plane and low <= y <= high


def check_collision(maze: Maze, x: float, y: float, radius: float) -> bool:
    """
    圆形机体是否与任一墙段相交，或从出口以外的地方离开板

    相切(距离恰好等于半径)不算碰撞。
    """
    cell = maze.cell_of(x, y)
    if cell is None:
        if not crossed_exit(maze, x, y):
            return True
        cell = maze.exit_cell
    return any(point_segment_distance((x, y), segment) < radius
               for segment in maze.segments_near(cell))
