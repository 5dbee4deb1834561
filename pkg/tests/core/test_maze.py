"""
迷宫表示、解析与序列化测试
"""
import pytest

from core.errors import MazeError, MazeParseError, UnreachableExitError
from core.maze import (CellIndex, Heading, Maze, WallEdge, build_maze, edge, parse_maze,
                       passages_along, serialize_maze)

TWO_CELL = (
    "maze v1 cols=2 rows=1 cell=30 start=0,0 heading=E\n"
    "#####\n"
    "#S .E\n"
    "#####\n"
)


@pytest.mark.maze
class TestMazeModel:
    """迷宫数据结构"""

    def test_heading_rotation(self):
        assert Heading.N.left is Heading.W
        assert Heading.N.right is Heading.E
        assert Heading.E.opposite is Heading.W
        assert Heading.S.delta == (0, -1)

    def test_interior_edge_stored_once(self):
        assert WallEdge(CellIndex(1, 0), Heading.W).canonical() == WallEdge(CellIndex(0, 0), Heading.E)
        assert WallEdge(CellIndex(0, 1), Heading.S).canonical() == WallEdge(CellIndex(0, 0), Heading.N)
        assert edge(1, 0, 'W') == edge(0, 0, 'E')

    def test_boundary_edge_references_interior_cell(self):
        assert WallEdge(CellIndex(0, 0), Heading.W).canonical() == WallEdge(CellIndex(0, 0), Heading.W)

    def test_missing_boundary_wall_is_rejected(self):
        with pytest.raises(MazeError):
            Maze(cols=2, rows=1, walls=frozenset(), start=(0, 0), start_heading=Heading.E,
                 exit=WallEdge(CellIndex(1, 0), Heading.E))

    def test_interior_exit_is_rejected(self):
        with pytest.raises(MazeError):
            build_maze(2, 1, [], (0, 0), Heading.E, WallEdge(CellIndex(0, 0), Heading.E))

    def test_clearance_counts_open_cells(self, reference_maze):
        # (0,3) 朝北: 西侧是边界，东侧有 2 个开放格
        assert reference_maze.clearance_cells(CellIndex(0, 3), Heading.W) == 0
        assert reference_maze.clearance_cells(CellIndex(0, 3), Heading.E) == 2
        assert reference_maze.clearance_cells(CellIndex(5, 0), Heading.S) == float('inf')

    def test_reachable_cells_of_reference(self, reference_maze):
        assert len(reference_maze.reachable_cells()) == 13

    def test_passages_along_requires_adjacent_cells(self):
        with pytest.raises(MazeError):
            passages_along([(0, 0), (2, 0)])


@pytest.mark.maze
class TestMazeParsing:
    """迷宫文件解析"""

    def test_smallest_legal_maze(self):
        maze = parse_maze(TWO_CELL)
        assert (maze.cols, maze.rows, maze.cell_size) == (2, 1, 30.0)
        assert maze.start == CellIndex(0, 0)
        assert maze.start_heading is Heading.E
        assert maze.exit == WallEdge(CellIndex(1, 0), Heading.E)
        assert maze.is_open(CellIndex(0, 0), Heading.E)
        # 2 个 N + 2 个 S + 西侧边界
        assert len(maze.walls) == 5

    def test_reference_maze_dimensions(self, reference_maze):
        assert (reference_maze.cols, reference_maze.rows, reference_maze.cell_size) == (8, 4, 30.0)
        assert reference_maze.width == 240.0
        assert reference_maze.height == 120.0
        assert reference_maze.wall_height == 15.0
        assert reference_maze.exit == WallEdge(CellIndex(5, 0), Heading.S)

    def test_multiple_exits(self):
        text = TWO_CELL.replace("#####\n#S", "#E###\n#S", 1)
        with pytest.raises(MazeParseError, match="multiple exits"):
            parse_maze(text)

    def test_missing_start(self):
        with pytest.raises(MazeParseError, match="missing start"):
            parse_maze(TWO_CELL.replace('S', '.'))

    def test_missing_exit(self):
        with pytest.raises(MazeParseError, match="missing exit"):
            parse_maze(TWO_CELL.replace(".E\n", ".#\n"))

    def test_non_rectangular_grid(self):
        with pytest.raises(MazeParseError, match="非矩形"):
            parse_maze(TWO_CELL.replace("#S .E", "#S .E#"))

    def test_trailing_newline_required(self):
        with pytest.raises(MazeParseError):
            parse_maze(TWO_CELL[:-1])

    def test_syntax_error_reports_location(self):
        with pytest.raises(MazeParseError) as exc_info:
            parse_maze(TWO_CELL.replace("#S .E", "#Sx.E"))
        assert exc_info.value.line == 3
        assert exc_info.value.column == 3

    def test_garbage_header(self):
        with pytest.raises(MazeParseError):
            parse_maze("hello\n")

    def test_start_must_match_header(self):
        with pytest.raises(MazeParseError):
            parse_maze(TWO_CELL.replace("start=0,0", "start=1,0"))

    def test_unreachable_exit(self):
        with pytest.raises(UnreachableExitError):
            parse_maze(TWO_CELL.replace("#S .E", "#S#.E"))


@pytest.mark.maze
class TestMazeSerialization:
    """序列化"""

    def test_two_cell_round_trip(self):
        assert serialize_maze(parse_maze(TWO_CELL)) == TWO_CELL

    def test_reference_is_fixed_point(self, reference_text, reference_maze):
        assert serialize_maze(reference_maze) == reference_text
        assert parse_maze(serialize_maze(reference_maze)) == reference_maze

    def test_isolated_cells_cannot_be_serialized(self):
        maze = build_maze(2, 1, [], (0, 0), Heading.E, WallEdge(CellIndex(1, 0), Heading.E))
        with pytest.raises(UnreachableExitError):
            serialize_maze(maze)

    def test_non_integer_cell_size_round_trips(self):
        text = TWO_CELL.replace("cell=30", "cell=30.5")
        maze = parse_maze(text)
        assert maze.cell_size == 30.5
        assert serialize_maze(maze) == text
