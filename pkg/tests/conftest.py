"""
pytest fixtures 配置
"""
import pytest

from base.trial_test_base import TrialTestBase
from core.config_manager import config as global_config
from core.maze import CellIndex, Heading, WallEdge, build_maze, parse_maze, passages_along
from utils.helpers import load_text
from utils.logger import get_logger

logger = get_logger(__name__)


def pytest_addoption(parser):
    """添加命令行参数"""
    parser.addoption(
        "--seeds",
        action="store",
        type=int,
        default=100,
        help="属性测试使用的种子数量"
    )


def pytest_configure(config):
    """记录本次运行使用的种子数量"""
    logger.info(f"属性测试种子数: {config.getoption('--seeds')}")


@pytest.fixture(scope="session")
def seed_count(request) -> int:
    return request.config.getoption("--seeds")


@pytest.fixture(scope="session")
def reference_text() -> str:
    """随仓库发布的参考迷宫文件内容"""
    return load_text(global_config.get_reference_maze_path())


@pytest.fixture(scope="session")
def reference_maze(reference_text):
    """8x4 参考迷宫: 唯一路径 13 格，6 个拐角(R, R, L, L, R, R)"""
    return parse_maze(reference_text)


@pytest.fixture(scope="session")
def t_junction_maze():
    """
    3x4 反例迷宫

    起点 (0,1) 朝东，出口在 (2,0) 东侧；(1,1) 处北臂(2 格)是死胡同，南臂(1 格)通向出口。
    """
    exit_path = [(0, 1), (1, 1), (1, 0), (2, 0)]
    dead_arm = [(1, 1), (1, 2), (1, 3)]
    return build_maze(3, 4, passages_along(exit_path) + passages_along(dead_arm),
                      start=(0, 1), heading=Heading.E,
                      exit_edge=WallEdge(CellIndex(2, 0), Heading.E))


@pytest.fixture(scope="session")
def corridor_maze():
    """8x1 直线走廊，起点 (0,0) 朝东，出口在 (7,0) 东侧"""
    cells = [(col, 0) for col in range(8)]
    return build_maze(8, 1, passages_along(cells), start=(0, 0), heading=Heading.E,
                      exit_edge=WallEdge(CellIndex(7, 0), Heading.E))


@pytest.fixture(scope="function")
def trial_runner():
    """
    试验运行器 fixture

    Returns:
        TrialTestBase: 试验测试基类实例
    """
    runner = TrialTestBase()
    runner.setup_method()

    yield runner

    runner.teardown_method()


@pytest.fixture(scope="session")
def app_config():
    """
    测试配置 fixture

    Returns:
        ConfigManager: 全局配置
    """
    return global_config
