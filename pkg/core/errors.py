"""
异常定义
所有仿真器异常都继承自 MazeSimError，命令行据此映射退出码
"""
from typing import Optional


class MazeSimError(Exception):
    """仿真器异常基类"""


class ConfigError(MazeSimError, ValueError):
    """参数不满足不变量"""


class MazeError(MazeSimError, ValueError):
    """迷宫结构非法"""


class MazeParseError(MazeError):
    """迷宫文件语法错误，带行列号(均从 1 开始)"""
    
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        location = ""
        if line is not None:
            location = f"第 {line} 行" + (f" 第 {column} 列" if column is not None else "") + ": "
        super().__init__(f"{location}{message}")


class UnreachableExitError(MazeError):
    """出口不可达"""


class InfeasibleMazeError(MazeError):
    """生成参数无法满足"""


class GeometryError(MazeSimError, ValueError):
    """几何查询参数非法(例如射线起点在板外)"""


class CalibrationError(MazeSimError):
    """速度校准失败"""


class TraceError(MazeSimError, ValueError):
    """trace 文件格式错误或与迷宫不匹配"""
