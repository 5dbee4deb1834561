"""迷宫避障机器人仿真器"""
__version__ = "1.0.0"
