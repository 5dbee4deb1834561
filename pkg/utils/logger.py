"""
日志工具模块
提供统一的日志管理功能，仿真与命令行共用
"""
import logging
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Dict, Optional

DEFAULT_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DEFAULT_DATEFMT = '%Y-%m-%d %H:%M:%S'


class Logger:
    """日志管理器"""
    
    _loggers: Dict[str, logging.Logger] = {}
    _level: str = "INFO"
    _format: str = DEFAULT_FORMAT
    _log_file: Optional[str] = None
    _max_bytes: int = 10485760
    _backup_count: int = 5
    
    @classmethod
    def get_logger(cls, name: str) -> logging.Logger:
        """
        获取或创建日志记录器
        
        Args:
            name: 日志记录器名称
            
        Returns:
            logging.Logger: 日志记录器实例
        """
        if name in cls._loggers:
            return cls._loggers[name]
        
        logger = logging.getLogger(name)
        logger.setLevel(getattr(logging, cls._level.upper()))
        logger.propagate = False
        
        # 避免重复添加处理器
        if not logger.handlers:
            cls._attach_handlers(logger)
        
        cls._loggers[name] = logger
        return logger
    
    @classmethod
    def configure(cls, level: str = "INFO", log_file: Optional[str] = None,
                  fmt: str = DEFAULT_FORMAT, max_bytes: int = 10485760,
                  backup_count: int = 5) -> None:
        """
        按配置重新设置所有已创建的日志记录器
        
        Args:
            level: 日志级别
            log_file: 日志文件路径(None 表示只输出到控制台)
            fmt: 日志格式
            max_bytes: 单个日志文件最大字节数
            backup_count: 保留的备份文件数量
        """
        cls._level = level
        cls._log_file = log_file
        cls._format = fmt
        cls._max_bytes = max_bytes
        cls._backup_count = backup_count
        
        for logger in cls._loggers.values():
            for handler in list(logger.handlers):
                logger.removeHandler(handler)
                handler.close()
            logger.setLevel(getattr(logging, level.upper()))
            cls._attach_handlers(logger)
    
    @classmethod
    def _attach_handlers(cls, logger: logging.Logger) -> None:
        """添加控制台与文件处理器"""
        formatter = logging.Formatter(cls._format, datefmt=DEFAULT_DATEFMT)
        
        # 控制台处理器(stderr，避免污染命令行的标准输出)
        console_handler = logging.StreamHandler()
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)
        
        # 文件处理器
        if cls._log_file:
            log_path = Path(cls._log_file)
            log_path.parent.mkdir(parents=True, exist_ok=True)
            
            file_handler = RotatingFileHandler(
                cls._log_file,
                maxBytes=cls._max_bytes,
                backupCount=cls._backup_count,
                encoding='utf-8'
            )
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)


def get_logger(name: str = __name__) -> logging.Logger:
    """
    便捷函数:获取日志记录器
    
    Args:
        name: 日志记录器名称
        
    Returns:
        logging.Logger: 日志记录器实例
    """
    return Logger.get_logger(name)
