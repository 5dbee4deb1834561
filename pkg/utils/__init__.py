"""工具模块"""
from .logger import Logger, get_logger
from .helpers import (
    load_yaml, load_text, save_text,
    dump_json, deep_merge, ordinal
)

__all__ = [
    'Logger', 'get_logger',
    'load_yaml', 'load_text', 'save_text',
    'dump_json', 'deep_merge', 'ordinal'
]
