"""
辅助工具函数
"""
import json
import yaml
from pathlib import Path
from typing import Any, Dict, Union


def load_yaml(file_path: Union[str, Path]) -> Dict[str, Any]:
    """
    加载 YAML 文件
    
    Args:
        file_path: 文件路径
        
    Returns:
        Dict: YAML 数据(空文件返回空字典)
    """
    with open(file_path, 'r', encoding='utf-8') as f:
        return yaml.safe_load(f) or {}


def load_text(file_path: Union[str, Path]) -> str:
    """按 UTF-8 读取文本文件，保留原始换行"""
    with open(file_path, 'r', encoding='utf-8', newline='') as f:
        return f.read()


def save_text(text: str, file_path: Union[str, Path]) -> Path:
    """
    以 UTF-8 + LF 换行写出文本，父目录不存在时自动创建
    
    Args:
        text: 文本内容
        file_path: 文件路径
        
    Returns:
        Path: 写出的文件路径
    """
    path = Path(file_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(text)
    return path


def dump_json(data: Any, indent: int = 2) -> str:
    """序列化为确定性的 JSON 文本(键排序，结尾换行)"""
    return json.dumps(data, indent=indent, ensure_ascii=False, sort_keys=True) + '\n'


def deep_merge(dict1: Dict, dict2: Dict) -> Dict:
    """
    深度合并两个字典
    
    Args:
        dict1: 第一个字典
        dict2: 第二个字典(优先级更高)
        
    Returns:
        Dict: 合并后的字典
    """
    result = dict1.copy()
    
    for key, value in dict2.items():
        if key in result and isinstance(result[key], dict) and isinstance(value, dict):
            result[key] = deep_merge(result[key], value)
        else:
            result[key] = value
    
    return result


def ordinal(n: int) -> str:
    """英文序数词: 1 -> 1st, 2 -> 2nd, 11 -> 11th"""
    if 10 <= n % 100 <= 20:
        suffix = 'th'
    else:
        suffix = {1: 'st', 2: 'nd', 3: 'rd'}.get(n % 10, 'th')
    return f"{n}{suffix}"
