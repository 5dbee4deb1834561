"""
配置管理模块
负责加载和管理仿真器的配置
"""
import os
from pathlib import Path
from typing import Any, Dict, List, Optional
from dotenv import load_dotenv

from utils.helpers import load_yaml, deep_merge
from utils.logger import get_logger

logger = get_logger(__name__)

PROJECT_ROOT = Path(__file__).parent.parent


class ConfigManager:
    """配置管理器"""
    
    _instance = None
    _config: Optional[Dict[str, Any]] = None
    
    # 环境变量 -> 配置路径
    ENV_MAPPINGS = {
        'MAZESIM_SPEED': ['robot', 'linear_speed'],
        'MAZESIM_CONTROL_PERIOD': ['robot', 'control_period'],
        'MAZESIM_TIMEOUT': ['simulation', 'timeout'],
        'MAZESIM_SEED': ['simulation', 'seed'],
        'MAZESIM_JOBS': ['simulation', 'jobs'],
        'MAZESIM_LOG_LEVEL': ['logging', 'level'],
        'MAZESIM_LOG_FILE': ['logging', 'file'],
    }
    
    def __new__(cls):
        """单例模式"""
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance
    
    def __init__(self):
        """初始化配置管理器"""
        if self._config is None:
            self._load_config()
    
    def _load_config(self) -> None:
        """加载配置文件"""
        # 加载环境变量
        load_dotenv()
        
        config_file = PROJECT_ROOT / "config" / "config.yaml"
        if not config_file.exists():
            raise FileNotFoundError(f"配置文件不存在: {config_file}")
        
        self._config = load_yaml(config_file)
        
        # 本地覆盖文件(不入库)
        local_file = PROJECT_ROOT / "config" / "config.local.yaml"
        if local_file.exists():
            self._config = deep_merge(self._config, load_yaml(local_file))
            logger.debug(f"已合并本地配置: {local_file}")
        
        # 环境变量覆盖配置
        self._override_from_env()
        
        logger.debug(f"配置加载成功: {config_file}")
    
    def _override_from_env(self) -> None:
        """使用环境变量覆盖配置"""
        for env_key, config_path in self.ENV_MAPPINGS.items():
            env_value = os.getenv(env_key)
            if env_value is not None:
                self._set_nested_value(config_path, env_value)
                logger.info(f"环境变量 {env_key} 覆盖配置 {'.'.join(config_path)}")
    
    def _set_nested_value(self, keys: List[str], value: Any) -> None:
        """设置嵌套配置值"""
        current = self._config
        for key in keys[:-1]:
            if key not in current:
                current[key] = {}
            current = current[key]
        
        # 类型转换(bool 必须先于 int 判断)
        existing = current.get(keys[-1])
        if isinstance(existing, bool):
            value = value.lower() in ('true', '1', 'yes')
        elif isinstance(existing, int):
            value = int(value)
        elif isinstance(existing, float):
            value = float(value)
        
        current[keys[-1]] = value
    
    def get(self, key: str, default: Any = None) -> Any:
        """
        获取配置值,支持点号分隔的嵌套键
        
        Args:
            key: 配置键,支持 "robot.linear_speed" 格式
            default: 默认值
            
        Returns:
            配置值
        """
        keys = key.split('.')
        value = self._config
        
        for k in keys:
            if isinstance(value, dict):
                value = value.get(k)
            else:
                return default
            
            if value is None:
                return default
        
        return value
    
    def get_robot_config(self) -> Dict[str, Any]:
        """获取机器人配置"""
        return self.get('robot', {})
    
    def get_controller_config(self) -> Dict[str, Any]:
        """获取控制器配置"""
        return self.get('controller', {})
    
    def get_noise_config(self) -> Dict[str, Any]:
        """获取噪声配置"""
        return self.get('noise', {})
    
    def get_simulation_config(self) -> Dict[str, Any]:
        """获取仿真配置"""
        return self.get('simulation', {})
    
    def get_maze_config(self) -> Dict[str, Any]:
        """获取迷宫配置"""
        return self.get('maze', {})
    
    def get_render_config(self) -> Dict[str, Any]:
        """获取渲染配置"""
        return self.get('render', {})
    
    def get_logging_config(self) -> Dict[str, Any]:
        """获取日志配置"""
        return self.get('logging', {})
    
    def get_reference_maze_path(self) -> Path:
        """获取参考迷宫文件的绝对路径"""
        return PROJECT_ROOT / self.get('maze.reference', 'data/reference.maze')
    
    def reload(self) -> None:
        """重新加载配置"""
        self._config = None
        self._load_config()


# 全局配置实例
config = ConfigManager()
