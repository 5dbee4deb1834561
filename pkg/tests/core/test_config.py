"""
配置、日志与工具函数测试
"""
import logging

import pytest

from core.config_manager import ConfigManager
from utils.helpers import deep_merge, dump_json, load_text, ordinal, save_text
from utils.logger import Logger, get_logger


@pytest.fixture
def fresh_config(monkeypatch):
    """环境变量修改后重新加载的配置，测试结束后恢复"""
    manager = ConfigManager()
    yield manager, monkeypatch
    monkeypatch.undo()
    manager.reload()


class TestConfigManager:
    """配置管理"""

    def test_singleton(self, app_config):
        assert ConfigManager() is app_config

    def test_dotted_get(self, app_config):
        assert app_config.get('robot.control_period') == 0.05
        assert app_config.get('robot.no_such_key', 'fallback') == 'fallback'
        assert app_config.get('robot.linear_speed.deeper', 1) == 1

    def test_reference_maze_path_exists(self, app_config):
        assert app_config.get_reference_maze_path().is_file()

    def test_env_override_converts_type(self, fresh_config):
        manager, monkeypatch = fresh_config
        monkeypatch.setenv('MAZESIM_SPEED', '9.5')
        monkeypatch.setenv('MAZESIM_SEED', '42')
        manager.reload()
        assert manager.get('robot.linear_speed') == 9.5
        assert manager.get('simulation.seed') == 42
        assert isinstance(manager.get('simulation.seed'), int)


class TestLogger:
    """日志"""

    def test_same_name_same_logger(self):
        assert get_logger('mazesim.test') is get_logger('mazesim.test')

    def test_configure_updates_level_and_file(self, tmp_path):
        logger = get_logger('mazesim.test.configure')
        log_file = tmp_path / "logs" / "sim.log"
        try:
            Logger.configure(level="DEBUG", log_file=str(log_file))
            assert logger.level == logging.DEBUG
            logger.debug("调试信息")
            for handler in logger.handlers:
                handler.flush()
            assert "调试信息" in log_file.read_text(encoding='utf-8')
        finally:
            Logger.configure(level="INFO")
        assert logger.level == logging.INFO


class TestHelpers:
    """工具函数"""

    def test_deep_merge(self):
        merged = deep_merge({'robot': {'linear_speed': 14.6, 'body_radius': 9.0}},
                           {'robot': {'linear_speed': 9.5}})
        assert merged == {'robot': {'linear_speed': 9.5, 'body_radius': 9.0}}

    def test_text_round_trip(self, tmp_path):
        path = save_text("a\nb\n", tmp_path / "out" / "x.txt")
        assert load_text(path) == "a\nb\n"

    def test_dump_json_keeps_unicode(self):
        assert dump_json({'名称': 1}, indent=None) == '{"名称": 1}\n'

    @pytest.mark.parametrize("n, expected", [(1, '1st'), (2, '2nd'), (3, '3rd'), (4, '4th'),
                                             (11, '11th'), (12, '12th'), (21, '21st'), (112, '112th')])
    def test_ordinal(self, n, expected):
        assert ordinal(n) == expected
