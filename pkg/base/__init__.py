"""测试基类模块"""
from .trial_test_base import TrialTestBase

__all__ = ['TrialTestBase']
