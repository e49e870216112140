"""
Settings module for managing run configuration.
"""
from .settings_manager import DEFAULT_SETTINGS, SettingsManager

__all__ = ['SettingsManager', 'DEFAULT_SETTINGS']
