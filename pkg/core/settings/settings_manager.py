"""
Settings manager for run configuration of the verification tools.

This module provides a centralized way to manage the numeric limits and
defaults used by the enumeration, sieving and coset routines.
It handles:
- Loading ``settings.json`` and merging it over built-in defaults
- Validation of section and key names
- Automatic backup of settings before changes
- Structured access to nested configuration parameters
"""
import copy
import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional


DEFAULT_SETTINGS: Dict[str, Dict[str, Any]] = {
    "words": {
        "height_bound": 5500,
        "max_length_small_level": 12,
    },
    "cosets": {
        "max_cosets": 2_000_000,
        "strategy": "felsch",
        "max_relation_length": 400,
    },
    "hq": {
        "witness_height_bound": 60,
        "max_per_gen": 400,
        "divisor_bound": 10_000,
        "max_witness_r": 5_000,
        "segment_size": 100_000,
        "max_workers": 4,
        "coset_fallback_q_max": 0,
        "coset_batch_size": 8,
        "coset_max_cosets": 200_000,
    },
    "exactalg": {
        "bruteforce_max_n": 14,
    },
    "twists": {
        "oracle_x": 1000,
        "numeric_points": 3,
        "dps": 30,
    },
    "run": {
        "seed": 0,
        "emit": "jsonl",
        "witness_cache": "",
    },
}


class SettingsManager:
    """
    Manages run settings stored in a JSON file next to the repository.

    Unknown sections or keys are rejected so that a typo in a script does not
    silently fall back to a default.
    """

    def __init__(self, settings_dir: Optional[str] = None):
        """
        Initialize settings manager and load existing settings.

        Args:
            settings_dir: Optional custom directory holding ``settings.json``.
                        If None, uses the repository root.
        """
        self.logger = logging.getLogger(__name__)

        if settings_dir:
            self.settings_dir = Path(settings_dir)
        else:
            self.settings_dir = Path(__file__).resolve().parent.parent.parent

        self.settings_file = self.settings_dir / "settings.json"
        self.settings: Dict[str, Dict[str, Any]] = copy.deepcopy(DEFAULT_SETTINGS)

        self.settings_dir.mkdir(parents=True, exist_ok=True)
        self.load_settings()

    def load_settings(self) -> None:
        """
        Load settings from file and merge them over the defaults.

        Raises:
            PermissionError: If unable to read settings file
        """
        try:
            if self.settings_file.exists():
                with open(self.settings_file, "r") as f:
                    stored = json.load(f)
                self._merge(stored)
                self.logger.info(f"Settings loaded from {self.settings_file}")
            else:
                self.logger.info("No existing settings file found, using defaults")
        except json.JSONDecodeError as e:
            self.logger.error(f"Error decoding settings file: {e}")
            self._handle_corrupted_settings()
        except PermissionError as e:
            self.logger.error(f"Permission denied accessing settings file: {e}")
            raise

    def _merge(self, stored: Dict[str, Any]) -> None:
        for section, values in stored.items():
            if section not in DEFAULT_SETTINGS:
                self.logger.warning(f"Ignoring unknown settings section: {section}")
                continue
            if not isinstance(values, dict):
                self.logger.warning(f"Ignoring malformed settings section: {section}")
                continue
            for key, value in values.items():
                if key not in DEFAULT_SETTINGS[section]:
                    self.logger.warning(f"Ignoring unknown setting: {section}.{key}")
                    continue
                self.settings[section][key] = value

    def _handle_corrupted_settings(self) -> None:
        """Move a corrupted settings file aside and fall back to defaults."""
        try:
            backup_file = self.settings_dir / f'settings_corrupted_{datetime.now().strftime("%Y%m%d_%H%M%S")}.json'
            self.settings_file.rename(backup_file)
            self.logger.info(f"Corrupted settings backed up to {backup_file}")
            self.settings = copy.deepcopy(DEFAULT_SETTINGS)
        except OSError as e:
            self.logger.error(f"Error handling corrupted settings: {e}")

    def save_settings(self) -> None:
        """
        Save settings to file with backup creation.

        Raises:
            OSError: If unable to write the settings or its backup
        """
        try:
            if self.settings_file.exists():
                backup_file = self.settings_dir / f'settings_backup_{datetime.now().strftime("%Y%m%d_%H%M%S_%f")}.json'
                with open(self.settings_file, "r") as src, open(backup_file, "w") as dst:
                    dst.write(src.read())
                self.logger.info(f"Settings backup created at {backup_file}")

            with open(self.settings_file, "w") as f:
                json.dump(self.settings, f, indent=4)
            self.logger.info("Settings saved successfully")
        except OSError as e:
            self.logger.error(f"Error saving settings: {e}")
            raise

    def _check_keys(self, keys: tuple) -> None:
        if not keys:
            raise ValueError("At least one settings key is required")
        if keys[0] not in DEFAULT_SETTINGS:
            raise ValueError(f"Unknown settings section: {keys[0]}")
        if len(keys) > 2:
            raise ValueError(f"Settings are two levels deep, got {'.'.join(keys)}")
        if len(keys) == 2 and keys[1] not in DEFAULT_SETTINGS[keys[0]]:
            raise ValueError(f"Unknown setting: {keys[0]}.{keys[1]}")

    def get_setting(self, *keys: str) -> Any:
        """
        Get a setting value, e.g. ``get_setting("hq", "max_per_gen")``.

        Raises:
            ValueError: If the section or key is unknown
        """
        self._check_keys(keys)
        value: Any = self.settings
        for key in keys:
            value = value[key]
        return value

    def set_setting(self, value: Any, *keys: str, persist: bool = False) -> None:
        """
        Set a setting value in memory, optionally writing the file.

        Raises:
            ValueError: If the section or key is unknown, or a whole
                section is being replaced
        """
        self._check_keys(keys)
        if len(keys) != 2:
            raise ValueError("set_setting needs a section and a key")
        self.logger.info(f"Setting {keys[0]}.{keys[1]} to {value}")
        self.settings[keys[0]][keys[1]] = value
        if persist:
            self.save_settings()

    def section(self, name: str) -> Dict[str, Any]:
        """Return a copy of one settings section."""
        self._check_keys((name,))
        return dict(self.settings[name])

    def get_backup_files(self) -> List[Path]:
        """
        Get list of available settings backup files.

        Returns:
            List of backup file paths, sorted by creation time (newest first)
        """
        backup_files = list(self.settings_dir.glob("settings_backup_*.json"))
        return sorted(backup_files, key=lambda x: x.stat().st_mtime, reverse=True)

    def restore_from_backup(self, backup_file: Path) -> None:
        """
        Restore settings from a backup file.

        Raises:
            FileNotFoundError: If backup file doesn't exist
            json.JSONDecodeError: If backup file is corrupted
        """
        if not backup_file.exists():
            raise FileNotFoundError(f"Backup file not found: {backup_file}")

        try:
            with open(backup_file, "r") as f:
                restored = json.load(f)
            self.settings = copy.deepcopy(DEFAULT_SETTINGS)
            self._merge(restored)
            self.save_settings()
            self.logger.info(f"Settings restored from {backup_file}")
        except Exception as e:
            self.logger.error(f"Error restoring from backup: {e}")
            raise
