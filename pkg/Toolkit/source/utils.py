"""
This module provides utility functions and classes for the toolkit.

Functions:
- format_number: Format a byte count into a short measurement.
- write_output: Write text to a file or to standard output.

Classes:
- Settings: A class that represents the settings for the toolkit.
- PropagatingThread: A thread that propagates exceptions to the joining thread.

Variables:
- simulation_settings: The default simulation settings.
- oracle_settings: The default oracle settings.
- output_settings: The default output settings.
"""

import copy
import logging
import pathlib
import sys
import threading
import yaml
from source import path

logger = logging.getLogger(__name__)

DEMAND_PRESETS = ("worst", "equal", "random")
OUTPUT_FORMATS = ("grid", "json-record")

simulation_settings = {
    "subpacket_bytes": 64,
    "seed": 0,
    "demand": "worst",
}

oracle_settings = {
    "max_k": 16,
    "max_nodes": 20000000,
}

output_settings = {
    "format": "grid",
}


class Settings:
    """
    A class that represents the settings for the toolkit.

    The settings live in a YAML file with the sections 'simulation', 'oracle'
    and 'output'. A missing file means defaults; nothing is written unless
    save is called.

    Properties:
    - path: The path to the settings file.

    Methods:
    - validate_settings: Validate the settings.
    - load: Reads the settings from the file.
    - save: Writes the settings to the file.
    - reset: Reset the settings to the default values.
    - get_simulation: Retrieves a specific simulation setting.
    - get_oracle: Retrieves a specific oracle setting.
    - get_output: Retrieves a specific output setting.
    - set_simulation: Updates the simulation settings.
    - set_oracle: Updates the oracle settings.
    - set_output: Updates the output settings.
    """
    def __init__(self, settings_path: str | pathlib.Path = None):
        self._path = pathlib.Path(settings_path) if settings_path else path.SETTINGS_PATH
        self._simulation = None
        self._oracle = None
        self._output = None
        self.load()

    @property
    def path(self) -> pathlib.Path:
        """
        Get the path to the settings file.

        Returns:
        - pathlib.Path: The path to the settings file.
        """
        return self._path

    def validate_settings(self) -> bool:
        """
        Validate the settings.
        Checks every key exists with the type of its default, then the value ranges.

        Returns:
        - bool: True if the settings are valid, False otherwise.
        """
        valid = True
        sections = (
            ("Simulation", self._simulation, simulation_settings),
            ("Oracle", self._oracle, oracle_settings),
            ("Output", self._output, output_settings),
        )
        for name, current, defaults in sections:
            if not isinstance(current, dict):
                logger.warning("%s settings section is missing", name)
                valid = False
                continue
            for key, value in defaults.items():
                if key not in current or not isinstance(current[key], type(value)) \
                        or isinstance(current[key], bool):
                    valid = False
                    logger.warning("%s setting '%s' is missing or invalid", name, key)
        if not valid:
            return False

        if self._simulation["subpacket_bytes"] < 1:
            logger.warning("Simulation setting 'subpacket_bytes' must be positive")
            valid = False
        if self._simulation["demand"] not in DEMAND_PRESETS:
            logger.warning("Simulation setting 'demand' must be one of %s", DEMAND_PRESETS)
            valid = False
        if self._oracle["max_k"] < 1 or self._oracle["max_nodes"] < 1:
            logger.warning("Oracle limits must be positive")
            valid = False
        if self._output["format"] not in OUTPUT_FORMATS:
            logger.warning("Output setting 'format' must be one of %s", OUTPUT_FORMATS)
            valid = False
        return valid

    def load(self):
        """
        Reads the settings from the file.
        If the file doesn't exist or is damaged, default settings are used.
        """
        if not self._path.exists():
            logger.debug("Settings file '%s' not found, using defaults", self._path)
            self.reset()
            return
        try:
            with open(self._path, "r", encoding="utf-8") as f:
                data = yaml.safe_load(f) or {}
            self._simulation = data.get("simulation")
            self._oracle = data.get("oracle")
            self._output = data.get("output")
        except (OSError, yaml.YAMLError, AttributeError):
            logger.warning("Settings file '%s' is damaged", self._path)
            self.reset()
            return

        if not self.validate_settings():
            logger.warning("Settings file is corrupted, using defaults.")
            self.reset()

    def save(self):
        """
        Writes the settings to the file.
        """
        data = {
            "simulation": self._simulation,
            "oracle": self._oracle,
            "output": self._output,
        }
        self._path.parent.mkdir(parents=True, exist_ok=True)
        with open(self._path, "w", encoding="utf-8") as f:
            yaml.safe_dump(data, f, sort_keys=True)
        logger.debug("Settings saved to '%s'", self._path)

    def reset(self):
        """
        Reset the settings to the default values.
        """
        self._simulation = copy.deepcopy(simulation_settings)
        self._oracle = copy.deepcopy(oracle_settings)
        self._output = copy.deepcopy(output_settings)
        logger.debug("Settings reset to default values.")

    def get_simulation(self, key: str) -> any:
        """
        Retrieves a specific simulation setting.

        Parameters:
        - key (str): The key of the setting to retrieve.

        Returns:
        - Any: The value of the setting.
        """
        value = self._simulation[key]
        logger.debug("Simulation setting '%s' retrieved value '%s'", key, value)
        return value

    def get_oracle(self, key: str) -> any:
        """
        Retrieves a specific oracle setting.

        Parameters:
        - key (str): The key of the setting to retrieve.

        Returns:
        - Any: The value of the setting.
        """
        value = self._oracle[key]
        logger.debug("Oracle setting '%s' retrieved value '%s'", key, value)
        return value

    def get_output(self, key: str) -> any:
        """Retrieves a specific output setting."""
        value = self._output[key]
        logger.debug("Output setting '%s' retrieved value '%s'", key, value)
        return value

    def set_simulation(self, **kwargs) -> None:
        """
        Updates the simulation settings and saves them.

        Parameters:
        - **kwargs: Keyword arguments representing the settings to update.
        """
        for key, value in kwargs.items():
            self._simulation[key] = value
            logger.debug("Simulation setting '%s' updated to value '%s'", key, value)
        self.save()

    def set_oracle(self, **kwargs) -> None:
        """
        Updates the oracle settings and saves them.

        Parameters:
        - **kwargs: Keyword arguments representing the settings to update.
        """
        for key, value in kwargs.items():
            self._oracle[key] = value
            logger.debug("Oracle setting '%s' updated to value '%s'", key, value)
        self.save()

    def set_output(self, **kwargs) -> None:
        """Updates the output settings and saves them."""
        for key, value in kwargs.items():
            self._output[key] = value
            logger.debug("Output setting '%s' updated to value '%s'", key, value)
        self.save()


class PropagatingThread(threading.Thread):
    """A thread that hands its result or exception to whoever joins it."""
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.exc = None
        self.ret = None

    def run(self):
        try:
            self.ret = self._target(*self._args, **self._kwargs)
        except BaseException as e:  # pylint: disable=broad-exception-caught
            self.exc = e

    def join(self, timeout=None):
        super().join(timeout)
        if self.exc:
            raise self.exc
        return self.ret


def format_number(number: float) -> str:
    """
    Format a byte count into a short measurement.

    Parameters:
    - number (float): The number to format.

    Returns:
    - str: The formatted number, e.g. '640 ' or '1.2 k'.
    """
    for scale, suffix in ((10 ** 9, "G"), (10 ** 6, "M"), (10 ** 3, "k")):
        if number >= scale:
            return f"{int(number / (scale / 10)) / 10:.1f} {suffix}"
    return f"{int(number)} "


def write_output(text: str, out_path: str | pathlib.Path = None) -> None:
    """
    Write text to a file or to standard output.

    Parameters:
    - text (str): The text to write. A trailing newline is added if missing.
    - out_path (str | pathlib.Path): The file to write, or None for standard output.
    """
    if not text.endswith("\n"):
        text += "\n"
    if out_path is None:
        sys.stdout.write(text)
        return
    with open(out_path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    logger.debug("Wrote %d characters to '%s'", len(text), out_path)
