"""
This module contains the paths used by the toolkit.

Constants:
- PROGRAM_NAME (str): The name of the program.
- PROGRAM_NAME_LONG (str): The long name of the program.
- VERSION (str): The version of the program.
- APPLICATION_DIR (pathlib.Path): The directory of the application.
- STORE_DIR (pathlib.Path): The directory of the store.
- LOG_DIR (pathlib.Path): The directory of the log files.
- SETTINGS_PATH (pathlib.Path): The default settings file.
"""

import logging
import os
import pathlib
import sys

logger = logging.getLogger(__name__)

PROGRAM_NAME = "CyclicPDA"
PROGRAM_NAME_LONG = "Cyclic PDA Toolkit"
VERSION = "1.0.0"

if getattr(sys, 'frozen', False):
    APPLICATION_DIR = pathlib.Path(sys.executable).parent
else:
    APPLICATION_DIR = pathlib.Path(__file__).parents[1]

STORE_DIR = pathlib.Path(os.path.join(APPLICATION_DIR, "Store"))
LOG_DIR = pathlib.Path(os.path.join(STORE_DIR, "logs"))
SETTINGS_PATH = pathlib.Path(
    os.environ.get("PDA_TOOLKIT_SETTINGS", os.path.join(STORE_DIR, "settings.yaml"))
)
