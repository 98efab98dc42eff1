"""
Command-Line Front End
~~~~~~~~~~~~~~~~~~~~~~

``cvqkd`` subcommands, run configuration files and figure presets.
"""

from .config import RunConfig, build_run_config, load_run_config
from .main import main
from .presets import PRESETS, Preset

__all__ = ["RunConfig", "build_run_config", "load_run_config", "main", "PRESETS", "Preset"]
