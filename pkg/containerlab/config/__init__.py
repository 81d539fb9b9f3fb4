"""
Configuration system for containerlab.
"""

from containerlab.config.default import (
    Caps,
    Config,
    ContainerDefaults,
    Settings,
    create_default_config,
    get_config_path,
    load_config,
    save_config,
)

__all__ = [
    "Caps",
    "Config",
    "ContainerDefaults",
    "Settings",
    "create_default_config",
    "load_config",
    "save_config",
    "get_config_path",
]
