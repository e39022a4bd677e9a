"""Runtime limits.

The only knob that matters is ``max_order``: state graphs and truth tables
hold 2^n entries, so the order is capped.  Resolution order is
default < config file < environment variable < explicit argument.
"""

import os
from pathlib import Path

DEFAULT_MAX_ORDER = 20
ENV_MAX_ORDER = "GJPO_MAX_ORDER"
ENV_CONFIG_FILE = "GJPO_CONFIG"

_max_order = DEFAULT_MAX_ORDER


def read_config_file(path):
    """Parse a ``key=value`` text file; blank lines and ``#`` comments are skipped."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, value = line.split("=", 1)
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def resolve_max_order(config_path=None, explicit=None):
    value = DEFAULT_MAX_ORDER
    path = config_path or os.environ.get(ENV_CONFIG_FILE)
    if path:
        file_values = read_config_file(path)
        if "max_order" in file_values:
            value = int(file_values["max_order"])
    if os.environ.get(ENV_MAX_ORDER):
        value = int(os.environ[ENV_MAX_ORDER])
    if explicit is not None:
        value = int(explicit)
    if value < 2:
        raise ValueError("max_order must be at least 2")
    return value


def get_max_order():
    return _max_order


def set_max_order(value):
    global _max_order
    if value < 2:
        raise ValueError("max_order must be at least 2")
    _max_order = int(value)
