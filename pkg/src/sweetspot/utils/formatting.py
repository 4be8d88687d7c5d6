"""Value formatting shared by file output and console summaries."""

from enum import Enum
from typing import Any


def format_value(value: Any) -> str:
    """Render one cell for CSV and summaries.

    Floats use ``repr`` so they round-trip exactly; None is empty.
    """
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def json_value(value: Any) -> Any:
    """Native JSON counterpart of a cell value."""
    if isinstance(value, Enum):
        return value.value
    return value
