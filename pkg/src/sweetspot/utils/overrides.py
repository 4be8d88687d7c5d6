"""Parsing of ``key=value`` overrides given on the command line."""

import re
from typing import Dict, Iterable, List, Mapping

from sweetspot.errors import ScenarioParseError

OVERRIDE_PATTERN = re.compile(r"^\s*([A-Za-z_][\w.]*)\s*=\s*(.*?)\s*$")


def parse_override(text: str) -> tuple:
    """Split one ``key=value`` string.

    Args:
        text: Override such as ``server.f=0.5``.

    Returns:
        (key, value) with surrounding whitespace removed.

    Raises:
        ScenarioParseError: If the text is not of the form key=value.
    """
    match = OVERRIDE_PATTERN.match(text)
    if not match:
        raise ScenarioParseError(f"override must look like key=value, got: {text!r}")
    return match.group(1), match.group(2)


def parse_overrides(texts: Iterable[str]) -> Dict[str, str]:
    """Parse overrides in order; later keys win."""
    parsed: Dict[str, str] = {}
    for text in texts:
        key, value = parse_override(text)
        parsed[key] = value
    return parsed


def overrides_from_record(record: Mapping[str, object], keys: Iterable[str]) -> List[str]:
    """Turn the parameter columns of an output record back into overrides.

    JSON records keep full float precision, so the overrides reproduce the
    run that emitted them.
    """
    overrides = []
    for key in keys:
        value = record[key]
        if value is None:
            continue
        if isinstance(value, float):
            value = repr(value)
        overrides.append(f"{key}={value}")
    return overrides
