"""Output files: one directory per scenario with CSV, optional JSON and a summary.

Layout under the output directory::

    <scenario name>/data.csv
    <scenario name>/data.json      (--format json)
    <scenario name>/summary.txt
    <scenario name>/<table>.csv    (extra tables, e.g. frontier)

Every file is rendered in memory first, then written under a temporary
name and renamed into place. Files being replaced are set aside until
every rename succeeds, so a failed run leaves the directory as it was.
"""

import csv
import io
import json
import logging
import os
from enum import Enum
from pathlib import Path
from typing import Dict, List, Tuple

from sweetspot.commands.base import CommandOutput, Table
from sweetspot.errors import EmitError
from sweetspot.utils.formatting import format_value, json_value

logger = logging.getLogger(__name__)


CSV_EXTENSION = ".csv"
JSON_EXTENSION = ".json"
SUMMARY_FILE = "summary.txt"
TMP_SUFFIX = ".tmp"
BACKUP_SUFFIX = ".bak"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


def render_csv(table: Table) -> str:
    """Header row plus one line per row, LF line endings."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(table.header)
    for row in table.rows:
        writer.writerow([format_value(row.get(column)) for column in table.header])
    return buffer.getvalue()


def render_json(table: Table) -> str:
    """Array of objects with the CSV's field names, in header order."""
    records = [{column: json_value(row.get(column)) for column in table.header} for row in table.rows]
    return json.dumps(records, indent=2) + "\n"


def render_files(output: CommandOutput, fmt: OutputFormat = OutputFormat.CSV) -> Dict[str, str]:
    """Map of file name to content for everything a command produced."""
    files: Dict[str, str] = {}
    for table in output.tables:
        files[f"{table.name}{CSV_EXTENSION}"] = render_csv(table)
        if fmt == OutputFormat.JSON:
            files[f"{table.name}{JSON_EXTENSION}"] = render_json(table)
    files[SUMMARY_FILE] = "\n".join(output.summary) + "\n"
    return files


def emit(
    output: CommandOutput,
    out_dir: str,
    scenario_name: str,
    fmt: OutputFormat = OutputFormat.CSV,
) -> List[Path]:
    """Write a command's output under ``out_dir/scenario_name``.

    Args:
        output: Tables and summary to write.
        out_dir: Root output directory.
        scenario_name: Subdirectory name.
        fmt: csv writes CSV only; json writes CSV and JSON.

    Returns:
        Paths written, in write order.

    Raises:
        EmitError: If the directory or any file cannot be written.
    """
    files = render_files(output, fmt)
    target = Path(out_dir) / scenario_name
    staged: List[Path] = []
    written: List[Path] = []
    backups: List[Tuple[Path, Path]] = []
    try:
        target.mkdir(parents=True, exist_ok=True)
        for name, content in files.items():
            tmp = target / f"{name}{TMP_SUFFIX}"
            with open(tmp, "w", encoding="utf-8", newline="") as handle:
                handle.write(content)
            staged.append(tmp)
        for tmp in staged:
            final = tmp.with_name(tmp.name[: -len(TMP_SUFFIX)])
            if final.exists():
                backup = final.with_name(f"{final.name}{BACKUP_SUFFIX}")
                os.replace(final, backup)
                backups.append((backup, final))
            os.replace(tmp, final)
            written.append(final)
    except OSError as e:
        _roll_back(staged, written, backups)
        raise EmitError(f"cannot write output to {target}: {e}")

    for backup, _ in backups:
        backup.unlink(missing_ok=True)
    logger.info(f"Wrote {len(written)} file(s) to {target}")
    return written


def _roll_back(staged: List[Path], written: List[Path], backups: List[Tuple[Path, Path]]) -> None:
    """Remove new files and put replaced ones back."""
    try:
        for path in written + staged:
            path.unlink(missing_ok=True)
        for backup, final in reversed(backups):
            os.replace(backup, final)
    except OSError as e:
        logger.error(f"Could not restore previous output: {e}")
