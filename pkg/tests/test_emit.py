"""Tests for output files."""

import json
import math
import os
from enum import Enum

import pytest

from sweetspot.commands.base import CommandOutput, Table
from sweetspot.emit import OutputFormat, emit, render_csv, render_json
from sweetspot.errors import EmitError
from sweetspot.utils.formatting import format_value


class Color(str, Enum):
    RED = "red"


@pytest.fixture
def output():
    data = Table(
        name="data",
        header=("policy.tau_c", "response", "passed", "n"),
        rows=[{"policy.tau_c": "never", "response": 0.1 + 0.2, "passed": True, "n": None}],
    )
    return CommandOutput(tables=(data,), summary=("ANALYZE x", "=========", "response=0.30000000000000004"))


class TestFormatValue:
    @pytest.mark.parametrize(
        "value,expected",
        [
            (None, ""),
            (True, "true"),
            (False, "false"),
            (3, "3"),
            (0.1, "0.1"),
            (1 / 3, "0.3333333333333333"),
            (math.inf, "inf"),
            (Color.RED, "red"),
            ("never", "never"),
        ],
    )
    def test_cells(self, value, expected):
        assert format_value(value) == expected


class TestRender:
    def test_csv_header_and_cells(self, output):
        text = render_csv(output.data)

        assert text == "policy.tau_c,response,passed,n\nnever,0.30000000000000004,true,\n"

    def test_empty_table_is_header_only(self):
        assert render_csv(Table(name="data", header=("a", "b"))) == "a,b\n"

    def test_json_keeps_types(self, output):
        records = json.loads(render_json(output.data))

        assert records == [{"policy.tau_c": "never", "response": 0.30000000000000004, "passed": True, "n": None}]

    def test_json_writes_infinity(self):
        table = Table(name="data", header=("response_ci",), rows=[{"response_ci": math.inf}])

        assert "Infinity" in render_json(table)


class TestEmit:
    def test_writes_csv_and_summary(self, output, tmp_path):
        written = emit(output, str(tmp_path), "case")

        target = tmp_path / "case"
        assert sorted(p.name for p in written) == ["data.csv", "summary.txt"]
        assert (target / "summary.txt").read_text(encoding="utf-8").splitlines()[-1] == "response=0.30000000000000004"
        assert not list(target.glob("*.tmp"))

    def test_json_format_adds_json_files(self, output, tmp_path):
        emit(output, str(tmp_path), "case", OutputFormat.JSON)

        assert (tmp_path / "case" / "data.json").exists()
        assert (tmp_path / "case" / "data.csv").exists()

    def test_every_table_gets_a_file(self, output, tmp_path):
        frontier = Table(name="frontier", header=("f",), rows=[{"f": 0.5}])
        both = CommandOutput(tables=output.tables + (frontier,), summary=output.summary)

        emit(both, str(tmp_path), "case")

        assert (tmp_path / "case" / "frontier.csv").read_text(encoding="utf-8") == "f\n0.5\n"

    def test_unwritable_directory_raises(self, output, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("not a directory", encoding="utf-8")

        with pytest.raises(EmitError):
            emit(output, str(blocker), "case")

    def test_failed_rename_leaves_no_files(self, output, tmp_path, mocker):
        mocker.patch("sweetspot.emit.os.replace", side_effect=OSError("disk full"))

        with pytest.raises(EmitError):
            emit(output, str(tmp_path), "case")

        assert list((tmp_path / "case").iterdir()) == []

    def test_rename_failing_midway_restores_previous_run(self, output, tmp_path, mocker):
        emit(output, str(tmp_path), "case")
        target = tmp_path / "case"
        before = {p.name: p.read_text(encoding="utf-8") for p in target.iterdir()}
        changed = Table(name="data", header=("response",), rows=[{"response": 1.0}])
        rerun = CommandOutput(tables=(changed,), summary=("ANALYZE x", "changed"))
        real_replace = os.replace
        calls = []

        def replace_then_fail(src, dst):
            calls.append((src, dst))
            # Set aside data.csv, move the new one in, then fail on summary.txt
            if len(calls) == 3:
                raise OSError("disk full")
            real_replace(src, dst)

        mocker.patch("sweetspot.emit.os.replace", side_effect=replace_then_fail)

        with pytest.raises(EmitError):
            emit(rerun, str(tmp_path), "case")

        after = {p.name: p.read_text(encoding="utf-8") for p in target.iterdir()}
        assert after == before
