"""Tests for one CLI invocation end to end."""

import io
import json

import pytest

from sweetspot.commands.base import PARAMETER_COLUMNS
from sweetspot.config import Config
from sweetspot.emit import OutputFormat
from sweetspot.errors import EmitError
from sweetspot.runner import RunRequest, Runner, exit_code_for, write_diagnostic
from sweetspot.utils.overrides import overrides_from_record

SCENARIO = """\
server.p0=150
server.c=70
server.mu=1
server.f=0.5
workload.lambda=0.1
policy.tau_c=5
policy.tau_s=10
"""


@pytest.fixture
def scenario_file(tmp_path):
    path = tmp_path / "point.conf"
    path.write_text(SCENARIO, encoding="utf-8")
    return str(path)


@pytest.fixture
def out_dir(tmp_path):
    return str(tmp_path / "out")


@pytest.fixture
def runner():
    stdout, stderr = io.StringIO(), io.StringIO()
    return Runner(Config(), stdout=stdout, stderr=stderr), stdout, stderr


class TestRunRequest:
    def test_flags_win_over_set(self):
        request = RunRequest(
            command="simulate",
            scenario_path="x.conf",
            overrides=["sim.seed=1", "server.f=0.5"],
            seed=9,
            workers=2,
        )

        assert request.settings() == {"sim.seed": "9", "server.f": "0.5", "sim.workers": "2"}


class TestDiagnostics:
    def test_single_line(self):
        stream = io.StringIO()

        write_diagnostic(stream, "ConfigError", "bad\nvalue  here")

        assert stream.getvalue() == "sweetspot: error=ConfigError message=bad value here\n"

    def test_exit_code_lookup(self):
        assert exit_code_for(EmitError("x")) == (7, "IoError")


class TestRunner:
    def test_success_writes_outputs_and_summary(self, runner, scenario_file, out_dir):
        run, stdout, stderr = runner

        code = run.run(RunRequest(command="analyze", scenario_path=scenario_file, out_dir=out_dir))

        summary = open(f"{out_dir}/point/summary.txt", encoding="utf-8").read()
        assert code == 0
        assert stdout.getvalue() == summary
        assert summary.startswith("ANALYZE point\n")
        assert stderr.getvalue() == ""

    def test_quiet_prints_nothing(self, runner, scenario_file, out_dir):
        run, stdout, _ = runner

        code = run.run(RunRequest(command="analyze", scenario_path=scenario_file, out_dir=out_dir, quiet=True))

        assert code == 0
        assert stdout.getvalue() == ""

    def test_uses_config_output_dir_by_default(self, scenario_file, tmp_path):
        run = Runner(Config(output_dir=str(tmp_path / "default")), stdout=io.StringIO(), stderr=io.StringIO())

        assert run.run(RunRequest(command="analyze", scenario_path=scenario_file)) == 0
        assert (tmp_path / "default" / "point" / "data.csv").exists()

    @pytest.mark.parametrize(
        "command,overrides,code,name",
        [
            ("analyze", ["server.f=fast"], 2, "ParseError"),
            ("analyze", ["server.volts=1"], 3, "ConfigError"),
            ("analyze", ["server.f=1.5"], 3, "ConfigError"),
            ("analyze", ["server.f=0.05"], 4, "UnstableSystem"),
            ("optimize", ["opt.budget=1"], 5, "Infeasible"),
            ("analyze", ["farm.n=2", "farm.dispatch=forkjoin", "policy.tau_c=never"], 6, "NoClosedForm"),
            ("report", [], 8, "UnknownCommand"),
        ],
    )
    def test_failures_map_to_exit_codes(self, runner, scenario_file, out_dir, command, overrides, code, name):
        run, stdout, stderr = runner

        result = run.run(RunRequest(command=command, scenario_path=scenario_file, overrides=overrides, out_dir=out_dir))

        assert result == code
        assert stderr.getvalue().startswith(f"sweetspot: error={name} message=")
        assert stderr.getvalue().count("\n") == 1
        assert stdout.getvalue() == ""

    def test_failed_run_writes_no_files(self, runner, scenario_file, tmp_path):
        run, _, _ = runner
        out = tmp_path / "out"

        run.run(RunRequest(command="analyze", scenario_path=scenario_file, overrides=["server.f=x"], out_dir=str(out)))

        assert not out.exists()

    def test_unwritable_output_is_io_error(self, runner, scenario_file, tmp_path):
        run, _, stderr = runner
        blocker = tmp_path / "blocker"
        blocker.write_text("", encoding="utf-8")

        code = run.run(RunRequest(command="analyze", scenario_path=scenario_file, out_dir=str(blocker)))

        assert code == 7
        assert "error=IoError" in stderr.getvalue()

    def test_unexpected_error_exits_one(self, runner, scenario_file, out_dir, mocker):
        run, _, stderr = runner
        mocker.patch("sweetspot.runner.load_scenario", side_effect=RuntimeError("boom"))

        code = run.run(RunRequest(command="analyze", scenario_path=scenario_file, out_dir=out_dir))

        assert code == 1
        assert "error=RuntimeError message=boom" in stderr.getvalue()

    def test_json_row_reruns_exactly(self, runner, scenario_file, tmp_path):
        run, _, _ = runner
        first = tmp_path / "first"
        second = tmp_path / "second"

        run.run(RunRequest(command="analyze", scenario_path=scenario_file, out_dir=str(first), fmt=OutputFormat.JSON))
        record = json.loads((first / "point" / "data.json").read_text(encoding="utf-8"))[0]
        overrides = overrides_from_record(record, PARAMETER_COLUMNS)
        run.run(RunRequest(
            command="analyze", scenario_path=scenario_file, overrides=overrides,
            out_dir=str(second), fmt=OutputFormat.JSON,
        ))
        rerun = json.loads((second / "point" / "data.json").read_text(encoding="utf-8"))[0]

        assert rerun == record
        assert (second / "point" / "data.csv").read_text() == (first / "point" / "data.csv").read_text()
