"""Tests for the command-line entry point."""

from pathlib import Path

import pytest

import main
from sweetspot.emit import OutputFormat


@pytest.fixture(autouse=True)
def no_logging_setup(mocker):
    return mocker.patch("main.setup_logging")


class TestParser:
    def test_parses_all_options(self):
        args = main.build_parser().parse_args([
            "simulate", "--scenario", "fig3", "--set", "server.f=0.5", "--set", "sim.horizon=10",
            "--out", "results", "--format", "json", "--seed", "4", "--replications", "2",
            "--trace", "t.csv", "--workers", "3", "-q",
        ])

        assert args.command == "simulate"
        assert args.overrides == ["server.f=0.5", "sim.horizon=10"]
        assert args.format == "json"
        assert (args.seed, args.replications, args.workers) == (4, 2, 3)
        assert args.trace == "t.csv"
        assert args.quiet is True

    def test_defaults(self):
        args = main.build_parser().parse_args(["analyze", "--scenario", "x.conf"])

        assert args.overrides == []
        assert args.format == "csv"
        assert args.out is None
        assert args.seed is None
        assert args.quiet is False

    def test_unknown_command_is_rejected(self):
        with pytest.raises(SystemExit):
            main.build_parser().parse_args(["report", "--scenario", "x.conf"])

    def test_scenario_is_required(self):
        with pytest.raises(SystemExit):
            main.build_parser().parse_args(["analyze"])


class TestResolveScenario:
    def test_existing_path_is_kept(self, tmp_path):
        path = tmp_path / "mine.conf"
        path.write_text("", encoding="utf-8")

        assert main.resolve_scenario(str(path)) == str(path)

    def test_bundled_name_resolves(self):
        resolved = main.resolve_scenario("fig3")

        assert Path(resolved).name == "fig3.conf"
        assert Path(resolved).exists()

    def test_unknown_name_is_passed_through(self):
        assert main.resolve_scenario("no-such-scenario") == "no-such-scenario"


class TestMain:
    def test_builds_request_and_runs(self, mocker, monkeypatch):
        monkeypatch.delenv("SWEETSPOT_WORKERS", raising=False)
        runner_cls = mocker.patch("main.Runner")
        runner_cls.return_value.run.return_value = 0

        code = main.main([
            "optimize", "--scenario", "fig4", "--set", "opt.budget=8.6111", "--format", "json",
            "--env-file", "/nonexistent/.env",
        ])

        request = runner_cls.return_value.run.call_args[0][0]
        assert code == 0
        assert request.command == "optimize"
        assert Path(request.scenario_path).name == "fig4.conf"
        assert request.overrides == ["opt.budget=8.6111"]
        assert request.fmt is OutputFormat.JSON

    def test_returns_runner_exit_code(self, mocker):
        runner_cls = mocker.patch("main.Runner")
        runner_cls.return_value.run.return_value = 5

        assert main.main(["analyze", "--scenario", "x.conf", "--env-file", "/nonexistent/.env"]) == 5

    def test_bad_environment_exits_three(self, mocker, monkeypatch, capsys):
        monkeypatch.setenv("SWEETSPOT_WORKERS", "0")
        runner_cls = mocker.patch("main.Runner")

        code = main.main(["analyze", "--scenario", "x.conf", "--env-file", "/nonexistent/.env"])

        assert code == 3
        assert "sweetspot: error=ConfigError" in capsys.readouterr().err
        runner_cls.assert_not_called()
