"""Scenario files: dotted ``key=value`` settings plus optional sweep axes.

Files use dotenv syntax (``#`` comments, optional quotes). Dotted keys
stand in for sections, e.g. ``server.p0=150`` or ``policy.tau_c=never``.
A key ``sweep.<setting>`` declares an axis, either ``lo:hi:step`` or a
comma-separated value list. See docs/scenario-format.md for every key.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple

from dotenv.parser import parse_stream

from sweetspot.config import Config, ConfigError
from sweetspot.errors import ScenarioParseError
from sweetspot.models import NEVER, Dispatch, FarmConfig, Policy, ServerParams, Workload
from sweetspot.optimizer import DecisionSpace, OptProblem
from sweetspot.simulator.records import DEFAULT_HORIZON, DEFAULT_WARMUP, SimConfig

logger = logging.getLogger(__name__)


SWEEP_PREFIX = "sweep."
RANGE_SEPARATOR = ":"
LIST_SEPARATOR = ","
# Digits kept when generating lo + i*step so 0.1 steps print as 0.3, not 0.30000000000000004
RANGE_DECIMALS = 12


def _parse_float(key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ScenarioParseError(f"{key} must be a number, got: {raw!r}")


def _parse_int(key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ScenarioParseError(f"{key} must be an integer, got: {raw!r}")


def _parse_tau_c(key: str, raw: str) -> Optional[float]:
    if raw.strip().lower() == NEVER:
        return None
    return _parse_float(key, raw)


def _parse_str(key: str, raw: str) -> str:
    return raw


def _choice(*options: str) -> Callable[[str, str], str]:
    def parse(key: str, raw: str) -> str:
        value = raw.strip().lower()
        if value not in options:
            raise ScenarioParseError(f"{key} must be one of {', '.join(options)}, got: {raw!r}")
        return value
    return parse


KEY_PARSERS: Dict[str, Callable[[str, str], Any]] = {
    "scenario.name": _parse_str,
    "server.p0": _parse_float,
    "server.c": _parse_float,
    "server.mu": _parse_float,
    "server.f": _parse_float,
    "workload.lambda": _parse_float,
    "policy.tau_c": _parse_tau_c,
    "policy.tau_s": _parse_float,
    "policy.tau_w": _parse_float,
    "farm.n": _parse_int,
    "farm.dispatch": _choice(*(d.value for d in Dispatch)),
    "farm.k": _parse_int,
    "sim.horizon": _parse_int,
    "sim.warmup": _parse_int,
    "sim.replications": _parse_int,
    "sim.seed": _parse_int,
    "sim.workers": _parse_int,
    "sim.trace": _parse_str,
    "opt.space": _choice(*(s.value for s in DecisionSpace)),
    "opt.budget": _parse_float,
    "opt.f_grid": _parse_float,
    "opt.n_min": _parse_int,
    "opt.n_max": _parse_int,
    "opt.tau_w_min": _parse_float,
    "opt.tau_w_max": _parse_float,
    "opt.tau_w_points": _parse_int,
    "sweep.evaluate": _choice("analyze", "simulate", "optimize", "validate"),
}

REQUIRED_KEYS = ("server.p0", "server.c", "server.mu", "workload.lambda")

# Settings that may be swept
AXIS_KEYS = frozenset(
    key for key, parser in KEY_PARSERS.items()
    if parser in (_parse_float, _parse_int, _parse_tau_c) and not key.startswith("sim.")
)


@dataclass(frozen=True)
class Axis:
    """One sweep dimension: a setting key and its values in sweep order."""

    key: str
    values: Tuple[Any, ...]


def parse_axis(key: str, raw: str) -> Axis:
    """Parse ``lo:hi:step`` or ``v1,v2,...`` for a sweepable setting.

    Raises:
        ConfigError: If the key is not sweepable.
        ScenarioParseError: If the axis is malformed or has min > max or step <= 0.
    """
    if key not in AXIS_KEYS:
        raise ConfigError(f"cannot sweep over unknown or non-numeric key: {key}")
    parser = KEY_PARSERS[key]
    axis_key = f"{SWEEP_PREFIX}{key}"

    if RANGE_SEPARATOR in raw:
        parts = raw.split(RANGE_SEPARATOR)
        if len(parts) != 3:
            raise ScenarioParseError(f"{axis_key} range must be lo:hi:step, got: {raw!r}")
        lo, hi, step = (_parse_float(axis_key, part) for part in parts)
        if lo > hi or step <= 0:
            raise ScenarioParseError(f"{axis_key} needs lo <= hi and step > 0, got: {raw!r}")
        count = int(math.floor((hi - lo) / step + 1e-9)) + 1
        points = [round(lo + i * step, RANGE_DECIMALS) for i in range(count)]
        if parser is _parse_int:
            if any(p != int(p) for p in points):
                raise ScenarioParseError(f"{axis_key} must step through integers, got: {raw!r}")
            points = [int(p) for p in points]
        return Axis(key=key, values=tuple(points))

    items = [item.strip() for item in raw.split(LIST_SEPARATOR) if item.strip()]
    if not items:
        raise ScenarioParseError(f"{axis_key} has no values")
    return Axis(key=key, values=tuple(parser(axis_key, item) for item in items))


@dataclass(frozen=True)
class Scenario:
    """Typed scenario settings and sweep axes."""

    name: str
    settings: Dict[str, Any] = field(default_factory=dict)
    axes: Tuple[Axis, ...] = ()

    def get(self, key: str, default: Any = None) -> Any:
        return self.settings.get(key, default)

    def with_settings(self, updates: Mapping[str, Any]) -> "Scenario":
        return replace(self, settings={**self.settings, **updates})

    def server_params(self) -> ServerParams:
        return ServerParams(
            p0=self.settings["server.p0"],
            c=self.settings["server.c"],
            mu=self.settings["server.mu"],
            f=self.get("server.f", 1.0),
        )

    def workload(self) -> Workload:
        return Workload(self.settings["workload.lambda"])

    def policy(self) -> Policy:
        return Policy(
            tau_c=self.get("policy.tau_c"),
            tau_s=self.get("policy.tau_s", 0.0),
            tau_w=self.get("policy.tau_w", 0.0),
        )

    def farm(self) -> Optional[FarmConfig]:
        if "farm.n" not in self.settings:
            return None
        return FarmConfig(
            n=self.settings["farm.n"],
            dispatch=Dispatch(self.get("farm.dispatch", Dispatch.BERNOULLI.value)),
            k=self.get("farm.k", 1),
        )

    def sim_config(self, config: Config) -> SimConfig:
        return SimConfig(
            server=self.server_params(),
            workload=self.workload(),
            policy=self.policy(),
            farm=self.farm(),
            horizon=self.get("sim.horizon", DEFAULT_HORIZON),
            warmup=self.get("sim.warmup", DEFAULT_WARMUP),
            replications=self.get("sim.replications", config.default_replications),
            seed=self.get("sim.seed", config.default_seed),
            trace_path=self.get("sim.trace"),
            workers=self.get("sim.workers", config.workers),
        )

    def opt_problem(self) -> OptProblem:
        if "opt.budget" not in self.settings:
            raise ConfigError("Missing required scenario key: opt.budget")
        optional = {
            "f_grid": "opt.f_grid",
            "n_min": "opt.n_min",
            "n_max": "opt.n_max",
            "tau_w_min": "opt.tau_w_min",
            "tau_w_max": "opt.tau_w_max",
            "tau_w_points": "opt.tau_w_points",
        }
        extras = {name: self.settings[key] for name, key in optional.items() if key in self.settings}
        return OptProblem(
            server=self.server_params(),
            workload=self.workload(),
            tau_s=self.get("policy.tau_s", 0.0),
            budget=self.settings["opt.budget"],
            space=DecisionSpace(self.get("opt.space", DecisionSpace.THRESHOLD.value)),
            **extras,
        )

    def grid(self) -> List[Dict[str, Any]]:
        """Sweep points in deterministic order; the last axis varies fastest."""
        if not self.axes:
            return [{}]
        keys = [axis.key for axis in self.axes]
        return [dict(zip(keys, combo)) for combo in itertools.product(*(a.values for a in self.axes))]


def parse_settings(raw: Mapping[str, str], name: str) -> Scenario:
    """Type-check raw string settings and split out sweep axes.

    Raises:
        ConfigError: On unknown or missing keys.
        ScenarioParseError: On values that do not parse.
    """
    settings: Dict[str, Any] = {}
    axes: List[Axis] = []
    for key, value in raw.items():
        if key.startswith(SWEEP_PREFIX) and key in KEY_PARSERS:
            settings[key] = KEY_PARSERS[key](key, value)
        elif key.startswith(SWEEP_PREFIX):
            axes.append(parse_axis(key[len(SWEEP_PREFIX):], value))
        elif key in KEY_PARSERS:
            settings[key] = KEY_PARSERS[key](key, value)
        else:
            raise ConfigError(f"unknown scenario key: {key}")

    missing = [key for key in REQUIRED_KEYS if key not in settings]
    if missing:
        raise ConfigError(f"Missing required scenario keys: {', '.join(missing)}")

    return Scenario(name=settings.get("scenario.name", name), settings=settings, axes=tuple(axes))


def read_scenario_file(path: str) -> Dict[str, str]:
    """Read raw key=value pairs in file order.

    Raises:
        ScenarioParseError: If the file is missing or a line does not parse.
    """
    try:
        with open(path, "r", encoding="utf-8") as stream:
            bindings = list(parse_stream(stream))
    except OSError as e:
        raise ScenarioParseError(f"cannot read scenario file {path}: {e}")

    raw: Dict[str, str] = {}
    for binding in bindings:
        if binding.error:
            raise ScenarioParseError(
                f"{path}:{binding.original.line}: cannot parse {binding.original.string.strip()!r}"
            )
        if binding.key is None:
            continue
        if binding.value is None:
            raise ScenarioParseError(f"{path}:{binding.original.line}: {binding.key} has no value")
        raw[binding.key] = binding.value
    return raw


def load_scenario(path: str, overrides: Optional[Mapping[str, str]] = None) -> Scenario:
    """Load a scenario file and apply ``--set`` overrides on top of it."""
    raw = read_scenario_file(path)
    if overrides:
        logger.debug(f"Applying {len(overrides)} override(s): {', '.join(overrides)}")
        raw.update(overrides)
    scenario = parse_settings(raw, name=Path(path).stem)
    logger.info(f"Loaded scenario '{scenario.name}' from {path} ({len(scenario.axes)} sweep axis/axes)")
    return scenario
