"""Sweet-spot search: minimum mean power under a mean-response budget.

All three searches run over the closed forms in ``sweetspot.analytic``.
The budget is an inequality E[R] <= R'; when slack is cheaper, the
idle threshold drops to zero and the response lands below the budget.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, List, Optional, Tuple

import numpy as np

from sweetspot.analytic import (
    flow_split_metrics,
    tau_c_for_budget,
    threshold_metrics,
)
from sweetspot.config import ConfigError
from sweetspot.errors import (
    BudgetTooLooseError,
    InfeasibleBudgetError,
    InfeasibleError,
    UnstableSystemError,
)
from sweetspot.models import Policy, ServerParams, Workload
from sweetspot.utils.search import golden_section_minimize

logger = logging.getLogger(__name__)


DEFAULT_F_GRID = 1e-3
DEFAULT_N_MIN = 1
DEFAULT_N_MAX = 16
DEFAULT_TAU_W_MIN = 1e-3
DEFAULT_TAU_W_MAX = 1e4
DEFAULT_TAU_W_POINTS = 57
REFINE_TOLERANCE = 1e-6
REFINE_PASSES = 2
BUDGET_TOLERANCE = 1e-9


class DecisionSpace(str, Enum):
    """What the optimizer is allowed to choose."""

    THRESHOLD = "threshold"  # (tau_c, f)
    BATCH = "batch"  # (tau_c, tau_w, f)
    FARM = "farm"  # (n, f)


@dataclass(frozen=True)
class OptProblem:
    """A power-minimization problem under a response-time budget.

    The frequency of ``server`` is ignored; f is a decision variable.
    """

    server: ServerParams
    workload: Workload
    tau_s: float
    budget: float
    space: DecisionSpace = DecisionSpace.THRESHOLD
    f_grid: float = DEFAULT_F_GRID
    n_min: int = DEFAULT_N_MIN
    n_max: int = DEFAULT_N_MAX
    tau_w_min: float = DEFAULT_TAU_W_MIN
    tau_w_max: float = DEFAULT_TAU_W_MAX
    tau_w_points: int = DEFAULT_TAU_W_POINTS

    def __post_init__(self):
        if not self.budget > 0:
            raise ConfigError(f"opt.budget must be > 0, got: {self.budget}")
        if not 0 < self.f_grid <= 1:
            raise ConfigError(f"opt.f_grid must lie in (0, 1], got: {self.f_grid}")
        if self.tau_s < 0:
            raise ConfigError(f"policy.tau_s must be >= 0, got: {self.tau_s}")
        if not 1 <= self.n_min <= self.n_max:
            raise ConfigError(
                f"opt.n_min..opt.n_max must be a nonempty range starting at >= 1, "
                f"got: {self.n_min}..{self.n_max}"
            )
        if not 0 < self.tau_w_min < self.tau_w_max or self.tau_w_points < 2:
            raise ConfigError("tau_w grid needs 0 < tau_w_min < tau_w_max and >= 2 points")

    def frequency_grid(self) -> np.ndarray:
        """Grid k*f_grid for k = 1.. up to and including f = 1."""
        steps = int(round(1.0 / self.f_grid))
        grid = np.arange(1, steps + 1, dtype=float) * self.f_grid
        grid = grid[grid < 1.0]
        return np.append(grid, 1.0)

    def tau_w_grid(self) -> np.ndarray:
        """Zero followed by a log-spaced batching grid."""
        logs = np.logspace(
            math.log10(self.tau_w_min), math.log10(self.tau_w_max), self.tau_w_points
        )
        return np.concatenate(([0.0], logs))


@dataclass(frozen=True)
class Decision:
    """One point of a decision space; fields outside the space stay None."""

    f: float
    tau_c: Optional[float] = None
    tau_w: Optional[float] = None
    n: Optional[int] = None


@dataclass(frozen=True)
class FrontierPoint:
    decision: Decision
    response: float
    power: float


@dataclass(frozen=True)
class OptResult:
    """Optimal decision plus every point evaluated on the way.

    Attributes:
        decision: Power-minimizing decision.
        power: Mean power at the decision.
        response: Mean response at the decision, at most the budget.
        feasible: True when the decision meets stability and the budget.
        frontier: Evaluated (decision, response, power) points, grid order.
    """

    decision: Decision
    power: float
    response: float
    feasible: bool = True
    frontier: Tuple[FrontierPoint, ...] = field(default=(), repr=False)


def _threshold_point(
    problem: OptProblem, f: float, tau_w: float = 0.0
) -> Optional[FrontierPoint]:
    """Cheapest threshold setting at (f, tau_w), or None if the budget is unreachable."""
    if not 0 < f <= 1:
        return None
    s = problem.server.with_frequency(f)
    w = problem.workload
    try:
        tau_c = tau_c_for_budget(s, w, problem.tau_s, problem.budget, tau_w=tau_w)
    except (UnstableSystemError, InfeasibleBudgetError):
        return None
    except BudgetTooLooseError:
        tau_c = 0.0
    metrics = threshold_metrics(s, w, Policy(tau_c=tau_c, tau_s=problem.tau_s, tau_w=tau_w))
    decision = Decision(f=f, tau_c=tau_c, tau_w=tau_w)
    return FrontierPoint(decision=decision, response=metrics.response, power=metrics.power)


def _power_or_inf(point: Optional[FrontierPoint]) -> float:
    return math.inf if point is None else point.power


def _neighbors(grid: np.ndarray, index: int) -> Tuple[float, float]:
    lo = grid[max(index - 1, 0)]
    hi = grid[min(index + 1, len(grid) - 1)]
    return float(lo), float(hi)


def _best(points: Iterable[FrontierPoint]) -> Optional[FrontierPoint]:
    best = None
    for point in points:
        if best is None or point.power < best.power:
            best = point
    return best


def optimize_threshold_pair(problem: OptProblem) -> OptResult:
    """Best (tau_c, f) pair for the plain threshold mechanism.

    Scans the frequency grid, solving tau_c from the budget at each f, then
    refines around the best grid point by golden-section search.

    Raises:
        InfeasibleError: If no frequency is both stable and within budget.
    """
    grid = problem.frequency_grid()
    frontier = [p for p in (_threshold_point(problem, float(f)) for f in grid) if p is not None]
    grid_best = _best(frontier)
    if grid_best is None:
        raise InfeasibleError(
            f"no frequency in (0, 1] meets budget {problem.budget} at lambda={problem.workload.lam}"
        )

    index = int(np.argmin(np.abs(grid - grid_best.decision.f)))
    lo, hi = _neighbors(grid, index)
    f_star, _ = golden_section_minimize(
        lambda f: _power_or_inf(_threshold_point(problem, f)), lo, hi, REFINE_TOLERANCE
    )
    refined = _threshold_point(problem, f_star)
    best = refined if refined is not None and refined.power < grid_best.power else grid_best
    logger.debug(f"Threshold pair refined from f={grid_best.decision.f} to f={best.decision.f}")
    return _finish(problem, best, frontier)


def optimize_batch_triple(problem: OptProblem) -> OptResult:
    """Best (tau_c, tau_w, f) triple for threshold shutdown with batching.

    Nested grid over f and a log-spaced tau_w grid (tau_w = 0 included);
    tau_c comes from the batching budget inversion. The best grid point
    is refined by alternating golden-section passes over f and log tau_w.

    Raises:
        InfeasibleError: If no grid point is stable and within budget.
    """
    f_grid = problem.frequency_grid()
    w_grid = problem.tau_w_grid()
    frontier: List[FrontierPoint] = []
    for f in f_grid:
        for tau_w in w_grid:
            point = _threshold_point(problem, float(f), float(tau_w))
            if point is not None:
                frontier.append(point)
    best = _best(frontier)
    if best is None:
        raise InfeasibleError(
            f"no (f, tau_w) on the grid meets budget {problem.budget} at lambda={problem.workload.lam}"
        )

    log_grid = np.log10(w_grid[1:])
    for _ in range(REFINE_PASSES):
        tau_w = best.decision.tau_w
        index = int(np.argmin(np.abs(f_grid - best.decision.f)))
        lo, hi = _neighbors(f_grid, index)
        f_star, _ = golden_section_minimize(
            lambda f: _power_or_inf(_threshold_point(problem, f, tau_w)),
            lo, hi, REFINE_TOLERANCE,
        )
        best = _better(best, _threshold_point(problem, f_star, tau_w))

        f = best.decision.f
        if best.decision.tau_w == 0.0:
            w_star, _ = golden_section_minimize(
                lambda t: _power_or_inf(_threshold_point(problem, f, t)),
                0.0, float(w_grid[1]), REFINE_TOLERANCE,
            )
        else:
            index = int(np.argmin(np.abs(log_grid - math.log10(best.decision.tau_w))))
            lo, hi = _neighbors(log_grid, index)
            log_star, _ = golden_section_minimize(
                lambda x: _power_or_inf(_threshold_point(problem, f, 10.0 ** x)),
                lo, hi, REFINE_TOLERANCE,
            )
            w_star = 10.0 ** log_star
        best = _better(best, _threshold_point(problem, f, w_star))

    return _finish(problem, best, frontier)


def _better(current: FrontierPoint, candidate: Optional[FrontierPoint]) -> FrontierPoint:
    if candidate is not None and candidate.power < current.power:
        return candidate
    return current


def _farm_point(problem: OptProblem, n: int) -> Optional[FrontierPoint]:
    """Cheapest frequency for n servers: the slowest one that meets the budget.

    Farm power n*(P0 f^3 + C) grows with f at fixed n, so the budget
    binds whenever it is finite.
    """
    s, w = problem.server, problem.workload
    f_stability = w.lam / (n * s.mu)
    if f_stability >= 1.0:
        return None
    f = (1.0 / problem.budget + w.lam / n) / s.mu
    if f <= f_stability:
        f = math.nextafter(f_stability, math.inf)
    if f > 1.0:
        return None
    metrics = flow_split_metrics(s.with_frequency(f), w, n)
    return FrontierPoint(Decision(f=f, n=n), response=metrics.response, power=metrics.power)


def farm_profile(problem: OptProblem) -> List[FrontierPoint]:
    """Per-n optimum over the plant-size range; infeasible n are left out."""
    points = (_farm_point(problem, n) for n in range(problem.n_min, problem.n_max + 1))
    return [p for p in points if p is not None]


def optimize_farm_pair(problem: OptProblem) -> OptResult:
    """Best (n, f) pair for a Bernoulli-split farm of always-on servers.

    Ties go to the smaller n.

    Raises:
        InfeasibleError: If no n in range meets the budget with f <= 1.
    """
    frontier = farm_profile(problem)
    best = _best(frontier)
    if best is None:
        raise InfeasibleError(
            f"no n in {problem.n_min}..{problem.n_max} meets budget {problem.budget}"
        )
    return _finish(problem, best, frontier)


def _finish(problem: OptProblem, best: FrontierPoint, frontier: List[FrontierPoint]) -> OptResult:
    feasible = best.response <= problem.budget * (1.0 + BUDGET_TOLERANCE)
    if not feasible:
        logger.warning(
            f"Optimum response {best.response} exceeds budget {problem.budget} beyond tolerance"
        )
    logger.info(
        f"Optimum for {problem.space.value}: {best.decision} "
        f"power={best.power} response={best.response}"
    )
    return OptResult(
        decision=best.decision,
        power=best.power,
        response=best.response,
        feasible=feasible,
        frontier=tuple(frontier),
    )


_SOLVERS = {
    DecisionSpace.THRESHOLD: optimize_threshold_pair,
    DecisionSpace.BATCH: optimize_batch_triple,
    DecisionSpace.FARM: optimize_farm_pair,
}


def optimize(problem: OptProblem) -> OptResult:
    """Dispatch to the search matching ``problem.space``."""
    return _SOLVERS[problem.space](problem)


def budget_frontier(
    problem: OptProblem, budgets: Iterable[float]
) -> List[Tuple[float, Optional[OptResult]]]:
    """Optimal result for each budget; None where the budget is infeasible."""
    results = []
    for budget in budgets:
        candidate = replace(problem, budget=float(budget))
        try:
            results.append((float(budget), optimize(candidate)))
        except InfeasibleError as e:
            logger.debug(f"Budget {budget} infeasible: {e}")
            results.append((float(budget), None))
    return results
