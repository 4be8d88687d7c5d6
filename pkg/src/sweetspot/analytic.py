"""Closed-form power and response-time models of a DVFS server.

Every function here is pure. Stability and domain checks raise the
errors from ``sweetspot.errors``; nothing is clamped silently.
"""

import math
from dataclasses import dataclass

from sweetspot.errors import (
    BudgetTooLooseError,
    DomainError,
    InfeasibleBudgetError,
    UnstableSystemError,
)
from sweetspot.models import DelayMoments, Metrics, Policy, ServerParams, Workload


# Squared coefficient of variation of exponential service
EXPONENTIAL_CS2 = 1.0


@dataclass(frozen=True)
class FlowSplitOptimum:
    """Large-delay optimum of a Bernoulli-split farm.

    Attributes:
        f_real: Stationary frequency of the real relaxation.
        n_real: Real-valued plant size at f_real.
        n: Best integer plant size.
        f: Frequency used with the integer plant size.
        power: Farm power n * (P0 f^3 + C) at (n, f).
        relaxed_power: Power of the real relaxation, a lower bound on power.
    """

    f_real: float
    n_real: float
    n: int
    f: float
    power: float
    relaxed_power: float


def _mm1_floor(s: ServerParams, lam: float) -> float:
    """Return 1/(mu f - lambda), raising if the queue is unstable."""
    capacity = s.service_rate
    if lam >= capacity:
        raise UnstableSystemError(
            f"arrival rate {lam} >= service rate mu*f = {capacity}"
        )
    return 1.0 / (capacity - lam)


def mm1_metrics(s: ServerParams, w: Workload) -> Metrics:
    """M/M/1 queue at service rate mu*f with the server always on.

    Raises:
        UnstableSystemError: If lambda >= mu*f.
    """
    return Metrics(response=_mm1_floor(s, w.lam), power=s.active_power)


def delay_moments(p: Policy, w: Workload) -> DelayMoments:
    """Moments of the extra delay seen by the first job of a busy period.

    The delay is tau_s + tau_w when the idle period outlasts tau_c, and 0
    otherwise. Idle periods are exponential with rate lambda.

    Args:
        p: Shutdown policy.
        w: Arrival stream.

    Returns:
        E[D] and E[D^2].
    """
    if p.never_shuts_down:
        return DelayMoments(mean=0.0, second_moment=0.0)
    d = p.wake_delay
    survival = math.exp(-w.lam * p.tau_c)
    return DelayMoments(mean=d * survival, second_moment=d * d * survival)


def exceptional_first_service_response(
    s: ServerParams,
    w: Workload,
    d: DelayMoments,
    cs2: float = EXPONENTIAL_CS2,
) -> float:
    """Mean response of an M/G/1 queue whose first customer per busy period is delayed.

    Args:
        s: Server; mean service time is 1/(mu f).
        w: Arrival stream.
        d: Moments of the first-customer delay.
        cs2: Squared coefficient of variation of the service time.

    Returns:
        Mean response time in seconds.

    Raises:
        UnstableSystemError: If lambda >= mu*f.
        DomainError: If cs2 is negative.
    """
    if cs2 < 0:
        raise DomainError(f"cs2 must be >= 0, got: {cs2}")
    _mm1_floor(s, w.lam)
    lam = w.lam
    rate = s.service_rate
    rho = lam / rate
    service = 1.0 / rate
    queueing = lam * (1.0 + cs2) / (2.0 * rate * rate * (1.0 - rho))
    first_delay = (2.0 * d.mean + lam * d.second_moment) / (2.0 * (1.0 + lam * d.mean))
    return service + queueing + first_delay


def _on_fraction(s: ServerParams, w: Workload, p: Policy) -> float:
    # Written without 1 - f_off so light loads keep full precision.
    lam = w.lam
    rho = lam / s.service_rate
    survival = math.exp(-lam * p.tau_c)
    numerator = -math.expm1(-lam * p.tau_c) + lam * p.tau_s * survival \
        + (1.0 + lam * p.tau_w) * rho * survival
    return numerator / (1.0 + lam * p.wake_delay * survival)


def threshold_metrics(s: ServerParams, w: Workload, p: Policy) -> Metrics:
    """Threshold shutdown, with optional job batching.

    With tau_w = 0 this is the plain threshold mechanism; with tau_c never
    it is the always-on M/M/1 queue.

    Raises:
        UnstableSystemError: If lambda >= mu*f.
    """
    if p.never_shuts_down:
        return mm1_metrics(s, w)
    response = exceptional_first_service_response(s, w, delay_moments(p, w))
    return Metrics(response=response, power=s.active_power * _on_fraction(s, w, p))


def off_fraction(s: ServerParams, w: Workload, p: Policy) -> float:
    """Long-run fraction of time the platform is powered off.

    A regeneration cycle runs from one emptying of the queue to the next.
    Its mean length L satisfies lambda*L = mu*f*(L - 1/lambda - E[D]); the
    server is off for the part of the idle period beyond tau_c plus the
    batching hold.

    Raises:
        UnstableSystemError: If lambda >= mu*f.
    """
    _mm1_floor(s, w.lam)
    if p.never_shuts_down:
        return 0.0
    lam = w.lam
    rate = s.service_rate
    moments = delay_moments(p, w)
    cycle = rate * (1.0 / lam + moments.mean) / (rate - lam)
    off_time = math.exp(-lam * p.tau_c) * (1.0 / lam + p.tau_w)
    return off_time / cycle


def immediate_shutdown_metrics(s: ServerParams, w: Workload) -> Metrics:
    """Shut down the moment the queue empties, with free wake-up.

    Raises:
        UnstableSystemError: If lambda >= mu*f.
    """
    response = _mm1_floor(s, w.lam)
    return Metrics(response=response, power=(w.lam / s.service_rate) * s.active_power)


def race_to_halt_metrics(s: ServerParams, w: Workload, tau_s: float) -> Metrics:
    """Full speed with immediate shutdown (f = 1, tau_c = 0).

    The frequency of ``s`` is ignored; the server runs at f = 1.

    Raises:
        UnstableSystemError: If lambda >= mu.
        DomainError: If tau_s is negative.
    """
    if tau_s < 0:
        raise DomainError(f"tau_s must be >= 0, got: {tau_s}")
    full = s.with_frequency(1.0)
    lam = w.lam
    floor = _mm1_floor(full, lam)
    response = floor + tau_s / (2.0 * (1.0 + lam * tau_s)) + tau_s / 2.0
    on = (lam * tau_s + lam / full.mu) / (1.0 + lam * tau_s)
    return Metrics(response=response, power=full.active_power * on)


def batching_race_to_halt_metrics(
    s: ServerParams, w: Workload, tau_s: float, tau_w: float
) -> Metrics:
    """Full speed, immediate shutdown and a batching hold (f = 1, tau_c = 0).

    The frequency of ``s`` is ignored, as in race_to_halt_metrics.
    """
    return threshold_metrics(s.with_frequency(1.0), w, Policy(tau_c=0.0, tau_s=tau_s, tau_w=tau_w))


def _budget_slack(s: ServerParams, w: Workload, budget: float) -> float:
    floor = _mm1_floor(s, w.lam)
    if budget <= floor:
        raise InfeasibleBudgetError(
            f"budget {budget} is at or below the M/M/1 floor {floor} at f={s.f}"
        )
    return budget - floor


def tau_c_for_budget(
    s: ServerParams,
    w: Workload,
    tau_s: float,
    budget: float,
    tau_w: float = 0.0,
) -> float:
    """Idle threshold whose mean response equals the budget exactly.

    Args:
        s: Server at the frequency under study.
        w: Arrival stream.
        tau_s: Wake-up latency.
        budget: Target mean response time R'.
        tau_w: Batching hold; 0 for the plain threshold mechanism.

    Returns:
        tau_c >= 0.

    Raises:
        UnstableSystemError: If lambda >= mu*f.
        InfeasibleBudgetError: If the budget is at or below 1/(mu f - lambda).
        BudgetTooLooseError: If even tau_c = 0 responds faster than the budget.
    """
    slack = _budget_slack(s, w, budget)
    lam = w.lam
    d = tau_s + tau_w
    growth = (2.0 * d + lam * d * d) / (2.0 * slack) - lam * d
    if growth < 1.0:
        raise BudgetTooLooseError(
            f"budget {budget} exceeds the tau_c=0 response at f={s.f}; no tau_c meets it exactly"
        )
    return math.log(growth) / lam


def constrained_power(
    s: ServerParams,
    w: Workload,
    tau_s: float,
    budget: float,
    tau_w: float = 0.0,
) -> float:
    """Mean power when tau_c is chosen so the response equals the budget.

    Only meaningful where ``tau_c_for_budget`` succeeds; beyond that the
    expression keeps its algebraic value.

    Raises:
        UnstableSystemError: If lambda >= mu*f.
        InfeasibleBudgetError: If the budget is at or below 1/(mu f - lambda).
        DomainError: If tau_s + tau_w is zero.
    """
    d = tau_s + tau_w
    if d <= 0:
        raise DomainError("constrained power needs a positive wake-up delay")
    slack = _budget_slack(s, w, budget)
    lam = w.lam
    rho = lam / s.service_rate
    off = 2.0 * (1.0 + lam * tau_w) * (1.0 - rho) * slack / (2.0 * d + lam * d * d)
    return s.active_power * (1.0 - off)


def flow_split_metrics(s: ServerParams, w: Workload, n: int) -> Metrics:
    """Bernoulli split over n always-on servers.

    Raises:
        DomainError: If n is not a positive integer.
        UnstableSystemError: If lambda/n >= mu*f.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be a positive integer, got: {n}")
    response = _mm1_floor(s, w.lam / n)
    return Metrics(response=response, power=n * s.active_power)


def power_minimizing_frequency(s: ServerParams) -> float:
    """Minimizer of (P0 f^2 + C/f) over (0, 1].

    This is the stationary point of the immediate-shutdown power curve
    and the large-delay frequency of a Bernoulli-split farm.

    Raises:
        DomainError: If P0 or C is zero.
    """
    if s.p0 <= 0 or s.c <= 0:
        raise DomainError("power-minimizing frequency needs P0 > 0 and C > 0")
    return min(math.cbrt(s.c / (2.0 * s.p0)), 1.0)


def optimal_flow_split(s: ServerParams, w: Workload) -> FlowSplitOptimum:
    """Power-optimal frequency and plant size when delay is unconstrained.

    The real relaxation puts every server at utilization one. Integer
    candidates floor(n*) and ceil(n*) are scored with the cheapest
    frequency each allows: f* when it keeps the server within capacity,
    otherwise the next float above the stability boundary lambda/(n mu),
    so the returned (n, f) is always stable. Ties go to the smaller n.

    Raises:
        DomainError: If P0 or C is zero.
    """
    f_real = power_minimizing_frequency(s)
    n_real = w.lam / (s.mu * f_real)
    relaxed = n_real * s.with_frequency(f_real).active_power

    best = None
    for n in sorted({math.floor(n_real), math.ceil(n_real)}):
        if n < 1:
            continue
        f = max(f_real, math.nextafter(w.lam / (n * s.mu), math.inf))
        if f > 1.0:
            continue
        power = n * s.with_frequency(f).active_power
        if best is None or power < best[2]:
            best = (n, f, power)

    n, f, power = best
    return FlowSplitOptimum(
        f_real=f_real, n_real=n_real, n=n, f=f, power=power, relaxed_power=relaxed
    )
