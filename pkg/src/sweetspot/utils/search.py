"""Bracketing line search used by the optimizer."""

import math
from typing import Callable, Tuple

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI2 = (3 - math.sqrt(5)) / 2  # 1 / phi^2


def golden_section_minimize(
    func: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-6,
) -> Tuple[float, float]:
    """Golden-section search for the minimum of a unimodal function.

    Reuses one interior evaluation per iteration. Infeasible points may
    return ``math.inf``; they are simply never preferred.

    Args:
        func: Objective over [lo, hi].
        lo: Lower end of the bracket.
        hi: Upper end of the bracket.
        tol: Width of the final bracket.

    Returns:
        (x, func(x)) for the best point seen, endpoints included.
    """
    a, b = min(lo, hi), max(lo, hi)
    best = min(((a, func(a)), (b, func(b))), key=lambda item: item[1])
    h = b - a
    if h <= tol:
        return best

    steps = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
    c = a + INV_PHI2 * h
    d = a + INV_PHI * h
    yc = func(c)
    yd = func(d)

    for _ in range(steps):
        if yc < yd:
            b, d, yd = d, c, yc
            h = INV_PHI * h
            c = a + INV_PHI2 * h
            yc = func(c)
        else:
            a, c, yc = c, d, yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = func(d)

    for candidate in ((c, yc), (d, yd)):
        if candidate[1] < best[1]:
            best = candidate
    return best
