"""Recover abstract time from a clock position reading.

Three routes are shipped so the approximation chain is individually
testable:

* exact: root of ``position_expectation(n) = x`` on the monotone window,
* log form: ``n = (2/r) * ln(A/x)`` (cosine dropped),
* linear form: ``n = 2*(A - x)/(r*A)`` (log expanded to first order).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import log, pi

from .params import (
    AbstractTime,
    ClockParams,
    NonMonotonicWindow,
    OutOfRange,
    ZeroDamping,
)
from .clock import position_expectation

__all__ = [
    "TimeMapResult",
    "n_from_x_exact",
    "n_from_x_log",
    "n_from_x_linear",
    "invert_position",
    "linearization_report",
]

# Absolute tolerance in n for the exact inversion, and the iteration cap.
_ROOT_TOL = 1e-12
_ROOT_MAX_ITER = 200

# Floor in the relative-error denominator, avoiding division by zero at n = 0.
_EPS_FLOOR = 1e-12


@dataclass(frozen=True)
class TimeMapResult:
    """Exact and approximate abstract times recovered from one reading.

    ``rel_error_linear`` is |n_linear - n_exact| / max(n_exact, 1e-12).
    """

    x: float
    y: float
    n_exact: AbstractTime
    n_log: AbstractTime
    n_linear: AbstractTime
    rel_error_linear: float


def _check_monotone_window(params: ClockParams) -> None:
    if params.damped_frequency * params.n_reset >= pi / 2.0:
        raise NonMonotonicWindow(
            f"Omega * n_reset = {params.damped_frequency * params.n_reset} >= pi/2; "
            "the position map is not guaranteed invertible on this window"
        )


def n_from_x_exact(x: float, params: ClockParams) -> AbstractTime:
    """Unique n in [0, n_reset) with position_expectation(n) = x.

    The map n -> <x>(n) is strictly decreasing on the window when
    Omega * n_reset < pi/2 (checked at call time), so the root is bracketed
    on [0, n_reset] and refined by bisection with secant steps to an
    absolute tolerance of 1e-12 in n.

    Raises
    ------
    NonMonotonicWindow
        If Omega * n_reset >= pi/2.
    OutOfRange
        If x > A or x <= <x>(n_reset).
    """
    _check_monotone_window(params)
    amp = params.amplitude
    lo, hi = 0.0, params.n_reset
    floor = position_expectation(hi, params)
    if x > amp or x <= floor:
        raise OutOfRange(
            f"reading x = {x} outside the attained interval ({floor}, {amp}]"
        )
    if x == amp:
        return 0.0

    def f(n: float) -> float:
        return position_expectation(n, params) - x

    f_lo = amp - x  # > 0
    f_hi = floor - x  # < 0
    for _ in range(_ROOT_MAX_ITER):
        if hi - lo <= _ROOT_TOL:
            break
        span = hi - lo
        # Secant candidate from the bracket endpoints; bisect if it falls
        # outside the open bracket.
        cand = lo - f_lo * span / (f_hi - f_lo)
        if not lo < cand < hi:
            cand = 0.5 * (lo + hi)
        f_cand = f(cand)
        if f_cand == 0.0:
            return cand
        if f_cand > 0.0:
            lo, f_lo = cand, f_cand
        else:
            hi, f_hi = cand, f_cand
        # If the secant step failed to halve the bracket, bisect as well,
        # so stalls near an endpoint still converge at bisection rate.
        if hi - lo > 0.5 * span:
            mid = 0.5 * (lo + hi)
            f_mid = f(mid)
            if f_mid == 0.0:
                return mid
            if f_mid > 0.0:
                lo, f_lo = mid, f_mid
            else:
                hi, f_hi = mid, f_mid
    return 0.5 * (lo + hi)


def n_from_x_log(x: float, params: ClockParams) -> AbstractTime:
    """Log-form inversion (2/r) * ln(A/x), valid on the decay envelope.

    Raises
    ------
    ZeroDamping
        If r = 0.
    OutOfRange
        If x <= 0 or x > A.
    """
    if params.damping == 0.0:
        raise ZeroDamping("log-form inversion undefined for r = 0")
    if x <= 0.0 or x > params.amplitude:
        raise OutOfRange(f"reading x = {x} outside (0, {params.amplitude}]")
    return (2.0 / params.damping) * log(params.amplitude / x)


def n_from_x_linear(x: float, params: ClockParams) -> AbstractTime:
    """First-order inversion 2*(A - x)/(r*A).

    Raises
    ------
    ZeroDamping
        If r = 0; callers must use n_from_x_exact instead.
    OutOfRange
        If x > A.
    """
    if params.damping == 0.0:
        raise ZeroDamping("linear inversion undefined for r = 0")
    if x > params.amplitude:
        raise OutOfRange(f"reading x = {x} exceeds the amplitude {params.amplitude}")
    return 2.0 * (params.amplitude - x) / (params.damping * params.amplitude)


def invert_position(x: float, params: ClockParams) -> TimeMapResult:
    """All three inversions of one reading, with the linear-form error."""
    n_exact = n_from_x_exact(x, params)
    n_log = n_from_x_log(x, params)
    n_lin = n_from_x_linear(x, params)
    rel = abs(n_lin - n_exact) / max(n_exact, _EPS_FLOOR)
    return TimeMapResult(
        x=x,
        y=params.amplitude - x,
        n_exact=n_exact,
        n_log=n_log,
        n_linear=n_lin,
        rel_error_linear=rel,
    )


def linearization_report(params: ClockParams, grid_size: int) -> list[TimeMapResult]:
    """Inversion table on a uniform n-grid over [0, n_reset).

    Each row maps n -> x = <x>(n) forward and then recovers n by all three
    routes, so the linear-form relative error can be tracked along the run.

    Raises
    ------
    ValueError
        If grid_size < 2.
    ZeroDamping, NonMonotonicWindow
        Propagated from the inversions.
    """
    if grid_size < 2:
        raise ValueError(f"grid_size must be >= 2, got {grid_size}")
    if params.damping == 0.0:
        raise ZeroDamping("linearization report undefined for r = 0")
    _check_monotone_window(params)
    step = params.n_reset / grid_size
    rows = []
    for k in range(grid_size):
        x = position_expectation(k * step, params)
        rows.append(invert_position(x, params))
    return rows
