"""Scalar search kernels used by the allocation solvers.

Everything here is deliberately dependency-free: golden-section
maximization of unimodal functions, geometric bracketing, bisection,
and a small damped-Newton iteration for 2-D stationarity systems.
The curve solvers only ever feed these smooth, well-scaled objectives,
so plain kernels with tight default tolerances are enough.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0   # 1/phi
_INVPHI2 = (3.0 - math.sqrt(5.0)) / 2.0  # 1/phi^2


class NumericsError(RuntimeError):
    """A search kernel failed to produce a usable result."""


class BracketError(NumericsError):
    """Geometric expansion could not bracket a maximum."""


@dataclass(frozen=True)
class SearchConfig:
    rel_tol: float = 1e-12
    abs_tol: float = 1e-10
    max_iter: int = 200
    bracket_growth: float = 2.0
    bracket_seed: float = 1.0

    def __post_init__(self) -> None:
        if not (self.rel_tol > 0.0 and self.abs_tol > 0.0):
            raise ValueError("tolerances must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.bracket_growth <= 1.0:
            raise ValueError("bracket_growth must be > 1")
        if self.bracket_seed <= 0.0:
            raise ValueError("bracket_seed must be > 0")


DEFAULT_SEARCH = SearchConfig()


def _checked(f: Callable[[float], float], x: float) -> float:
    val = f(x)
    if not math.isfinite(val):
        raise NumericsError(f"objective returned non-finite value {val} at x={x}")
    return val


def maximize_unimodal(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    cfg: SearchConfig = DEFAULT_SEARCH,
) -> tuple[float, float]:
    """Golden-section maximization of a unimodal f on [lo, hi].

    Returns (x_star, f(x_star)); the result never loses to either
    endpoint, so boundary maxima are returned exactly.
    """
    if not (lo < hi):
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    f_lo = _checked(f, lo)
    f_hi = _checked(f, hi)

    a, b = lo, hi
    h = b - a
    c = a + _INVPHI2 * h
    d = a + _INVPHI * h
    fc = _checked(f, c)
    fd = _checked(f, d)
    for _ in range(cfg.max_iter):
        mid = 0.5 * (a + b)
        if (b - a) <= max(cfg.abs_tol, cfg.rel_tol * abs(mid)):
            break
        if fc > fd:
            b, d, fd = d, c, fc
            h = b - a
            c = a + _INVPHI2 * h
            fc = _checked(f, c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + _INVPHI * h
            fd = _checked(f, d)

    x_best, f_best = (c, fc) if fc >= fd else (d, fd)
    # boundary maxima: report the exact endpoint
    if f_lo >= f_best and f_lo >= f_hi:
        return lo, f_lo
    if f_hi >= f_best:
        return hi, f_hi
    return x_best, f_best


def bracket_above(
    f: Callable[[float], float],
    cfg: SearchConfig = DEFAULT_SEARCH,
) -> tuple[float, float]:
    """Bracket the maximum of an f that rises from x=0 and eventually falls.

    Expands geometrically from cfg.bracket_seed until a decrease is seen;
    shrinks first if the seed already sits past the peak.  Returns
    (0, hi) with an interior point strictly better than both ends.
    Raises BracketError if growth/shrink budgets are exhausted (for
    instance when f is monotone decreasing).
    """
    lo = 0.0
    f_lo = _checked(f, lo)
    # a "rise" below rounding noise is a boundary maximum in disguise
    rise_tol = 1e-12 * max(1.0, abs(f_lo))

    x = cfg.bracket_seed
    f_x = _checked(f, x)
    shrinks = 0
    while f_x <= f_lo + rise_tol:
        shrinks += 1
        if shrinks > cfg.max_iter:
            raise BracketError(
                "no rise found above x=0; objective looks monotone non-increasing"
            )
        x /= cfg.bracket_growth
        f_x = _checked(f, x)

    prev, f_prev = x, f_x
    cur = x * cfg.bracket_growth
    for _ in range(cfg.max_iter):
        f_cur = _checked(f, cur)
        if f_cur < f_prev:
            # peak is inside (lo, cur): prev beats both ends
            return lo, cur
        prev, f_prev = cur, f_cur
        cur *= cfg.bracket_growth
    raise BracketError(
        f"no decrease found after {cfg.max_iter} expansions up to x={prev}"
    )


def bisect_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    cfg: SearchConfig = DEFAULT_SEARCH,
) -> float:
    """Bisection root of f on [lo, hi]; endpoints must straddle zero."""
    if not (lo < hi):
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    f_lo = _checked(f, lo)
    f_hi = _checked(f, hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0.0:
        raise NumericsError(
            f"bisect_root: f has the same sign at both endpoints "
            f"(f({lo})={f_lo}, f({hi})={f_hi})"
        )
    a, b = lo, hi
    for _ in range(cfg.max_iter):
        mid = 0.5 * (a + b)
        if (b - a) <= max(cfg.abs_tol, cfg.rel_tol * abs(mid)):
            return mid
        f_mid = _checked(f, mid)
        if f_mid == 0.0:
            return mid
        if f_lo * f_mid < 0.0:
            b = mid
        else:
            a, f_lo = mid, f_mid
    return 0.5 * (a + b)


def _fd_jacobian(
    residual: Callable[[tuple[float, float]], tuple[float, float]],
    x: tuple[float, float],
    r0: tuple[float, float],
) -> list[list[float]]:
    sqrt_eps = math.sqrt(2.220446049250313e-16)
    jac = [[0.0, 0.0], [0.0, 0.0]]
    for j in range(2):
        step = sqrt_eps * max(1.0, abs(x[j]))
        xp = list(x)
        xp[j] += step
        rp = residual((xp[0], xp[1]))
        for i in range(2):
            jac[i][j] = (rp[i] - r0[i]) / step
    return jac


def solve_stationary_2d(
    residual: Callable[[tuple[float, float]], tuple[float, float]],
    seeds: Sequence[tuple[float, float]],
    cfg: SearchConfig = DEFAULT_SEARCH,
) -> list[tuple[float, float]]:
    """Damped Newton on a 2-D residual from multiple seeds.

    Jacobians come from forward differences.  Seeds that stall, diverge,
    or hit a singular Jacobian are silently dropped; converged points are
    deduplicated within a relative 1e-6 max-norm (converged copies of one
    root scatter proportionally to its magnitude).  Returns points sorted
    by first coordinate.
    """
    res_tol = max(cfg.abs_tol, 1e-12)
    found: list[tuple[float, float]] = []

    for seed in seeds:
        x = (float(seed[0]), float(seed[1]))
        ok = False
        for _ in range(min(cfg.max_iter, 60)):
            try:
                r = residual(x)
            except (ArithmeticError, ValueError):
                break
            if not (math.isfinite(r[0]) and math.isfinite(r[1])):
                break
            nr = max(abs(r[0]), abs(r[1]))
            if nr <= res_tol:
                ok = True
                break
            try:
                jac = _fd_jacobian(residual, x, r)
            except (ArithmeticError, ValueError):
                break
            det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0]
            scale = max(abs(v) for row in jac for v in row)
            if scale == 0.0 or abs(det) < 1e-14 * scale * scale:
                break
            dx0 = (-r[0] * jac[1][1] + r[1] * jac[0][1]) / det
            dx1 = (-r[1] * jac[0][0] + r[0] * jac[1][0]) / det
            lam = 1.0
            accepted = False
            while lam >= 1.0 / 1024.0:
                cand = (x[0] + lam * dx0, x[1] + lam * dx1)
                try:
                    rc = residual(cand)
                except (ArithmeticError, ValueError):
                    lam *= 0.5
                    continue
                if (
                    math.isfinite(rc[0])
                    and math.isfinite(rc[1])
                    and max(abs(rc[0]), abs(rc[1])) < nr
                ):
                    x = cand
                    accepted = True
                    break
                lam *= 0.5
            if not accepted:
                break
        if not ok:
            continue
        if any(
            max(
                abs(x[0] - p[0]) / max(1.0, abs(p[0])),
                abs(x[1] - p[1]) / max(1.0, abs(p[1])),
            )
            <= 1e-6
            for p in found
        ):
            continue
        found.append(x)

    found.sort(key=lambda p: (p[0], p[1]))
    return found
