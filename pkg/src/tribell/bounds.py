"""Closed-form conditional-entropy lower bounds as functions of the Bell
violation, with the internal root-finding they require.

Each one/two-outcome bound is 0 at the classical bound of its inequality and
clamps to 0 below it, since the rate formulas evaluate there routinely.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NumericError, ValidationError
from .qmath import binary_entropy as h
from .qmath import binary_entropy_deriv as hprime
from .qmath import shannon_entropy

SQRT2 = np.sqrt(2.0)
_DOMAIN_SLACK = 1e-9


# ---------------------------------------------------------------------------
# root finding: coarse scan for a bracket, then bisection with secant polish

def find_root(f: Callable[[float], float], lo: float, hi: float,
              scan_points: int = 1000, tol: float = 1e-10) -> float:
    xs = np.linspace(lo, hi, scan_points)
    prev_x, prev_f = xs[0], f(xs[0])
    bracket = None
    for x in xs[1:]:
        fx = f(x)
        if np.isfinite(prev_f) and np.isfinite(fx) and prev_f * fx <= 0.0:
            bracket = (prev_x, x, prev_f, fx)
            break
        prev_x, prev_f = x, fx
    if bracket is None:
        raise NumericError(
            f"no sign change on [{lo}, {hi}] (f(lo)={f(lo):.3e}, f(hi)={f(hi):.3e})"
        )
    a, b, fa, fb = bracket
    for _ in range(200):
        m = 0.5 * (a + b)
        fm = f(m)
        if fa * fm <= 0.0:
            b, fb = m, fm
        else:
            a, fa = m, fm
        if b - a < tol:
            break
    # secant polish inside the bracket
    x0, x1 = a, b
    f0, f1 = fa, fb
    for _ in range(8):
        if f1 == f0:
            break
        x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
        if not a <= x2 <= b:
            break
        x0, f0, x1, f1 = x1, f1, x2, f(x2)
    return x1 if abs(f1) <= abs(f(0.5 * (a + b))) else 0.5 * (a + b)


# ---------------------------------------------------------------------------
# Holz one-outcome (tight)

def holz_one_outcome(beta: float) -> float:
    """1 - h[(beta + 1 + sqrt(beta^2 + 2 beta - 3))/4] on [1, 3/2]; 0 below 1."""
    if beta > 1.5 + _DOMAIN_SLACK:
        raise ValidationError(f"beta={beta!r} above the quantum bound 3/2")
    if beta <= 1.0:
        return 0.0
    beta = min(beta, 1.5)
    return 1.0 - h(0.25 * (beta + 1.0 + np.sqrt(beta * beta + 2.0 * beta - 3.0)))


# ---------------------------------------------------------------------------
# Holz two-outcome (conjectured): eta / tangent segment / theta(beta, x(beta))

def eta(beta: float) -> float:
    s = np.sqrt(max(beta * beta - 1.0, 0.0))
    return 2.0 - shannon_entropy([(1 + s) / 4, (1 + s) / 4, (1 - s) / 4, (1 - s) / 4])


def theta(beta: float, x: float) -> float:
    pa = (beta * (2.0 - beta) - x * x) / (8.0 * (beta - 1.0))
    pb = ((beta - 1.0) * (beta + 3.0) + x * x - 1.0) / (8.0 * (beta - 1.0))
    if pa < -1e-12 or pb < -1e-12:
        raise ValidationError(f"(beta={beta}, x={x}) outside the theta domain")
    pa, pb = max(pa, 0.0), max(pb, 0.0)
    arg = (2.0 * (1.0 - x) - (beta - x) ** 2) / (4.0 * x * (beta - 1.0))
    if not -1e-9 <= arg <= 1.0 + 1e-9:
        raise ValidationError(f"(beta={beta}, x={x}) outside the theta domain")
    arg = min(max(arg, 0.0), 1.0)
    return shannon_entropy([pa, pa, pb, pb]) - h(arg)


def theta_x_domain(beta: float) -> tuple[float, float]:
    """Interval of x where all four weights and the binary-entropy argument
    of theta(beta, .) are valid probabilities."""
    if not SQRT2 < beta <= 1.5:
        raise ValidationError(f"beta={beta!r} outside (sqrt2, 3/2]")
    half = np.sqrt(max(3.0 - 2.0 * beta, 0.0))
    lo = (beta - 1.0) - half
    hi = min((beta - 1.0) + half, np.sqrt(beta * (2.0 - beta)))
    return lo, hi


def _dtheta_dx(beta: float, x: float) -> float:
    pa = (beta * (2.0 - beta) - x * x) / (8.0 * (beta - 1.0))
    pb = ((beta - 1.0) * (beta + 3.0) + x * x - 1.0) / (8.0 * (beta - 1.0))
    num = 2.0 * (1.0 - x) - (beta - x) ** 2
    arg = num / (4.0 * x * (beta - 1.0))
    dnum = -2.0 + 2.0 * (beta - x)
    darg = (dnum * x - num) / (4.0 * x * x * (beta - 1.0))
    t1 = (x / (2.0 * (beta - 1.0))) * np.log2(pa / pb)
    if 0.0 < arg < 1.0:
        t2 = hprime(arg) * darg
    else:
        # h' blows up logarithmically at the domain edge; only the sign matters
        t2 = np.inf * np.sign(darg) if darg != 0.0 else 0.0
    return t1 - t2


def solve_x(beta: float) -> float:
    """Stationary point of theta(beta, .) in x, i.e. the branch of the
    transcendental equation d(theta)/dx = 0 that is continuous in beta and
    reaches x=1/2 at beta=3/2.

    Near beta -> 3/2 the stationary point merges with the upper domain edge
    faster than double precision resolves; the edge is returned there.
    """
    if not SQRT2 < beta <= 1.5 + _DOMAIN_SLACK:
        raise ValidationError(f"beta={beta!r} outside (sqrt2, 3/2]")
    if beta >= 1.5:
        return 0.5
    lo, hi = theta_x_domain(beta)
    width = hi - lo
    a = lo + width * 1e-9
    b = hi - width * 1e-9
    fa, fb = _dtheta_dx(beta, a), _dtheta_dx(beta, b)
    if fa >= 0.0:
        return a
    if fb <= 0.0:
        return b
    for _ in range(200):
        m = 0.5 * (a + b)
        if _dtheta_dx(beta, m) <= 0.0:
            a = m
        else:
            b = m
        if b - a < 1e-15:
            break
    return 0.5 * (a + b)


def theta_at_optimum(beta: float) -> float:
    if beta >= 1.5:
        return theta(1.5, 0.5)
    return theta(beta, solve_x(beta))


def _dtheta_dbeta(beta: float, delta: float = 2e-6) -> float:
    # total derivative along x(beta); equals the partial one at the stationary x
    return (theta_at_optimum(beta + delta) - theta_at_optimum(beta - delta)) / (2 * delta)


@functools.lru_cache(maxsize=1)
def solve_beta_star_holz() -> float:
    """Violation where the tangent to theta(beta, x(beta)) passes through
    (sqrt2, 1); the conjectured curve is linear below it."""
    def tangency(b):
        return _dtheta_dbeta(b) * (b - SQRT2) - (theta_at_optimum(b) - 1.0)

    return find_root(tangency, 1.42, 1.4995, scan_points=200, tol=1e-11)


@functools.lru_cache(maxsize=1)
def _holz_tangent_slope() -> float:
    bstar = solve_beta_star_holz()
    return (theta_at_optimum(bstar) - 1.0) / (bstar - SQRT2)


def holz_two_outcome(beta: float) -> float:
    """Conjectured tight bound on the two-outcome entropy for the Holz test:
    eta on [1, sqrt2], a tangent segment on (sqrt2, beta*], theta above."""
    if beta > 1.5 + _DOMAIN_SLACK:
        raise ValidationError(f"beta={beta!r} above the quantum bound 3/2")
    if beta <= 1.0:
        return 0.0
    beta = min(beta, 1.5)
    if beta <= SQRT2:
        return eta(beta)
    if beta <= solve_beta_star_holz():
        return _holz_tangent_slope() * (beta - SQRT2) + 1.0
    return theta_at_optimum(beta)


# ---------------------------------------------------------------------------
# Parity-CHSH one-outcome (tight)

def parity_chsh_one_outcome(beta: float) -> float:
    if beta > SQRT2 + _DOMAIN_SLACK:
        raise ValidationError(f"beta={beta!r} above the quantum bound sqrt2")
    if beta <= 1.0:
        return 0.0
    beta = min(beta, SQRT2)
    return 1.0 - h(0.5 + 0.5 * np.sqrt(beta * beta - 1.0))


# ---------------------------------------------------------------------------
# MABK one- and two-outcome

def mabk_one_outcome(beta: float) -> float:
    if beta > 4.0 + _DOMAIN_SLACK:
        raise ValidationError(f"beta={beta!r} above the quantum bound 4")
    if beta <= 2.0 * SQRT2:
        return 0.0
    beta = min(beta, 4.0)
    return 1.0 - h(0.5 + 0.5 * np.sqrt(beta * beta / 8.0 - 1.0))


def mabk_f(beta: float) -> float:
    return 0.25 - (np.sqrt(3.0) / 24.0) * np.sqrt(max(beta * beta - 4.0, 0.0))


def mabk_two_outcome(beta: float) -> float:
    if beta > 4.0 + _DOMAIN_SLACK:
        raise ValidationError(f"beta={beta!r} above the quantum bound 4")
    if beta <= 2.0:
        return 0.0
    f = mabk_f(min(beta, 4.0))
    return 2.0 - shannon_entropy([1.0 - 3.0 * f, f, f, f])


# ---------------------------------------------------------------------------
# asymmetric CHSH one-outcome

def _g_asym(x: float, alpha: float) -> float:
    s2 = x * x / 4.0 - alpha * alpha
    if s2 <= 0.0:
        return 0.0
    s = np.sqrt(s2)
    if s >= 1.0:
        return 1.0
    return 1.0 - h(0.5 + 0.5 * s)


def _g_asym_deriv(x: float, alpha: float) -> float:
    s2 = x * x / 4.0 - alpha * alpha
    if s2 <= 0.0 or s2 >= 1.0:
        return 0.0
    s = np.sqrt(s2)
    u = 0.5 + 0.5 * s
    if u >= 1.0:  # s rounds to 1 at the quantum bound
        return 0.0
    return -hprime(u) * x / (8.0 * s)


@functools.lru_cache(maxsize=4096)
def asym_tangent(alpha: float) -> tuple[float, float]:
    """(beta*, slope) of the tangent line through (2, 0) to g for |alpha| < 1.

    When the tangency point is numerically indistinguishable from the quantum
    bound (small alpha), the chord from (2, 0) to (qb, 1) is the envelope.
    """
    alpha = abs(alpha)
    qb = 2.0 * np.hypot(1.0, alpha)

    def f(x):
        return _g_asym_deriv(x, alpha) * (x - 2.0) - _g_asym(x, alpha)

    xs = np.concatenate([
        np.linspace(2.0 + 1e-9, qb, 800),
        qb - (qb - 2.0) * np.logspace(-13, 0, 400),
    ])
    xs = np.unique(np.clip(xs, 2.0 + 1e-12, qb - 1e-16))
    fs = np.array([f(x) for x in xs])
    for i in range(len(xs) - 1):
        if fs[i] < 0.0 <= fs[i + 1]:
            a, b = xs[i], xs[i + 1]
            for _ in range(200):
                m = 0.5 * (a + b)
                if f(m) < 0.0:
                    a = m
                else:
                    b = m
                if b - a < 1e-16:
                    break
            bstar = 0.5 * (a + b)
            if abs(f(bstar)) <= 1e-10:
                return bstar, _g_asym_deriv(bstar, alpha)
            break
    return qb, 1.0 / (qb - 2.0)


def asym_chsh_one_outcome(beta: float, alpha: float) -> float:
    """Tight one-outcome bound for the asymmetric CHSH inequality; piecewise
    linear below beta* when |alpha| < 1, g(beta) otherwise."""
    alpha = abs(alpha)
    qb = 2.0 * np.hypot(1.0, alpha)
    if beta > qb + _DOMAIN_SLACK:
        raise ValidationError(f"beta={beta!r} above the quantum bound {qb!r}")
    beta = min(beta, qb)
    if alpha < 1e-12:
        return 0.0
    if alpha >= 1.0:
        return _g_asym(beta, alpha)
    bstar, slope = asym_tangent(round(alpha, 12))
    if beta < bstar:
        return max(slope * (beta - 2.0), 0.0)
    return _g_asym(beta, alpha)


def best_alpha_bound(beta_fn: Callable[[float], float], alpha_lo: float = 0.0,
                     alpha_hi: float = 4.0, grid_points: int = 401) -> tuple[float, float]:
    """Maximize asym_chsh_one_outcome(beta_fn(alpha), alpha) over alpha.

    beta_fn maps alpha to the achievable violation (at the caller's noise
    level).  Grid search plus golden-section refinement; never returns less
    than the alpha=1 value.
    """
    def val(a):
        spec_qb = 2.0 * np.hypot(1.0, a)
        return asym_chsh_one_outcome(min(beta_fn(a), spec_qb), a)

    grid = np.linspace(alpha_lo, alpha_hi, grid_points)
    vals = np.array([val(a) for a in grid])
    i = int(np.argmax(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, grid_points - 1)]
    gr = (np.sqrt(5.0) - 1.0) / 2.0
    c = hi - gr * (hi - lo)
    d = lo + gr * (hi - lo)
    for _ in range(120):
        if val(c) > val(d):
            hi = d
        else:
            lo = c
        c = hi - gr * (hi - lo)
        d = lo + gr * (hi - lo)
    refined = 0.5 * (lo + hi)
    candidates = [(float(vals[i]), float(grid[i])), (val(refined), refined)]
    if alpha_lo <= 1.0 <= alpha_hi:
        candidates.append((val(1.0), 1.0))
    best_v, best_a = max(candidates)
    return best_a, best_v


# ---------------------------------------------------------------------------
# recycled-input CHSH two-outcome bound (conjectured)

def colbeck_g1(x: float) -> float:
    return 1.0 + h(min(0.5 + x / 8.0, 1.0)) - 2.0 * h(min(0.5 + SQRT2 * x / 8.0, 1.0))


def _colbeck_g1_deriv(x: float) -> float:
    return (hprime(0.5 + x / 8.0) / 8.0
            - (SQRT2 / 4.0) * hprime(0.5 + SQRT2 * x / 8.0))


@functools.lru_cache(maxsize=1)
def solve_beta_star_colbeck() -> float:
    def f(x):
        return _colbeck_g1_deriv(x) * (x - 2.0) - colbeck_g1(x)

    return find_root(f, 2.0 + 1e-6, 2.0 * SQRT2 - 1e-9, scan_points=1000, tol=1e-11)


def colbeck_recycled_two_outcome(beta: float) -> float:
    """Conjectured bound on H(AB|XYE) for CHSH with recycled inputs:
    linear below beta*_C, g1 above."""
    if beta > 2.0 * SQRT2 + _DOMAIN_SLACK:
        raise ValidationError(f"beta={beta!r} above the quantum bound 2*sqrt2")
    if beta <= 2.0:
        return 0.0
    beta = min(beta, 2.0 * SQRT2)
    bstar = solve_beta_star_colbeck()
    if beta <= bstar:
        return _colbeck_g1_deriv(bstar) * (beta - 2.0)
    return colbeck_g1(beta)


# ---------------------------------------------------------------------------
# curve registry used by the verification suites

@dataclass(frozen=True)
class BoundCurve:
    name: str
    fn: Callable[[float], float]
    domain: tuple[float, float]
    max_value: float
    conjectured: bool = False


def bound_curves() -> list[BoundCurve]:
    """Every analytical bound curve, with its domain and endpoint value."""
    curves = [
        BoundCurve("holz-one", holz_one_outcome, (1.0, 1.5), 1.0),
        BoundCurve("holz-two", holz_two_outcome, (1.0, 1.5),
                   theta_at_optimum(1.5), conjectured=True),
        BoundCurve("parity-chsh-one", parity_chsh_one_outcome, (1.0, SQRT2), 1.0),
        BoundCurve("mabk-one", mabk_one_outcome, (2.0, 4.0), 1.0),
        BoundCurve("mabk-two", mabk_two_outcome, (2.0, 4.0), 2.0),
        BoundCurve("colbeck-recycled", colbeck_recycled_two_outcome,
                   (2.0, 2.0 * SQRT2), colbeck_g1(2.0 * SQRT2), conjectured=True),
    ]
    for alpha in (0.5, 1.0, 2.0):
        lb = 2.0 * max(1.0, alpha)
        qb = 2.0 * np.hypot(1.0, alpha)
        curves.append(BoundCurve(
            f"asym-chsh-one(alpha={alpha})",
            lambda b, a=alpha: asym_chsh_one_outcome(b, a),
            (lb, qb), 1.0))
    return curves
