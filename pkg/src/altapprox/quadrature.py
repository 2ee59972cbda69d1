"""Shifted Gauss-Legendre rules on [0, 1] and adaptive panel quadrature."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConsistencyError, QuadratureError, RootFindingError

MAX_ORDER = 128
DEFAULT_TOL = 1e-11
SINGULAR_TOL = 1e-8


def default_tol():
    """Quadrature target, overridable through ``ALTAPPROX_QUAD_TOL``."""
    raw = os.environ.get("ALTAPPROX_QUAD_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise ValueError(f"ALTAPPROX_QUAD_TOL is not a number: {raw!r}") from None
    if not tol > 0:
        raise ValueError(f"ALTAPPROX_QUAD_TOL must be positive, got {tol}")
    return tol


@dataclass(frozen=True)
class QuadratureRule:
    n: int
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)


def _legendre_and_deriv(n, t):
    p0, p1 = np.ones_like(t), t.copy()
    if n == 0:
        return p0, np.zeros_like(t)
    for m in range(1, n):
        p0, p1 = p1, ((2 * m + 1) * t * p1 - m * p0) / (m + 1)
    dp = n * (t * p1 - p0) / (t * t - 1)
    return p1, dp


def _bisect_legendre(n, lo, hi):
    plo = _legendre_and_deriv(n, np.array([lo]))[0][0]
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        pm = _legendre_and_deriv(n, np.array([mid]))[0][0]
        if pm == 0 or hi - lo < 1e-17:
            return mid
        if (pm > 0) == (plo > 0):
            lo, plo = mid, pm
        else:
            hi = mid
    return 0.5 * (lo + hi)


@lru_cache(maxsize=None)
def gauss_rule(n):
    """``n``-point Gauss-Legendre rule mapped to [0, 1].

    Nodes are found by Newton iteration on the Legendre recurrence started from
    Chebyshev angles, with bisection on the bracket between consecutive
    Chebyshev-Gauss points if Newton wanders off.
    """
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_ORDER:
        raise ValueError(f"quadrature order must be an integer in 1..{MAX_ORDER}, got {n!r}")
    n = int(n)
    m = (n + 1) // 2
    i = np.arange(1, m + 1)
    t = np.cos(np.pi * (i - 0.25) / (n + 0.5))
    for _ in range(100):
        p, dp = _legendre_and_deriv(n, t)
        step = p / dp
        t = t - step
        if np.max(np.abs(step)) < 1e-16:
            break
    else:
        raise RootFindingError(f"Newton iteration for Gauss nodes of order {n} did not converge")
    if n % 2 == 1:
        t[-1] = 0.0
    # Bruns: (i - 1/2) pi / (n + 1/2) < theta_i < i pi / (n + 1/2)
    hi = np.cos((i - 0.5) * np.pi / (n + 0.5))
    lo = np.cos(i * np.pi / (n + 0.5))
    bad = ((t <= lo) | (t >= hi) | ~np.isfinite(t)) & (t != 0.0)
    for j in np.nonzero(bad)[0]:
        t[j] = _bisect_legendre(n, lo[j], hi[j])
    _, dp = _legendre_and_deriv(n, t)
    w = 2.0 / ((1.0 - t * t) * dp * dp)
    # mirror the upper half so that x_j + x_{n+1-j} == 1 holds to rounding
    x_hi = 0.5 * (1.0 + t)
    x_lo = 0.5 * (1.0 - t)
    if n % 2 == 1:
        nodes = np.concatenate([x_lo[:-1], [0.5], x_hi[:-1][::-1]])
        weights = np.concatenate([w[:-1], w[-1:], w[:-1][::-1]]) / 2
    else:
        nodes = np.concatenate([x_lo, x_hi[::-1]])
        weights = np.concatenate([w, w[::-1]]) / 2
    return QuadratureRule(n, nodes, weights)


def discrete_gram(sys, rule):
    """Matrix ``sum_j w_j / x_j A_nk(x_j) A_nl(x_j)`` for ``k, l = 1..n``."""
    if rule.n != sys.n:
        raise ValueError(f"rule order {rule.n} does not match system order {sys.n}")
    vals = np.array([sys.values(k, rule.nodes) for k in range(1, sys.n + 1)])
    return (vals * (rule.weights / rule.nodes)) @ vals.T


_PANEL_ORDER = 20


def _graded_panels(levels, interior):
    # dyadic grading towards both endpoints, uniform panels in between
    h = 0.25
    left = [h * 2.0 ** -j for j in range(levels, -1, -1)]
    mid = np.linspace(h, 1 - h, interior + 1)
    right = [1 - b for b in reversed(left)]
    return np.concatenate([[0.0], left, mid[1:-1], right, [1.0]])


def _panel_sum(g, edges):
    t, w = np.polynomial.legendre.leggauss(_PANEL_ORDER)
    a, b = edges[:-1, None], edges[1:, None]
    x = 0.5 * (a + b) + 0.5 * (b - a) * t
    vals = g(x.ravel()).reshape(x.shape)
    return float(np.sum(vals * w * 0.5 * (b - a)))


def composite_integral(g, tol=None, max_levels=512):
    """Integrate ``g`` over [0, 1] with panel doubling.

    ``g`` receives a numpy array. Panels are graded geometrically towards
    both endpoints, so integrable endpoint singularities (``1/sqrt(x)``)
    converge; the refinement stops when doubling the panels changes the
    estimate by less than ``tol`` (absolute, or relative for large values).
    """
    tol = default_tol() if tol is None else tol
    levels, interior = 8, 2
    history = [_panel_sum(g, _graded_panels(levels, interior))]
    while True:
        levels, interior = 2 * levels, 2 * interior
        if levels > max_levels:
            tail = tuple(history[-4:])
            raise QuadratureError(
                f"panel doubling did not reach tolerance {tol:g}; last estimates {', '.join(map(repr, tail))}",
                tail,
            )
        cur = _panel_sum(g, _graded_panels(levels, interior))
        if not math.isfinite(cur):
            raise QuadratureError(f"integrand produced a non-finite estimate {cur!r}", (history[-1], cur))
        if abs(cur - history[-1]) <= tol * max(1.0, abs(cur)):
            return cur
        history.append(cur)


def integrate_weighted(f, p, mode="against_p", tol=None):
    """``int_0^1 f(t) p(t) dt`` or, in mode ``against_p_over_x``, ``int f(t) p(t)/t dt``.

    In the second mode ``p`` must be divisible by ``x``; the quotient is formed
    exactly so the integrand carries no ``1/t`` factor.
    """
    if mode == "against_p":
        q = p
    elif mode == "against_p_over_x":
        try:
            q = p.shift_down()
        except ConsistencyError:
            raise ValueError("against_p_over_x needs a polynomial divisible by x") from None
    else:
        raise ValueError(f"unknown integration mode {mode!r}")
    return composite_integral(lambda t: np.asarray(f(t), dtype=float) * q.eval_centered(t), tol=tol)
