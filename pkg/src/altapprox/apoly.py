"""Alternative orthogonal polynomials on [0, 1] with weight 1/x.

The system ``A[n][k]``, ``k = n, ..., 0``, comes from orthogonalizing the
monomials in decreasing order. All members have degree ``n``; members with
``k >= 1`` carry a zero of multiplicity ``k`` at the origin and satisfy::

    int_0^1 A_nk A_nl / x dx = delta_kl / (k + l)      (k, l >= 1)
    A_nk(1) = (-1)**(n - k)

``A_n0`` is orthogonal to the rest but has no finite weighted norm; up to the
sign ``(-1)**n`` it is the shifted Legendre polynomial.

The integral co-basis ``B_nk = A_nk + 2 * sum_{l>k} A_nl`` (``B_n0 = 1``)
satisfies ``B_nk' = k * A_nk / x``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from numbers import Rational

import numpy as np

from .errors import ConsistencyError
from .poly import RationalPoly

MAX_N = 64


def jacobi(m, alpha, beta, t):
    """Jacobi polynomial ``P_m^(alpha, beta)(t)`` by the three-term recurrence."""
    t = np.asarray(t, dtype=float)
    p0 = np.ones_like(t)
    if m == 0:
        return p0
    ab = alpha + beta
    p1 = (alpha + 1) + (ab + 2) * (t - 1) / 2
    for j in range(2, m + 1):
        c = 2 * j + ab
        a1 = 2 * j * (j + ab) * (c - 2)
        a2 = (c - 1) * (alpha * alpha - beta * beta)
        a3 = (c - 2) * (c - 1) * c
        a4 = 2 * (j + alpha - 1) * (j + beta - 1) * c
        p0, p1 = p1, ((a2 + a3 * t) * p1 - a4 * p0) / a1
    return p1


@dataclass(frozen=True)
class ASystem:
    """``polys[k]`` is ``A_nk`` with exact coefficients.

    Float evaluation goes through ``A_nk(x) = (-1)^(n-k) x^k P_(n-k)^(0,2k)(2x - 1)``
    rather than the monomial coefficients, which cancel badly beyond n ~ 10.
    """

    n: int
    polys: tuple

    def __getitem__(self, k):
        return self.polys[k]

    def over_x(self, k):
        """Exact polynomial ``A_nk / x`` (``k >= 1``)."""
        return self.polys[k].shift_down()

    def values(self, k, x):
        x = np.asarray(x, dtype=float)
        m = self.n - k
        out = (-1) ** m * x ** k * jacobi(m, 0, 2 * k, 2 * x - 1)
        return out if out.ndim else float(out)

    def derivative_values(self, k, x):
        x = np.asarray(x, dtype=float)
        m = self.n - k
        t = 2 * x - 1
        out = 2 * x ** k * (m + 2 * k + 1) / 2 * jacobi(m - 1, 1, 2 * k + 1, t) if m > 0 else np.zeros_like(x)
        if k > 0:
            out = out + k * x ** (k - 1) * jacobi(m, 0, 2 * k, t)
        out = (-1) ** m * out
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class BSystem:
    n: int
    polys: tuple  # polys[k] is B_nk, polys[0] == 1

    def __getitem__(self, k):
        return self.polys[k]


def _check_k(n, k, lo=0):
    if not lo <= k <= n:
        raise ValueError(f"index k={k} outside {lo}..{n}")


@lru_cache(maxsize=None)
def build_a_system(n):
    """Build ``A_nk`` for ``k = n..0`` with the downward three-term recurrence.

    Exact rational arithmetic throughout; the ``1/x`` term is applied as a
    coefficient shift that must leave no remainder.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be an integer >= 1, got {n!r}")
    if n > MAX_N:
        raise ValueError(f"n={n} exceeds the supported range n <= {MAX_N}")
    polys = [None] * (n + 1)
    polys[n] = RationalPoly.monomial(n)
    polys[n - 1] = RationalPoly.monomial(n - 1, 2 * n - 1) - RationalPoly.monomial(n, 2 * n)
    for k in range(n - 1, 0, -1):
        ak = polys[k]
        try:
            inv_x = ak.shift_down()
        except ConsistencyError as exc:
            raise ConsistencyError(f"recurrence step n={n}, k={k}: {exc}") from None
        rhs = 2 * k * ((2 * k - 1) * (2 * k + 1) * inv_x - 2 * (n * n + k * k + n) * ak)
        rhs = rhs - (2 * k - 1) * (n - k) * (n + k + 1) * polys[k + 1]
        polys[k - 1] = rhs / ((2 * k + 1) * (n + k) * (n - k + 1))
    return ASystem(n, tuple(polys))


def a_eval(sys, k, x):
    """Evaluate ``A_nk`` at ``x`` (exact for rationals, Horner for floats).

    Defined on the whole real line, so it serves extrapolation too.
    """
    _check_k(sys.n, k)
    if isinstance(x, Rational):
        return sys.polys[k](x)
    return sys.values(k, x)


def a_derivative(sys, k):
    """``A_nk'`` assembled from the system itself rather than by differentiation.

    Uses ``A_nk' = (k A_nk + 2 sum_{l>k} (-1)^(l-k) l A_nl) / x``. The result is
    checked against the term-wise derivative.
    """
    if k == 0:
        raise ValueError("the derivative identity holds only for k >= 1")
    _check_k(sys.n, k, 1)
    acc = k * sys.polys[k]
    for l in range(k + 1, sys.n + 1):
        acc = acc + 2 * (-1) ** (l - k) * l * sys.polys[l]
    out = acc.shift_down()
    if out != sys.polys[k].deriv():
        raise ConsistencyError(f"derivative identity fails for n={sys.n}, k={k}")
    return out


@lru_cache(maxsize=None)
def build_b_system(sys):
    n = sys.n
    polys = [RationalPoly.const(1)]
    for k in range(1, n + 1):
        acc = sys.polys[k]
        for l in range(k + 1, n + 1):
            acc = acc + 2 * sys.polys[l]
        polys.append(acc)
    return BSystem(n, tuple(polys))


def weighted_inner(p, q):
    """Exact ``int_0^1 p q / x dx``; ``p q`` must vanish at the origin."""
    return (p * q).shift_down().integral01()


def gram_matrix(sys):
    """Exact weighted Gram matrix of ``A_n1..A_nn`` (0-based indexing: entry
    ``[k-1][l-1]`` holds the ``(k, l)`` inner product)."""
    n = sys.n
    return [[weighted_inner(sys.polys[k], sys.polys[l]) for l in range(1, n + 1)]
            for k in range(1, n + 1)]


def shifted_orthogonality_check(sys_a, sys_b):
    """Exact matrix of ``int_0^1 A_nk B_nl' dx`` for ``k, l = 0..n``."""
    if sys_a.n != sys_b.n:
        raise ValueError(f"system sizes differ: {sys_a.n} vs {sys_b.n}")
    n = sys_a.n
    derivs = [p.deriv() for p in sys_b.polys]
    return [[(sys_a.polys[k] * derivs[l]).integral01() for l in range(n + 1)]
            for k in range(n + 1)]


@lru_cache(maxsize=None)
def shifted_legendre(n):
    """Standard shifted Legendre polynomial ``P_n(2x - 1)`` (value 1 at x = 1).

    Built from the classical upward recurrence; used as an independent check
    on ``A_n0`` and on the structured system.
    """
    p0 = RationalPoly.const(1)
    if n == 0:
        return p0
    t = RationalPoly((-1, 2))
    p1 = t
    for m in range(1, n):
        p0, p1 = p1, ((2 * m + 1) * t * p1 - m * p0) / (m + 1)
    return p1

