"""Structured orthogonal polynomials and the compactly supported Lambda basis.

The sequence ``pi_k = x^(k - k//2) (1 - x)^(k//2)`` is orthogonalized with
weight ``1/x`` in inverse order, ``k = n`` down to ``0``. Raw (unnormalized)
polynomials and their squared norms are kept exact; square roots are only
taken for float evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .apoly import weighted_inner
from .errors import RootFindingError
from .operators import Expansion
from .poly import RationalPoly
from .quadrature import default_tol, integrate_weighted

MAX_N = 32

ONE_MINUS_X = RationalPoly((1, -1))


def pi_seq(n):
    return [RationalPoly.monomial(k - k // 2) * ONE_MINUS_X ** (k // 2) for k in range(n + 1)]


@dataclass(frozen=True)
class StructuredSystem:
    n: int
    raw: tuple
    norm_sq: tuple  # norm_sq[0] is None: raw_0 has no finite weighted norm

    @property
    def inv_norms(self):
        return tuple(1.0 / math.sqrt(v) for v in self.norm_sq[1:])

    def normalized(self, k, x, exact=False):
        """Float values of ``S_nk``; ``exact`` evaluates the raw polynomial in
        rationals first (slow, but free of cancellation for larger n)."""
        if k == 0:
            raise ValueError("S_n0 has no finite weighted norm")
        x = np.asarray(x, dtype=float)
        if exact:
            raw = np.array([float(self.raw[k](Fraction(float(v)))) for v in x.ravel()]).reshape(x.shape)
        else:
            raw = self.raw[k].eval_centered(x)
        return raw / math.sqrt(self.norm_sq[k])


@lru_cache(maxsize=None)
def build_structured(n):
    """Inverse-order Gram-Schmidt of the pi-sequence with weight 1/x.

    ``raw_0`` is made orthogonal to every other member but carries no norm.
    Gram-Schmidt leaves ``<raw_k, pi_k> = <raw_k, raw_k> > 0``, which fixes the sign.
    """
    if not 1 <= n <= MAX_N:
        raise ValueError(f"n must lie in 1..{MAX_N}, got {n}")
    pis = pi_seq(n)
    raw = [None] * (n + 1)
    norm_sq = [None] * (n + 1)
    for k in range(n, -1, -1):
        v = pis[k]
        for l in range(k + 1, n + 1):
            v = v - (weighted_inner(pis[k], raw[l]) / norm_sq[l]) * raw[l]
        raw[k] = v
        if k >= 1:
            norm_sq[k] = weighted_inner(v, v)
    return StructuredSystem(n, tuple(raw), tuple(norm_sq))


def pi_coordinates(p, n):
    """Exact coordinates of ``p`` (degree <= n) in the basis ``pi_0..pi_n``."""
    if p.degree > n:
        raise ValueError(f"degree {p.degree} exceeds n={n}")
    pis = pi_seq(n)
    coords = [Fraction(0)] * (n + 1)
    rem = p
    for k in range(n, -1, -1):
        c = rem[k] / pis[k].coeffs[-1]
        coords[k] = c
        rem = rem - c * pis[k]
    if not rem.is_zero():
        raise ArithmeticError("residual after pi-basis reduction")
    return coords


def proportionality(p, q):
    """Exact scalar ``s`` with ``p == s * q``, or ``None`` if none exists."""
    if q.is_zero():
        return None
    i = next(i for i, c in enumerate(q.coeffs) if c != 0)
    s = p[i] / q[i]
    return s if p == s * q else None


def rodrigues(n, k):
    """Rodrigues-type form ``pi_k / (x^k (1-x)^k) * D^(n-k)[x^n (1-x)^n]``.

    The prefactor reduces to division by ``x^(k//2) (1-x)^(k - k//2)``, done
    exactly; a remainder raises :class:`ConsistencyError`.
    Returns ``(poly, scale)`` where ``poly == scale * raw_k``.
    """
    if not 0 <= k <= n <= MAX_N:
        raise ValueError(f"need 0 <= k <= n <= {MAX_N}, got n={n}, k={k}")
    base = (RationalPoly.monomial(n) * ONE_MINUS_X ** n).deriv(n - k)
    divisor = RationalPoly.monomial(k // 2) * ONE_MINUS_X ** (k - k // 2)
    poly = base.exact_div(divisor)
    return poly, proportionality(poly, build_structured(n).raw[k])


def _bisect(g, lo, hi, glo):
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if gm == 0 or hi - lo <= 4e-16 * max(1.0, abs(mid)):
            return mid
        if (gm > 0) == (glo > 0):
            lo, glo = mid, gm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _polish_exact(p, dp, x):
    # Newton with the residual evaluated exactly at the float iterate
    for _ in range(8):
        fx = Fraction(x)
        d = dp(fx)
        if d == 0:
            break
        nxt = float(fx - p(fx) / d)
        if nxt == x:
            break
        x = nxt
    return x


def real_roots_in_unit_interval(p, expected=None, samples=None):
    """Roots of ``p`` in (0, 1): grid bracketing, Newton, bisection fallback,
    then a final Newton polish with exact residuals."""
    samples = samples or 256 * max(1, p.degree)
    dp = p.deriv()
    xs = np.linspace(0.0, 1.0, samples + 1)[1:-1]
    vals = p(xs)
    roots = []
    for i in range(len(xs) - 1):
        a, b = xs[i], xs[i + 1]
        fa, fb = vals[i], vals[i + 1]
        if fa == 0:
            roots.append(a)
            continue
        if fb == 0 or fa * fb > 0:
            continue
        x = 0.5 * (a + b)
        for _ in range(50):
            step = p(x) / dp(x)
            x -= step
            if not a <= x <= b:
                x = _bisect(p, a, b, fa)
                break
            if abs(step) < 1e-17:
                break
        roots.append(_polish_exact(p, dp, x))
    if expected is not None and len(roots) != expected:
        raise RootFindingError(f"found {len(roots)} roots in (0, 1), expected {expected}")
    return roots


def lobatto_from_s1(n):
    """Interior zeros of ``S_n1``: the shifted Lobatto abscissas."""
    if n < 2:
        raise ValueError("need n >= 2")
    q = build_structured(n).raw[1].shift_down()
    return real_roots_in_unit_interval(q, expected=n - 1)


def _check_lambda(n, k):
    if k <= 1:
        raise ValueError(f"Lambda_nk is defined for k > 1, got k={k}")
    if n < k:
        raise ValueError(f"need n >= k, got n={n}, k={k}")


def lambda_eval(n, k, x):
    """``S_nk(x)`` inside (0, 1), zero elsewhere on the real line."""
    _check_lambda(n, k)
    x = np.asarray(x, dtype=float)
    inside = (x > 0) & (x < 1)
    out = np.where(inside, build_structured(n).normalized(k, np.where(inside, x, 0.5)), 0.0)
    return out if out.ndim else float(out)


def raw_moment(n, k):
    return build_structured(n).raw[k].integral01()


def lambda_moment(n, k):
    """``int_R Lambda_nk dx``: exact raw integral times the float normalization."""
    _check_lambda(n, k)
    s = build_structured(n)
    return float(raw_moment(n, k)) / math.sqrt(s.norm_sq[k])


def reflect(p):
    """``p(1 - x)`` exactly."""
    acc = RationalPoly.zero()
    for c in reversed(p.coeffs):
        acc = acc * ONE_MINUS_X + c
    return acc


def is_antisymmetric(n, k, points=33, tol=1e-10):
    """Numeric test ``S_nk(1 - x) == -S_nk(x)`` at ``points`` abscissas."""
    s = build_structured(n)
    x = np.linspace(0.0, 1.0, points)
    return bool(np.max(np.abs(s.normalized(k, 1 - x, exact=True) + s.normalized(k, x, exact=True))) <= tol)


def is_antisymmetric_exact(n, k):
    p = build_structured(n).raw[k]
    return reflect(p) == -p


def wavelet_subset(n):
    """Antisymmetric members usable as mother wavelets.

    Odd n: even k in 2..n; even n: odd k in 3..n. Each candidate is kept
    only if the antisymmetry check passes.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    start = 2 if n % 2 == 1 else 3
    return [(n, k) for k in range(start, n + 1, 2) if is_antisymmetric(n, k)]


def endpoint_multiplicity(p, at):
    """Order of the root of ``p`` at 0 or 1."""
    if at == 0:
        return p.valuation()
    if at == 1:
        return reflect(p).valuation()
    raise ValueError("at must be 0 or 1")


def lambda_smoothness(n, k):
    """``(guaranteed, observed)`` continuity class of ``Lambda_nk`` on the real line.

    The guaranteed class follows from the pi-sequence multiplicities,
    ``min(ceil(k/2), floor(k/2)) - 1``; the observed one from the actual root
    orders of ``raw_k`` at both endpoints.
    """
    _check_lambda(n, k)
    raw = build_structured(n).raw[k]
    observed = min(endpoint_multiplicity(raw, 0), endpoint_multiplicity(raw, 1)) - 1
    return k // 2 - 1, observed


def structured_project(f, n, tol=None):
    """Weighted L2 projection of f0 onto ``S_n1..S_nn``."""
    tol = default_tol() if tol is None else tol
    s = build_structured(n)
    coeffs = [integrate_weighted(f.f0, s.raw[k], "against_p_over_x", tol) / math.sqrt(s.norm_sq[k])
              for k in range(1, n + 1)]
    return Expansion(n, f.f_at_0, tuple(coeffs), "structured", "structured_projection",
                     {"operator": "structured_projection", "quad_tol": tol})


def reference_sin_n3(x):
    """Stored n = 3 approximation of sin(pi x) by the structured system.

    The generating algorithm is not reproduced; this is the known reference
    polynomial ``60 (12 - pi^2) / pi^3 * x (1 - x)`` kept for property checks.
    """
    x = np.asarray(x, dtype=float)
    return 60.0 * (12.0 - math.pi ** 2) / math.pi ** 3 * x * (1.0 - x)


REFERENCE_SIN_N3_SCALE = 60.0 * (12.0 - math.pi ** 2) / math.pi ** 3
