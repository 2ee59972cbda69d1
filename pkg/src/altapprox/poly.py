"""Polynomials with exact rational coefficients in the monomial basis."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Rational

import numpy as np

from .errors import ConsistencyError


def _trim(coeffs):
    coeffs = list(coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs) if coeffs else (Fraction(0),)


@dataclass(frozen=True, eq=True)
class RationalPoly:
    """Polynomial ``sum(coeffs[i] * x**i)`` with :class:`Fraction` coefficients.

    Instances are immutable. Evaluation at rational arguments is exact;
    evaluation at floats or numpy arrays uses Horner's scheme on a float copy
    of the coefficients.
    """

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(Fraction(c) for c in self.coeffs))

    # construction helpers

    @classmethod
    def zero(cls):
        return cls((0,))

    @classmethod
    def const(cls, c):
        return cls((c,))

    @classmethod
    def monomial(cls, m, c=1):
        return cls((0,) * m + (c,))

    @classmethod
    def x(cls):
        return cls((0, 1))

    # structure

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i] if i < len(self.coeffs) else Fraction(0)

    def valuation(self):
        """Multiplicity of the root at ``x = 0`` (``None`` for the zero polynomial)."""
        if self.is_zero():
            return None
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i

    # arithmetic

    def __add__(self, other):
        if not isinstance(other, RationalPoly):
            other = RationalPoly.const(other)
        n = max(len(self), len(other))
        return RationalPoly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return RationalPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, RationalPoly):
            other = Fraction(other)
            return RationalPoly(c * other for c in self.coeffs)
        out = [Fraction(0)] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RationalPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        scalar = Fraction(scalar)
        return RationalPoly(c / scalar for c in self.coeffs)

    def __pow__(self, m):
        out = RationalPoly.const(1)
        for _ in range(m):
            out = out * self
        return out

    def shift_down(self, m=1):
        """Exact division by ``x**m``; a nonzero remainder is a bug upstream."""
        if m == 0:
            return self
        if self.is_zero():
            return self
        if any(c != 0 for c in self.coeffs[:m]):
            raise ConsistencyError(f"polynomial is not divisible by x^{m}: {self}")
        return RationalPoly(self.coeffs[m:])

    def shift_up(self, m=1):
        if self.is_zero():
            return self
        return RationalPoly((0,) * m + self.coeffs)

    def divmod(self, divisor):
        """Polynomial long division, returning ``(quotient, remainder)``."""
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dd = divisor.degree
        lead = divisor.coeffs[-1]
        if self.degree < dd:
            return RationalPoly.zero(), self
        quot = [Fraction(0)] * (self.degree - dd + 1)
        for i in range(self.degree - dd, -1, -1):
            q = rem[i + dd] / lead
            quot[i] = q
            if q:
                for j, d in enumerate(divisor.coeffs):
                    rem[i + j] -= q * d
        return RationalPoly(quot), RationalPoly(rem[:dd] or [0])

    def exact_div(self, divisor):
        quot, rem = self.divmod(divisor)
        if not rem.is_zero():
            raise ConsistencyError(f"inexact polynomial division: remainder {rem}")
        return quot

    # calculus

    def deriv(self, m=1):
        p = self
        for _ in range(m):
            p = RationalPoly(i * c for i, c in enumerate(p.coeffs) if i > 0) if p.degree > 0 else RationalPoly.zero()
        return p

    def antideriv(self):
        """Antiderivative vanishing at 0."""
        return RationalPoly((0,) + tuple(c / (i + 1) for i, c in enumerate(self.coeffs)))

    def integral01(self):
        """Exact integral over [0, 1]."""
        return sum((c / (i + 1) for i, c in enumerate(self.coeffs)), Fraction(0))

    # evaluation

    @cached_property
    def float_coeffs(self):
        return np.array([float(c) for c in self.coeffs])

    def __call__(self, x):
        if isinstance(x, Rational):
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        x = np.asarray(x, dtype=float)
        acc = np.zeros_like(x)
        for c in self.float_coeffs[::-1]:
            acc = acc * x + c
        return acc if acc.ndim else float(acc)

    @cached_property
    def centered_float_coeffs(self):
        # exact Taylor coefficients about x = 1/2, rounded once
        half = Fraction(1, 2)
        c = list(self.coeffs)
        n = len(c)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                c[j] += half * c[j + 1]
        return np.array([float(v) for v in c])

    def eval_centered(self, x):
        """Horner in ``x - 1/2``; better conditioned on [0, 1] than the monomial form."""
        t = np.asarray(x, dtype=float) - 0.5
        acc = np.zeros_like(t)
        for c in self.centered_float_coeffs[::-1]:
            acc = acc * t + c
        return acc if acc.ndim else float(acc)

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0 and self.degree > 0:
                continue
            terms.append(f"{c}" if i == 0 else f"{c}*x" if i == 1 else f"{c}*x^{i}")
        return " + ".join(terms)
