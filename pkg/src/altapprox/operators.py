"""Joint approximation operators built on the A-system.

Four families share one coefficient space:

* spectral: ``f(0) + 2 sum b_k B_nk`` with ``b_k = int f0' A_nk`` (needs f');
* weak: the same operator rewritten through ``c_k = 2k int f0 A_nk / t``;
* projection: ``f(0) + sum c_k A_nk``, the weighted L2 projection of f0;
* discrete: ``w_hat`` and ``w_discrete``, the two previous ones with the
  integrals replaced by the n-point Gauss rule.

Here ``f0 = f - f(0)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from .apoly import build_a_system, build_b_system
from .poly import RationalPoly
from .quadrature import SINGULAR_TOL, composite_integral, default_tol, gauss_rule

BASES = ("A_with_constant", "B_with_constant", "structured")
PROVENANCES = ("spectral", "weak", "projection", "discrete_w", "discrete_what", "structured_projection")

PSEUDO_BASIS_MAX_N = 12


@dataclass(frozen=True)
class FuncSpec:
    """A function to approximate on [0, 1].

    ``eval`` and ``deriv`` must accept numpy arrays. ``endpoint_singular``
    marks a derivative that blows up at an endpoint (``sqrt`` at 0); the
    derivative-based quadrature then runs with the relaxed tolerance.
    """

    eval: object
    deriv: object = None
    f_at_0: float = None
    f_at_1: float = None
    endpoint_singular: bool = False
    name: str = ""

    def __post_init__(self):
        if self.f_at_0 is None:
            object.__setattr__(self, "f_at_0", float(self.eval(np.array([0.0]))[0]))
        if self.f_at_1 is None:
            object.__setattr__(self, "f_at_1", float(self.eval(np.array([1.0]))[0]))

    @property
    def f0_at_1(self):
        return self.f_at_1 - self.f_at_0

    def f0(self, x):
        return np.asarray(self.eval(np.asarray(x, dtype=float)), dtype=float) - self.f_at_0


def funcspec(f, deriv=None, name="", endpoint_singular=False):
    """Wrap plain numpy-aware callables into a :class:`FuncSpec`."""
    ev = lambda x: np.asarray(f(np.asarray(x, dtype=float)), dtype=float) * np.ones_like(x, dtype=float)
    dv = None
    if deriv is not None:
        dv = lambda x: np.asarray(deriv(np.asarray(x, dtype=float)), dtype=float) * np.ones_like(x, dtype=float)
    return FuncSpec(ev, dv, name=name, endpoint_singular=endpoint_singular)


@lru_cache(maxsize=None)
def _basis_polys(basis, n):
    if basis == "A_with_constant":
        return build_a_system(n).polys[1:]
    if basis == "B_with_constant":
        return tuple(2 * p for p in build_b_system(build_a_system(n)).polys[1:])
    if basis == "structured":
        from .structured import build_structured
        s = build_structured(n)
        return s.raw[1:]
    raise ValueError(f"unknown basis tag {basis!r}")


@dataclass(frozen=True)
class Expansion:
    """``constant + sum coeffs[k-1] * phi_k(x)`` for the basis named by ``basis``.

    For ``B_with_constant`` the functions are ``2 B_nk``; for ``structured``
    they are the normalized structured polynomials ``S_nk``. ``meta`` carries
    generator details (operator name, tolerance, parity decision).
    """

    n: int
    constant: float
    coeffs: tuple
    basis: str = "A_with_constant"
    provenance: str = "weak"
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.basis not in BASES:
            raise ValueError(f"unknown basis tag {self.basis!r}")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance tag {self.provenance!r}")
        if len(self.coeffs) != self.n:
            raise ValueError(f"expected {self.n} coefficients, got {len(self.coeffs)}")
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        object.__setattr__(self, "constant", float(self.constant))

    @cached_property
    def monomial(self):
        """Monomial form as a :class:`RationalPoly` (exact combination of the float coefficients)."""
        polys = _basis_polys(self.basis, self.n)
        if self.basis == "structured":
            from .structured import build_structured
            scales = build_structured(self.n).inv_norms
        else:
            scales = (1.0,) * self.n
        acc = RationalPoly.const(Fraction(self.constant))
        for c, s, p in zip(self.coeffs, scales, polys):
            acc = acc + Fraction(c * s) * p
        return acc

    def basis_values(self, x):
        """Rows ``phi_k(x)`` for ``k = 1..n`` (without the constant)."""
        x = np.asarray(x, dtype=float)
        if self.basis == "structured":
            from .structured import build_structured
            s = build_structured(self.n)
            return np.array([s.normalized(k, x) for k in range(1, self.n + 1)])
        sys = build_a_system(self.n)
        vals = np.array([sys.values(k, x) for k in range(1, self.n + 1)])
        if self.basis == "B_with_constant":
            # 2 B_nk = 2 A_nk + 4 sum_{l>k} A_nl
            tail = np.cumsum(vals[::-1], axis=0)[::-1]
            vals = 2 * vals + 4 * (tail - vals)
        return vals

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = self.constant + np.tensordot(np.array(self.coeffs), self.basis_values(x), axes=1)
        return out if np.ndim(out) else float(out)

    def value(self, x):
        return self(x)

    def a_coeffs(self):
        """Coefficients in the A basis (same as ``coeffs`` unless basis is B)."""
        if self.basis == "A_with_constant":
            return np.array(self.coeffs)
        if self.basis == "B_with_constant":
            return a_from_b(self.coeffs)
        raise ValueError("structured expansions have no A-basis coefficient map")


def derivative_of(e):
    """Evaluator of the derivative of an expansion.

    For the co-basis form this is ``2 sum b_k B_nk'`` with ``B_nk' = A_nk'
    + 2 sum_{l>k} A_nl'``, which equals ``k A_nk / x`` but stays finite at 0.
    """
    if e.basis == "structured":
        dp = e.monomial.deriv()
        return lambda x: dp.eval_centered(x)
    sys = build_a_system(e.n)
    coeffs = np.array(e.coeffs)

    def deriv(x):
        x = np.asarray(x, dtype=float)
        d = np.array([sys.derivative_values(k, x) for k in range(1, e.n + 1)])
        if e.basis == "B_with_constant":
            tail = np.cumsum(d[::-1], axis=0)[::-1]
            d = 2 * d + 4 * (tail - d)
        out = np.tensordot(coeffs, d, axes=1)
        return out if np.ndim(out) else float(out)

    return deriv


# matrices


def t_matrix(n):
    """Lower-triangular ``T``: 0 above, 1/2 on, ``(-1)^(l-k)`` below the diagonal."""
    half = Fraction(1, 2)
    return [[Fraction(0) if l < k else half if l == k else Fraction((-1) ** (l - k))
             for k in range(1, n + 1)] for l in range(1, n + 1)]


def s_matrix(n):
    """``S``: -1 on odd diagonal, 3 on even diagonal, ``2 (-1)^l`` off it."""
    return [[(-1 if k % 2 else 3) if k == l else 2 * (-1) ** l
             for l in range(1, n + 1)] for k in range(1, n + 1)]


def _as_float(m):
    return np.array([[float(v) for v in row] for row in m])


def a_from_b(b):
    """Solve ``T a = b`` by forward substitution."""
    b = np.asarray(b, dtype=float)
    n = len(b)
    t = _as_float(t_matrix(n))
    a = np.zeros(n)
    for l in range(n):
        a[l] = (b[l] - t[l, :l] @ a[:l]) / t[l, l]
    return a


def a_from_c(c, f0_at_1):
    """Weak-form map ``a = (-1)^(n-1) 2 f0(1) + S c``; the boundary term is the same for every k."""
    c = np.asarray(c, dtype=float)
    n = len(c)
    return (-1) ** (n - 1) * 2.0 * f0_at_1 + _as_float(s_matrix(n)) @ c


# coefficient functionals


def _tol(f, tol):
    return default_tol() if tol is None else tol


def b_coeffs_direct(f, n, tol=None):
    """``b_nl = int_0^1 f0'(t) A_nl(t) dt``, ``l = 1..n``."""
    if f.deriv is None:
        raise ValueError("b_coeffs_direct needs a derivative; use the c-coefficient path instead")
    sys = build_a_system(n)
    if tol is None:
        tol = SINGULAR_TOL if f.endpoint_singular else default_tol()
    return np.array([composite_integral(lambda t, l=l: f.deriv(t) * sys.values(l, t), tol)
                     for l in range(1, n + 1)])


def c_coeffs(f, n, tol=None):
    """``c_nk = 2k int_0^1 f0(t) A_nk(t) / t dt``, ``k = 1..n``."""
    sys = build_a_system(n)
    tol = _tol(f, tol)
    # A_nk / t through the stable evaluator; panel nodes never touch t = 0
    return np.array([2 * k * composite_integral(lambda t, k=k: f.f0(t) * sys.values(k, t) / t, tol)
                     for k in range(1, n + 1)])


def b_from_c(c, f0_at_1, n=None):
    """Integration by parts: ``b_k = (-1)^(n-k) f0(1) - c_k/2 - sum_{l>k} (-1)^(l-k) c_l``."""
    c = np.asarray(c, dtype=float)
    if n is None:
        n = len(c)
    if len(c) != n:
        raise ValueError(f"expected {n} c-coefficients, got {len(c)}")
    b = np.empty(n)
    for k in range(1, n + 1):
        tail = sum((-1) ** (l - k) * c[l - 1] for l in range(k + 1, n + 1))
        b[k - 1] = (-1) ** (n - k) * f0_at_1 - c[k - 1] / 2 - tail
    return b


# continuous operators


def _meta(op, tol, extra=None):
    m = {"operator": op, "quad_tol": tol}
    if extra:
        m.update(extra)
    return m


def omega_hat(f, n, tol=None):
    """Weighted L2 projection of f0 onto ``A_n1..A_nn``, plus ``f(0)``."""
    tol = _tol(f, tol)
    c = c_coeffs(f, n, tol)
    return Expansion(n, f.f_at_0, tuple(c), "A_with_constant", "projection", _meta("projection", tol))


def omega_weak(f, n, tol=None):
    """Joint approximation in weak form: no derivative evaluations needed."""
    tol = _tol(f, tol)
    c = c_coeffs(f, n, tol)
    a = a_from_c(c, f.f0_at_1)
    return Expansion(n, f.f_at_0, tuple(a), "A_with_constant", "weak", _meta("weak", tol))


def omega_spectral(f, n, use_b_from_c=False, tol=None):
    """Joint approximation ``f(0) + 2 sum b_k B_nk`` in the co-basis.

    The b-coefficients come from ``f'`` directly unless ``use_b_from_c`` is set,
    in which case they are derived from the c-coefficients of ``f`` itself.
    """
    if use_b_from_c:
        tol = _tol(f, tol)
        b = b_from_c(c_coeffs(f, n, tol), f.f0_at_1, n)
        path = "b_from_c"
    else:
        if f.deriv is None:
            raise ValueError("omega_spectral needs f' unless the b_from_c path is requested")
        tol = (SINGULAR_TOL if f.endpoint_singular else default_tol()) if tol is None else tol
        b = b_coeffs_direct(f, n, tol)
        path = "direct"
    return Expansion(n, f.f_at_0, tuple(b), "B_with_constant", "spectral",
                     _meta("spectral", tol, {"b_path": path}))


# discrete operators


def d_coeffs(samples, rule, sys):
    """``d_nk = 2k sum_j (w_j / x_j) f0(x_j) A_nk(x_j)`` from f0 sampled at the nodes."""
    samples = np.asarray(samples, dtype=float)
    if rule.n != sys.n:
        raise ValueError(f"rule order {rule.n} does not match system order {sys.n}")
    if samples.shape != rule.nodes.shape:
        raise ValueError(f"expected {rule.n} samples, got {samples.size}")
    wx = rule.weights / rule.nodes * samples
    return np.array([2 * k * np.sum(wx * sys.values(k, rule.nodes)) for k in range(1, sys.n + 1)])


def _node_samples(f, n):
    rule = gauss_rule(n)
    return rule, np.asarray(f.eval(rule.nodes), dtype=float) - f.f_at_0


def w_hat(f, n):
    """Interpolant of f at ``x = 0`` and the n Gauss nodes."""
    rule, s = _node_samples(f, n)
    d = d_coeffs(s, rule, build_a_system(n))
    return Expansion(n, f.f_at_0, tuple(d), "A_with_constant", "discrete_what", {"operator": "what"})


def w_discrete(f, n):
    """Discrete joint approximation from f(0), f(1) and f at the Gauss nodes."""
    rule, s = _node_samples(f, n)
    sys = build_a_system(n)
    inner = np.array([l * np.sum(rule.weights / rule.nodes * s * sys.values(l, rule.nodes))
                      for l in range(1, n + 1)])
    a = 2.0 * ((-1) ** (n - 1) * f.f0_at_1 + _as_float(s_matrix(n)) @ inner)
    return Expansion(n, f.f_at_0, tuple(a), "A_with_constant", "discrete_w", {"operator": "w"})


def pseudo_basis(n, rule=None, sys=None):
    """Pseudo-basis ``P_n0 .. P_{n,n+1}`` of the discrete operator as numpy polynomials.

    Coefficients grow and alternate quickly with n, so this form is limited
    to small orders; use :func:`w_discrete` otherwise.
    """
    if n > PSEUDO_BASIS_MAX_N:
        raise ValueError(
            f"pseudo-basis form is numerically unstable; limited to n <= {PSEUDO_BASIS_MAX_N}, got {n}"
        )
    rule = gauss_rule(n) if rule is None else rule
    sys = build_a_system(n) if sys is None else sys
    A = np.zeros((n, n + 1))
    for k in range(1, n + 1):
        A[k - 1] = sys[k].float_coeffs
    s = _as_float(s_matrix(n))
    P = np.polynomial.Polynomial
    out = [P([1.0])]
    for j in range(n):
        xj = rule.nodes[j]
        vals = np.array([l * sys.values(l, xj) for l in range(1, n + 1)])
        coef = 2 * rule.weights[j] / xj * (s @ vals)
        out.append(P(coef @ A))
    out.append(P(2 * (-1) ** (n - 1) * A.sum(axis=0)))
    return out


def w_via_pseudo(f, n):
    """Evaluator of the discrete operator in its pseudo-basis form."""
    rule, s = _node_samples(f, n)
    basis = pseudo_basis(n, rule)
    weights = [f.f_at_0, *s, f.f0_at_1]
    poly = sum((w * p for w, p in zip(weights, basis)), np.polynomial.Polynomial([0.0]))
    return poly


# parity rule


def detect_parity(f, points=33, tol=1e-9):
    """Classify f0 as 'even' or 'odd' about x = 1/2, else 'asymmetric'."""
    x = np.linspace(0.0, 1.0, points)
    a, b = f.f0(x), f.f0(1.0 - x)
    scale = max(1.0, float(np.max(np.abs(a))))
    if np.max(np.abs(a)) <= tol:
        return "asymmetric"
    if np.max(np.abs(a - b)) <= tol * scale:
        return "even"
    if np.max(np.abs(a + b)) <= tol * scale:
        return "odd"
    return "asymmetric"


def parity_select_n(f_parity, n_requested):
    """Choose n of opposite parity to f0 (odd n for even f0 and vice versa)."""
    if n_requested < 1:
        raise ValueError("n must be >= 1")
    if f_parity == "even":
        return n_requested if n_requested % 2 == 1 else n_requested + 1
    if f_parity == "odd":
        return n_requested if n_requested % 2 == 0 else n_requested + 1
    if f_parity in ("asymmetric", "unknown"):
        return n_requested
    raise ValueError(f"unknown parity {f_parity!r}")


OPERATORS = {
    "spectral": omega_spectral,
    "weak": omega_weak,
    "projection": omega_hat,
    "w": w_discrete,
    "what": w_hat,
}


def fit(f, n, operator="weak", auto_parity=False, use_b_from_c=False):
    """Dispatch to an operator by name, optionally applying the parity rule."""
    if operator not in OPERATORS:
        raise ValueError(f"unknown operator {operator!r}; choose from {sorted(OPERATORS)}")
    decision = None
    if auto_parity:
        parity = detect_parity(f)
        n_used = parity_select_n(parity, n)
        decision = {"parity": parity, "n_requested": n, "n_used": n_used}
        n = n_used
    if operator == "spectral":
        e = omega_spectral(f, n, use_b_from_c=use_b_from_c)
    else:
        e = OPERATORS[operator](f, n)
    if decision is not None:
        e.meta["parity_rule"] = decision
    return e


def sign_changes(values):
    """Number of strict sign changes in a sequence, skipping exact zeros."""
    s = np.sign(np.asarray(values))
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def max_abs_error(e, f, grid=None):
    grid = np.linspace(0.0, 1.0, 2001) if grid is None else grid
    return float(np.max(np.abs(e(grid) - f.eval(grid))))

