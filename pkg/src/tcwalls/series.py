"""Exact truncated power series and the generating functions built from them.

``TruncatedSeries`` stores ``c_0 .. c_{N-1}`` of ``sum c_i z^i + O(z^N)``.
Coefficients are ints, ``Fraction``s or ``Poly`` objects (the latter give
bivariate series whose coefficients are polynomials in a marker variable);
integral values are kept as ``int`` for speed.  Every operation returns the
order it can still vouch for.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import zip_longest
from math import factorial
from typing import Callable, Iterable, Sequence

from .errors import ConsistencyError, InvalidInputError, PrecisionError


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


class Poly:
    """Dense polynomial in one marker variable with exact rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_norm(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly((other,))
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({list(self.coeffs)})"

    def _lift(self, other):
        return other if isinstance(other, Poly) else Poly((other,))

    def __add__(self, other):
        if not isinstance(other, (Poly, int, Fraction)):
            return NotImplemented
        other = self._lift(other)
        return Poly(a + b for a, b in zip_longest(self.coeffs, other.coeffs, fillvalue=0))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-a for a in self.coeffs)

    def __sub__(self, other):
        if not isinstance(other, (Poly, int, Fraction)):
            return NotImplemented
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            if other == 0:
                return Poly()
            return Poly(a * other for a in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return Poly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Poly):
            q, r = self.divmod(other)
            if r:
                raise ArithmeticError(f"{self} is not divisible by {other}")
            return q
        return Poly(Fraction(a) / other for a in self.coeffs)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = [Fraction(c) for c in self.coeffs]
        lead = Fraction(other.coeffs[-1])
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(), self
        quot = [Fraction(0)] * (dq + 1)
        for shift in range(dq, -1, -1):
            q = rem[shift + other.degree] / lead
            quot[shift] = q
            if q:
                for i, oc in enumerate(other.coeffs):
                    rem[shift + i] -= q * oc
        return Poly(quot), Poly(rem[: other.degree])

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def _divide(a, b):
    """Exact quotient; polynomial divisors must divide exactly."""
    if isinstance(b, Poly):
        if b.degree == 0:
            b = b.coeffs[0]
        else:
            return (a if isinstance(a, Poly) else Poly((a,))) / b
    if isinstance(a, Poly):
        return a / b
    if isinstance(a, int) and isinstance(b, int) and a % b == 0:
        return a // b
    return _norm(Fraction(a) / b)


class TruncatedSeries:
    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Iterable = (), order: int | None = None):
        cs = [_norm(c) for c in coeffs]
        if order is None:
            order = len(cs)
        if order < 0:
            raise PrecisionError("negative truncation order")
        cs = cs[:order]
        cs.extend([0] * (order - len(cs)))
        self.coeffs = tuple(cs)
        self.order = order

    # construction
    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls((), order)

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls((1,), order)

    @classmethod
    def monomial(cls, power: int, order: int, coeff=1) -> "TruncatedSeries":
        cs = [0] * order
        if power < order:
            cs[power] = coeff
        return cls(cs, order)

    @classmethod
    def from_function(cls, f: Callable[[int], object], order: int) -> "TruncatedSeries":
        return cls((f(n) for n in range(order)), order)

    # access
    def __getitem__(self, n: int):
        if n < 0:
            return 0
        if n >= self.order:
            raise PrecisionError(f"coefficient {n} requested from a series known to O(z^{self.order})")
        return self.coeffs[n]

    def __len__(self):
        return self.order

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}*z^{i}")
        return " + ".join(terms + [f"O(z^{self.order})"])

    def agrees_with(self, other: "TruncatedSeries") -> bool:
        """Equality on the common precision."""
        n = min(self.order, other.order)
        return self.coeffs[:n] == other.coeffs[:n]

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise PrecisionError(f"cannot raise precision from {self.order} to {order}")
        return TruncatedSeries(self.coeffs[:order], order)

    def valuation(self) -> int:
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return self.order

    # ring operations
    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        return TruncatedSeries((other,), self.order)

    def __add__(self, other):
        other = self._coerce(other)
        n = min(self.order, other.order)
        return TruncatedSeries((a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])), n)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries((-a for a in self.coeffs), self.order)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            if isinstance(other, UPolySeries):
                return NotImplemented
            return TruncatedSeries((a * other for a in self.coeffs), self.order)
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = [0] * n
        for i in range(n):
            ai = a[i]
            if not ai:
                continue
            for j in range(n - i):
                bj = b[j]
                if bj:
                    out[i + j] += ai * bj
        return TruncatedSeries(out, n)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self.divide(other)
        return TruncatedSeries((_divide(a, other) for a in self.coeffs), self.order)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = TruncatedSeries.one(self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse; needs an invertible constant term."""
        a = self.coeffs
        if self.order == 0:
            return self
        if not a[0]:
            raise ZeroDivisionError("series with zero constant term has no inverse")
        n = self.order
        inv = [0] * n
        inv[0] = _divide(1, a[0])
        for m in range(1, n):
            s = 0
            for i in range(1, m + 1):
                if a[i]:
                    s += a[i] * inv[m - i]
            inv[m] = _divide(-s, a[0])
        return TruncatedSeries(inv, n)

    def divide(self, other: "TruncatedSeries") -> "TruncatedSeries":
        """Series quotient allowing a positive valuation in the divisor.

        The divisor's leading coefficient may be a polynomial; each quotient
        coefficient must then divide exactly (a nonzero remainder raises).
        Precision drops by the divisor's valuation.
        """
        v = other.valuation()
        if v >= other.order:
            raise ZeroDivisionError("division by a series that vanishes to its precision")
        if self.valuation() < v:
            raise ArithmeticError("quotient would have negative valuation")
        n = min(self.order, other.order) - v
        num, den = self.coeffs, other.coeffs
        lead = den[v]
        q = [0] * n
        for m in range(n):
            s = num[m + v]
            for i in range(m):
                d = den[v + m - i]
                if d and q[i]:
                    s = s - q[i] * d
            q[m] = _divide(s, lead)
        return TruncatedSeries(q, n)

    def sqrt(self) -> "TruncatedSeries":
        """Square root with constant term 1."""
        a = self.coeffs
        n = self.order
        if n == 0:
            return self
        if a[0] != 1:
            raise InvalidInputError("sqrt needs constant term 1")
        s = [0] * n
        s[0] = 1
        for m in range(1, n):
            acc = a[m]
            for i in range(1, m):
                if s[i] and s[m - i]:
                    acc = acc - s[i] * s[m - i]
            s[m] = _divide(acc, 2)
        return TruncatedSeries(s, n)

    # calculus and substitution
    def derivative(self) -> "TruncatedSeries":
        n = self.order
        return TruncatedSeries((i * self.coeffs[i] for i in range(1, n)), max(n - 1, 0))

    def integral(self, constant=0) -> "TruncatedSeries":
        return TruncatedSeries(
            [constant] + [_divide(c, i + 1) for i, c in enumerate(self.coeffs)], self.order + 1
        )

    def shift(self, p: int) -> "TruncatedSeries":
        """Multiply by z^p (p >= 0); precision grows by p."""
        if p < 0:
            return self.unshift(-p)
        return TruncatedSeries((0,) * p + self.coeffs, self.order + p)

    def unshift(self, p: int) -> "TruncatedSeries":
        """Divide by z^p, insisting that the dropped coefficients vanish."""
        if p < 0:
            return self.shift(-p)
        if any(self.coeffs[:p]):
            raise ArithmeticError(f"series is not divisible by z^{p}")
        return TruncatedSeries(self.coeffs[p:], max(self.order - p, 0))

    def weighted(self, f: Callable[[int], object]) -> "TruncatedSeries":
        """Apply z^n -> f(n) z^n."""
        return TruncatedSeries((f(i) * c for i, c in enumerate(self.coeffs)), self.order)

    def subs_monomial(self, scale, power: int) -> "TruncatedSeries":
        """f(scale * z^power); precision scales by ``power``."""
        if power < 1:
            raise InvalidInputError("substitution power must be positive")
        order = self.order * power
        out = [0] * order
        f = 1
        for i, c in enumerate(self.coeffs):
            out[i * power] = c * f
            f = f * scale
        return TruncatedSeries(out, order)

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """f(g(z)) for g with zero constant term (Horner)."""
        if inner.order and inner.coeffs[0]:
            raise InvalidInputError("inner series must have zero constant term")
        # f has precision N in its variable; g^N = O(z^N) at least
        n = min(inner.order, self.order * max(inner.valuation(), 1))
        g = inner.truncate(n) if inner.order > n else inner
        acc = TruncatedSeries.zero(n)
        for c in reversed(self.coeffs):
            acc = acc * g + c
        return acc

    def __call__(self, x):
        """Evaluate the truncated polynomial at a scalar."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def map_coeffs(self, f: Callable) -> "TruncatedSeries":
        return TruncatedSeries((f(c) for c in self.coeffs), self.order)


def pointing_operator(f: TruncatedSeries, k: int) -> TruncatedSeries:
    """(1/z^{k-2}) d/dz z^{k-1} applied literally (shift, differentiate, unshift)."""
    g = f.shift(k - 1).derivative() if k >= 1 else f.unshift(1 - k).derivative()
    return g.unshift(k - 2)


class UPolySeries:
    """F(z, u) = sum_l f_l(z) u^l with truncated z-series coefficients."""

    __slots__ = ("u_coeffs", "order")

    def __init__(self, u_coeffs: Sequence[TruncatedSeries], order: int):
        cs = [c if c.order == order else c.truncate(order) for c in u_coeffs]
        # u^l with l >= order carries z-valuation >= order here
        cs = cs[:order]
        while cs and not any(cs[-1].coeffs):
            cs.pop()
        self.u_coeffs = tuple(cs)
        self.order = order

    @property
    def max_u_degree(self) -> int:
        return len(self.u_coeffs) - 1

    def coeff(self, ell: int) -> TruncatedSeries:
        if 0 <= ell < len(self.u_coeffs):
            return self.u_coeffs[ell]
        return TruncatedSeries.zero(self.order)

    def substitute(self, s: TruncatedSeries) -> TruncatedSeries:
        """F(z, s(z))."""
        acc = TruncatedSeries.zero(self.order)
        for c in reversed(self.u_coeffs):
            acc = acc * s + c
        return acc

    def divided_difference(self, e: TruncatedSeries) -> "UPolySeries":
        """u^l -> sum_{i=0}^{l} e^i u^{l-i}, i.e. (u F(u) - e F(e)) / (u - e)."""
        out = [None] * len(self.u_coeffs)
        acc = TruncatedSeries.zero(self.order)
        for j in range(len(self.u_coeffs) - 1, -1, -1):
            acc = self.u_coeffs[j] + e * acc
            out[j] = acc
        return UPolySeries(out, self.order)

    def times_up_meander(self, e: TruncatedSeries) -> "UPolySeries":
        """Multiply by u e / (1 - u e) = sum_{p >= 1} (u e)^p."""
        out = [TruncatedSeries.zero(self.order)]
        acc = TruncatedSeries.zero(self.order)
        # s_p = g_p + e s_{p-1};  result_p = e s_{p-1}
        for p in range(1, self.order):
            acc = self.coeff(p - 1) + e * acc
            out.append(e * acc)
        return UPolySeries(out, self.order)

    def weighted(self, f: Callable[[int], object]) -> "UPolySeries":
        return UPolySeries([c.weighted(f) for c in self.u_coeffs], self.order)

    def __eq__(self, other):
        if not isinstance(other, UPolySeries):
            return NotImplemented
        return self.order == other.order and self.u_coeffs == other.u_coeffs


@lru_cache(maxsize=None)
def dyck_series(order: int) -> TruncatedSeries:
    """D(z) = 1 + z^2 D(z)^2, by the coefficient recurrence."""
    if order < 1:
        raise InvalidInputError("order must be positive")
    d = [0] * order
    d[0] = 1
    for m in range(2, order, 2):
        d[m] = sum(d[i] * d[m - 2 - i] for i in range(0, m - 1, 2))
    return TruncatedSeries(d, order)


@lru_cache(maxsize=None)
def e_series(order: int) -> TruncatedSeries:
    """E(z) = z D(z), the power series root of E = z (1 + E^2)."""
    return dyck_series(order).shift(1).truncate(order)


def meander_series(level: int, order: int) -> TruncatedSeries:
    """Dyck meanders ending at ``level``: D E^level."""
    return dyck_series(order) * e_series(order) ** level


def up_meander(order: int) -> UPolySeries:
    """M_up(z, u) = u E / (1 - u E)."""
    return UPolySeries([TruncatedSeries.one(order)], order).times_up_meander(e_series(order))


def f_step(prev: UPolySeries, k: int) -> UPolySeries:
    """One recursion step F_{k-1} -> F_k."""
    e = e_series(prev.order)
    g = prev.divided_difference(e).times_up_meander(e)
    return g.weighted(lambda n: n + k - 1)


@lru_cache(maxsize=None)
def f_k(k: int, order: int) -> UPolySeries:
    """Bivariate generating function of bicolored meanders ending with their k-th U2."""
    if k < 0 or order < 1:
        raise InvalidInputError("need k >= 0 and order >= 1")
    if k == 0:
        return UPolySeries([TruncatedSeries.one(order)], order)
    return f_step(f_k(k - 1, order), k)


def b_k_series(k: int, order: int) -> TruncatedSeries:
    """B_k(z) = F_k(z, E(z)) D(z); [z^{2n}] is b_{n,k}."""
    return f_k(k, order).substitute(e_series(order)) * dyck_series(order)


@lru_cache(maxsize=None)
def gamma_table(k_max: int) -> dict[tuple[int, int], Fraction]:
    """gamma_{i,k} for 1 <= k <= k_max."""
    g: dict[tuple[int, int], Fraction] = {(0, 1): Fraction(-1), (1, 1): Fraction(1)}
    for k in range(2, k_max + 1):
        for i in range(1, k + 1):
            g[i, k] = Fraction((i + 3 * k - 3) * (i + 3 * k - 5), i) * g[i - 1, k - 1]
        g[0, k] = -sum(g[i, k] for i in range(1, k + 1))
    return g


def binomial_power_series(alpha: Fraction, order: int, scale=2) -> TruncatedSeries:
    """(1 - scale*w)^(-alpha) via coef_{m+1} = coef_m * scale (alpha + m) / (m + 1)."""
    alpha = Fraction(alpha)
    cs = [Fraction(1)]
    for m in range(order - 1):
        cs.append(cs[-1] * scale * (alpha + m) / (m + 1))
    return TruncatedSeries(cs, order)


def c0_series(order: int) -> TruncatedSeries:
    """C_0(w) = 1 - sqrt(1 - 2w)."""
    return 1 - TruncatedSeries((1, -2), order).sqrt()


def c_k_gamma(k: int, order: int) -> TruncatedSeries:
    if k == 0:
        return c0_series(order)
    g = gamma_table(k)
    total = TruncatedSeries.zero(order)
    for i in range(k + 1):
        total = total + g[i, k] * binomial_power_series(Fraction(i + 3 * k - 1, 2), order)
    return total


def c_k_ode(k: int, order: int) -> TruncatedSeries:
    """Integrate (1 - 2w) C_k' - (3k - 1) C_k = C_{k-1}'' with C_k(0) = 0."""
    if k == 0:
        return c0_series(order)
    # C_k to order N needs C_{k-1} to order N + 1
    rhs = c_k_ode(k - 1, order + 1).derivative().derivative()
    a = [Fraction(0)] * order
    for m in range(order - 1):
        a[m + 1] = ((2 * m + 3 * k - 1) * a[m] + rhs[m]) / (m + 1)
    return TruncatedSeries(a, order)


@lru_cache(maxsize=None)
def c_k_series(k: int, order: int) -> TruncatedSeries:
    """C_k(w) = sum_{n>=k} c_{n,k} w^{n-k+1}/(n-k+1)!, built two ways."""
    if k < 0 or order < 1:
        raise InvalidInputError("need k >= 0 and order >= 1")
    via_gamma = c_k_gamma(k, order)
    via_ode = c_k_ode(k, order)
    if via_gamma != via_ode:
        m = next(i for i in range(order) if via_gamma[i] != via_ode[i])
        raise ConsistencyError(f"C_{k}: gamma route and ODE route differ at w^{m}")
    return via_gamma


def c_from_series(k: int, n: int) -> int:
    """c_{n,k} read off C_k."""
    m = n - k + 1
    val = c_k_series(k, m + 1)[m] * factorial(m)
    return _norm(Fraction(val))


@dataclass
class GFIdentityReport:
    k: int
    order: int
    passed: bool
    first_mismatch: int | None = None
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {"k": self.k, "order": self.order, "passed": self.passed,
                "first_mismatch": self.first_mismatch, "seconds": round(self.seconds, 3)}


def default_order(k: int) -> int:
    return 2 * k + 40


def gf_identity_sides(k: int, order: int) -> tuple[TruncatedSeries, TruncatedSeries]:
    """Both sides of 2 B_k(z) = z^{2(k-1)} C_k(2z^2) (k=0: 2 z^2 B_0 = C_0(2z^2))."""
    b = b_k_series(k, order)
    if k == 0:
        lhs = (2 * b).shift(2).truncate(order)
        rhs_shift = 0
    else:
        lhs = 2 * b
        rhs_shift = 2 * (k - 1)
    w_order = max((order - rhs_shift + 1) // 2, 1)
    rhs = c_k_series(k, w_order).subs_monomial(2, 2).shift(rhs_shift)
    return lhs, rhs.truncate(order) if rhs.order > order else rhs


def _compare(k: int, lhs: TruncatedSeries, rhs: TruncatedSeries, start: float) -> GFIdentityReport:
    n = min(lhs.order, rhs.order)
    for i in range(n):
        if lhs[i] != rhs[i]:
            return GFIdentityReport(k, n, False, i, time.perf_counter() - start)
    return GFIdentityReport(k, n, True, None, time.perf_counter() - start)


def verify_gf_identity(k: int, order: int | None = None) -> GFIdentityReport:
    if k < 0:
        raise InvalidInputError("k must be nonnegative")
    order = default_order(k) if order is None else order
    start = time.perf_counter()
    lhs, rhs = gf_identity_sides(k, order)
    return _compare(k, lhs, rhs, start)


def verify_gf_identities(max_k: int, order: int | None = None) -> list[GFIdentityReport]:
    """Check every k <= max_k at one common order (default 2 max_k + 40).

    The F_k chain is shared, so this is much cheaper than separate calls.
    """
    order = default_order(max_k) if order is None else order
    return [verify_gf_identity(k, order) for k in range(max_k + 1)]


def t_operator(f: TruncatedSeries) -> TruncatedSeries:
    """T = (1 - 2w) d/dw; costs one order."""
    d = f.derivative()
    return d - 2 * d.shift(1).truncate(d.order)


def annihilator_residual(k: int, order: int) -> TruncatedSeries:
    """prod_{j=3k-1}^{4k-1} (T - j) applied to C_k."""
    f = c_k_series(k, order)
    for j in range(3 * k - 1, 4 * k):
        tf = t_operator(f)
        f = tf - j * f.truncate(tf.order)
    return f


def t_operator_check(k: int, order: int) -> bool:
    if k < 1:
        raise InvalidInputError("k must be at least 1")
    if order <= k + 1:
        raise InvalidInputError(f"order {order} leaves no precision after {k + 1} factors")
    residual = annihilator_residual(k, order)
    return residual.order == order - (k + 1) and not any(residual.coeffs)


def commutation_check(f: TruncatedSeries) -> bool:
    """D^2 T f == (T - 4) D^2 f on the surviving precision."""
    left = t_operator(f).derivative().derivative()
    d2 = f.derivative().derivative()
    right = t_operator(d2) - 4 * d2.truncate(d2.order - 1)
    return left.agrees_with(right) and left.order == right.order
