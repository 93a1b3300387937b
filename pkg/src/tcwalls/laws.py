"""Exact distributions of three k=1 tableau statistics and their moments.

* X_n: column of the bottom cell of a uniform tableau in B*_{n,1}
  (the U2 step is the X_n-th up step of its bicolored Dyck path).
* Y_n: value in that bottom cell (a pointer from U2 to one of the steps
  up to and including it).
* Z_n: value in the top cell of a uniform tableau in C*_{n,1}.

Each distribution has a path/recurrence route that scales to n in the
thousands and a closed-form generating-function route used as a cross
check for small n.  Floats only appear in :func:`convergence_report`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import ConsistencyError, InvalidInputError
from .series import Poly, TruncatedSeries

PARAMS = ("X", "Y", "Z")

#: Largest n for which the distribution routes are compared by default.
CROSS_CHECK_MAX = 30

#: Limit moments E[L^r] of the rescaled statistics.
LIMIT_MOMENTS = {
    "X": lambda r: Fraction(2, r + 2),
    "Y": lambda r: Fraction(2, (r + 1) * (r + 2)),
    "Z": lambda r: Fraction(1, r + 1),
}


@dataclass(frozen=True)
class DistTable:
    param: str
    n: int
    weights: dict[int, int] = field(hash=False)
    total: int = 0

    def __post_init__(self):
        weights = {m: w for m, w in sorted(self.weights.items()) if w}
        object.__setattr__(self, "weights", weights)
        total = sum(weights.values())
        if self.total and self.total != total:
            raise ConsistencyError(f"{self.param}_{self.n}: weights sum to {total}, not {self.total}")
        if total <= 0:
            raise InvalidInputError("distribution has no mass")
        object.__setattr__(self, "total", total)

    @property
    def masses(self) -> dict[int, Fraction]:
        return {m: Fraction(w, self.total) for m, w in self.weights.items()}

    @property
    def support(self) -> tuple[int, int]:
        keys = list(self.weights)
        return keys[0], keys[-1]

    def mass(self, m: int) -> Fraction:
        return Fraction(self.weights.get(m, 0), self.total)

    def rows(self) -> list[tuple[int, Fraction]]:
        return list(self.masses.items())


def moments(dist: DistTable, r_max: int) -> list[Fraction]:
    """Raw moments E[M^r] for r = 1..r_max."""
    if r_max < 1:
        raise InvalidInputError("r_max must be at least 1")
    sums = [0] * r_max
    for m, w in dist.weights.items():
        p = w
        for r in range(r_max):
            p *= m
            sums[r] += p
    return [Fraction(s, dist.total) for s in sums]


# closed-form generating functions ------------------------------------------

def _poly_series(coeffs, order: int) -> TruncatedSeries:
    return TruncatedSeries([c if isinstance(c, Poly) else Poly((c,)) for c in coeffs], order)


def _sqrt_one_minus(c: Poly, order: int) -> TruncatedSeries:
    """sqrt(1 - c t) with c a polynomial in x."""
    return _poly_series([1, -c], order).sqrt()


def _divide_by_one_minus_x(f: TruncatedSeries) -> TruncatedSeries:
    one_minus_x = Poly((1, -1))
    return f.map_coeffs(lambda p: Poly(p.coeffs) / one_minus_x if p else Poly())


def g_series(order: int) -> TruncatedSeries:
    """G(z, x) as a z-series with polynomial coefficients in x."""
    if order < 1:
        raise InvalidInputError("order must be positive")
    n = (order + 1) // 2  # work in t = z^2
    x = Poly.x()
    sx = _sqrt_one_minus(4 * x, n)
    s1 = _sqrt_one_minus(Poly((4,)), n)
    g = 2 * (1 - sx) / (sx * (s1 + sx) * (s1 + sx))
    return g.subs_monomial(1, 2).truncate(order)


def h_series(order: int) -> TruncatedSeries:
    """H(t, x); the (1 - x) denominator is cleared by exact division."""
    if order < 1:
        raise InvalidInputError("order must be positive")
    n = order + 1  # the denominator has valuation 1 in t
    x = Poly.x()
    s1 = _sqrt_one_minus(Poly((4,)), n)
    sxx = _sqrt_one_minus(4 * x * x, n)
    num = x * (1 - s1) * ((1 - x) + x * s1 - sxx)
    q = _poly_series([1, -4 * x], n) + sxx * s1 - s1 - sxx
    return _divide_by_one_minus_x(num / (s1 * q)).truncate(order)


def v_series(order: int) -> TruncatedSeries:
    """V(t, x) = sum v_{n,i} t^n/n! x^i, bracket brought to one denominator."""
    if order < 1:
        raise InvalidInputError("order must be positive")
    x = Poly.x()
    s2 = _sqrt_one_minus(Poly((2,)), order)
    r = _sqrt_one_minus(2 * x * x, order)
    lin = _poly_series([1 - 2 * x, 2 * x * x], order)
    bracket = (((1 - x) - x * s2) * r - lin) / (lin * r)
    return _divide_by_one_minus_x(x * x * bracket)


# routes ---------------------------------------------------------------------

def _check_n(n: int) -> None:
    if n < 1:
        raise InvalidInputError("n must be at least 1")


@lru_cache(maxsize=8)
def _u2_cuts(n: int) -> tuple[dict[int, int], list[int]]:
    """Cut Dyck paths of length 2n at a marked up step.

    Returns the U2-weighted counts by up-step index m (X) and, for each step
    position p, the number of Dyck paths whose p-th step is an up step (Y).
    The prefix is a nonnegative path with m-1 ups ending at height h, the
    suffix returns from h+1 to 0; both are ballot numbers.
    """
    by_m: dict[int, int] = {}
    by_p = [0] * (2 * n + 1)
    for m in range(1, n + 1):
        a, b = m - 1, n - m
        cp = math.comb(2 * a, a)  # C(2a-h, a-h)
        cs = math.comb(2 * b + 1, b)  # C(2b+h+1, b)
        acc = 0
        for h in range(a + 1):
            if h:
                cp = cp * (a - h + 1) // (2 * a - h + 1)
                cs = cs * (2 * b + h + 1) // (b + h + 1)
            prefix = cp * (h + 1) // (a + 1)
            suffix = cs * (h + 2) // (b + h + 2)
            count = prefix * suffix
            p = 2 * m - 1 - h
            acc += p * count
            by_p[p] += count
        by_m[m] = acc
    return by_m, by_p


def _x_paths(n: int) -> dict[int, int]:
    return dict(_u2_cuts(n)[0])


def _y_paths(n: int) -> dict[int, int]:
    by_p = _u2_cuts(n)[1]
    weights = {}
    acc = 0
    for q in range(2 * n, 0, -1):
        acc += by_p[q]
        if acc:
            weights[q] = acc
    return weights


def v_rows(n_max: int):
    """Yield ``(n, row)`` with ``row[i] = v_{n,i}`` (index 0 unused), n = 1..n_max."""
    prev = [0, 0]  # v_{0, .} vanishes
    dfact = 1
    for n in range(1, n_max + 1):
        row = [0] * (2 * n + 2)
        for i in range(1, 2 * n + 1):
            a = prev[i] if i < len(prev) else 0
            b = prev[i - 1] if i - 1 < len(prev) else 0
            row[i] = (2 * n - i) * a + (i - 1) * b
        row[2 * n + 1] = dfact  # (2n-1)!!
        dfact *= 2 * n + 1
        yield n, row
        prev = row


class VTable:
    """Rows of v_{n,i} kept for the requested n only."""

    def __init__(self, keep: set[int] | None = None):
        self.keep = keep
        self.rows: dict[int, list[int]] = {}

    def fill(self, n_max: int) -> "VTable":
        for n, row in v_rows(n_max):
            if self.keep is None or n in self.keep:
                self.rows[n] = row
        return self

    def __getitem__(self, key: tuple[int, int]) -> int:
        n, i = key
        row = self.rows[n]
        return row[i] if 0 <= i < len(row) else 0


_Z_ROWS: dict[int, tuple[int, ...]] = {}


def prefetch_z(ns) -> None:
    """Compute the v-rows for several n in one sweep of the recurrence."""
    missing = {n for n in ns if n not in _Z_ROWS}
    if missing:
        table = VTable(missing).fill(max(missing))
        for n in missing:
            _Z_ROWS[n] = tuple(table.rows[n])


def _z_recurrence(n: int) -> dict[int, int]:
    prefetch_z((n,))
    return {i: v for i, v in enumerate(_Z_ROWS[n]) if v}


def _poly_weights(p: Poly) -> dict[int, int]:
    out = {}
    for m, c in enumerate(p.coeffs):
        if c:
            c = Fraction(c)
            if c.denominator != 1:
                raise ConsistencyError(f"non-integral coefficient {c} at x^{m}")
            out[m] = c.numerator
    return out


def _x_series(n: int) -> dict[int, int]:
    return _poly_weights(g_series(2 * n + 1)[2 * n])


def _y_series(n: int) -> dict[int, int]:
    return _poly_weights(h_series(n + 1)[n])


def _z_series(n: int) -> dict[int, int]:
    return _poly_weights(v_series(n + 1)[n] * math.factorial(n))


_ROUTES = {
    "X": (_x_paths, _x_series),
    "Y": (_y_paths, _y_series),
    "Z": (_z_recurrence, _z_series),
}


def dist(param: str, n: int, cross_check: bool | None = None) -> DistTable:
    """Exact law of X_n, Y_n or Z_n; both routes must agree when cross-checked."""
    if param not in _ROUTES:
        raise InvalidInputError(f"unknown parameter {param!r}")
    _check_n(n)
    primary, closed_form = _ROUTES[param]
    weights = primary(n)
    if cross_check is None:
        cross_check = n <= CROSS_CHECK_MAX
    if cross_check:
        other = closed_form(n)
        if other != weights:
            raise ConsistencyError(f"{param}_{n}: path route and generating-function route differ")
    return DistTable(param, n, weights)


def dist_X(n: int, cross_check: bool | None = None) -> DistTable:
    return dist("X", n, cross_check)


def dist_Y(n: int, cross_check: bool | None = None) -> DistTable:
    return dist("Y", n, cross_check)


def dist_Z(n: int, cross_check: bool | None = None) -> DistTable:
    return dist("Z", n, cross_check)


# convergence ----------------------------------------------------------------

def _scale(param: str, n: int) -> int:
    return n if param == "X" else 2 * n


@dataclass
class MomentRow:
    n: int
    r: int
    moment: float
    target: float
    gap: float


@dataclass
class ConvergenceReport:
    param: str
    rows: list[MomentRow]
    extras: dict[int, dict[str, float]]

    def gap(self, n: int, r: int) -> float:
        for row in self.rows:
            if row.n == n and row.r == r:
                return row.gap
        raise KeyError((n, r))

    def doubling_pairs(self) -> list[tuple[int, int]]:
        ns = sorted({row.n for row in self.rows})
        return [(a, 2 * a) for a in ns if 2 * a in ns]

    def doubling_ok(self, r: int) -> bool:
        """Gap at 2n below the gap at n for every doubling pair present."""
        pairs = self.doubling_pairs()
        return bool(pairs) and all(self.gap(b, r) < self.gap(a, r) for a, b in pairs)

    def csv_rows(self) -> list[list]:
        out = []
        for row in self.rows:
            out.append([self.param, row.n, row.r, f"{row.moment:.12g}", f"{row.target:.12g}", f"{row.gap:.6e}"])
        return out


def convergence_report(param: str, n_list, r_max: int = 4) -> ConvergenceReport:
    """Rescaled moments E[(M_n/s)^r] against the Beta/Uniform limits.

    s = n for X and 2n for Y, Z.  Extras: X reports mean/n and sd/n against
    2/3 and sqrt(2)/6; Z reports (n - E[Z_n])/sqrt(n) against sqrt(pi)/2.
    """
    if param not in PARAMS:
        raise InvalidInputError(f"unknown parameter {param!r}")
    n_list = sorted(set(n_list))
    if not n_list:
        raise InvalidInputError("n_list must not be empty")
    rows = []
    extras: dict[int, dict[str, float]] = {}
    if param == "Z":
        prefetch_z(n_list)
    for n in n_list:
        d = dist(param, n)
        mom = moments(d, max(r_max, 2))
        s = _scale(param, n)
        for r in range(1, r_max + 1):
            val = float(mom[r - 1] / s**r)
            target = float(LIMIT_MOMENTS[param](r))
            rows.append(MomentRow(n, r, val, target, abs(val - target)))
        if param == "X":
            var = mom[1] - mom[0] ** 2
            extras[n] = {
                "mean_over_n": float(mom[0] / n),
                "mean_target": 2 / 3,
                "sd_over_n": math.sqrt(var) / n,
                "sd_target": math.sqrt(2) / 6,
            }
        elif param == "Z":
            extras[n] = {
                "mean_defect": float((n - mom[0])) / math.sqrt(n),
                "mean_defect_target": math.sqrt(math.pi) / 2,
            }
    return ConvergenceReport(param, rows, extras)
