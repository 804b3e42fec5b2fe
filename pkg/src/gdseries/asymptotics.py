"""Evaluating Coefficient GFs as asymptotic expansions.

The expansion of a table a_(m,l) at size n is

    alpha^(beta C(n,2)) * sum_(m <= M) alpha^(-m n) sum_l n^(l falling) a_(m,l)

and everything here is exact; floats appear only in log2 diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from .field import AlgNum, format_fraction
from .transfer import CoeffGf

__all__ = [
    "falling",
    "ExpansionEstimate",
    "partial_sum",
    "log2_fraction",
    "ErrorProfile",
    "error_profile",
    "WrightPoly",
    "wright_polynomials",
    "sat_correction",
    "sat_correction_from_table",
    "LeadingTerm",
    "scc_count_leading",
]


def falling(n: int, l: int) -> int:
    """n (n-1) ... (n-l+1); zero once l exceeds a non-negative n."""
    out = 1
    for i in range(l):
        out *= n - i
    return out


def log2_fraction(q: Fraction) -> float:
    q = abs(Fraction(q))
    if q == 0:
        return float("-inf")
    return math.log2(q.numerator) - math.log2(q.denominator)


def _unmarked(c: CoeffGf):
    for v in c.table.values():
        if not v.is_constant():
            raise ValueError("expansion of a marked table: slice or specialize the marks first")


@dataclass
class ExpansionEstimate:
    n: int
    terms_used: int
    value: AlgNum
    truth: AlgNum | None = None
    rel_error: Fraction | None = None
    terms: list = field(default_factory=list)

    @property
    def rel_error_log2(self) -> float | None:
        if self.rel_error is None:
            return None
        return log2_fraction(self.rel_error)


def row_value(c: CoeffGf, n: int, m: int) -> AlgNum:
    """sum_l n^(l falling) a_(m,l) for one row."""
    total = c.spec.zero()
    for l, v in c.row(m).items():
        f = falling(n, l)
        if f:
            total = total + v.constant_term() * f
    return total


def partial_sum(c: CoeffGf, n: int, M: int, truth=None) -> ExpansionEstimate:
    """Expansion truncated after row M, optionally compared with the exact value."""
    _unmarked(c)
    if M > c.z_order:
        raise ValueError(f"row {M} beyond the computed z-order {c.z_order}")
    alpha = c.spec.alpha
    lead = alpha ** (c.beta * comb(n, 2))
    value = c.spec.zero()
    terms = []
    for m in c.rows():
        if m > M:
            break
        contrib = row_value(c, n, m) * (lead * alpha ** (-m * n))
        terms.append((m, contrib))
        value = value + contrib
    est = ExpansionEstimate(n, M, value, terms=terms)
    if truth is not None:
        truth = truth if isinstance(truth, AlgNum) else AlgNum(c.spec, {0: Fraction(truth)})
        est.truth = truth
        if truth:
            diff = value - truth
            if diff.is_rational() and truth.is_rational():
                est.rel_error = abs(diff.as_fraction()) / abs(truth.as_fraction())
            else:
                est.rel_error = Fraction(abs(diff.to_float()) / abs(truth.to_float()))
    return est


# ---------------------------------------------------------------------------
# error profiles


@dataclass
class ErrorProfile:
    """rel_error over a grid of sizes n and truncation rows M."""

    name: str
    table: CoeffGf
    n_values: list
    M_values: list
    errors: dict  # (n, M) -> Fraction

    def log2(self, n, M) -> float:
        return log2_fraction(self.errors[n, M])

    def next_row(self, M: int):
        """First row after M with a nonzero entry, if the table reaches it."""
        return next((m for m in self.table.rows() if m > M), None)

    def next_term_nonzero(self, n: int, M: int) -> bool:
        m = self.next_row(M)
        return m is not None and bool(row_value(self.table, n, m))

    def monotonicity_violations(self) -> list:
        """(n, M) pairs where adding the next nonzero term did not reduce the error."""
        bad = []
        for n in self.n_values:
            for M in self.M_values:
                if M + 1 not in self.M_values:
                    continue
                m = self.next_row(M)
                if m is None or m != M + 1 or not self.next_term_nonzero(n, M):
                    continue
                if not self.errors[n, M + 1] < self.errors[n, M]:
                    bad.append((n, M))
        return bad

    def slope(self, M: int) -> float:
        """Least-squares slope of log2 rel_error against n at fixed M."""
        xs = list(self.n_values)
        ys = [self.log2(n, M) for n in xs]
        xbar = sum(xs) / len(xs)
        ybar = sum(ys) / len(ys)
        num = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
        den = sum((x - xbar) ** 2 for x in xs)
        return num / den

    def expected_slope(self, M: int):
        """-(m_next - m_min) log2(alpha), or None when no further row is known."""
        m = self.next_row(M)
        if m is None:
            return None
        return -(m - self.table.m_min) * math.log2(self.table.spec.alpha)

    def slope_report(self, tolerance_per_row: float = 0.25) -> list:
        """Rows (M, measured, expected, tolerance, ok) for every M with a known next row."""
        out = []
        lg = math.log2(self.table.spec.alpha)
        for M in self.M_values:
            exp = self.expected_slope(M)
            if exp is None or any(self.errors[n, M] == 0 for n in self.n_values):
                continue
            tol = tolerance_per_row * lg * (self.next_row(M) - self.table.m_min)
            got = self.slope(M)
            out.append((M, got, exp, tol, abs(got - exp) <= tol))
        return out


def error_profile(family, beta: int | None, n_values, M_values, z_order: int | None = None) -> ErrorProfile:
    """Exact relative errors of truncated expansions against the family's counts."""
    n_values = list(n_values)
    M_values = list(M_values)
    beta = family.grade if beta is None else beta
    z_order = max(M_values) + 2 if z_order is None else z_order
    c = family.transfer(beta, z_order)
    series = family.evaluate(max(n_values))
    errors = {}
    for n in n_values:
        truth = series.coeffs[n].constant_term() * factorial(n)
        for M in M_values:
            errors[n, M] = partial_sum(c, n, M, truth).rel_error
    return ErrorProfile(family.name, c, n_values, M_values, errors)


# ---------------------------------------------------------------------------
# Wright polynomials


def _falling_monomials(l: int) -> list[int]:
    """Coefficients of n^(l falling) in the monomial basis (signed Stirling numbers)."""
    poly = [1]
    for i in range(l):
        nxt = [0] * (len(poly) + 1)
        for d, c in enumerate(poly):
            nxt[d + 1] += c
            nxt[d] -= i * c
        poly = nxt
    return poly


@dataclass
class WrightPoly:
    """w_m(n) = sum_l n^(l falling) a_(m,l), stored in the monomial basis."""

    m: int
    coeffs: list  # coeffs[d] multiplies n^d

    def __call__(self, n):
        return sum(c * n ** d for d, c in enumerate(self.coeffs))

    @property
    def degree(self) -> int:
        return max((d for d, c in enumerate(self.coeffs) if c), default=0)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "monomials": [{"deg": d, "coeff": _text(c)} for d, c in enumerate(self.coeffs) if c],
        }

    def __str__(self):
        parts = []
        for d in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[d]
            if not c:
                continue
            mono = "" if d == 0 else "n" if d == 1 else f"n^{d}"
            coeff = _text(c)
            parts.append(coeff if not mono else mono if coeff == "1" else f"-{mono}" if coeff == "-1" else f"{coeff}*{mono}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out


def _text(c) -> str:
    if isinstance(c, AlgNum):
        return format_fraction(c.as_fraction()) if c.is_rational() else str(c)
    return format_fraction(Fraction(c))


def wright_polynomials(c: CoeffGf, m_max: int) -> list[WrightPoly]:
    _unmarked(c)
    out = []
    for m in range(m_max + 1):
        row = c.row(m) if m <= c.z_order else {}
        width = max(row, default=0) + 1
        coeffs = [c.spec.zero() for _ in range(width)]
        for l, v in row.items():
            for d, s in enumerate(_falling_monomials(l)):
                if s:
                    coeffs[d] = coeffs[d] + v.constant_term() * s
        coeffs = [x.as_fraction() if x.is_rational() else x for x in coeffs]
        out.append(WrightPoly(m, coeffs))
    return out


# ---------------------------------------------------------------------------
# 2-SAT and SCC-count corollaries


def sat_correction(m: int, sat: list[int], it: list[int]) -> Fraction:
    """s_m = 2^m [sum_(k<m) C(m,k) sat_k it_(m-k) / 2^(k^2) - sat_m / 2^(m^2)].

    ``sat`` and ``it`` are count lists indexed from 0 (it_0 is unused).  At
    m = 0 the expansion's leading term is exactly 1, so the correction is 0.
    """
    if m == 0:
        return Fraction(0)
    total = sum(Fraction(comb(m, k) * sat[k] * it[m - k], 2 ** (k * k)) for k in range(m))
    return 2 ** m * (total - Fraction(sat[m], 2 ** (m * m)))


def sat_correction_from_table(c: CoeffGf, m: int) -> Fraction:
    """The same quantity read off the 2-SAT Coefficient GF.

    The table satisfies a_(m,m) = -2^C(m,2) s_m / m!, so the count expansion is
    sat_n ~ 2^(3 C(n,2) + n) [1 - sum_m 2^(-m n) C(n,m) 2^C(m,2) s_m].
    """
    if m == 0:
        return 1 - c.extract(0, 0).as_fraction()
    return -c.extract(m, m).as_fraction() * factorial(m) / 2 ** comb(m, 2)


@dataclass
class LeadingTerm:
    """p_(n,m+1) ~ C(n,m) * constant / 2^(m n) for digraphs with m+1 SCCs."""

    m: int
    dag2_m: int

    @property
    def constant(self) -> int:
        return 2 ** self.m * self.dag2_m

    @property
    def diagonal(self) -> Fraction:
        """Predicted [t^(m+1)] a_(m,m) of the SCC-marked digraph table."""
        return Fraction(self.constant, factorial(self.m))

    def __call__(self, n: int) -> Fraction:
        return Fraction(comb(n, self.m) * self.constant, 2 ** (self.m * n))

    def __str__(self):
        return f"p(n,{self.m + 1}) ~ C(n,{self.m}) * {self.constant} / 2^({self.m}n)"


def scc_count_leading(m: int, dag2: list[int] | None = None) -> LeadingTerm:
    if dag2 is None:
        from .families import build_family

        dag2 = build_family("dag2").integer_counts(m)
    return LeadingTerm(m, dag2[m])
