"""Truncated exponential-type power series with exact marked coefficients.

An ``Egf`` stores [z^n]A for n = 0..order.  The ``kind`` tag only changes how
counts are recovered from coefficients:

* exponential: a_n = n! [z^n]A
* graphic:     a_n = n! alpha^C(n,2) [z^n]A
* implication: a_n = n! 2^n 2^(n(n-1)) [z^n]A   (2-SAT normalization)
* plain:       a_n = [z^n]A
"""

from __future__ import annotations

import enum
from fractions import Fraction
from math import comb, factorial

from .errors import BadConstantTerm, NonzeroConstantTerm, SpecMismatch, VariableSetMismatch
from .field import AlgNum, FieldSpec, alg_pow
from .marked import MarkedScalar

__all__ = ["Kind", "Egf", "binomial_series_coeff"]


class Kind(enum.Enum):
    EXPONENTIAL = "exponential"
    GRAPHIC = "graphic"
    IMPLICATION = "implication"
    PLAIN = "plain"


def binomial_series_coeff(r, k: int) -> Fraction:
    """Generalized binomial coefficient C(r, k) for rational r."""
    out = Fraction(1)
    for i in range(k):
        out = out * (Fraction(r) - i) / (i + 1)
    return out


def _as_marked(spec, variables, x) -> MarkedScalar:
    if isinstance(x, MarkedScalar):
        return x if x.variables == variables else x.embed(variables)
    return MarkedScalar.constant(spec, x, variables)


class Egf:
    __slots__ = ("spec", "variables", "coeffs", "kind")

    def __init__(self, spec: FieldSpec, coeffs, kind: Kind = Kind.EXPONENTIAL, variables=()):
        self.spec = spec
        self.variables = tuple(variables)
        self.coeffs = tuple(_as_marked(spec, self.variables, c) for c in coeffs)
        if not self.coeffs:
            raise ValueError("a series needs at least the constant coefficient")
        self.kind = kind

    @classmethod
    def _raw(cls, spec, variables, coeffs, kind):
        obj = cls.__new__(cls)
        obj.spec = spec
        obj.variables = variables
        obj.coeffs = tuple(coeffs)
        obj.kind = kind
        return obj

    @classmethod
    def from_function(cls, spec, order, fn, kind=Kind.EXPONENTIAL, variables=()):
        """Series with [z^n] = fn(n)."""
        return cls(spec, [fn(n) for n in range(order + 1)], kind, variables)

    @classmethod
    def constant(cls, spec, order, value=1, variables=(), kind=Kind.EXPONENTIAL):
        zero = MarkedScalar.constant(spec, 0, variables)
        return cls(spec, [value] + [zero] * order, kind, variables)

    @classmethod
    def exp_z(cls, spec, order, variables=()):
        return cls.from_function(spec, order, lambda n: Fraction(1, factorial(n)), variables=variables)

    @classmethod
    def gen_atom(cls, spec, order, beta, variables=()):
        """sum alpha^(beta C(n,2)) z^n / n!"""
        return cls.from_function(
            spec, order, lambda n: spec.alpha ** (beta * comb(n, 2)) / factorial(n), variables=variables
        )

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n) -> MarkedScalar:
        return self.coeffs[n]

    def with_kind(self, kind: Kind) -> "Egf":
        return Egf._raw(self.spec, self.variables, self.coeffs, kind)

    def truncate(self, order: int) -> "Egf":
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to {order}")
        return Egf._raw(self.spec, self.variables, self.coeffs[: order + 1], self.kind)

    def embed(self, variables) -> "Egf":
        variables = tuple(variables)
        if variables == self.variables:
            return self
        return Egf._raw(self.spec, variables, [c.embed(variables) for c in self.coeffs], self.kind)

    def map_coeffs(self, fn, variables=None) -> "Egf":
        variables = self.variables if variables is None else tuple(variables)
        return Egf(self.spec, [fn(c) for c in self.coeffs], self.kind, variables)

    def _zero(self):
        return MarkedScalar.constant(self.spec, 0, self.variables)

    # counts --------------------------------------------------------------

    def count_factor(self, n: int):
        if self.kind is Kind.EXPONENTIAL:
            return factorial(n)
        if self.kind is Kind.GRAPHIC:
            return factorial(n) * self.spec.alpha ** comb(n, 2)
        if self.kind is Kind.IMPLICATION:
            return factorial(n) * 2 ** n * 2 ** (n * (n - 1))
        return 1

    def counts(self, n_max: int | None = None) -> list:
        """Counts a_n for n = 0..n_max as MarkedScalars."""
        n_max = self.order if n_max is None else n_max
        if n_max > self.order:
            raise ValueError(f"series known only to order {self.order}")
        return [self.coeffs[n] * self.count_factor(n) for n in range(n_max + 1)]

    def integer_counts(self, n_max: int | None = None) -> list[int]:
        """Counts of an unmarked series as Python ints; raises if any is not an integer."""
        out = []
        for n, c in enumerate(self.counts(n_max)):
            if not c.is_constant():
                raise ValueError("series carries marks; specialize or slice first")
            q = c.constant_term().as_fraction()
            if q.denominator != 1:
                raise ValueError(f"count at n={n} is not an integer: {q}")
            out.append(q.numerator)
        return out

    # ring ---------------------------------------------------------------

    def _other(self, other):
        if isinstance(other, Egf):
            if other.spec != self.spec:
                raise SpecMismatch(f"{self.spec} vs {other.spec}")
            if other.variables != self.variables:
                if not other.variables:
                    other = other.embed(self.variables)
                elif not self.variables:
                    return None
                else:
                    raise VariableSetMismatch(f"{self.variables} vs {other.variables}")
            return other
        return Egf.constant(self.spec, self.order, other, self.variables, self.kind)

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return self.embed(other.variables) + other
        n = min(self.order, o.order)
        return Egf._raw(self.spec, self.variables, [a + b for a, b in zip(self.coeffs[: n + 1], o.coeffs)], self.kind)

    __radd__ = __add__

    def __neg__(self):
        return Egf._raw(self.spec, self.variables, [-c for c in self.coeffs], self.kind)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, AlgNum, MarkedScalar)):
            if isinstance(other, MarkedScalar) and other.variables != self.variables:
                if other.is_constant() and not other.variables:
                    other = other.constant_term()
                else:
                    variables = self.variables or other.variables
                    return self.embed(variables) * other.embed(variables)
            return Egf._raw(self.spec, self.variables, [c * other for c in self.coeffs], self.kind)
        o = self._other(other)
        if o is None:
            return self.embed(other.variables) * other
        n = min(self.order, o.order)
        a, b = self.coeffs, o.coeffs
        nz_a = [i for i in range(n + 1) if a[i]]
        nz_b = [j for j in range(n + 1) if b[j]]
        out = [self._zero() for _ in range(n + 1)]
        for i in nz_a:
            ai = a[i]
            for j in nz_b:
                if i + j > n:
                    break
                out[i + j] = out[i + j] + ai * b[j]
        return Egf._raw(self.spec, self.variables, out, self.kind)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Egf):
            return self * other.reciprocal()
        return self * (1 / Fraction(other) if isinstance(other, (int, Fraction)) else other.inverse())

    def __pow__(self, r):
        return self.power(r)

    def __eq__(self, other):
        if not isinstance(other, Egf):
            return NotImplemented
        return self.order == other.order and all(a == b for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None

    # constant-term helpers -------------------------------------------

    def _require_constant(self, value, err):
        c = self.coeffs[0]
        if not (c.is_constant() and c.constant_term() == value):
            raise err(f"constant term must be {value}, got {c}")

    # exp / log / powers ------------------------------------------------

    def exp(self) -> "Egf":
        """exp(A) for A(0) = 0, via n b_n = sum_k k a_k b_(n-k)."""
        self._require_constant(0, BadConstantTerm)
        n_max = self.order
        a = self.coeffs
        b = [MarkedScalar.constant(self.spec, 1, self.variables)]
        nz = [k for k in range(1, n_max + 1) if a[k]]
        for n in range(1, n_max + 1):
            s = self._zero()
            for k in nz:
                if k > n:
                    break
                s = s + a[k] * b[n - k] * k
            b.append(s / n)
        return Egf._raw(self.spec, self.variables, b, self.kind)

    def log(self) -> "Egf":
        """log(A) for A(0) = 1, via n b_n = n a_n - sum_(k<n) k b_k a_(n-k)."""
        self._require_constant(1, BadConstantTerm)
        a = self.coeffs
        b = [self._zero()]
        for n in range(1, self.order + 1):
            s = a[n] * n
            for k in range(1, n):
                if b[k] and a[n - k]:
                    s = s - b[k] * a[n - k] * k
            b.append(s / n)
        return Egf._raw(self.spec, self.variables, b, self.kind)

    def power(self, r) -> "Egf":
        """A^r; non-negative integer r works for any A, otherwise A(0) = 1 is required."""
        if isinstance(r, int) and r >= 0:
            result = Egf.constant(self.spec, self.order, 1, self.variables, self.kind)
            base = self
            while r:
                if r & 1:
                    result = result * base
                r >>= 1
                if r:
                    base = base * base
            return result
        self._require_constant(1, BadConstantTerm)
        r = Fraction(r)
        a = self.coeffs
        b = [MarkedScalar.constant(self.spec, 1, self.variables)]
        nz = [k for k in range(1, self.order + 1) if a[k]]
        # b_n = (1/n) sum_k ((r+1)k - n) a_k b_(n-k)
        for n in range(1, self.order + 1):
            s = self._zero()
            for k in nz:
                if k > n:
                    break
                s = s + a[k] * b[n - k] * ((r + 1) * k - n)
            b.append(s / n)
        return Egf._raw(self.spec, self.variables, b, self.kind)

    def reciprocal(self) -> "Egf":
        c = self.coeffs[0]
        if not c.is_constant() or not c.constant_term():
            raise BadConstantTerm(f"reciprocal needs an invertible constant term, got {c}")
        c0 = c.constant_term()
        if c0 == 1:
            return self.power(-1)
        return (self * c0.inverse()).power(-1) * c0.inverse()

    def compose(self, inner: "Egf") -> "Egf":
        """self(inner(z)) with self read as ordinary power-series coefficients; inner(0) = 0."""
        if inner.coeffs[0]:
            raise NonzeroConstantTerm(f"inner series has constant term {inner.coeffs[0]}")
        n = min(self.order, inner.order)
        variables = self.variables if len(self.variables) >= len(inner.variables) else inner.variables
        f = self.embed(variables) if self.variables != variables else self
        g = inner.embed(variables).truncate(n).with_kind(inner.kind)
        result = Egf.constant(self.spec, n, f.coeffs[n], variables, inner.kind)
        for k in range(n - 1, -1, -1):
            result = result * g + f.coeffs[k]
        return result

    # coefficient-wise transforms -------------------------------------

    def hadamard(self, other: "Egf") -> "Egf":
        """Exponential Hadamard product: [z^n] = n! [z^n]A [z^n]B."""
        o = self._other(other)
        if o is None:
            return self.embed(other.variables).hadamard(other)
        n = min(self.order, o.order)
        return Egf._raw(
            self.spec,
            self.variables,
            [a * b * factorial(i) for i, (a, b) in enumerate(zip(self.coeffs[: n + 1], o.coeffs))],
            self.kind,
        )

    def robin(self, m: int) -> "Egf":
        """Multiply [z^n] by alpha^(-m C(n,2))."""
        alpha = self.spec.alpha
        return Egf._raw(
            self.spec,
            self.variables,
            [c * alpha ** (-m * comb(n, 2)) for n, c in enumerate(self.coeffs)],
            self.kind,
        )

    def scale_z(self, c) -> "Egf":
        """A(c z)."""
        if isinstance(c, (int, Fraction)):
            c = AlgNum(self.spec, {0: Fraction(c)})
        out = []
        p = self.spec.one()
        for coeff in self.coeffs:
            out.append(coeff * p)
            p = p * c
        return Egf._raw(self.spec, self.variables, out, self.kind)

    def scale_alpha_power(self, d) -> "Egf":
        return self.scale_z(alg_pow(self.spec, d))

    def derivative(self) -> "Egf":
        if self.order == 0:
            raise ValueError("derivative of an order-0 series has no coefficients")
        return Egf._raw(
            self.spec, self.variables, [self.coeffs[n] * n for n in range(1, self.order + 1)], self.kind
        )

    def antiderivative(self) -> "Egf":
        return Egf._raw(
            self.spec,
            self.variables,
            [self._zero()] + [c / (n + 1) for n, c in enumerate(self.coeffs)],
            self.kind,
        )

    # marks -------------------------------------------------------------

    def specialize(self, values: dict) -> "Egf":
        coeffs = [c.specialize(values) for c in self.coeffs]
        variables = tuple(v for v in self.variables if v not in values)
        return Egf._raw(self.spec, variables, coeffs, self.kind)

    def slice_mark(self, name: str, power: int) -> "Egf":
        """[name^power] of every coefficient; the variable set is kept."""
        return Egf._raw(self.spec, self.variables, [c.slice(name, power) for c in self.coeffs], self.kind)

    def __repr__(self):
        shown = ", ".join(str(c) for c in self.coeffs[:6])
        more = ", ..." if self.order > 5 else ""
        return f"Egf({self.kind.value}, order={self.order}: {shown}{more})"
