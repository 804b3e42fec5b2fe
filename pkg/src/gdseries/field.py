"""Exact arithmetic in Q(alpha^(1/D)).

Elements are stored as sparse vectors over the basis 1, t, ..., t^(D-1) with
t^D = alpha.  Every power alpha^e with e in (1/D)Z is a single basis vector
times a rational, so products of such powers stay sparse.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import DivisionByZeroError, ExponentDenominatorMismatch, SpecMismatch

__all__ = ["FieldSpec", "AlgNum", "alg_pow", "parse_rational", "format_fraction"]


def parse_rational(text) -> Fraction:
    """Parse "p/q", "p" or a number into a Fraction; floats are rejected."""
    if isinstance(text, float):
        raise TypeError("floats are not exact; pass a string or Fraction")
    return Fraction(text)


def format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class FieldSpec:
    alpha: Fraction = Fraction(2)
    root_degree: int = 24

    def __post_init__(self):
        alpha = self.alpha
        if isinstance(alpha, float) or not isinstance(alpha, (Rational, str)):
            raise TypeError(f"alpha must be rational, got {alpha!r}")
        object.__setattr__(self, "alpha", Fraction(alpha))
        if self.alpha <= 1:
            raise ValueError(f"alpha must exceed 1, got {self.alpha}")
        if not isinstance(self.root_degree, int) or self.root_degree < 1:
            raise ValueError(f"root degree must be a positive integer, got {self.root_degree!r}")

    def supports(self, e) -> bool:
        """True when alpha^e is representable, i.e. denom(e) divides D."""
        return self.root_degree % Fraction(e).denominator == 0

    def one(self) -> "AlgNum":
        return AlgNum(self, {0: Fraction(1)})

    def zero(self) -> "AlgNum":
        return AlgNum(self, {})

    def __str__(self):
        return f"alpha={format_fraction(self.alpha)}, D={self.root_degree}"


def _coerce(spec: FieldSpec, x) -> "AlgNum":
    if isinstance(x, AlgNum):
        if x.spec is not spec and x.spec != spec:
            raise SpecMismatch(f"{x.spec} vs {spec}")
        return x
    if isinstance(x, (int, Fraction)):
        return AlgNum(spec, {0: Fraction(x)} if x else {})
    return NotImplemented


class AlgNum:
    """An element sum_i c_i t^i of Q[t]/(t^D - alpha)."""

    __slots__ = ("spec", "_c")

    def __init__(self, spec: FieldSpec, comps=None):
        self.spec = spec
        if comps is None:
            self._c = {}
        elif isinstance(comps, dict):
            self._c = {i: Fraction(v) for i, v in comps.items() if v}
        else:
            comps = list(comps)
            if len(comps) != spec.root_degree:
                raise ValueError(f"expected {spec.root_degree} components, got {len(comps)}")
            self._c = {i: Fraction(v) for i, v in enumerate(comps) if v}
        for i in self._c:
            if not 0 <= i < spec.root_degree:
                raise ValueError(f"component index {i} out of range")

    @classmethod
    def _raw(cls, spec, c):
        obj = cls.__new__(cls)
        obj.spec = spec
        obj._c = c
        return obj

    @property
    def comps(self) -> tuple:
        return tuple(self._c.get(i, Fraction(0)) for i in range(self.spec.root_degree))

    def items(self):
        return sorted(self._c.items())

    def is_rational(self) -> bool:
        return not self._c or (len(self._c) == 1 and 0 in self._c)

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self._c.get(0, Fraction(0))

    # arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = _coerce(self.spec, other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for i, v in other._c.items():
            s = c.get(i, 0) + v
            if s:
                c[i] = s
            else:
                c.pop(i, None)
        return AlgNum._raw(self.spec, c)

    __radd__ = __add__

    def __neg__(self):
        return AlgNum._raw(self.spec, {i: -v for i, v in self._c.items()})

    def __sub__(self, other):
        other = _coerce(self.spec, other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return AlgNum._raw(self.spec, {})
            return AlgNum._raw(self.spec, {i: v * other for i, v in self._c.items()})
        other = _coerce(self.spec, other)
        if other is NotImplemented:
            return other
        a, b = self._c, other._c
        if not a or not b:
            return AlgNum._raw(self.spec, {})
        if len(b) == 1 and 0 in b:
            return self * b[0]
        if len(a) == 1 and 0 in a:
            return other * a[0]
        d = self.spec.root_degree
        alpha = self.spec.alpha
        c: dict[int, Fraction] = {}
        for i, u in a.items():
            for j, v in b.items():
                k = i + j
                w = u * v
                if k >= d:
                    k -= d
                    w *= alpha
                c[k] = c.get(k, 0) + w
        return AlgNum._raw(self.spec, {k: v for k, v in c.items() if v})

    __rmul__ = __mul__

    def inverse(self) -> "AlgNum":
        if not self._c:
            raise DivisionByZeroError("inverse of zero")
        if self.is_rational():
            return AlgNum._raw(self.spec, {0: 1 / self._c[0]})
        if len(self._c) == 1:
            (i, v), = self._c.items()
            # (v t^i)^{-1} = t^(D-i) / (v alpha)
            return AlgNum._raw(self.spec, {self.spec.root_degree - i: 1 / (v * self.spec.alpha)})
        return self._solve_inverse()

    def _solve_inverse(self):
        d = self.spec.root_degree
        t = AlgNum._raw(self.spec, {1 % d: Fraction(1)}) if d > 1 else None
        cols = []
        col = self
        for _ in range(d):
            cols.append(col.comps)
            if t is not None:
                col = col * t
        # rows: equation for component r; augmented with e_0
        rows = [[cols[j][r] for j in range(d)] + [Fraction(int(r == 0))] for r in range(d)]
        for p in range(d):
            piv = next(r for r in range(p, d) if rows[r][p])
            rows[p], rows[piv] = rows[piv], rows[p]
            inv = 1 / rows[p][p]
            rows[p] = [x * inv for x in rows[p]]
            for r in range(d):
                if r != p and rows[r][p]:
                    f = rows[r][p]
                    rows[r] = [x - f * y for x, y in zip(rows[r], rows[p])]
        return AlgNum(self.spec, [rows[r][d] for r in range(d)])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise DivisionByZeroError("division by zero")
            return self * (1 / Fraction(other))
        other = _coerce(self.spec, other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce(self.spec, other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = self.spec.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # comparison, hashing, display --------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self._c.get(0, 0) == other
        if isinstance(other, AlgNum):
            return self.spec == other.spec and self._c == other._c
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self._c.get(0, Fraction(0)))
        return hash((self.spec, frozenset(self._c.items())))

    def __bool__(self):
        return bool(self._c)

    def to_float(self) -> float:
        d = self.spec.root_degree
        a = float(self.spec.alpha)
        return sum(float(v) * a ** (i / d) for i, v in self._c.items())

    def to_json(self) -> dict:
        return {
            "num_den_pairs": [[c.numerator, c.denominator] for c in self.comps],
            "alpha": format_fraction(self.spec.alpha),
            "D": self.spec.root_degree,
        }

    @classmethod
    def from_json(cls, data: dict) -> "AlgNum":
        spec = FieldSpec(Fraction(data["alpha"]), int(data["D"]))
        return cls(spec, [Fraction(n, d) for n, d in data["num_den_pairs"]])

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        base = format_fraction(self.spec.alpha)
        if self.spec.alpha.denominator != 1:
            base = f"({base})"
        for i, v in sorted(self._c.items()):
            if i == 0:
                parts.append(format_fraction(v))
                continue
            e = Fraction(i, self.spec.root_degree)
            power = f"{base}^({format_fraction(e)})"
            parts.append(power if v == 1 else f"-{power}" if v == -1 else f"{format_fraction(v)}*{power}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self):
        return f"AlgNum({self})"


def alg_pow(spec: FieldSpec, e) -> AlgNum:
    """alpha^e as a field element; e must have denominator dividing D."""
    e = Fraction(e)
    k = e * spec.root_degree
    if k.denominator != 1:
        raise ExponentDenominatorMismatch(
            f"exponent {e} needs a root degree divisible by {e.denominator}, have D={spec.root_degree}"
        )
    q, r = divmod(k.numerator, spec.root_degree)
    return AlgNum._raw(spec, {r: spec.alpha ** q})
