"""Sparse polynomials in marking variables with AlgNum coefficients."""

from __future__ import annotations

from fractions import Fraction

from .errors import DivisionByZeroError, SpecMismatch, VariableSetMismatch
from .field import AlgNum, FieldSpec, format_fraction

__all__ = ["MarkedScalar"]


class MarkedScalar:
    """Polynomial in an ordered tuple of named marks, e.g. 3 + 2*u*t^2.

    Terms map exponent tuples (aligned with ``variables``) to nonzero AlgNums.
    A scalar with no variables combines with any variable set; otherwise the
    variable sets of the operands must agree.
    """

    __slots__ = ("spec", "variables", "_t")

    def __init__(self, spec: FieldSpec, terms=None, variables=()):
        self.spec = spec
        self.variables = tuple(variables)
        self._t = {}
        width = len(self.variables)
        for exps, v in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != width or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps} for variables {self.variables}")
            v = _to_alg(spec, v)
            if v:
                self._t[exps] = self._t[exps] + v if exps in self._t else v
        self._t = {k: v for k, v in self._t.items() if v}

    @classmethod
    def _raw(cls, spec, variables, t):
        obj = cls.__new__(cls)
        obj.spec = spec
        obj.variables = variables
        obj._t = t
        return obj

    @classmethod
    def constant(cls, spec: FieldSpec, value=1, variables=()) -> "MarkedScalar":
        v = _to_alg(spec, value)
        key = (0,) * len(variables)
        return cls._raw(spec, tuple(variables), {key: v} if v else {})

    @classmethod
    def var(cls, spec: FieldSpec, name: str, variables=None) -> "MarkedScalar":
        variables = tuple(variables) if variables is not None else (name,)
        if name not in variables:
            raise VariableSetMismatch(f"{name} not among {variables}")
        key = tuple(int(v == name) for v in variables)
        return cls._raw(spec, variables, {key: spec.one()})

    # structure ---------------------------------------------------------

    def terms(self):
        return sorted(self._t.items())

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def is_constant(self) -> bool:
        return all(not any(k) for k in self._t)

    def constant_term(self) -> AlgNum:
        return self._t.get((0,) * len(self.variables), self.spec.zero())

    def extract(self, expvec) -> AlgNum:
        """Coefficient of one monomial; ``expvec`` is a tuple or a {name: exponent} dict."""
        if isinstance(expvec, dict):
            unknown = set(expvec) - set(self.variables)
            if unknown:
                raise VariableSetMismatch(f"unknown marks {sorted(unknown)}")
            expvec = tuple(expvec.get(v, 0) for v in self.variables)
        expvec = tuple(expvec)
        if len(expvec) != len(self.variables):
            raise VariableSetMismatch(f"exponent vector {expvec} vs variables {self.variables}")
        return self._t.get(expvec, self.spec.zero())

    def slice(self, name: str, power: int) -> "MarkedScalar":
        """Coefficient of name^power, still over the same variable set (exponent zeroed)."""
        i = self.variables.index(name)
        out = {}
        for k, v in self._t.items():
            if k[i] == power:
                out[k[:i] + (0,) + k[i + 1:]] = v
        return MarkedScalar._raw(self.spec, self.variables, out)

    def degree(self, name: str) -> int:
        i = self.variables.index(name)
        return max((k[i] for k in self._t), default=0)

    def embed(self, variables) -> "MarkedScalar":
        """Re-express over a larger variable set."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        missing = [v for v in self.variables if v not in variables]
        if missing:
            raise VariableSetMismatch(f"cannot embed {self.variables} into {variables}")
        pos = [variables.index(v) for v in self.variables]
        out = {}
        for k, v in self._t.items():
            new = [0] * len(variables)
            for p, e in zip(pos, k):
                new[p] = e
            out[tuple(new)] = v
        return MarkedScalar._raw(self.spec, variables, out)

    def specialize(self, values: dict) -> "MarkedScalar":
        """Substitute scalar values for some marks; those marks are dropped."""
        keep = [i for i, v in enumerate(self.variables) if v not in values]
        subs = [(i, _to_alg(self.spec, values[v])) for i, v in enumerate(self.variables) if v in values]
        variables = tuple(self.variables[i] for i in keep)
        out = {}
        for k, v in self._t.items():
            for i, x in subs:
                v = v * x ** k[i]
            key = tuple(k[i] for i in keep)
            out[key] = out[key] + v if key in out else v
        return MarkedScalar._raw(self.spec, variables, {k: v for k, v in out.items() if v})

    # arithmetic --------------------------------------------------------

    def _align(self, other):
        if isinstance(other, (int, Fraction, AlgNum)):
            other = MarkedScalar.constant(self.spec, other, self.variables)
        elif not isinstance(other, MarkedScalar):
            return None, None
        if other.variables == self.variables:
            return self, other
        if not other.variables and other.is_constant():
            return self, other.embed(self.variables)
        if not self.variables and self.is_constant():
            return self.embed(other.variables), other
        raise VariableSetMismatch(f"{self.variables} vs {other.variables}")

    def __add__(self, other):
        a, b = self._align(other)
        if a is None:
            return NotImplemented
        t = dict(a._t)
        for k, v in b._t.items():
            if k in t:
                s = t[k] + v
                if s:
                    t[k] = s
                else:
                    del t[k]
            else:
                t[k] = v
        return MarkedScalar._raw(a.spec, a.variables, t)

    __radd__ = __add__

    def __neg__(self):
        return MarkedScalar._raw(self.spec, self.variables, {k: -v for k, v in self._t.items()})

    def __sub__(self, other):
        a, b = self._align(other)
        if a is None:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, AlgNum)):
            if not other:
                return MarkedScalar._raw(self.spec, self.variables, {})
            return MarkedScalar._raw(self.spec, self.variables, {k: v * other for k, v in self._t.items()})
        a, b = self._align(other)
        if a is None:
            return NotImplemented
        if len(b._t) == 1 and b.is_constant():
            return a * next(iter(b._t.values()))
        if len(a._t) == 1 and a.is_constant():
            return b * next(iter(a._t.values()))
        t = {}
        for k1, v1 in a._t.items():
            for k2, v2 in b._t.items():
                k = tuple(x + y for x, y in zip(k1, k2))
                w = v1 * v2
                t[k] = t[k] + w if k in t else w
        return MarkedScalar._raw(a.spec, a.variables, {k: v for k, v in t.items() if v})

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a scalar or by a constant MarkedScalar."""
        if isinstance(other, MarkedScalar):
            if not other.is_constant():
                raise ValueError("division by a non-constant polynomial")
            other = other.constant_term()
        if not other:
            raise DivisionByZeroError("division by zero")
        inv = 1 / Fraction(other) if isinstance(other, (int, Fraction)) else other.inverse()
        return self * inv

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = MarkedScalar.constant(self.spec, 1, self.variables)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, AlgNum)):
            other = MarkedScalar.constant(self.spec, other, self.variables)
        if not isinstance(other, MarkedScalar):
            return NotImplemented
        if other.variables != self.variables:
            try:
                a, b = self._align(other)
            except VariableSetMismatch:
                return False
            return a._t == b._t
        return self._t == other._t

    def __hash__(self):
        return hash((self.variables, frozenset(self._t.items())))

    def __str__(self):
        if not self._t:
            return "0"
        parts = []
        for k, v in sorted(self._t.items(), key=lambda kv: (sum(kv[0]), kv[0])):
            mono = "*".join(
                name if e == 1 else f"{name}^{e}" for name, e in zip(self.variables, k) if e
            )
            coeff = str(v)
            if not mono:
                parts.append(coeff)
            elif v == 1:
                parts.append(mono)
            elif v == -1:
                parts.append(f"-{mono}")
            elif v.is_rational():
                parts.append(f"{coeff}*{mono}")
            else:
                parts.append(f"({coeff})*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self):
        return f"MarkedScalar({self})"

    def to_json(self):
        """List of {"marks": {...}, "value": ...} with exact string values."""
        return [
            {"marks": dict(zip(self.variables, k)), "value": alg_to_text(v)}
            for k, v in self.terms()
        ]


def alg_to_text(v: AlgNum) -> str:
    return format_fraction(v.as_fraction()) if v.is_rational() else str(v)


def _to_alg(spec, v) -> AlgNum:
    if isinstance(v, AlgNum):
        if v.spec is not spec and v.spec != spec:
            raise SpecMismatch(f"{v.spec} vs {spec}")
        return v
    return AlgNum(spec, {0: Fraction(v)} if v else {})
