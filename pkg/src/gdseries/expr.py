"""Expression trees for series constructions.

A ``SeriesExpr`` describes how a series is built (atoms, sums, products,
analytic substitution, powers, coefficient reweighting by alpha^(-m C(n,2)),
z-scaling, derivative and integral).  The same tree is evaluated numerically
by ``Evaluator`` and walked structurally by the transfer operator.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .errors import NonzeroConstantTerm, UnknownGrade
from .field import AlgNum, FieldSpec, alg_pow
from .marked import MarkedScalar
from .series import Egf, binomial_series_coeff

__all__ = [
    "Analytic",
    "SeriesExpr",
    "GenAtom",
    "ConstSeries",
    "Scalar",
    "Sum",
    "Prod",
    "AnalyticComp",
    "Pow",
    "Robin",
    "ScaleZ",
    "Deriv",
    "Integ",
    "Hadamard",
    "Evaluator",
    "as_expr",
]


def _marks_of(value) -> set:
    if isinstance(value, MarkedScalar):
        return set(value.variables)
    return set()


# ---------------------------------------------------------------------------
# analytic outer functions


class Analytic:
    """An outer function F(x) = factor * base(x), analytic at 0.

    ``base`` is one of ``exp`` (e^(c x)), ``log1p`` (log(1+x)), ``neglog1m``
    (-log(1-x)), ``binom`` ((1+x)^r) or ``series`` (explicit coefficients).
    The factor and the parameter c may carry marks.
    """

    def __init__(self, base: str, param=None, factor=1, coeff_fn=None, name=None):
        self.base = base
        self.param = param
        self.factor = factor
        self.coeff_fn = coeff_fn
        self.name = name or base

    @classmethod
    def exp(cls, c=1):
        return cls("exp", c, name=f"exp({c}*x)" if c != 1 else "exp")

    @classmethod
    def log1p(cls):
        return cls("log1p", name="log(1+x)")

    @classmethod
    def neglog1m(cls):
        return cls("neglog1m", name="-log(1-x)")

    @classmethod
    def binom(cls, r):
        return cls("binom", Fraction(r), name=f"(1+x)^({r})")

    @classmethod
    def from_coefficients(cls, coeff_fn, name="F"):
        """F(x) = sum coeff_fn(k) x^k (ordinary coefficients)."""
        return cls("series", coeff_fn=coeff_fn, name=name)

    def scaled(self, c) -> "Analytic":
        return Analytic(self.base, self.param, self.factor * c, self.coeff_fn, self.name)

    def marks(self) -> set:
        return _marks_of(self.param) | _marks_of(self.factor)

    def coefficient(self, k: int):
        """Ordinary coefficient [x^k]F (scalar or MarkedScalar)."""
        if self.base == "exp":
            c = self.param
            out = (c ** k if k else 1) * Fraction(1, factorial(k))
        elif self.base == "log1p":
            out = Fraction((-1) ** (k + 1), k) if k else 0
        elif self.base == "neglog1m":
            out = Fraction(1, k) if k else 0
        elif self.base == "binom":
            out = binomial_series_coeff(self.param, k)
        else:
            out = self.coeff_fn(k)
        return out * self.factor

    def derivative(self) -> "Analytic":
        if self.base == "exp":
            return Analytic("exp", self.param, self.factor * self.param, name=f"d/dx {self.name}")
        if self.base == "log1p":
            return Analytic("binom", Fraction(-1), self.factor, name="(1+x)^-1")
        if self.base == "neglog1m":
            # 1/(1-x) = sum x^k
            return Analytic("series", factor=self.factor, coeff_fn=lambda k: 1, name="1/(1-x)")
        if self.base == "binom":
            r = self.param
            return Analytic("binom", r - 1, self.factor * r, name=f"d/dx {self.name}")
        fn = self.coeff_fn
        return Analytic("series", factor=self.factor, coeff_fn=lambda k: (k + 1) * fn(k + 1),
                        name=f"d/dx {self.name}")

    def apply(self, a: Egf) -> Egf:
        """F(A(z)); A(0) must be 0."""
        if a.coeffs[0]:
            raise NonzeroConstantTerm(f"inner series of {self.name} has constant term {a.coeffs[0]}")
        if self.base == "exp":
            out = (a * self.param).exp()
        elif self.base == "log1p":
            out = (a + 1).log()
        elif self.base == "neglog1m":
            out = -((1 - a).log())
        elif self.base == "binom":
            out = (a + 1).power(self.param)
        else:
            fn = self.coeff_fn
            coeffs = Egf(a.spec, [_embed_scalar(a, fn(k)) for k in range(a.order + 1)], variables=a.variables)
            out = coeffs.compose(a)
        if isinstance(self.factor, int) and self.factor == 1:
            return out
        return out * self.factor

    def __repr__(self):
        return f"Analytic({self.name})" if self.factor == 1 else f"Analytic({self.factor}*{self.name})"


def _embed_scalar(a: Egf, value):
    if isinstance(value, MarkedScalar):
        return value.embed(a.variables) if value.variables != a.variables else value
    return value


# ---------------------------------------------------------------------------
# expression nodes


def as_expr(x) -> "SeriesExpr":
    if isinstance(x, SeriesExpr):
        return x
    if isinstance(x, (int, Fraction, AlgNum, MarkedScalar)):
        return Scalar(x)
    raise TypeError(f"cannot use {type(x).__name__} in a series expression")


class SeriesExpr:
    """Base class; nodes are immutable and compared by identity."""

    children: tuple = ()
    _grade = None

    def __add__(self, other):
        return Sum((self, as_expr(other)))

    def __radd__(self, other):
        return Sum((as_expr(other), self))

    def __neg__(self):
        return Prod(Scalar(-1), self)

    def __sub__(self, other):
        return Sum((self, -as_expr(other)))

    def __rsub__(self, other):
        return Sum((as_expr(other), -self))

    def __mul__(self, other):
        return Prod(self, as_expr(other))

    def __rmul__(self, other):
        return Prod(as_expr(other), self)

    def __pow__(self, r):
        return Pow(self, r)

    def __truediv__(self, other):
        if isinstance(other, SeriesExpr):
            return Prod(self, Pow(other, -1))
        return Prod(self, Scalar(1 / Fraction(other) if isinstance(other, (int, Fraction)) else other.inverse()))

    def robin(self, m: int) -> "Robin":
        return Robin(self, m)

    def compose_into(self, f: Analytic) -> "AnalyticComp":
        return AnalyticComp(f, self)

    @property
    def grade(self) -> int:
        if self._grade is None:
            self._grade = self._infer_grade()
        return self._grade

    def _infer_grade(self) -> int:
        raise NotImplementedError

    def marks(self) -> set:
        out = set()
        for c in self.children:
            out |= c.marks()
        return out | self._own_marks()

    def _own_marks(self) -> set:
        return set()

    def walk(self):
        seen = set()
        stack = [self]
        while stack:
            node = stack.pop()
            if id(node) in seen:
                continue
            seen.add(id(node))
            yield node
            stack.extend(node.children)

    def __repr__(self):
        return self.describe()

    def describe(self) -> str:
        return type(self).__name__


class GenAtom(SeriesExpr):
    """sum alpha^(beta C(n,2)) z^n/n!: graphs (beta=1), digraphs (beta=2)."""

    def __init__(self, beta: int, name=None):
        if beta < 1:
            raise ValueError("generating atoms need beta >= 1")
        self.beta = beta
        self.name = name

    def _infer_grade(self):
        return self.beta

    def describe(self):
        return self.name or f"GenAtom({self.beta})"


class ConstSeries(SeriesExpr):
    """A subcritical series given by its coefficients [z^n] = fn(n)."""

    def __init__(self, fn, name="C"):
        self.fn = fn
        self.name = name

    def _infer_grade(self):
        return 0

    def describe(self):
        return self.name


class Scalar(SeriesExpr):
    def __init__(self, value):
        self.value = value

    def _infer_grade(self):
        return 0

    def _own_marks(self):
        return _marks_of(self.value)

    def describe(self):
        return str(self.value)


class Sum(SeriesExpr):
    def __init__(self, terms):
        self.children = tuple(as_expr(t) for t in terms)
        if not self.children:
            raise ValueError("empty sum")

    def _infer_grade(self):
        return max(c.grade for c in self.children)

    def describe(self):
        return "(" + " + ".join(c.describe() for c in self.children) + ")"


class Prod(SeriesExpr):
    def __init__(self, a, b):
        self.children = (as_expr(a), as_expr(b))

    def _infer_grade(self):
        return max(c.grade for c in self.children)

    def describe(self):
        return f"{self.children[0].describe()}*{self.children[1].describe()}"


class AnalyticComp(SeriesExpr):
    """F(A) with A(0) = 0."""

    def __init__(self, f: Analytic, a):
        self.f = f
        self.children = (as_expr(a),)

    def _infer_grade(self):
        return self.children[0].grade

    def _own_marks(self):
        return self.f.marks()

    def describe(self):
        return f"{self.f.name}[{self.children[0].describe()}]"


class Pow(SeriesExpr):
    def __init__(self, a, r):
        self.r = r if isinstance(r, int) else Fraction(r)
        self.children = (as_expr(a),)

    def _infer_grade(self):
        return self.children[0].grade

    def describe(self):
        return f"({self.children[0].describe()})^{self.r}"


class Robin(SeriesExpr):
    """Coefficient reweighting [z^n] -> alpha^(-m C(n,2)) [z^n]."""

    def __init__(self, a, m: int):
        self.m = int(m)
        self.children = (as_expr(a),)

    def _infer_grade(self):
        g = self.children[0].grade
        if g == 0 and self.m < 0:
            raise UnknownGrade(f"growth of {self.describe()} cannot be inferred from a subcritical input")
        return max(g - self.m, 0)

    def describe(self):
        return f"Robin^{self.m}({self.children[0].describe()})"


class ScaleZ(SeriesExpr):
    """A(c z); ``d`` records c = alpha^d when that holds for an integer d."""

    def __init__(self, a, c=None, *, d: int | None = None):
        if (c is None) == (d is None):
            raise ValueError("give exactly one of c or d")
        self.c = c
        self.d = d
        self.children = (as_expr(a),)

    def factor(self, spec: FieldSpec) -> AlgNum:
        if self.d is not None:
            return alg_pow(spec, self.d)
        c = self.c
        return c if isinstance(c, AlgNum) else AlgNum(spec, {0: Fraction(c)})

    def alpha_power(self, spec: FieldSpec) -> int | None:
        """Integer d with c = alpha^d, or None."""
        if self.d is not None:
            return self.d
        c = self.factor(spec)
        if not c.is_rational() or c.as_fraction() <= 0:
            return None
        q, d = c.as_fraction(), 0
        while q > 1 and d < 10_000:
            q /= spec.alpha
            d += 1
        while q < 1 and d > -10_000:
            q *= spec.alpha
            d -= 1
        return d if q == 1 else None

    def _infer_grade(self):
        return self.children[0].grade

    def describe(self):
        what = f"alpha^{self.d}" if self.d is not None else str(self.c)
        return f"{self.children[0].describe()}({what}*z)"


class Deriv(SeriesExpr):
    def __init__(self, a):
        self.children = (as_expr(a),)

    def _infer_grade(self):
        return self.children[0].grade

    def describe(self):
        return f"d/dz {self.children[0].describe()}"


class Integ(SeriesExpr):
    def __init__(self, a):
        self.children = (as_expr(a),)

    def _infer_grade(self):
        return self.children[0].grade

    def describe(self):
        return f"int {self.children[0].describe()}"


class Hadamard(SeriesExpr):
    """Exponential Hadamard product; evaluated only, never transferred."""

    def __init__(self, a, b):
        self.children = (as_expr(a), as_expr(b))

    def _infer_grade(self):
        return sum(c.grade for c in self.children)

    def describe(self):
        return f"({self.children[0].describe()} (.) {self.children[1].describe()})"


# ---------------------------------------------------------------------------
# evaluation


class Evaluator:
    """Evaluates expression nodes to truncated series, caching per node.

    All series share one variable tuple so marked and unmarked subterms mix.
    """

    def __init__(self, spec: FieldSpec, variables=()):
        self.spec = spec
        self.variables = tuple(variables)
        self._cache: dict[int, tuple[SeriesExpr, Egf]] = {}

    def __call__(self, node: SeriesExpr, order: int) -> Egf:
        hit = self._cache.get(id(node))
        if hit is not None and hit[1].order >= order:
            return hit[1].truncate(order) if hit[1].order > order else hit[1]
        value = self._evaluate(node, order)
        self._cache[id(node)] = (node, value)
        return value

    def scalar(self, value) -> MarkedScalar:
        if isinstance(value, MarkedScalar):
            return value.embed(self.variables)
        return MarkedScalar.constant(self.spec, value, self.variables)

    def _evaluate(self, node, order) -> Egf:
        spec, variables = self.spec, self.variables
        if isinstance(node, GenAtom):
            return Egf.gen_atom(spec, order, node.beta, variables)
        if isinstance(node, ConstSeries):
            return Egf.from_function(spec, order, lambda n: self.scalar(node.fn(n)), variables=variables)
        if isinstance(node, Scalar):
            return Egf.constant(spec, order, self.scalar(node.value), variables)
        if isinstance(node, Sum):
            out = self(node.children[0], order)
            for c in node.children[1:]:
                out = out + self(c, order)
            return out
        if isinstance(node, Prod):
            a, b = node.children
            if isinstance(a, Scalar):
                return self(b, order) * self.scalar(a.value)
            if isinstance(b, Scalar):
                return self(a, order) * self.scalar(b.value)
            return self(a, order) * self(b, order)
        if isinstance(node, AnalyticComp):
            return self.apply_analytic(node.f, self(node.children[0], order))
        if isinstance(node, Pow):
            return self(node.children[0], order).power(node.r)
        if isinstance(node, Robin):
            return self(node.children[0], order).robin(node.m)
        if isinstance(node, ScaleZ):
            return self(node.children[0], order).scale_z(node.factor(spec))
        if isinstance(node, Deriv):
            return self(node.children[0], order + 1).derivative()
        if isinstance(node, Integ):
            return self(node.children[0], max(order - 1, 0)).antiderivative().truncate(order)
        if isinstance(node, Hadamard):
            return self(node.children[0], order).hadamard(self(node.children[1], order))
        raise TypeError(f"unknown node {node!r}")

    def apply_analytic(self, f: Analytic, a: Egf) -> Egf:
        g = Analytic(f.base, self._lift(f.param), self._lift(f.factor), f.coeff_fn, f.name)
        if g.coeff_fn is not None:
            fn = f.coeff_fn
            g.coeff_fn = lambda k: self._lift(fn(k))
        return g.apply(a)

    def _lift(self, value):
        if isinstance(value, MarkedScalar):
            return value.embed(self.variables)
        return value
