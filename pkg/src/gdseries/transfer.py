"""Structural computation of Coefficient GFs.

For a series A whose coefficients grow like alpha^(beta C(n,2)), the
Coefficient GF packages the complete expansion

    n![z^n]A  ~  alpha^(beta C(n,2)) * sum_m alpha^(-m n) sum_l n^(l falling) a_(m,l)

into the table a_(m,l).  ``CoeffGf`` stores that table directly; the
monomial normalization z^m / alpha^(C(m,2)/beta) is applied only when a
table is viewed as a bivariate series (see ``CoeffGf.monomial``).

Tables are computed by recursion over a ``SeriesExpr``:

* sums add, products use the Leibniz form, F(A) and A^r use the chain rule,
  all through the insertion operator ``_insert`` below;
* Robin(A, m) reuses the table of A at grade beta + m, retagged;
* subcritical or lower-grade subtrees contribute zero tables.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

from .errors import ExponentDenominatorMismatch, GradeTooHigh, UnsupportedTransfer
from .expr import (
    AnalyticComp,
    ConstSeries,
    Deriv,
    Evaluator,
    GenAtom,
    Hadamard,
    Integ,
    Pow,
    Prod,
    Robin,
    Scalar,
    ScaleZ,
    SeriesExpr,
    Sum,
)
from .field import AlgNum, FieldSpec, alg_pow, format_fraction
from .marked import MarkedScalar

__all__ = ["CoeffGf", "TransferEngine", "transfer", "basis_change", "infer_grade", "check_basis"]


def infer_grade(e: SeriesExpr) -> int:
    """Smallest beta the structural rules certify for ``e`` (0 = subcritical)."""
    return e.grade


def check_basis(spec: FieldSpec, beta: int):
    """The monomial view needs alpha^(1/beta) and alpha^((beta+1)/2) in the field."""
    for e in (Fraction(1, beta), Fraction(beta + 1, 2)):
        if not spec.supports(e):
            raise ExponentDenominatorMismatch(
                f"beta={beta} needs exponent {e}, not representable with D={spec.root_degree}"
            )


class CoeffGf:
    """Truncated table (m, l) -> a_(m,l) tagged with its basis (alpha, beta)."""

    def __init__(self, spec: FieldSpec, beta: int, table: dict, z_order: int, variables=()):
        self.spec = spec
        self.beta = beta
        self.z_order = z_order
        self.variables = tuple(variables)
        self.table = {
            (m, l): v for (m, l), v in table.items() if v and m <= z_order
        }

    @property
    def alpha(self) -> Fraction:
        return self.spec.alpha

    @property
    def m_min(self):
        """Smallest row with a nonzero entry; None for the zero table."""
        return min((m for m, _ in self.table), default=None)

    def is_zero(self) -> bool:
        return not self.table

    def entry(self, m: int, l: int) -> MarkedScalar:
        if m > self.z_order:
            raise ValueError(f"row {m} beyond the computed z-order {self.z_order}")
        v = self.table.get((m, l))
        return v if v is not None else MarkedScalar.constant(self.spec, 0, self.variables)

    def extract(self, m: int, l: int, marks=None) -> AlgNum:
        """The coefficient a_(m,l), optionally of a single mark monomial."""
        v = self.entry(m, l)
        if marks is None:
            if self.variables and not v.is_constant():
                raise ValueError("table carries marks; give a mark exponent vector")
            return v.constant_term()
        return v.extract(marks)

    def row(self, m: int) -> dict:
        return {l: v for (mm, l), v in sorted(self.table.items()) if mm == m}

    def rows(self):
        return sorted({m for m, _ in self.table})

    def monomial(self, m: int, l: int) -> MarkedScalar:
        """[z^m w^l] of the bivariate series, i.e. a_(m,l) / alpha^(C(m,2)/beta)."""
        return self.entry(m, l) * alg_pow(self.spec, Fraction(-(m * (m - 1) // 2), self.beta))

    def retag(self, beta2: int) -> "CoeffGf":
        return CoeffGf(self.spec, beta2, self.table, self.z_order, self.variables)

    def truncate(self, z_order: int) -> "CoeffGf":
        return CoeffGf(self.spec, self.beta, self.table, min(z_order, self.z_order), self.variables)

    def slice_mark(self, name: str, power: int) -> "CoeffGf":
        return CoeffGf(
            self.spec,
            self.beta,
            {k: v.slice(name, power) for k, v in self.table.items()},
            self.z_order,
            self.variables,
        )

    def specialize(self, values: dict) -> "CoeffGf":
        variables = tuple(v for v in self.variables if v not in values)
        return CoeffGf(
            self.spec, self.beta, {k: v.specialize(values) for k, v in self.table.items()}, self.z_order, variables
        )

    def embed(self, variables) -> "CoeffGf":
        return CoeffGf(self.spec, self.beta, {k: v.embed(variables) for k, v in self.table.items()},
                       self.z_order, variables)

    def __eq__(self, other):
        if not isinstance(other, CoeffGf):
            return NotImplemented
        if self.beta != other.beta or self.spec != other.spec:
            return False
        z = min(self.z_order, other.z_order)
        a = {k: v for k, v in self.table.items() if k[0] <= z}
        b = {k: v for k, v in other.table.items() if k[0] <= z}
        return a.keys() == b.keys() and all(a[k] == b[k] for k in a)

    __hash__ = None

    def difference(self, other: "CoeffGf") -> list:
        """Entries (m, l, mine, theirs) where two tables disagree, up to the common z-order."""
        z = min(self.z_order, other.z_order)
        keys = {k for k in self.table if k[0] <= z} | {k for k in other.table if k[0] <= z}
        out = []
        for m, l in sorted(keys):
            a, b = self.entry(m, l), other.entry(m, l)
            if a != b:
                out.append((m, l, a, b))
        return out

    def to_json(self) -> dict:
        entries = []
        for (m, l), v in sorted(self.table.items()):
            for item in v.to_json():
                entries.append({"m": m, "l": l, "marks": item["marks"], "value": item["value"]})
        return {
            "alpha": format_fraction(self.spec.alpha),
            "beta": self.beta,
            "m_min": self.m_min,
            "z_order": self.z_order,
            "variables": list(self.variables),
            "entries": entries,
        }

    def format_table(self, l_max: int | None = None) -> str:
        """Aligned text table, one row per m, columns l = 0..l_max."""
        rows = range(min(self.m_min or 0, 0), self.z_order + 1)
        if l_max is None:
            l_max = max((l for _, l in self.table), default=0)
        cells = [[str(self.entry(m, l)) for l in range(l_max + 1)] for m in rows]
        heads = [f"l={l}" for l in range(l_max + 1)]
        width = [max(len(h), *(len(r[i]) for r in cells)) for i, h in enumerate(heads)]
        lines = ["m\\l | " + "  ".join(h.rjust(w) for h, w in zip(heads, width))]
        lines.append("-" * len(lines[0]))
        for m, r in zip(rows, cells):
            lines.append(f"{m:>3} | " + "  ".join(c.rjust(w) for c, w in zip(r, width)))
        return "\n".join(lines)

    def __repr__(self):
        return f"CoeffGf(alpha={format_fraction(self.alpha)}, beta={self.beta}, z_order={self.z_order}, {len(self.table)} entries)"


def _add_into(acc: dict, key, value):
    if key in acc:
        s = acc[key] + value
        if s:
            acc[key] = s
        else:
            del acc[key]
    elif value:
        acc[key] = value


class TransferEngine:
    """Recursive Coefficient GF computation with memoized subresults."""

    def __init__(self, spec: FieldSpec, variables=(), evaluator: Evaluator | None = None):
        self.spec = spec
        self.variables = tuple(variables)
        self.ev = evaluator or Evaluator(spec, self.variables)
        self._memo: dict = {}
        self._aux: dict = {}

    def transfer(self, e: SeriesExpr, beta: int, z_order: int) -> CoeffGf:
        check_basis(self.spec, beta)
        return CoeffGf(self.spec, beta, self.table(e, beta, z_order), z_order, self.variables)

    # -- recursion ------------------------------------------------------

    def table(self, node: SeriesExpr, beta: int, zmax: int) -> dict:
        g = node.grade
        if g > beta:
            raise GradeTooHigh(f"{node.describe()} has growth grade {g} > {beta}")
        if g < beta:
            return {}
        key = (id(node), beta)
        hit = self._memo.get(key)
        if hit is not None and hit[1] >= zmax:
            return {k: v for k, v in hit[2].items() if k[0] <= zmax}
        out = self._rule(node, beta, zmax)
        self._memo[key] = (node, zmax, out)
        return out

    def _rule(self, node, beta, zmax) -> dict:
        if isinstance(node, GenAtom):
            return {(0, 0): self.ev.scalar(1)} if zmax >= 0 else {}
        if isinstance(node, Sum):
            acc: dict = {}
            for c in node.children:
                for k, v in self.table(c, beta, zmax).items():
                    _add_into(acc, k, v)
            return acc
        if isinstance(node, Prod):
            a, b = node.children
            acc = {}
            for this, other in ((a, b), (b, a)):
                if this.grade < beta:
                    continue
                t = self.table(this, beta, zmax)
                for k, v in self._insert(lambda n, o=other: self.ev(o, n), t, beta, zmax).items():
                    _add_into(acc, k, v)
            return acc
        if isinstance(node, AnalyticComp):
            a = node.children[0]
            fprime = node.f.derivative()
            t = self.table(a, beta, zmax)
            return self._insert(lambda n: self.ev.apply_analytic(fprime, self.ev(a, n)), t, beta, zmax)
        if isinstance(node, Pow):
            a = node.children[0]
            r = node.r
            if r == 0:
                return {}
            t = self.table(a, beta, zmax)
            return self._insert(lambda n: self.ev(a, n).power(r - 1) * r, t, beta, zmax)
        if isinstance(node, Robin):
            return self.table(node.children[0], beta + node.m, zmax)
        if isinstance(node, ScaleZ):
            d = node.alpha_power(self.spec)
            if d is None:
                raise UnsupportedTransfer(
                    f"{node.describe()}: only scaling by an integer power of alpha is transferable"
                )
            t = self.table(node.children[0], beta, zmax + d)
            return {(m - d, l): v for (m, l), v in t.items()}
        if isinstance(node, Deriv):
            t = self.table(node.children[0], beta, zmax + beta)
            acc = {}
            for (m, l), v in t.items():
                scale = self.spec.alpha ** (-m)
                _add_into(acc, (m - beta, l), v * scale)
                if l > 0:
                    _add_into(acc, (m - beta, l - 1), v * (scale * l))
            return acc
        if isinstance(node, Integ):
            t = self.table(node.children[0], beta, zmax - beta)
            acc = {}
            for (m, l), v in t.items():
                scale = self.spec.alpha ** (m + beta)
                for k in range(l + 1):
                    c = Fraction((-1) ** (l - k) * factorial(l), factorial(k)) * scale
                    _add_into(acc, (m + beta, k), v * c)
            return acc
        if isinstance(node, Hadamard):
            raise UnsupportedTransfer("general Hadamard products have no transfer rule; route them through Robin")
        if isinstance(node, (Scalar, ConstSeries)):
            return {}
        raise UnsupportedTransfer(f"no transfer rule for {node.describe()}")

    def _insert(self, series_of, t: dict, beta: int, zmax: int) -> dict:
        """Table of H(alpha^((beta+1)/2) z^beta w) * T in coefficient form.

        out[m, l] = sum_k [z^k]H alpha^(k m - beta C(k,2)) t[m - beta k, l - k]
        """
        if not t:
            return {}
        lo = min(m for m, _ in t)
        kmax = (zmax - lo) // beta
        if kmax < 0:
            return {}
        h = series_of(kmax)
        alpha = self.spec.alpha
        acc: dict = {}
        for k in range(kmax + 1):
            hk = h.coeffs[k]
            if not hk:
                continue
            for (m0, l0), v in t.items():
                m = m0 + beta * k
                if m > zmax:
                    continue
                _add_into(acc, (m, l0 + k), hk * v * alpha ** (k * m - beta * comb(k, 2)))
        return acc


def transfer(e: SeriesExpr, beta: int, z_order: int, spec: FieldSpec | None = None,
             variables=None, engine: TransferEngine | None = None) -> CoeffGf:
    """Coefficient GF of ``e`` in basis (alpha, beta), rows m <= z_order."""
    if engine is None:
        spec = spec or FieldSpec()
        variables = tuple(sorted(e.marks())) if variables is None else tuple(variables)
        engine = TransferEngine(spec, variables)
    return engine.transfer(e, beta, z_order)


def basis_change(c: CoeffGf, beta2: int) -> CoeffGf:
    """Same table read in basis beta2 (monomial weights alpha^(-C(m,2)/beta2))."""
    check_basis(c.spec, beta2)
    return c.retag(beta2)

