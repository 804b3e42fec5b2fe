"""Closed-form Coefficient GFs, evaluated as bivariate series in (z, w).

Each builder assembles a known closed form (for example
SSD(2^(3/2) z^2 w) * B[1->2]((1 - IT(2zw))^2) for strongly connected
digraphs) from univariate series by substitution, multiplication and basis
change, working in the monomial basis [z^m w^l].  Comparing the result with
the structural transfer gives a second, independent route to each table.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .expr import Evaluator, SeriesExpr
from .families import Catalog, build_family, catalog
from .field import AlgNum, FieldSpec, alg_pow
from .marked import MarkedScalar
from .series import Egf
from .transfer import CoeffGf

__all__ = ["BiSeries", "CLOSED_FORMS", "closed_form", "compare_closed_form", "scd_closed_form"]


class BiSeries:
    """Truncated series sum c_(m,l) z^m w^l with marked coefficients."""

    def __init__(self, spec: FieldSpec, variables, z_order: int, terms=None):
        self.spec = spec
        self.variables = tuple(variables)
        self.z_order = z_order
        self.terms = {k: v for k, v in (terms or {}).items() if v and k[0] <= z_order}

    @classmethod
    def one(cls, spec, variables, z_order, value=1):
        return cls(spec, variables, z_order, {(0, 0): MarkedScalar.constant(spec, value, variables)})

    @classmethod
    def monomial(cls, spec, variables, z_order, m, l=0, value=1):
        return cls(spec, variables, z_order, {(m, l): MarkedScalar.constant(spec, value, variables)})

    @classmethod
    def substitute(cls, h: Egf, coef, zpow: int, z_order: int, variables=None) -> "BiSeries":
        """h(coef * z^zpow * w)."""
        variables = h.variables if variables is None else tuple(variables)
        spec = h.spec
        coef = coef if isinstance(coef, AlgNum) else AlgNum(spec, {0: Fraction(coef)})
        terms = {}
        p = spec.one()
        for k in range(z_order // zpow + 1 if zpow else 1):
            if k > h.order:
                raise ValueError(f"series of order {h.order} too short for z-order {z_order}")
            terms[(zpow * k, k)] = h.coeffs[k].embed(variables) * p
            p = p * coef
        return cls(spec, variables, z_order, terms)

    @classmethod
    def from_coeffgf(cls, c: CoeffGf) -> "BiSeries":
        return cls(c.spec, c.variables, c.z_order, {(m, l): c.monomial(m, l) for (m, l) in c.table})

    def to_coeffgf(self, beta: int) -> CoeffGf:
        table = {
            (m, l): v * alg_pow(self.spec, Fraction(m * (m - 1) // 2, beta)) for (m, l), v in self.terms.items()
        }
        return CoeffGf(self.spec, beta, table, self.z_order, self.variables)

    def change_basis(self, beta1: int, beta2: int) -> "BiSeries":
        """B[beta1 -> beta2]: [z^m] times alpha^(C(m,2)(1/beta1 - 1/beta2))."""
        e = Fraction(1, beta1) - Fraction(1, beta2)
        return BiSeries(
            self.spec,
            self.variables,
            self.z_order,
            {(m, l): v * alg_pow(self.spec, e * (m * (m - 1) // 2)) for (m, l), v in self.terms.items()},
        )

    def __add__(self, other):
        if not isinstance(other, BiSeries):
            other = BiSeries.one(self.spec, self.variables, self.z_order, other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms[k] + v if k in terms else v
        return BiSeries(self.spec, self.variables, min(self.z_order, other.z_order), terms)

    __radd__ = __add__

    def __neg__(self):
        return BiSeries(self.spec, self.variables, self.z_order, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, BiSeries):
            return BiSeries(self.spec, self.variables, self.z_order, {k: v * other for k, v in self.terms.items()})
        z = min(self.z_order, other.z_order)
        terms: dict = {}
        for (m1, l1), a in self.terms.items():
            for (m2, l2), b in other.terms.items():
                m = m1 + m2
                if m > z:
                    continue
                k = (m, l1 + l2)
                p = a * b
                terms[k] = terms[k] + p if k in terms else p
        return BiSeries(self.spec, self.variables, z, terms)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, BiSeries):
            return NotImplemented
        z = min(self.z_order, other.z_order)
        a = {k: v for k, v in self.terms.items() if k[0] <= z}
        b = {k: v for k, v in other.terms.items() if k[0] <= z}
        return a.keys() == b.keys() and all(a[k] == b[k] for k in a)

    __hash__ = None


# ---------------------------------------------------------------------------
# builders


class _Ctx:
    def __init__(self, cat: Catalog, variables, z_order):
        self.cat = cat
        self.spec = cat.spec
        self.variables = tuple(variables)
        self.z = z_order
        self.ev = Evaluator(cat.spec, self.variables)

    def series(self, e: SeriesExpr, order=None) -> Egf:
        return self.ev(e, self.z if order is None else order)

    def sub(self, e, coef, zpow=1) -> BiSeries:
        """e(coef z^zpow w) as a bivariate series."""
        return BiSeries.substitute(self.series(e, self.z // zpow), coef, zpow, self.z, self.variables)

    def pow2(self, e) -> AlgNum:
        return alg_pow(self.spec, e)

    def mark(self, name):
        return MarkedScalar.var(self.spec, name, self.variables)

    def one_minus_it_sq_b2(self):
        """B[1->2]((1 - IT(2zw))^2)"""
        x = 1 - self.sub(self.cat.IT, 2)
        return (x * x).change_basis(1, 2)

    def q_ssd(self, c) -> BiSeries:
        """Q2 SSD(z, w; c) = c SSD(2^(3/2) z^2 w; 1 + c) B[1->2](1 - IT(2zw))^2"""
        return self.sub(self.cat.ssd_marked(1 + c), self.pow2(Fraction(3, 2)), 2) * self.one_minus_it_sq_b2() * c


def _cg(x: _Ctx):
    return 1 - x.sub(x.cat.IT, 2)


def _it(x: _Ctx):
    y = 1 - x.sub(x.cat.IT, 2)
    return y * y


def _scd(x: _Ctx):
    return x.sub(x.cat.SSD, x.pow2(Fraction(3, 2)), 2) * x.one_minus_it_sq_b2()


def _ssd_t(x: _Ctx):
    return x.q_ssd(x.mark("t"))


def _sat(x: _Ctx):
    return x.sub(x.cat.SAT, 2) * (1 - x.sub(x.cat.IT, 2))


def _g_t(x: _Ctx):
    return x.sub(x.cat.G_t, 2) * (1 - x.sub(x.cat.IT, 2)) * x.mark("t")


def _t_t(x: _Ctx):
    tt = x.sub(x.cat.T_t, 2)
    y = 1 - x.sub(x.cat.IT, 2)
    return tt * tt * y * y * x.mark("t")


def _dhat_t(x: _Ctx):
    d = x.sub(x.cat.DHAT_t, 2)
    return -(d * d) * x.q_ssd(-x.mark("t")).change_basis(2, 1)


def _dhat_st(x: _Ctx):
    s, t = x.mark("s"), x.mark("t")
    return x.sub(x.cat.DHAT_t, 2) * (
        x.q_ssd((s - 1) * t).change_basis(2, 1)
        - x.sub(x.cat.DHAT_st, 2) * x.q_ssd(-t).change_basis(2, 1)
    )


def _dhat_marked(x: _Ctx, mark: str):
    """D-hat(z; mark, t): SCC count t, source-like count marked by ``mark``."""
    t = x.mark("t")
    m = x.mark(mark)
    from .expr import Robin

    return Robin(x.cat.ssd_marked((m - 1) * t), 1) * x.cat.DHAT_t


def _d_uvyt(x: _Ctx, d23_sign=-1):
    t, u, v, y = (x.mark(n) for n in ("t", "u", "v", "y"))
    c = (y - u - v + 1) * t
    r32 = x.pow2(Fraction(3, 2))
    d1 = x.sub(x.cat.D_uvyt, r32, 2) * _scd(x) * c
    d20 = x.sub(x.cat.ssd_marked(c), r32, 2)
    du = x.sub(_dhat_marked(x, "u"), 2)
    dv = x.sub(_dhat_marked(x, "v"), 2)
    d21 = du * x.q_ssd((v - 1) * t).change_basis(2, 1)
    d22 = dv * x.q_ssd((u - 1) * t).change_basis(2, 1)
    d23 = du * dv * x.q_ssd(-t).change_basis(2, 1) * d23_sign
    return d1 + d20 * (d21 + d22 + d23).change_basis(1, 2)


def _cscc(x: _Ctx):
    half = Fraction(1, 2)
    inner = x.series(x.cat.SCD, x.z // 4).scale_z(x.pow2(Fraction(7, 2))) * half - x.series(
        x.cat.CSCC, x.z // 4
    ).scale_z(x.pow2(Fraction(5, 2)))
    e = BiSeries.substitute(inner.exp(), 1, 4, x.z, x.variables)
    return e * (1 - x.sub(x.cat.IT, x.pow2(Fraction(5, 2)), 2)).change_basis(2, 4)


def _cnf_st(x: _Ctx):
    s, t = x.mark("s"), x.mark("t")
    half = Fraction(1, 2)
    k = x.z // 4
    arg = x.series(x.cat.CSCC, k).scale_z(x.pow2(Fraction(3, 2))) * (s - 1) + x.series(x.cat.SCD, k).scale_z(
        x.pow2(Fraction(5, 2))
    ) * ((1 - t) * half)
    e = BiSeries.substitute(arg.exp(), 1, 4, x.z, x.variables)
    zfac = BiSeries.monomial(x.spec, x.variables, x.z, 1)
    inner = zfac * e * (1 - x.sub(x.cat.IT, 4, 2)).change_basis(2, 4)
    return x.sub(x.cat.DHAT_t, x.pow2(Fraction(3, 2)), 2) * inner.change_basis(4, 2) * s


def _erdos_renyi_cg(x: _Ctx):
    """Q CG = 1/G(alpha z w) = exp(-CG(alpha z w))."""
    g = x.series(x.cat.CG)
    return BiSeries.substitute((-g).exp(), x.spec.alpha, 1, x.z, x.variables)


# family name -> (beta, builder, description)
CLOSED_FORMS = {
    "cg": (1, _cg, "1 - IT(2zw)"),
    "it": (1, _it, "(1 - IT(2zw))^2"),
    "scd": (2, _scd, "SSD(2^(3/2) z^2 w) * B[1->2](1 - IT(2zw))^2"),
    "ssd_t": (2, _ssd_t, "t * SSD(2^(3/2) z^2 w; 1+t) * B[1->2](1 - IT(2zw))^2"),
    "sat": (1, _sat, "SAT(2zw) * (1 - IT(2zw))"),
    "g_t": (1, _g_t, "t * G(2zw; t) * (1 - IT(2zw))"),
    "t_t": (1, _t_t, "t * T(2zw; t)^2 * (1 - IT(2zw))^2"),
    "dhat_t": (1, _dhat_t, "-D(2zw; t)^2 * B[2->1] Q SSD(z, w; -t)"),
    "dhat_st": (1, _dhat_st, "D(2zw;t) [B[2->1] Q SSD((s-1)t) - D(2zw;s,t) B[2->1] Q SSD(-t)]"),
    "d_uvyt": (2, _d_uvyt, "D1 + D20 * B[1->2](D21 + D22 - D23-product)"),
    "cscc": (4, _cscc, "exp(SCD(2^(7/2) z^4 w)/2 - CSCC(2^(5/2) z^4 w)) * B[2->4](1 - IT(2^(5/2) z^2 w))"),
    "cnf_st": (2, _cnf_st, "s D(2^(3/2) z^2 w; t) B[4->2][z exp(...) B[2->4](1 - IT(4 z^2 w))]"),
}


def closed_form(name: str, z_order: int, spec: FieldSpec | None = None, **options) -> CoeffGf:
    """The closed-form Coefficient GF of a catalog family, as a table."""
    spec = spec or FieldSpec()
    fam = build_family(name, spec)
    if name == "cg" and spec.alpha != 2:
        beta, builder = 1, _erdos_renyi_cg
    else:
        beta, builder, _ = CLOSED_FORMS[name]
    ctx = _Ctx(catalog(spec), fam.variables, z_order)
    return builder(ctx, **options).to_coeffgf(beta)


def compare_closed_form(name: str, z_order: int, spec: FieldSpec | None = None, **options) -> list:
    """Disagreements between the closed form and the structural transfer (empty when equal)."""
    spec = spec or FieldSpec()
    fam = build_family(name, spec)
    expected = closed_form(name, z_order, spec, **options)
    got = fam.transfer(expected.beta, z_order)
    return got.difference(expected)


# ---------------------------------------------------------------------------
# strongly connected digraphs, entry by entry


def scd_closed_form(m: int, l: int, spec: FieldSpec | None = None) -> Fraction:
    """2^(m(m+1)/2 + l(l-m)) ssd_(m-l)/(m-l)! * b_(2l-m)/(2l-m)!, b_k = [k=0] - 2 it_k + it2_k."""
    if not (m + 1) // 2 <= l <= m:
        return Fraction(0)
    k = 2 * l - m
    ssd = build_family("ssd", spec).integer_counts(m)
    it = build_family("it", spec).integer_counts(max(k, 1))
    it2 = build_family("t_t", spec).evaluate(max(k, 1)).slice_mark("t", 2).specialize({"t": 1}).integer_counts()
    b = int(k == 0) - 2 * it[k] + it2[k]
    return Fraction(2 ** (m * (m + 1) // 2 + l * (l - m)) * ssd[m - l] * b, factorial(m - l) * factorial(k))
