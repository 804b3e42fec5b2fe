"""Catalog of graph, digraph and 2-SAT families as series expressions.

Every family is a ``SeriesExpr`` over the generating atoms

    G = sum alpha^C(n,2) z^n/n!      (graphs; also tournaments)
    D = sum alpha^(2 C(n,2)) z^n/n!  (digraphs)

so the same object can be evaluated to counts or handed to the transfer
operator.  Marking variables are named polynomials: t counts strongly
connected components (or graph components / tournament parts), s marks
source-like or contradictory components, u, v, y mark purely source-like,
purely sink-like and isolated components.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from .errors import RecurrenceMismatch, UnknownFamily, UnsupportedAlpha
from .expr import Analytic, AnalyticComp, ConstSeries, Evaluator, GenAtom, Pow, Robin, ScaleZ, SeriesExpr
from .field import FieldSpec
from .marked import MarkedScalar
from .series import Egf, Kind
from .transfer import CoeffGf, TransferEngine

__all__ = [
    "FamilySpec",
    "build_family",
    "family_names",
    "family_counts",
    "Catalog",
    "wright_recurrence_eta",
    "dag_to2_direct",
]

FAMILY_NAMES = (
    "g", "t", "d", "cg", "it", "dag", "dag2", "scd", "ssd", "ssd_t",
    "dhat_t", "dhat_st", "d_uvyt", "sat", "cscc", "cnf_st", "g_t", "t_t",
)
SAT_FAMILIES = {"sat", "cscc", "cnf_st"}


def family_names() -> tuple:
    return FAMILY_NAMES


@dataclass(eq=False)
class FamilySpec:
    name: str
    formula: SeriesExpr
    kind: Kind
    grade: int
    spec: FieldSpec
    variables: tuple
    description: str
    bindings: dict = field(default_factory=dict)
    _engine: TransferEngine | None = field(default=None, repr=False)

    @property
    def engine(self) -> TransferEngine:
        if self._engine is None:
            self._engine = TransferEngine(self.spec, self.variables, Evaluator(self.spec, self.variables))
        return self._engine

    def evaluate(self, order: int) -> Egf:
        out = self.engine.ev(self.formula, order).with_kind(self.kind)
        return out.specialize(self.bindings) if self.bindings else out

    def counts(self, n_max: int) -> list:
        return self.evaluate(n_max).counts(n_max)

    def integer_counts(self, n_max: int) -> list[int]:
        return self.evaluate(n_max).integer_counts(n_max)

    def transfer(self, beta: int | None = None, z_order: int = 6) -> CoeffGf:
        beta = self.grade if beta is None else beta
        c = self.engine.transfer(self.formula, beta, z_order)
        return c.specialize(self.bindings) if self.bindings else c

    @property
    def marks(self) -> tuple:
        return tuple(v for v in self.variables if v not in self.bindings)


class Catalog:
    """Builds the shared sub-expressions of all families for one field.

    Families built from one catalog share nodes (SCD inside SSD(z;t), and so
    on), so evaluations and transfers are cached across them.
    """

    def __init__(self, spec: FieldSpec | None = None):
        self.spec = spec or FieldSpec()
        s = self.spec
        self.t = MarkedScalar.var(s, "t")
        st = ("s", "t")
        s_, t_ = (MarkedScalar.var(s, x, st) for x in st)
        tuvy = ("t", "u", "v", "y")
        t4, u4, v4, y4 = (MarkedScalar.var(s, x, tuvy) for x in tuvy)

        self.G = GenAtom(1, "G")
        self.T = self.G
        self.D = GenAtom(2, "D")
        self.CG = AnalyticComp(Analytic.log1p(), self.G - 1)
        self.IT = 1 - Pow(self.T, -1)
        self.IT_hat = Robin(self.IT, -1)
        self.SSD = Pow(1 - self.IT_hat, -1)
        self.SCD = AnalyticComp(Analytic.neglog1m(), self.IT_hat)
        self.exp_neg_z = ConstSeries(lambda n: Fraction((-1) ** n, factorial(n)), "exp(-z)")
        self.DAG = Pow(Robin(self.exp_neg_z, 1), -1)
        self.DAG2 = self.DAG * self.DAG
        self.SSD_t = self.ssd_marked(self.t)
        self.DHAT_t = Pow(Robin(self.ssd_marked(-self.t), 1), -1)
        self.DHAT_st = Robin(self.ssd_marked((s_ - 1) * t_), 1) * self.DHAT_t
        self.D_uvyt = self.ssd_marked((y4 - u4 - v4 + 1) * t4) * Robin(
            Robin(self.ssd_marked((u4 - 1) * t4), 1)
            * Robin(self.ssd_marked((v4 - 1) * t4), 1)
            * self.DHAT_t,
            -1,
        )
        self.G_t = AnalyticComp(Analytic.exp(self.t), self.CG)
        self.T_t = Pow(1 - self.t * self.IT, -1)
        if s.alpha == 2:
            self._build_sat(s_, t_)

    def ssd_marked(self, c) -> SeriesExpr:
        """exp(c * SCD): semi-strong digraphs with each SCC weighted by c."""
        return AnalyticComp(Analytic.exp(c), self.SCD)

    def _build_sat(self, s_, t_):
        half = Fraction(1, 2)
        self.SAT = self.G * Robin(AnalyticComp(Analytic.exp(-half), self.SCD), 2)
        self.CSCC = half * ScaleZ(self.SCD, d=1) + AnalyticComp(
            Analytic.log1p(), Robin(self.D * (1 - ScaleZ(self.IT, d=1)), -2) - 1
        )
        self.CNF_st = self.DHAT_t * Robin(
            AnalyticComp(Analytic.exp(s_), ScaleZ(self.CSCC, d=-1))
            * AnalyticComp(Analytic.exp(-half * t_), self.SCD),
            2,
        )

    def family(self, name: str, bindings: dict | None = None) -> FamilySpec:
        name = name.lower()
        if name not in FAMILY_NAMES:
            raise UnknownFamily(f"unknown family {name!r}; choose from {', '.join(FAMILY_NAMES)}")
        if name in SAT_FAMILIES and self.spec.alpha != 2:
            raise UnsupportedAlpha(f"2-SAT family {name} is defined only for alpha = 2")
        formula, kind, grade, marks, text = {
            "g": (self.G, Kind.EXPONENTIAL, 1, (), "labelled graphs"),
            "t": (self.T, Kind.EXPONENTIAL, 1, (), "labelled tournaments"),
            "d": (self.D, Kind.EXPONENTIAL, 2, (), "labelled digraphs"),
            "cg": (self.CG, Kind.EXPONENTIAL, 1, (), "connected graphs"),
            "it": (self.IT, Kind.EXPONENTIAL, 1, (), "irreducible tournaments"),
            "dag": (self.DAG, Kind.GRAPHIC, 0, (), "directed acyclic graphs"),
            "dag2": (self.DAG2, Kind.GRAPHIC, 0, (), "ordered pairs of DAGs joined by one-way edges"),
            "scd": (self.SCD, Kind.EXPONENTIAL, 2, (), "strongly connected digraphs"),
            "ssd": (self.SSD, Kind.EXPONENTIAL, 2, (), "semi-strong digraphs"),
            "ssd_t": (self.SSD_t, Kind.EXPONENTIAL, 2, ("t",), "semi-strong digraphs, t marks SCCs"),
            "dhat_t": (self.DHAT_t, Kind.GRAPHIC, 1, ("t",), "digraphs, t marks SCCs"),
            "dhat_st": (self.DHAT_st, Kind.GRAPHIC, 1, ("s", "t"),
                        "digraphs, t marks SCCs, s marks source-like SCCs"),
            "d_uvyt": (self.D_uvyt, Kind.EXPONENTIAL, 2, ("t", "u", "v", "y"),
                       "digraphs, t marks SCCs, u/v/y mark purely source-like, purely sink-like, isolated SCCs"),
            "sat": (getattr(self, "SAT", None), Kind.IMPLICATION, 1, (), "satisfiable 2-CNF formulas"),
            "cscc": (getattr(self, "CSCC", None), Kind.EXPONENTIAL, 4, (),
                     "2-CNF formulas with strongly connected implication digraph"),
            "cnf_st": (getattr(self, "CNF_st", None), Kind.IMPLICATION, 2, ("s", "t"),
                       "2-CNF formulas, s marks contradictory SCCs, t marks pairs of ordinary SCCs"),
            "g_t": (self.G_t, Kind.EXPONENTIAL, 1, ("t",), "graphs, t marks connected components"),
            "t_t": (self.T_t, Kind.EXPONENTIAL, 1, ("t",), "tournaments, t marks irreducible parts"),
        }[name]
        variables = tuple(sorted(formula.marks()))
        assert set(marks) == set(variables), (name, marks, variables)
        bindings = dict(bindings or {})
        unknown = set(bindings) - set(variables)
        if unknown:
            raise UnknownFamily(f"family {name} has no marks {sorted(unknown)}")
        return FamilySpec(name, formula, kind, grade, self.spec, variables, text, bindings,
                          self._engine_for(variables))

    def _engine_for(self, variables):
        engines = self.__dict__.setdefault("_engines", {})
        if variables not in engines:
            engines[variables] = TransferEngine(self.spec, variables)
        return engines[variables]


_CATALOGS: dict = {}


def catalog(spec: FieldSpec | None = None) -> Catalog:
    """Shared catalog per field, so repeated builds reuse cached series."""
    spec = spec or FieldSpec()
    if spec not in _CATALOGS:
        _CATALOGS[spec] = Catalog(spec)
    return _CATALOGS[spec]


def build_family(name: str, spec: FieldSpec | None = None, bindings: dict | None = None) -> FamilySpec:
    return catalog(spec).family(name, bindings)


def family_counts(fam: FamilySpec, n_max: int) -> list:
    return fam.counts(n_max)


def wright_recurrence_eta(n_max: int, spec: FieldSpec | None = None):
    """eta_n = 2^C(n,2) it_n, checked against scd_n = eta_n + sum C(n-1,t-1) scd_t eta_(n-t).

    Returns (eta, scd) lists indexed from 0; raises RecurrenceMismatch on failure.
    """
    spec = spec or FieldSpec()
    it = build_family("it", spec).integer_counts(n_max)
    scd = build_family("scd", spec).integer_counts(n_max)
    alpha = spec.alpha
    eta = [0] + [alpha ** comb(n, 2) * it[n] for n in range(1, n_max + 1)]
    for n in range(1, n_max + 1):
        rhs = eta[n] + sum(comb(n - 1, t - 1) * scd[t] * eta[n - t] for t in range(1, n))
        if rhs != scd[n]:
            raise RecurrenceMismatch(f"n={n}: recurrence gives {rhs}, series gives {scd[n]}")
    return eta, scd


def dag_to2_direct(dag: list[int], n_max: int) -> list[int]:
    """sum_k C(n,k) 2^(k(n-k)) dag_k dag_(n-k), straight from DAG counts."""
    return [
        sum(comb(n, k) * 2 ** (k * (n - k)) * dag[k] * dag[n - k] for k in range(n + 1))
        for n in range(n_max + 1)
    ]
