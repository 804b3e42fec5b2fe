from fractions import Fraction
from math import comb

import pytest

from gdseries.errors import RecurrenceMismatch, UnknownFamily, UnsupportedAlpha
from gdseries.expr import Evaluator, Hadamard
from gdseries.families import (
    FAMILY_NAMES,
    build_family,
    catalog,
    dag_to2_direct,
    family_counts,
    wright_recurrence_eta,
)
from gdseries.field import FieldSpec
from gdseries.series import Egf
from gdseries.transfer import infer_grade

S = FieldSpec()


@pytest.mark.parametrize(
    "name, expected",
    [
        ("g", [1, 1, 2, 8, 64, 1024]),
        ("d", [1, 1, 4, 64, 4096, 1048576]),
        ("cg", [0, 1, 1, 4, 38, 728]),
        ("it", [0, 1, 0, 2, 24, 544, 22320]),
        ("ssd", [1, 1, 2, 22, 1688, 573496]),
        ("scd", [0, 1, 1, 18, 1606, 565080]),
        ("dag", [1, 1, 3, 25, 543, 29281]),
        ("sat", [1, 1, 15, 2397]),
        ("cscc", [0, 0, 1, 1606]),
    ],
)
def test_counts(name, expected):
    assert build_family(name).integer_counts(len(expected) - 1) == expected


def test_declared_grade_matches_inferred_grade():
    for name in FAMILY_NAMES:
        fam = build_family(name)
        assert infer_grade(fam.formula) == fam.grade, name


def test_counts_are_integers():
    for name in FAMILY_NAMES:
        fam = build_family(name)
        for c in fam.counts(5 if name != "d_uvyt" else 4):
            for _, v in c.terms():
                assert v.is_rational() and v.as_fraction().denominator == 1, name


def test_marks_at_one_give_unmarked_family():
    for marked, plain in [("ssd_t", "ssd"), ("g_t", "g"), ("t_t", "t"), ("d_uvyt", "d")]:
        fam = build_family(marked)
        spec = fam.evaluate(6).specialize({v: 1 for v in fam.variables})
        assert spec.integer_counts() == build_family(plain).integer_counts(6), marked
    dhat = build_family("dhat_t", bindings={"t": 1})
    assert dhat.integer_counts(5) == build_family("d").integer_counts(5)
    st = build_family("dhat_st", bindings={"s": 1})
    assert st.evaluate(5) == build_family("dhat_t").evaluate(5)


def test_small_marked_counts():
    assert str(build_family("dhat_t").counts(3)[3]) == "18*t + 21*t^2 + 25*t^3"
    d2 = build_family("d_uvyt").counts(2)[2]
    assert {k: v.as_fraction() for k, v in d2.terms()} == {(1, 0, 0, 1): 1, (2, 0, 0, 2): 1, (2, 1, 1, 0): 2}
    cnf2 = build_family("cnf_st").counts(2)[2]
    assert {k: v.as_fraction() for k, v in cnf2.terms()} == {(1, 0): 1, (0, 1): 6, (0, 2): 9}
    assert family_counts(build_family("dhat_t"), 2)[2].extract({"t": 1}) == 1


def test_pair_of_dags():
    dag = build_family("dag").integer_counts(5)
    direct = dag_to2_direct(dag, 5)
    assert direct[:4] == [1, 2, 10, 122]
    assert build_family("dag2").integer_counts(5) == direct


def test_products_and_compositions():
    ev = Evaluator(S)
    cat = catalog()
    one = Egf.constant(S, 8, 1)
    assert ev(cat.G * (1 - cat.IT), 8) == one
    assert ev(cat.SCD, 8).exp() == ev(cat.SSD, 8)
    half = ev(cat.SSD, 8).power(Fraction(-1, 2))
    assert half == (ev(cat.SCD, 8) * Fraction(-1, 2)).exp()
    assert half * half == ev(cat.SSD, 8).reciprocal()


def test_hadamard_with_graphs():
    ev = Evaluator(S)
    cat = catalog()
    h = ev(Hadamard(cat.IT, cat.G), 5)
    assert h.integer_counts()[:5] == [0, 1, 0, 16, 1536]
    ssd = (Egf.constant(S, 5, 1) - h).reciprocal()
    assert ssd.integer_counts() == [1, 1, 2, 22, 1688, 573496]


def test_recurrence():
    eta, scd = wright_recurrence_eta(8)
    assert eta[1] == 1 and eta[3] == 16 and eta[4] == 1536
    assert scd[:5] == [0, 1, 1, 18, 1606]
    assert all(eta[n] == 2 ** comb(n, 2) * build_family("it").integer_counts(8)[n] for n in range(1, 9))


def test_recurrence_mismatch_is_reported(monkeypatch):
    from gdseries import families

    real = families.build_family

    class Fake:
        def __init__(self, fam):
            self.fam = fam

        def integer_counts(self, n):
            out = self.fam.integer_counts(n)
            return out[:-1] + [out[-1] + 1] if self.fam.name == "scd" else out

    monkeypatch.setattr(families, "build_family", lambda name, spec=None: Fake(real(name, spec)))
    with pytest.raises(RecurrenceMismatch):
        families.wright_recurrence_eta(5)


def test_errors():
    with pytest.raises(UnknownFamily):
        build_family("xyz")
    with pytest.raises(UnsupportedAlpha):
        build_family("sat", FieldSpec(Fraction(4, 3)))
    with pytest.raises(UnknownFamily):
        build_family("dhat_t", bindings={"q": 1})


def test_erdos_renyi_alpha():
    spec = FieldSpec(Fraction(4, 3))
    g = build_family("g", spec).counts(4)
    assert [c.constant_term() for c in g] == [Fraction(4, 3) ** comb(n, 2) for n in range(5)]
    ev = Evaluator(spec)
    assert ev(catalog(spec).CG, 5).exp() == ev(catalog(spec).G, 5)
