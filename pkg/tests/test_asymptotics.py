from fractions import Fraction
from math import comb

import pytest

from gdseries.asymptotics import (
    LeadingTerm,
    error_profile,
    falling,
    partial_sum,
    sat_correction,
    sat_correction_from_table,
    scc_count_leading,
    wright_polynomials,
)
from gdseries.families import build_family, dag_to2_direct


def test_falling_factorial():
    assert falling(5, 0) == 1
    assert falling(5, 2) == 20
    assert falling(3, 4) == 0
    assert falling(0, 1) == 0


def test_graphs_are_exact_after_one_term():
    c = build_family("g").transfer(1, 3)
    for n in range(12):
        est = partial_sum(c, n, 0, 2 ** comb(n, 2))
        assert est.value == 2 ** comb(n, 2)
        assert est.rel_error == 0


def test_connected_graph_terms():
    c = build_family("cg").transfer(1, 3)
    assert partial_sum(c, 10, 0).value == 2 ** 45
    assert partial_sum(c, 10, 1).value == 2 ** 45 * (1 - Fraction(20, 2 ** 10))


def test_empty_table_sums_to_zero():
    c = build_family("cg").transfer(2, 3)
    assert partial_sum(c, 10, 3).value == 0


def test_row_beyond_z_order_rejected():
    with pytest.raises(ValueError):
        partial_sum(build_family("cg").transfer(1, 3), 10, 5)


def test_marked_tables_rejected():
    with pytest.raises(ValueError):
        partial_sum(build_family("dhat_t").transfer(1, 3), 10, 1)


def test_more_terms_help_connected_graphs():
    c = build_family("cg").transfer(1, 4)
    truth = build_family("cg").integer_counts(30)[30]
    e0 = partial_sum(c, 30, 0, truth).rel_error
    e1 = partial_sum(c, 30, 1, truth).rel_error
    assert e1 < e0


def test_error_profile_slopes_and_skips():
    prof = error_profile(build_family("cg"), 1, [20, 25, 30], [0, 1, 2, 3], z_order=6)
    assert prof.monotonicity_violations() == []
    # row 2 of the connected-graph table vanishes, so M=1 and M=2 coincide
    assert all(prof.errors[n, 1] == prof.errors[n, 2] for n in prof.n_values)
    assert prof.next_row(1) == 3
    for M, got, exp, tol, ok in prof.slope_report():
        assert ok, (M, got, exp, tol)


def test_wright_polynomials():
    w = wright_polynomials(build_family("scd").transfer(2, 6), 6)
    assert w[0].coeffs == [1]
    assert w[1].coeffs == [0, -4]
    assert w[2].coeffs == [0, -4, 8]
    n = 11
    assert w[5](n) == Fraction(-1024, 15) * n * (n - 1) * (n - 2) * (3392 * n * n - 23724 * n + 40659)
    assert w[5].degree == 5
    assert str(w[2]) == "8*n^2 - 4*n"
    assert w[1].to_json() == {"m": 1, "monomials": [{"deg": 1, "coeff": "-4"}]}


def test_sat_correction_two_ways():
    sat = build_family("sat").integer_counts(6)
    it = build_family("it").integer_counts(6)
    c = build_family("sat").transfer(1, 6)
    assert sat_correction(0, sat, it) == 0
    for m in range(7):
        assert sat_correction(m, sat, it) == sat_correction_from_table(c, m)


def test_leading_terms():
    assert scc_count_leading(0).constant == 1
    lead1 = scc_count_leading(1)
    assert lead1.dag2_m == 2 and lead1.constant == 4
    assert lead1(10) == Fraction(40, 2 ** 10)
    assert scc_count_leading(2).diagonal == 20
    dag2 = dag_to2_direct(build_family("dag").integer_counts(3), 3)
    assert LeadingTerm(3, dag2[3]).diagonal == Fraction(8 * 122, 6)
    assert str(lead1) == "p(n,2) ~ C(n,1) * 4 / 2^(1n)"


def test_sat_expansion_needs_the_binomial_power():
    """At n=30 the reassembled expansion keeps improving only with the 2^C(m,2) factor."""
    n, M = 30, 6
    sat = build_family("sat").integer_counts(n)
    it = build_family("it").integer_counts(M)
    lead = Fraction(2 ** (3 * comb(n, 2) + n))
    with_factor = lead * (1 - sum(Fraction(comb(n, m) * 2 ** comb(m, 2) * sat_correction(m, sat, it), 2 ** (m * n))
                                  for m in range(1, M + 1)))
    without = lead * (1 - sum(Fraction(comb(n, m) * sat_correction(m, sat, it), 2 ** (m * n))
                              for m in range(1, M + 1)))
    err_with = abs(with_factor - sat[n]) / sat[n]
    err_without = abs(without - sat[n]) / sat[n]
    assert err_with < Fraction(1, 2 ** 150)
    assert err_without > Fraction(1, 2 ** 60)
