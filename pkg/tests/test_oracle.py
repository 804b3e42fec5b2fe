import pytest

from gdseries.errors import SizeLimit
from gdseries.families import build_family
from gdseries.oracle import (
    ORACLE_FAMILIES,
    calibrate_sat_model,
    clause_universe,
    enumerate_2cnf,
    enumerate_digraphs,
    enumerate_digraphs_tarjan,
    enumerate_graphs,
    enumerate_tournaments,
    oracle_counts,
    tarjan_scc,
    thread_count,
)


def test_tarjan():
    assert tarjan_scc(3, [[1], [2], [0]]) == [0, 0, 0]
    comp = tarjan_scc(3, [[1], [], []])
    assert len(set(comp)) == 3
    assert tarjan_scc(0, []) == []


def test_graphs():
    g3 = enumerate_graphs(3)
    assert (g3.total, g3.connected) == (8, 4)
    g4 = enumerate_graphs(4)
    assert g4.by_components == {1: 38, 2: 19, 3: 6, 4: 1}
    assert sum(g4.by_components.values()) == g4.total == 64
    assert enumerate_graphs(0).connected == 0


def test_digraphs_n2():
    d = enumerate_digraphs(2)
    assert d.total == 4
    assert d.strongly_connected_count == 1
    assert d.dag_count == 3
    assert d.by_type == {(1, 0, 0, 1): 1, (2, 0, 0, 2): 1, (2, 1, 1, 0): 2}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_bulk_classifier_agrees_with_tarjan(n):
    assert enumerate_digraphs(n, threads=1, block=37) == enumerate_digraphs_tarjan(n)


def test_thread_count_does_not_change_results(monkeypatch):
    one = enumerate_digraphs(4, threads=1, block=512)
    four = enumerate_digraphs(4, threads=4, block=512)
    assert one == four
    monkeypatch.setenv("GDSERIES_THREADS", "1")
    assert thread_count() == 1
    monkeypatch.setenv("GDSERIES_THREADS", "junk")
    assert thread_count() >= 1


def test_digraph_marginals_are_consistent():
    d = enumerate_digraphs(4)
    assert sum(d.by_type.values()) == d.total
    assert sum(d.by_scc_count.values()) == d.total
    assert d.semi_strong_count == sum(c for (t, u, v, y), c in d.by_type.items() if t == y)
    assert d.strongly_connected_count == 1606 and d.dag_count == 543


def test_tournaments():
    assert enumerate_tournaments(3).irreducible_count == 2
    t4 = enumerate_tournaments(4)
    assert t4.irreducible_count == 24
    assert t4.by_part_number[2] == 16
    assert sum(t4.by_part_number.values()) == 64


def test_2cnf():
    assert enumerate_2cnf(1).sat_count == 1
    assert len(clause_universe(3, "full")) == 12
    assert len(clause_universe(3, "half")) == 6
    c2 = enumerate_2cnf(2)
    assert c2.total == 2 ** 4
    assert all(o % 2 == 0 for _, o in c2.by_type)
    with pytest.raises(ValueError):
        clause_universe(2, "quarter")


def test_calibration_picks_the_full_universe():
    rep = calibrate_sat_model()
    assert rep.chosen == "full"
    assert rep.oracle["half"] == [1, 4, 64]
    assert rep.oracle["full"] == rep.series == [1, 15, 2397]
    assert rep.lines()[-1] == "chosen universe: full"


def test_size_limits():
    with pytest.raises(SizeLimit):
        enumerate_digraphs(6)
    with pytest.raises(SizeLimit):
        enumerate_graphs(7)
    with pytest.raises(SizeLimit):
        enumerate_2cnf(4)
    with pytest.raises(SizeLimit):
        enumerate_digraphs_tarjan(5)
    with pytest.raises(ValueError):
        enumerate_tournaments(-1)


def _series_counts(name, n):
    fam = build_family(name)
    c = fam.counts(n)[n]
    return {k: v.as_fraction() for k, v in c.terms() if v.as_fraction() != 0}


@pytest.mark.parametrize("name", ORACLE_FAMILIES)
def test_oracle_counts_match_series(name):
    n = 3 if name not in ("sat", "cscc", "cnf_st") else 2
    assert oracle_counts(name, n) == _series_counts(name, n)


def test_unknown_oracle_family():
    with pytest.raises(ValueError):
        oracle_counts("dag2", 3)
