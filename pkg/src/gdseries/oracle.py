"""Brute-force enumeration of small labelled graphs, digraphs, tournaments and 2-CNF formulas.

These counts are the ground truth the series are checked against, so nothing
here touches the series code.  Digraphs are classified in bulk with numpy:
each digraph is an n(n-1)-bit mask, transitive closure is computed with
bitwise Warshall over a whole block of masks at once, and strongly connected
components fall out of mutual reachability.  Tournaments and formulas use a
plain Tarjan SCC pass per object.
"""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import CalibrationAmbiguous, CalibrationFailed, SizeLimit

__all__ = [
    "GraphCounts",
    "DigraphClassification",
    "TournamentCounts",
    "CnfClassification",
    "enumerate_graphs",
    "enumerate_digraphs",
    "enumerate_digraphs_tarjan",
    "enumerate_tournaments",
    "enumerate_2cnf",
    "calibrate_sat_model",
    "CalibrationReport",
    "tarjan_scc",
    "thread_count",
    "oracle_counts",
    "ORACLE_FAMILIES",
]

LIMITS = {"graphs": 6, "digraphs": 5, "tournaments": 6, "2cnf": 3}


def thread_count() -> int:
    """Worker threads for block enumeration; GDSERIES_THREADS caps it."""
    default = min(os.cpu_count() or 1, 4)
    cap = os.environ.get("GDSERIES_THREADS")
    if cap:
        try:
            return max(1, min(default, int(cap)))
        except ValueError:
            pass
    return default


def _check(kind: str, n: int, unsafe: bool):
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > LIMITS[kind] and not unsafe:
        raise SizeLimit(f"{kind} enumeration is capped at n={LIMITS[kind]} (override with unsafe=True or --unsafe-n)")


def tarjan_scc(n: int, adj: list[list[int]]) -> list[int]:
    """Component index per vertex (components numbered in completion order)."""
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    counter = 0
    ncomp = 0

    def visit(v):
        nonlocal counter, ncomp
        index[v] = low[v] = counter
        counter += 1
        stack.append(v)
        on_stack[v] = True
        for w in adj[v]:
            if index[w] < 0:
                visit(w)
                low[v] = min(low[v], low[w])
            elif on_stack[w]:
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            while True:
                w = stack.pop()
                on_stack[w] = False
                comp[w] = ncomp
                if w == v:
                    break
            ncomp += 1

    for v in range(n):
        if index[v] < 0:
            visit(v)
    return comp


# ---------------------------------------------------------------------------
# graphs


@dataclass
class GraphCounts:
    n: int
    total: int
    connected: int
    by_components: dict


def enumerate_graphs(n: int, unsafe: bool = False) -> GraphCounts:
    _check("graphs", n, unsafe)
    edges = list(combinations(range(n), 2))
    hist: Counter = Counter()
    for mask in range(1 << len(edges)):
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        parts = n
        for e, (i, j) in enumerate(edges):
            if mask >> e & 1:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
                    parts -= 1
        hist[parts] += 1
    return GraphCounts(n, 1 << len(edges), hist.get(1, 0) if n else 0, dict(sorted(hist.items())))


# ---------------------------------------------------------------------------
# digraphs


@dataclass
class DigraphClassification:
    """Aggregates over all labelled digraphs on n vertices.

    ``by_type`` maps (scc_count, purely_source, purely_sink, isolated) to the
    number of digraphs with that component profile; the other fields are
    marginals of it.
    """

    n: int
    total: int
    by_type: dict
    strongly_connected_count: int = 0
    semi_strong_count: int = 0
    dag_count: int = 0
    by_scc_count: dict = field(default_factory=dict)
    semi_strong_by_scc_count: dict = field(default_factory=dict)
    by_scc_and_source_like: dict = field(default_factory=dict)

    def __post_init__(self):
        by_scc: Counter = Counter()
        semi: Counter = Counter()
        src: Counter = Counter()
        for (t, u, v, y), c in self.by_type.items():
            by_scc[t] += c
            if t == y:
                semi[t] += c
            src[t, u + y] += c
        self.by_scc_count = dict(sorted(by_scc.items()))
        self.semi_strong_by_scc_count = dict(sorted(semi.items()))
        self.by_scc_and_source_like = dict(sorted(src.items()))
        self.strongly_connected_count = by_scc.get(1, 0) if self.n else 0
        self.semi_strong_count = sum(semi.values())
        self.dag_count = by_scc.get(self.n, 0)


def _edge_list(n):
    return [(i, j) for i in range(n) for j in range(n) if i != j]


def _classify_block(n: int, start: int, stop: int) -> Counter:
    edges = _edge_list(n)
    masks = np.arange(start, stop, dtype=np.uint64)
    dtype = np.uint16
    adj = [np.zeros(len(masks), dtype=dtype) for _ in range(n)]
    for e, (i, j) in enumerate(edges):
        bit = ((masks >> np.uint64(e)) & np.uint64(1)).astype(dtype)
        adj[i] |= bit << dtype(j)
    reach = [a | dtype(1 << i) for i, a in enumerate(adj)]
    for k in range(n):
        rk = reach[k]
        for i in range(n):
            has_k = (reach[i] >> dtype(k)) & dtype(1)
            reach[i] = reach[i] | (rk * has_k)
    comp = []
    for i in range(n):
        c = np.zeros(len(masks), dtype=dtype)
        for j in range(n):
            mutual = ((reach[i] >> dtype(j)) & (reach[j] >> dtype(i)) & dtype(1))
            c |= mutual << dtype(j)
        comp.append(c)
    t = np.zeros(len(masks), dtype=np.int64)
    src = np.zeros_like(t)
    snk = np.zeros_like(t)
    iso = np.zeros_like(t)
    for i in range(n):
        cm = comp[i]
        leader = (cm & (~cm + dtype(1))) == dtype(1 << i)  # lowest set bit is i
        out_edges = np.zeros(len(masks), dtype=dtype)
        in_edges = np.zeros(len(masks), dtype=bool)
        for j in range(n):
            member = ((cm >> dtype(j)) & dtype(1)).astype(bool)
            out_edges |= np.where(member, adj[j], dtype(0))
            in_edges |= (~member) & ((adj[j] & cm) != 0)
        has_out = (out_edges & ~cm) != 0
        t += leader
        src += leader & ~in_edges & has_out
        snk += leader & in_edges & ~has_out
        iso += leader & ~in_edges & ~has_out
    code = ((t * 8 + src) * 8 + snk) * 8 + iso
    values, counts = np.unique(code, return_counts=True)
    out: Counter = Counter()
    for v, c in zip(values.tolist(), counts.tolist()):
        out[(v >> 9, (v >> 6) & 7, (v >> 3) & 7, v & 7)] += c
    return out


def enumerate_digraphs(n: int, unsafe: bool = False, threads: int | None = None,
                       block: int = 1 << 16) -> DigraphClassification:
    _check("digraphs", n, unsafe)
    if n == 0:
        return DigraphClassification(0, 1, {(0, 0, 0, 0): 1})
    total = 1 << (n * (n - 1))
    ranges = [(s, min(s + block, total)) for s in range(0, total, block)]
    threads = threads or thread_count()
    hist: Counter = Counter()
    if threads > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for part in pool.map(lambda r: _classify_block(n, *r), ranges):
                hist.update(part)
    else:
        for r in ranges:
            hist.update(_classify_block(n, *r))
    return DigraphClassification(n, total, dict(sorted(hist.items())))


def enumerate_digraphs_tarjan(n: int, unsafe: bool = False) -> DigraphClassification:
    """Same aggregates via per-digraph Tarjan; slow, used to cross-check the bulk path."""
    if n > 4 and not unsafe:
        raise SizeLimit("the per-digraph Tarjan path is capped at n=4")
    edges = _edge_list(n)
    hist: Counter = Counter()
    for mask in range(1 << len(edges)):
        adj = [[] for _ in range(n)]
        for e, (i, j) in enumerate(edges):
            if mask >> e & 1:
                adj[i].append(j)
        comp = tarjan_scc(n, adj)
        k = max(comp, default=-1) + 1
        has_in = [False] * k
        has_out = [False] * k
        for i in range(n):
            for j in adj[i]:
                if comp[i] != comp[j]:
                    has_out[comp[i]] = True
                    has_in[comp[j]] = True
        src = sum(1 for c in range(k) if has_out[c] and not has_in[c])
        snk = sum(1 for c in range(k) if has_in[c] and not has_out[c])
        iso = sum(1 for c in range(k) if not has_in[c] and not has_out[c])
        hist[k, src, snk, iso] += 1
    return DigraphClassification(n, 1 << len(edges), dict(sorted(hist.items())))


# ---------------------------------------------------------------------------
# tournaments


@dataclass
class TournamentCounts:
    n: int
    total: int
    irreducible_count: int
    by_part_number: dict


def enumerate_tournaments(n: int, unsafe: bool = False) -> TournamentCounts:
    _check("tournaments", n, unsafe)
    pairs = list(combinations(range(n), 2))
    hist: Counter = Counter()
    for mask in range(1 << len(pairs)):
        adj = [[] for _ in range(n)]
        for e, (i, j) in enumerate(pairs):
            if mask >> e & 1:
                adj[i].append(j)
            else:
                adj[j].append(i)
        hist[max(tarjan_scc(n, adj), default=-1) + 1] += 1
    return TournamentCounts(n, 1 << len(pairs), hist.get(1, 0) if n else 0, dict(sorted(hist.items())))


# ---------------------------------------------------------------------------
# 2-CNF formulas


def clause_universe(n: int, universe: str) -> list[tuple[int, int]]:
    """Clauses as literal pairs; literal 2i is x_i and 2i+1 is its negation.

    ``full``: every clause on two distinct variables, any signs (2n(n-1) clauses).
    ``half``: only the implicative clauses (not x_i or x_j) for ordered i != j
    (n(n-1) clauses).
    """
    if universe == "full":
        return [(2 * i + a, 2 * j + b) for i, j in combinations(range(n), 2) for a in (0, 1) for b in (0, 1)]
    if universe == "half":
        return [(2 * i + 1, 2 * j) for i in range(n) for j in range(n) if i != j]
    raise ValueError(f"unknown clause universe {universe!r}")


@dataclass
class CnfClassification:
    """Aggregates over all 2-CNF formulas on n variables within a clause universe.

    ``by_type`` maps (contradictory components, ordinary components) to counts;
    ordinary components come in negation pairs, so the second entry is even.
    """

    n: int
    universe: str
    clauses: int
    total: int
    by_type: dict
    sat_count: int = 0
    cscc_count: int = 0
    by_contradictory_components: dict = field(default_factory=dict)
    by_contradictory_and_pairs: dict = field(default_factory=dict)

    def __post_init__(self):
        contra: Counter = Counter()
        pairs: Counter = Counter()
        for (c, o), k in self.by_type.items():
            contra[c] += k
            pairs[c, o // 2] += k
        self.by_contradictory_components = dict(sorted(contra.items()))
        self.by_contradictory_and_pairs = dict(sorted(pairs.items()))
        self.sat_count = contra.get(0, 0)
        self.cscc_count = self.by_type.get((1, 0), 0)


def enumerate_2cnf(n: int, universe: str = "full", unsafe: bool = False) -> CnfClassification:
    if universe == "full":
        _check("2cnf", n, unsafe)
    clauses = clause_universe(n, universe)
    hist: Counter = Counter()
    for mask in range(1 << len(clauses)):
        adj = [[] for _ in range(2 * n)]
        for e, (a, b) in enumerate(clauses):
            if mask >> e & 1:
                adj[a ^ 1].append(b)
                adj[b ^ 1].append(a)
        comp = tarjan_scc(2 * n, adj)
        k = max(comp, default=-1) + 1
        contradictory = {comp[2 * i] for i in range(n) if comp[2 * i] == comp[2 * i + 1]}
        hist[len(contradictory), k - len(contradictory)] += 1
    return CnfClassification(n, universe, len(clauses), 1 << len(clauses), dict(sorted(hist.items())))


@dataclass
class CalibrationReport:
    chosen: str
    series: list
    oracle: dict  # universe -> list of sat counts for n = 1..n_max

    def lines(self) -> list[str]:
        out = [f"series sat counts n=1..{len(self.series)}: {self.series}"]
        for u, counts in self.oracle.items():
            mark = "match" if counts == self.series else "differs"
            out.append(f"{u:>4} universe: {counts} ({mark})")
        out.append(f"chosen universe: {self.chosen}")
        return out


def calibrate_sat_model(series_sat: list[int] | None = None, n_max: int = 3) -> CalibrationReport:
    """Pick the clause universe whose brute-force sat counts equal the series counts."""
    if series_sat is None:
        from .families import build_family

        series_sat = build_family("sat").integer_counts(n_max)
    series = list(series_sat[1 : n_max + 1])
    oracle = {u: [enumerate_2cnf(n, u).sat_count for n in range(1, n_max + 1)] for u in ("half", "full")}
    matches = [u for u, counts in oracle.items() if counts == series]
    if not matches:
        raise CalibrationFailed(f"no clause universe reproduces {series}: {oracle}")
    if len(matches) > 1:
        raise CalibrationAmbiguous(f"both clause universes reproduce {series}")
    return CalibrationReport(matches[0], series, oracle)


# ---------------------------------------------------------------------------
# brute-force counts keyed like the catalog families

ORACLE_FAMILIES = (
    "g", "t", "d", "cg", "it", "scd", "ssd", "dag", "g_t", "t_t", "ssd_t", "dhat_t", "dhat_st", "d_uvyt",
    "sat", "cscc", "cnf_st",
)


def oracle_counts(name: str, n: int, universe: str = "full", unsafe: bool = False) -> dict:
    """Brute-force counts for one catalog family at size n.

    Returns {mark exponent vector: count}, with vectors ordered like the
    family's sorted mark names (an empty tuple for unmarked families).
    """
    if name in ("g", "cg", "g_t"):
        o = enumerate_graphs(n, unsafe)
        return {"g": {(): o.total}, "cg": {(): o.connected},
                "g_t": {(k,): c for k, c in o.by_components.items()}}[name]
    if name in ("t", "it", "t_t"):
        o = enumerate_tournaments(n, unsafe)
        return {"t": {(): o.total}, "it": {(): o.irreducible_count},
                "t_t": {(k,): c for k, c in o.by_part_number.items()}}[name]
    if name in ("d", "scd", "ssd", "dag", "ssd_t", "dhat_t", "dhat_st", "d_uvyt"):
        o = enumerate_digraphs(n, unsafe)
        return {
            "d": lambda: {(): o.total},
            "scd": lambda: {(): o.strongly_connected_count},
            "ssd": lambda: {(): o.semi_strong_count},
            "dag": lambda: {(): o.dag_count},
            "ssd_t": lambda: {(k,): c for k, c in o.semi_strong_by_scc_count.items()},
            "dhat_t": lambda: {(k,): c for k, c in o.by_scc_count.items()},
            "dhat_st": lambda: {(src, t): c for (t, src), c in o.by_scc_and_source_like.items()},
            "d_uvyt": lambda: dict(o.by_type),
        }[name]()
    if name in ("sat", "cscc", "cnf_st"):
        o = enumerate_2cnf(n, universe, unsafe)
        return {"sat": {(): o.sat_count}, "cscc": {(): o.cscc_count},
                "cnf_st": dict(o.by_contradictory_and_pairs)}[name]
    raise ValueError(f"no brute-force counterpart for family {name!r}; choose from {', '.join(ORACLE_FAMILIES)}")
