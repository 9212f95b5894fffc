"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import time
from itertools import combinations, permutations

import numpy as np
import pytest

from conftest import record_criterion
from graphsens import lab
from graphsens.builtins import REGISTRY, builtin
from graphsens.graphs import (LabeledGraph, enumerate_iso_classes, num_edges,
                              property_from_class_set)
from graphsens.hypercube import (PropertyFunction, complement, max_block_sensitivity,
                                 max_sensitivity)
from graphsens.structures import degree_truncation, minimal_graphs, tree_truncation
from graphsens.witness import (CASE1, CASE2, CASE3, INCONSISTENCY, run_case3, run_extraction)

INF = float("inf")


# independent oracles ---------------------------------------------------------

def pair_list(n):
    return list(combinations(range(1, n + 1), 2))


def oracle_measures(n, mask):
    """(positive minimum degree, smallest tree component size) by union-find."""
    pairs = [p for c, p in enumerate(pair_list(n)) if mask >> c & 1]
    deg = [0] * (n + 1)
    parent = list(range(n + 1))

    def root(v):
        while parent[v] != v:
            v = parent[v]
        return v

    for a, b in pairs:
        deg[a] += 1
        deg[b] += 1
        parent[root(a)] = root(b)
    verts, edges = {}, {}
    for v in range(1, n + 1):
        verts[root(v)] = verts.get(root(v), 0) + 1
    for a, _ in pairs:
        edges[root(a)] = edges.get(root(a), 0) + 1
    positive = [d for d in deg[1:] if d]
    trees = [e for r, e in edges.items() if e == verts[r] - 1]
    return (min(positive) if positive else INF), (min(trees) if trees else INF)


def submasks(mask):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def maximal_qualifying(mask, ok):
    """All inclusion-maximal submasks passing ``ok``."""
    good = [s for s in submasks(mask) if ok(s)]
    return [s for s in good if not any(t != s and s & ~t == 0 for t in good)]


def brute_class_count(n):
    pairs = pair_list(n)
    index = {p: c for c, p in enumerate(pairs)}
    perms = list(permutations(range(1, n + 1)))
    maps = [[index[tuple(sorted((p[a - 1], p[b - 1])))] for a, b in pairs] for p in perms]
    seen = set()
    for x in range(1 << len(pairs)):
        bits = [c for c in range(len(pairs)) if x >> c & 1]
        seen.add(min(sum(1 << mp[c] for c in bits) for mp in maps))
    return len(seen)


def random_class_property(rng, n, classes):
    while True:
        row = rng.random(len(classes)) < 0.5
        if row.any() and not row.all():
            return property_from_class_set(n, [c.signature for c, on in zip(classes, row) if on])


# criteria -------------------------------------------------------------------

def test_criterion_1_extremal_property():
    t0 = time.perf_counter()
    values = {n: max_sensitivity(builtin("degree-n-minus-1", n)).value for n in (4, 5, 6, 7)}
    elapsed = time.perf_counter() - t0
    ok = all(values[n] == n - 1 for n in values) and elapsed < 10
    record_criterion(1, ok, f"s = {values} (expect n-1), {elapsed:.2f}s < 10s")
    assert ok


def test_criterion_2_exhaustive_n4_sweep():
    t0 = time.perf_counter()
    first = lab.verify(4, "exhaustive", jobs=1)
    elapsed = time.perf_counter() - t0
    second = lab.verify(4, "exhaustive", jobs=1)
    stable = first.deterministic_part() == second.deterministic_part()
    ok = (first.examined == 2046 and first.min_sensitivity >= 4 // 4
          and first.bounds["turan_quarter"]["status"] == "holds" and stable and elapsed < 60)
    record_criterion(2, ok, f"examined {first.examined}, min s = {first.min_sensitivity} >= 1, "
                            f"histogram {first.histogram}, attained by "
                            f"{first.min_property['classes']}, stable={stable}, {elapsed:.2f}s < 60s")
    assert ok


def test_criterion_3_sampled_n5_sweep():
    jobs = lab.default_jobs()
    t0 = time.perf_counter()
    first = lab.verify(5, "sample", seed=1, count=100_000, jobs=jobs)
    elapsed = time.perf_counter() - t0
    second = lab.verify(5, "sample", seed=1, count=100_000, jobs=jobs)
    same = first.deterministic_part() == second.deterministic_part()
    ok = first.examined == 100_000 and first.min_sensitivity >= 1 and same and elapsed < 600
    record_criterion(3, ok, f"10^5 samples (seed 1, {jobs} worker(s)), min s = "
                            f"{first.min_sensitivity} >= 1, reproducible={same}, {elapsed:.1f}s < 600s")
    assert ok


def test_criterion_4_monotone_bound():
    names = ["connected", "contains-triangle", "min-degree-at-least-1", "has-edge"]
    rows, ok = [], True
    for n in (5, 6, 7):
        for name in names:
            s = max_sensitivity(builtin(name, n)).value
            rows.append(f"{name}@{n}={s}")
            ok &= REGISTRY[name].monotone and s >= n - 1
    record_criterion(4, ok, "s >= n-1 for " + ", ".join(rows))
    assert ok


@pytest.fixture(scope="module")
def extraction_runs():
    rng = np.random.default_rng(20240601)
    classes = enumerate_iso_classes(5)
    runs = []
    for _ in range(100):
        f = random_class_property(rng, 5, classes)
        runs.append((f, run_extraction(f), max_sensitivity(f).value))
    return runs


def test_criterion_5_witness_soundness(extraction_runs):
    below = above = inconsistent = attained = 0
    for f, ex, s in extraction_runs:
        v = ex.report.verified_sensitivity
        below += v <= s
        above += v >= ex.minimal.max_size
        attained += v == s
        inconsistent += sum(t.outcome == INCONSISTENCY for t in ex.traces)
    total = len(extraction_runs)
    ok = below == total and above == total and inconsistent == 0
    record_criterion(5, ok, f"{total} properties: verified <= s(f) in {below}, >= max|G| in "
                            f"{above}, inconsistencies {inconsistent}; witness attains s(f) in "
                            f"{attained}/{total} ({attained / total:.0%})")
    assert ok


def test_criterion_6_claim_families(extraction_runs):
    traces = claims = false = 0
    kinds = {}
    for f, ex, _ in extraction_runs:
        for t in ex.traces:
            if t.case not in (CASE1, CASE2, CASE3):
                continue
            traces += 1
            kinds[t.case] = kinds.get(t.case, 0) + 1
            for h in t.harvested:
                direct = {c for c in range(f.arity) if f(h.point.edges ^ (1 << c)) != f(h.point.edges)}
                claims += len(h.claimed)
                false += len(h.claimed - direct)
    ok = false == 0 and traces > 0
    record_criterion(6, ok, f"{traces} case traces {kinds}, {claims} claimed coordinates, "
                            f"{false} false claims")
    assert ok


def test_criterion_7_structural_oracles():
    mismatches = checked = 0
    for n in range(1, 6):
        m = num_edges(n)
        measures = [oracle_measures(n, x) for x in range(1 << m)]
        for x in range(1 << m):
            G = LabeledGraph(n, x)
            for k in (1, 2, 3, 4):
                deg = maximal_qualifying(x, lambda s: measures[s][0] >= k)
                tree = maximal_qualifying(x, lambda s: measures[s][1] >= k)
                mismatches += deg != [degree_truncation(G, k).edges]
                mismatches += tree != [tree_truncation(G, k).edges]
                checked += 1
    rng = np.random.default_rng(7)
    measures6 = {}
    for _ in range(1000):
        x = int(rng.integers(0, 1 << 15))
        G = LabeledGraph(6, x)
        for s in submasks(x):
            if s not in measures6:
                measures6[s] = oracle_measures(6, s)
        for k in (1, 2, 3, 4):
            mismatches += maximal_qualifying(x, lambda s: measures6[s][0] >= k) != [degree_truncation(G, k).edges]
            mismatches += maximal_qualifying(x, lambda s: measures6[s][1] >= k) != [tree_truncation(G, k).edges]
    classes = enumerate_iso_classes(4)
    m_bad = 0
    for _ in range(200):
        f = random_class_property(rng, 4, classes)
        if f(0):
            f = complement(f)
        ones = [x for x in range(64) if f(x)]
        naive = sorted(x for x in ones if not any(f(s) for s in submasks(x) if s != x))
        m_bad += naive != sorted(G.edges for G in minimal_graphs(f))
    ok = mismatches == 0 and m_bad == 0
    record_criterion(7, ok, f"truncations: {checked} exhaustive (n<=5, k=1..4) + 4000 random n=6 "
                            f"checks, {mismatches} mismatches; m(f): 200 n=4 properties, "
                            f"{m_bad} mismatches")
    assert ok


def test_criterion_8_class_counts():
    got = [len(enumerate_iso_classes(n)) for n in range(1, 6)]
    oracle = [brute_class_count(n) for n in range(1, 6)]
    ok = got == oracle == [1, 2, 4, 11, 34]
    record_criterion(8, ok, f"enumerate_iso_classes {got}, canonize-all oracle {oracle}")
    assert ok


def test_criterion_9_measure_sanity():
    rng = np.random.default_rng(99)
    corpus = [PropertyFunction.from_table(rng.random(256) < 0.5) for _ in range(500)]
    corpus += [builtin(name, 4) for name in sorted(REGISTRY)]
    s_le_bs = s_sym = 0
    for f in corpus:
        s = max_sensitivity(f).value
        s_le_bs += s <= max_block_sensitivity(f)
        s_sym += s == max_sensitivity(complement(f)).value
    ok = s_le_bs == s_sym == len(corpus)
    record_criterion(9, ok, f"{len(corpus)} functions (500 random m=8 + n=4 builtins): s <= bs in "
                            f"{s_le_bs}, s(f) = s(not f) in {s_sym}")
    assert ok


def test_criterion_10_negative_control():
    n = 6
    G = LabeledGraph.from_edges(n, [(1, 2), (3, 4)])
    x = np.arange(1 << num_edges(n), dtype=np.int64)
    f = PropertyFunction.from_table((x & G.edges) == G.edges, n=n)
    trace = run_case3(f, G)
    ok = trace.outcome == INCONSISTENCY
    record_criterion(10, ok, f"labeled-subgraph indicator of {G}: case3 outcome {trace.outcome}"
                             f" ({trace.reason})")
    assert ok
