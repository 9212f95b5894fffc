"""Named graph properties, tabulated with numpy for n <= 7 and as point oracles above."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable

import numpy as np

from .graphs import LabeledGraph, edge_index, edge_indexer, num_edges
from .hypercube import PropertyFunction

TABLE_MAX_N = 7
MAX_N = 16


def _edge_bits(n: int, x: np.ndarray) -> list[np.ndarray]:
    return [((x >> c) & 1).astype(np.uint8) for c in range(num_edges(n))]


def _degrees(n: int, bits) -> list[np.ndarray]:
    deg = [np.zeros(bits[0].shape if bits else (1,), dtype=np.uint8) for _ in range(n)]
    for c, (i, j) in enumerate(edge_indexer(n).pairs):
        deg[i - 1] += bits[c]
        deg[j - 1] += bits[c]
    return deg


def _perfect_matchings(n: int) -> list[int]:
    """Edge masks of all perfect matchings of K_n (empty list for odd n)."""
    if n % 2:
        return []

    def rec(free):
        if not free:
            yield 0
            return
        a, rest = free[0], free[1:]
        for k, b in enumerate(rest):
            for tail in rec(rest[:k] + rest[k + 1:]):
                yield tail | 1 << edge_index(n, a, b)

    return list(rec(tuple(range(1, n + 1))))


# vectorized generators: (n, all points) -> bool array

def _t_dominating(n, x):
    if n == 1:
        return np.ones(x.shape, dtype=bool)
    deg = _degrees(n, _edge_bits(n, x))
    return np.logical_or.reduce([d == n - 1 for d in deg])


def _t_has_edge(n, x):
    return x != 0


def _t_parity(n, x):
    return (np.bitwise_count(x) & 1).astype(bool)


def _t_connected(n, x):
    if n <= 1:
        return np.ones(x.shape, dtype=bool)
    bits = _edge_bits(n, x)
    adj = [np.zeros(x.shape, dtype=np.int64) for _ in range(n)]
    for c, (i, j) in enumerate(edge_indexer(n).pairs):
        adj[i - 1] |= bits[c].astype(np.int64) << (j - 1)
        adj[j - 1] |= bits[c].astype(np.int64) << (i - 1)
    reach = np.ones(x.shape, dtype=np.int64)
    for _ in range(n - 1):
        nxt = reach.copy()
        for v in range(n):
            nxt |= np.where((reach >> v) & 1, adj[v], 0)
        reach = nxt
    return reach == (1 << n) - 1


def _t_triangle(n, x):
    out = np.zeros(x.shape, dtype=bool)
    for a, b, c in combinations(range(1, n + 1), 3):
        mask = (1 << edge_index(n, a, b)) | (1 << edge_index(n, a, c)) | (1 << edge_index(n, b, c))
        out |= (x & mask) == mask
    return out


def _t_no_isolated(n, x):
    if n == 1:
        return np.zeros(x.shape, dtype=bool)
    deg = _degrees(n, _edge_bits(n, x))
    return np.logical_and.reduce([d > 0 for d in deg])


def _t_perfect_matching(n, x):
    out = np.zeros(x.shape, dtype=bool)
    for mask in _perfect_matchings(n):
        out |= (x & mask) == mask
    return out


def _t_isolated(n, x):
    return ~_t_no_isolated(n, x)


# point oracles: (n, edge mask) -> bool

def _p_dominating(n, x):
    G = LabeledGraph(n, x)
    return n - 1 in G.degrees()


def _p_connected(n, x):
    G = LabeledGraph(n, x)
    adj = G.adjacency()
    reach = frontier = 1
    while frontier:
        nxt = 0
        for v in range(n):
            if frontier >> v & 1:
                nxt |= adj[v]
        frontier = nxt & ~reach
        reach |= frontier
    return reach == (1 << n) - 1


def _p_triangle(n, x):
    adj = LabeledGraph(n, x).adjacency()
    return any(adj[a] & adj[b] for a in range(n) for b in range(a + 1, n) if adj[a] >> b & 1)


def _p_no_isolated(n, x):
    return n > 1 and 0 not in LabeledGraph(n, x).degrees()


def _p_perfect_matching(n, x):
    if n % 2:
        return False
    adj = LabeledGraph(n, x).adjacency()

    def match(free):
        if not free:
            return True
        low = free & -free
        a = low.bit_length() - 1
        rest = free ^ low
        cand = adj[a] & rest
        while cand:
            b = cand & -cand
            if match(rest ^ b):
                return True
            cand ^= b
        return False

    return match((1 << n) - 1)


@dataclass(frozen=True)
class BuiltinProperty:
    name: str
    table_rule: Callable
    point_rule: Callable
    monotone: bool
    facts: dict = field(default_factory=dict)


REGISTRY = {
    p.name: p
    for p in [
        BuiltinProperty("degree-n-minus-1", _t_dominating, _p_dominating, True,
                        {"s": lambda n: n - 1}),
        BuiltinProperty("has-edge", _t_has_edge, lambda n, x: x != 0, True,
                        {"s": lambda n: n * (n - 1) // 2}),
        BuiltinProperty("edge-parity", _t_parity, lambda n, x: x.bit_count() % 2 == 1, False,
                        {"s": lambda n: n * (n - 1) // 2}),
        BuiltinProperty("connected", _t_connected, _p_connected, True),
        BuiltinProperty("contains-triangle", _t_triangle, _p_triangle, True),
        BuiltinProperty("min-degree-at-least-1", _t_no_isolated, _p_no_isolated, True),
        BuiltinProperty("perfect-matching", _t_perfect_matching, _p_perfect_matching, True),
        BuiltinProperty("has-isolated-vertex", _t_isolated,
                        lambda n, x: not _p_no_isolated(n, x), False),
    ]
}


def builtin(name: str, n: int, backing: str | None = None) -> PropertyFunction:
    """A registry property on n vertices; ``backing`` forces "table" or "oracle"."""
    if name not in REGISTRY:
        raise KeyError(f"unknown property {name!r}; known: {', '.join(sorted(REGISTRY))}")
    if not 1 <= n <= MAX_N:
        raise ValueError(f"n must be in 1..{MAX_N}")
    prop = REGISTRY[name]
    backing = backing or ("table" if n <= TABLE_MAX_N else "oracle")
    m = num_edges(n)
    if backing == "table":
        x = np.arange(1 << m, dtype=np.int64)
        return PropertyFunction(m, table=prop.table_rule(n, x), n=n)
    if backing == "oracle":
        return PropertyFunction(m, oracle=lambda x: prop.point_rule(n, x), n=n)
    raise ValueError(f"unknown backing {backing!r}")
