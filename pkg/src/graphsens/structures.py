"""Component structure, degree/tree truncations and minimal graphs of a property."""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graphs import LabeledGraph, are_isomorphic, edge_indexer
from .hypercube import PropertyFunction, is_nontrivial, minimal_points


@functools.total_ordering
class _Infinity:
    """Sentinel above every natural number. It supports comparison only."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __hash__(self):
        return hash("graphsens.inf")

    def __repr__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def json_measure(v):
    return "inf" if v is INF else v


ISOLATED, TREE, CYCLIC = "isolated-vertex", "tree", "cyclic"


@dataclass(frozen=True)
class Component:
    vertices: frozenset
    edge_count: int
    kind: str


@dataclass(frozen=True)
class ComponentReport:
    n: int
    components: tuple

    def of_kind(self, kind: str) -> list[Component]:
        return [c for c in self.components if c.kind == kind]

    @property
    def trees(self) -> list[Component]:
        return self.of_kind(TREE)

    @property
    def cyclic(self) -> list[Component]:
        return self.of_kind(CYCLIC)

    @property
    def isolated(self) -> list[Component]:
        return self.of_kind(ISOLATED)


def isolated_vertices(G: LabeledGraph) -> frozenset:
    return frozenset(v for v, d in enumerate(G.degrees(), 1) if d == 0)


def classify_components(G: LabeledGraph) -> ComponentReport:
    adj = G.adjacency()
    seen = 0
    comps = []
    for s in range(G.n):
        if seen >> s & 1:
            continue
        comp = frontier = 1 << s
        while frontier:
            nxt = 0
            rest = frontier
            while rest:
                low = rest & -rest
                nxt |= adj[low.bit_length() - 1]
                rest ^= low
            frontier = nxt & ~comp
            comp |= frontier
        seen |= comp
        verts = frozenset(v + 1 for v in range(G.n) if comp >> v & 1)
        deg_sum = sum(adj[v - 1].bit_count() for v in verts)
        e = deg_sum // 2
        if e == 0:
            kind = ISOLATED
        elif e == len(verts) - 1:
            kind = TREE
        else:
            kind = CYCLIC
        comps.append(Component(verts, e, kind))
    return ComponentReport(G.n, tuple(comps))


def positive_min_degree(G: LabeledGraph):
    degs = [d for d in G.degrees() if d > 0]
    return min(degs) if degs else INF


def degree_truncation(G: LabeledGraph, k: int) -> LabeledGraph:
    """G_[k]: peel edges at vertices of positive degree below k until none remain."""
    if k < 1:
        raise ValueError("k must be at least 1")
    incident = edge_indexer(G.n).incident
    edges = G.edges
    while True:
        doomed = 0
        for v in range(1, G.n + 1):
            d = (edges & incident[v]).bit_count()
            if 0 < d < k:
                doomed |= incident[v]
        if not edges & doomed:
            return LabeledGraph(G.n, edges)
        edges &= ~doomed


def positive_min_tree_size(G: LabeledGraph):
    sizes = [c.edge_count for c in classify_components(G).trees]
    return min(sizes) if sizes else INF


def tree_truncation(G: LabeledGraph, k: int) -> LabeledGraph:
    """G_(k): drop every tree component with fewer than k edges."""
    if k < 1:
        raise ValueError("k must be at least 1")
    edges = G.edges
    for comp in classify_components(G).trees:
        if comp.edge_count < k:
            edges &= ~G.induced(comp.vertices).edges
    return LabeledGraph(G.n, edges)


@dataclass(frozen=True)
class MinimalGraphSet:
    n: int
    graphs: tuple
    delta_prime: object
    c: object

    def __len__(self):
        return len(self.graphs)

    def __iter__(self):
        return iter(self.graphs)

    def __contains__(self, G):
        return G in set(self.graphs)

    @property
    def max_size(self) -> int:
        return max(G.size for G in self.graphs)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "graphs": [G.hex for G in self.graphs],
            "delta_prime": json_measure(self.delta_prime),
            "c": json_measure(self.c),
        }


def _require_normalized(f: PropertyFunction):
    if f.n is None:
        raise ValueError("minimal graphs need a graph function (vertex count n)")
    if f.evaluate(0):
        raise ValueError("f(empty graph) = 1; normalize with complement() first")


def minimal_graphs(f: PropertyFunction) -> MinimalGraphSet:
    """m(f) from one downward reachability sweep over the truth table."""
    _require_normalized(f)
    if not is_nontrivial(f):
        raise ValueError("m(f) is only defined for non-trivial f")
    graphs = tuple(LabeledGraph(f.n, int(x)) for x in np.flatnonzero(minimal_points(f.table)))
    return MinimalGraphSet(
        f.n,
        graphs,
        min(positive_min_degree(G) for G in graphs),
        min(positive_min_tree_size(G) for G in graphs),
    )


def _submasks(mask: int):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def is_minimal(f: PropertyFunction, G: LabeledGraph) -> bool:
    """f(G) = 1 and f vanishes on every proper subgraph (checked subset by subset)."""
    if not f.evaluate(G.edges):
        return False
    return not any(f.evaluate(s) for s in _submasks(G.edges) if s != G.edges)


def minimal_below(f: PropertyFunction, H: LabeledGraph) -> LabeledGraph | None:
    """The minimal graph contained in H with the smallest edge mask, if f(H') = 1 for some H' <= H."""
    ones = [s for s in _submasks(H.edges) if f.evaluate(s)]
    minimal = [s for s in ones if not any(t != s and t & ~s == 0 for t in ones)]
    return LabeledGraph(H.n, min(minimal)) if minimal else None


def tree_construction_sequence(T: LabeledGraph) -> tuple:
    """T(1), ..., T(k) on T's own labels, from a leaf-removal order read backwards."""
    report = classify_components(T)
    nontrivial = [c for c in report.components if c.kind != ISOLATED]
    if not nontrivial:
        raise ValueError("T has no edges")
    if len(nontrivial) > 1 or nontrivial[0].kind != TREE:
        raise ValueError("T must have exactly one non-trivial component, and it must be a tree")
    seq = [T]
    cur = T
    while cur.size > 1:
        degs = cur.degrees()
        leaf = next(v for v, d in enumerate(degs, 1) if d == 1)
        cur = cur.remove(leaf, cur.neighbors(leaf)[0])
        seq.append(cur)
    return tuple(reversed(seq))


def is_tree_construction_sequence(seq: Sequence[LabeledGraph], T: LabeledGraph) -> bool:
    """Check the three defining conditions literally."""
    k = T.size
    if len(seq) != k:
        return False
    for i, Ti in enumerate(seq, 1):
        rep = classify_components(Ti)
        if Ti.size != i or len(rep.trees) != 1 or rep.cyclic:
            return False
    if not are_isomorphic(seq[-1], T):
        return False
    for prev, nxt in zip(seq, seq[1:]):
        if not prev.issubset(nxt) or nxt.size != prev.size + 1:
            return False
        (a, b), = LabeledGraph(prev.n, nxt.edges & ~prev.edges).pairs()
        old = set().union(*(p for p in prev.pairs()))
        if (a in old) == (b in old):
            return False
    return True
