"""Labeled graphs on {1..n} as points of the edge hypercube.

Edges are indexed lexicographically: {1,2} -> 0, {1,3} -> 1, ..., {n-1,n} -> m-1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np

from .hypercube import MalformedInput, PropertyFunction

MAX_CANON_N = 9
MAX_CLASS_N = 7
_CHUNK = 1 << 22


def num_edges(n: int) -> int:
    return n * (n - 1) // 2


def edge_index(n: int, i: int, j: int) -> int:
    if i == j:
        raise ValueError("an edge needs two distinct endpoints")
    if i > j:
        i, j = j, i
    if i < 1 or j > n:
        raise ValueError(f"pair {{{i},{j}}} out of range for n={n}")
    a = i - 1
    return a * (2 * n - a - 1) // 2 + (j - i - 1)


def edge_unindex(n: int, c: int) -> tuple[int, int]:
    if not 0 <= c < num_edges(n):
        raise IndexError(f"coordinate {c} out of range for n={n}")
    return edge_indexer(n).pairs[c]


class EdgeIndexer:
    """The fixed lexicographic bijection between coordinates and vertex pairs."""

    def __init__(self, n: int):
        self.n = n
        self.m = num_edges(n)
        self.pairs = tuple(combinations(range(1, n + 1), 2))
        self.index = {p: k for k, p in enumerate(self.pairs)}
        # incident[v] = mask of coordinates touching vertex v (1-based; slot 0 unused)
        self.incident = [0] * (n + 1)
        for k, (i, j) in enumerate(self.pairs):
            self.incident[i] |= 1 << k
            self.incident[j] |= 1 << k

    def __call__(self, i: int, j: int) -> int:
        return edge_index(self.n, i, j)


@lru_cache(maxsize=None)
def edge_indexer(n: int) -> EdgeIndexer:
    return EdgeIndexer(n)


@dataclass(frozen=True, order=True)
class LabeledGraph:
    n: int
    edges: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if self.edges < 0 or self.edges >> num_edges(self.n):
            raise ValueError(f"edge mask {self.edges:#x} too wide for n={self.n}")

    @classmethod
    def from_edges(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "LabeledGraph":
        mask = 0
        for i, j in pairs:
            mask |= 1 << edge_index(n, i, j)
        return cls(n, mask)

    @classmethod
    def empty(cls, n: int) -> "LabeledGraph":
        return cls(n, 0)

    @classmethod
    def complete(cls, n: int) -> "LabeledGraph":
        return cls(n, (1 << num_edges(n)) - 1)

    def __len__(self):
        return self.edges.bit_count()

    @property
    def size(self) -> int:
        return self.edges.bit_count()

    def coordinates(self) -> list[int]:
        out, rest = [], self.edges
        while rest:
            low = rest & -rest
            out.append(low.bit_length() - 1)
            rest ^= low
        return out

    def pairs(self) -> list[tuple[int, int]]:
        p = edge_indexer(self.n).pairs
        return [p[c] for c in self.coordinates()]

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.edges >> edge_index(self.n, i, j) & 1)

    def add(self, i: int, j: int) -> "LabeledGraph":
        return LabeledGraph(self.n, self.edges | 1 << edge_index(self.n, i, j))

    def remove(self, i: int, j: int) -> "LabeledGraph":
        return LabeledGraph(self.n, self.edges & ~(1 << edge_index(self.n, i, j)))

    def toggle(self, c: int) -> "LabeledGraph":
        return LabeledGraph(self.n, self.edges ^ (1 << c))

    def issubset(self, other: "LabeledGraph") -> bool:
        return self.n == other.n and self.edges & ~other.edges == 0

    def adjacency(self) -> list[int]:
        """Neighbour masks, 0-based: bit w of adjacency()[v] means {v+1, w+1} is an edge."""
        adj = [0] * self.n
        for i, j in self.pairs():
            adj[i - 1] |= 1 << (j - 1)
            adj[j - 1] |= 1 << (i - 1)
        return adj

    def degree(self, v: int) -> int:
        return (self.edges & edge_indexer(self.n).incident[v]).bit_count()

    def degrees(self) -> list[int]:
        """Degrees of vertices 1..n, in order."""
        inc = edge_indexer(self.n).incident
        return [(self.edges & inc[v]).bit_count() for v in range(1, self.n + 1)]

    def neighbors(self, v: int) -> list[int]:
        return [j if i == v else i for i, j in self.pairs() if v in (i, j)]

    def induced(self, vertices: Iterable[int]) -> "LabeledGraph":
        vs = set(vertices)
        return LabeledGraph.from_edges(self.n, [(i, j) for i, j in self.pairs()
                                                if i in vs and j in vs])

    @property
    def hex(self) -> str:
        return format(self.edges, "x")

    def __str__(self):
        body = " ".join(f"{i}{j}" if self.n < 10 else f"{i}-{j}" for i, j in self.pairs())
        return f"G{self.n}[{body}]"


@dataclass(frozen=True)
class Permutation:
    """A bijection on {1..n}; images[i - 1] is the image of i."""

    images: tuple

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(int(v) for v in self.images))
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"{self.images} is not a permutation of 1..{len(self.images)}")

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def transposition(cls, n: int, a: int, b: int) -> "Permutation":
        img = list(range(1, n + 1))
        img[a - 1], img[b - 1] = b, a
        return cls(tuple(img))

    @classmethod
    def cycle(cls, n: int) -> "Permutation":
        """The long cycle (1 2 ... n)."""
        return cls(tuple(range(2, n + 1)) + (1,) if n else ())

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: i -> self(other(i))."""
        if self.n != other.n:
            raise ValueError("permutations on different vertex sets")
        return Permutation(tuple(self(other(i)) for i in range(1, self.n + 1)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, v in enumerate(self.images, 1):
            inv[v - 1] = i
        return Permutation(tuple(inv))

    def edge_map(self) -> list[int]:
        """Coordinate c of G moves to coordinate edge_map()[c] of pi G."""
        ix = edge_indexer(self.n)
        return [edge_index(self.n, self(i), self(j)) for i, j in ix.pairs]


def apply_permutation(G: LabeledGraph, pi: Permutation) -> LabeledGraph:
    """pi G has the edge {pi(i), pi(j)} for every edge {i, j} of G."""
    if G.n != pi.n:
        raise ValueError(f"graph on {G.n} vertices, permutation on {pi.n}")
    emap = pi.edge_map()
    out = 0
    for c in G.coordinates():
        out |= 1 << emap[c]
    return LabeledGraph(G.n, out)


@dataclass(frozen=True, order=True)
class CanonicalSignature:
    n: int
    bitmask: int

    @property
    def hex(self) -> str:
        return format(self.bitmask, "x")

    @property
    def graph(self) -> LabeledGraph:
        return LabeledGraph(self.n, self.bitmask)

    @classmethod
    def from_hex(cls, n: int, text: str) -> "CanonicalSignature":
        return cls(n, int(text, 16))


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _canonical_search(n: int, adj: list[int]) -> int:
    """Minimum edge mask over all relabelings, built from the top bits down.

    Labels are handed out from n down to 1.  Giving label k to a vertex fixes
    the block of pairs {k, j > k}, which sits above every block still open, so
    only the assignments with the smallest block survive each level.  Partial
    assignments with the same unassigned set and the same adjacency profile
    towards the assigned labels have identical futures and are merged.
    """
    if n <= 1:
        return 0
    full = (1 << n) - 1
    states = {(full, (0,) * n): (full, (0,) * n)}
    result = 0
    for k in range(n - 1, -1, -1):
        best = None
        nxt = {}
        for rem, prof in states.values():
            for u in _bits(rem):
                seg = prof[u] >> (k + 1)
                if best is not None and seg > best:
                    continue
                if best is None or seg < best:
                    best, nxt = seg, {}
                rem2 = rem & ~(1 << u)
                p2 = list(prof)
                for v in _bits(rem2 & adj[u]):
                    p2[v] |= 1 << k
                key = (rem2, tuple(p2[v] for v in _bits(rem2)))
                if key not in nxt:
                    nxt[key] = (rem2, tuple(p2))
        result |= best << (k * (2 * n - k - 1) // 2)
        states = nxt
    return result


def canonical_form(G: LabeledGraph) -> CanonicalSignature:
    if G.n > MAX_CANON_N:
        raise ValueError(f"canonical_form supports n <= {MAX_CANON_N}")
    if G.n <= 6:
        classes = enumerate_iso_classes(G.n)
        return classes[int(class_index_table(G.n)[G.edges])].signature
    return CanonicalSignature(G.n, _canonical_search(G.n, G.adjacency()))


def are_isomorphic(G: LabeledGraph, H: LabeledGraph) -> bool:
    if G.n != H.n:
        raise ValueError(f"graphs on {G.n} and {H.n} vertices")
    if G.size != H.size or sorted(G.degrees()) != sorted(H.degrees()):
        return False
    return canonical_form(G) == canonical_form(H)


class IsoClass(NamedTuple):
    signature: CanonicalSignature
    representative: LabeledGraph


@lru_cache(maxsize=None)
def enumerate_iso_classes(n: int) -> tuple[IsoClass, ...]:
    """All isomorphism classes on n vertices, sorted by canonical bitmask.

    Up to n = 5 every labeled graph is canonized.  For n = 6, 7 the classes
    with k + 1 edges are grown from those with k edges by adding one edge,
    which reaches every class without touching all 2**m graphs.
    """
    if n > MAX_CLASS_N:
        raise ValueError(f"class enumeration supports n <= {MAX_CLASS_N}")
    m = num_edges(n)
    if n <= 5:
        sigs = set()
        for x in range(1 << m):
            sigs.add(_canonical_search(n, LabeledGraph(n, x).adjacency()))
    else:
        layer = {0}
        sigs = {0}
        for _ in range(m):
            grown = set()
            for x in layer:
                for c in range(m):
                    if not x >> c & 1:
                        y = LabeledGraph(n, x | 1 << c)
                        grown.add(_canonical_search(n, y.adjacency()))
            sigs |= grown
            layer = grown
    return tuple(IsoClass(CanonicalSignature(n, s), LabeledGraph(n, s)) for s in sorted(sigs))


@lru_cache(maxsize=None)
def permutation_edge_maps(n: int) -> np.ndarray:
    """Edge maps of all n! permutations, shape (n!, m)."""
    ix = edge_indexer(n)
    rows = []
    for img in permutations(range(1, n + 1)):
        rows.append([edge_index(n, img[i - 1], img[j - 1]) for i, j in ix.pairs])
    return np.array(rows, dtype=np.int64).reshape(len(rows), ix.m)


@lru_cache(maxsize=None)
def class_index_table(n: int) -> np.ndarray:
    """For every labeled graph on n vertices, the index of its class in enumerate_iso_classes(n)."""
    classes = enumerate_iso_classes(n)
    maps = permutation_edge_maps(n)
    table = np.full(1 << num_edges(n), -1, dtype=np.int32)
    for idx, cls in enumerate(classes):
        coords = cls.representative.coordinates()
        if coords:
            orbit = (np.int64(1) << maps[:, coords]).sum(axis=1)
        else:
            orbit = np.zeros(1, dtype=np.int64)
        table[orbit] = idx
    if (table < 0).any():
        raise RuntimeError("class enumeration missed some graphs")
    table.flags.writeable = False
    return table


def _class_positions(n: int, signatures: Iterable) -> list[int]:
    classes = enumerate_iso_classes(n)
    position = {c.signature.bitmask: k for k, c in enumerate(classes)}
    out = []
    for s in signatures:
        if isinstance(s, CanonicalSignature):
            if s.n != n:
                raise ValueError(f"foreign signature {s.hex} for n={s.n}, expected n={n}")
            s = s.bitmask
        if s not in position:
            raise ValueError(f"foreign signature {int(s):x}: not a canonical form for n={n}")
        out.append(position[s])
    return out


def property_from_class_set(n: int, signatures: Iterable) -> PropertyFunction:
    """The graph property that is 1 exactly on the given isomorphism classes."""
    picked = np.zeros(len(enumerate_iso_classes(n)), dtype=bool)
    picked[_class_positions(n, signatures)] = True
    return PropertyFunction(num_edges(n), table=picked[class_index_table(n)], n=n)


def _permuted_points(emap, lo: int, hi: int) -> np.ndarray:
    x = np.arange(lo, hi, dtype=np.int64)
    out = np.zeros_like(x)
    for c, t in enumerate(emap):
        out |= ((x >> c) & 1) << t
    return out


def is_graph_property(f: PropertyFunction) -> bool:
    """Invariance under (1 2) and (1 2 ... n), which generate S_n."""
    if f.n is None:
        raise ValueError("function has no vertex count")
    table = f.table
    if f.n <= 2:
        return True
    size = table.size
    for gen in (Permutation.transposition(f.n, 1, 2), Permutation.cycle(f.n)):
        emap = gen.edge_map()
        for lo in range(0, size, _CHUNK):
            hi = min(size, lo + _CHUNK)
            if not np.array_equal(table[lo:hi], table[_permuted_points(emap, lo, hi)]):
                return False
    return True


def is_monotone(f: PropertyFunction) -> bool:
    table = f.table
    for i in range(f.arity):
        t = table.reshape(-1, 2, 1 << i)
        if (t[:, 0, :] & ~t[:, 1, :]).any():
            return False
    return True


def class_set_to_json(n: int, signatures: Iterable) -> dict:
    sigs = sorted(s if isinstance(s, int) else s.bitmask for s in signatures)
    return {"n": n, "classes": [format(s, "x") for s in sigs]}


def write_class_set(path, n: int, signatures: Iterable) -> None:
    Path(path).write_text(json.dumps(class_set_to_json(n, signatures)) + "\n")


def read_class_set(path) -> tuple[int, list[CanonicalSignature]]:
    try:
        doc = json.loads(Path(path).read_text())
        n = doc["n"]
        raw = doc["classes"]
        if not isinstance(n, int) or not isinstance(raw, list):
            raise TypeError
        sigs = [CanonicalSignature(n, int(h, 16)) for h in raw]
    except (ValueError, KeyError, TypeError) as exc:
        raise MalformedInput(f"{path}: not a class-set file ({exc!r})") from exc
    if not 1 <= n <= MAX_CLASS_N:
        raise MalformedInput(f"{path}: n={n} outside 1..{MAX_CLASS_N}")
    try:
        _class_positions(n, sigs)
    except ValueError as exc:
        raise MalformedInput(f"{path}: {exc}") from exc
    return n, sigs

