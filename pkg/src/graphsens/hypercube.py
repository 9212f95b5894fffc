"""Boolean functions on {0,1}^m and their exact sensitivity measures.

A point is the m-bit integer whose bit i is coordinate i, so a truth table is
indexed directly by points and full scans walk the table linearly.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

MAX_TABLE_ARITY = 28
MAX_BS_POINT_ARITY = 20
MAX_BS_ARITY = 16
DEFAULT_CACHE_SIZE = 1 << 22

TT_MAGIC = b"GPTT"


class MalformedInput(ValueError):
    """Raised when a serialized function or class set cannot be decoded."""


@dataclass(frozen=True, order=True)
class BooleanPoint:
    arity: int
    bits: int

    def __post_init__(self):
        if self.arity < 0:
            raise ValueError("arity must be non-negative")
        if self.bits < 0 or self.bits >> self.arity:
            raise ValueError(f"bits {self.bits:#x} do not fit in arity {self.arity}")

    def __int__(self):
        return self.bits

    def __str__(self):
        # coordinate 0 is printed last, like a binary literal
        return format(self.bits, f"0{self.arity}b") if self.arity else ""

    def flip(self, i: int) -> "BooleanPoint":
        return flip(self, i)


def flip(x: BooleanPoint, i: int) -> BooleanPoint:
    if not 0 <= i < x.arity:
        raise IndexError(f"coordinate {i} out of range for arity {x.arity}")
    return BooleanPoint(x.arity, x.bits ^ (1 << i))


@dataclass(frozen=True)
class SensitivityResult:
    value: int
    witness: BooleanPoint
    sensitive_coordinates: frozenset

    def __post_init__(self):
        if self.value != len(self.sensitive_coordinates):
            raise ValueError("value must equal the number of sensitive coordinates")


class PropertyFunction:
    """A boolean function on the edge hypercube (or any hypercube).

    Backed either by an explicit truth table (numpy bool array of length
    2**arity) or by a pure evaluation oracle taking the point as an int.
    ``n`` is the vertex count when the coordinates are the edges of K_n, and
    None for a plain boolean function.
    """

    __slots__ = ("arity", "n", "_table", "_oracle", "_eval", "cache_size")

    def __init__(self, arity: int, *, table=None, oracle: Callable[[int], int] | None = None,
                 n: int | None = None, cache_size: int = DEFAULT_CACHE_SIZE):
        if (table is None) == (oracle is None):
            raise ValueError("exactly one of table or oracle must be given")
        if n is not None and n * (n - 1) // 2 != arity:
            raise ValueError(f"arity {arity} is not C({n}, 2)")
        self.arity = arity
        self.n = n
        self.cache_size = cache_size
        self._table = None
        self._oracle = None
        if table is not None:
            if arity > MAX_TABLE_ARITY:
                raise ValueError(f"truth tables are limited to arity <= {MAX_TABLE_ARITY}")
            table = np.asarray(table, dtype=bool)
            if table.shape != (1 << arity,):
                raise ValueError(f"table must have length 2**{arity}")
            table = table.copy()
            table.flags.writeable = False
            self._table = table
            self._eval = None
        else:
            self._oracle = oracle
            raw = lambda x: 1 if oracle(x) else 0
            self._eval = lru_cache(maxsize=cache_size)(raw) if cache_size else raw

    @classmethod
    def from_table(cls, table, n: int | None = None) -> "PropertyFunction":
        table = np.asarray(table, dtype=bool)
        arity = int(table.size).bit_length() - 1
        return cls(arity, table=table, n=n)

    @classmethod
    def from_oracle(cls, arity: int, oracle: Callable[[int], int], n: int | None = None,
                    cache_size: int = DEFAULT_CACHE_SIZE) -> "PropertyFunction":
        return cls(arity, oracle=oracle, n=n, cache_size=cache_size)

    @classmethod
    def from_predicate(cls, arity: int, pred: Callable[[int], int],
                       n: int | None = None) -> "PropertyFunction":
        """Tabulate ``pred`` over all 2**arity points."""
        table = np.fromiter((bool(pred(x)) for x in range(1 << arity)), dtype=bool,
                            count=1 << arity)
        return cls(arity, table=table, n=n)

    @property
    def is_table(self) -> bool:
        return self._table is not None

    @property
    def table(self) -> np.ndarray:
        if self._table is None:
            raise ValueError("function is oracle-backed; no truth table")
        return self._table

    @property
    def has_cache(self) -> bool:
        return self._table is None and self.cache_size > 0

    def _point(self, x) -> int:
        if isinstance(x, BooleanPoint):
            if x.arity != self.arity:
                raise ValueError(f"point arity {x.arity} != function arity {self.arity}")
            return x.bits
        edges = getattr(x, "edges", None)
        if edges is not None:
            if self.n is not None and x.n != self.n:
                raise ValueError(f"graph on {x.n} vertices, function on {self.n}")
            x = edges
        x = int(x)
        if x < 0 or x >> self.arity:
            raise ValueError(f"point {x:#x} does not fit in arity {self.arity}")
        return x

    def evaluate(self, x) -> int:
        x = self._point(x)
        if self._table is not None:
            return int(self._table[x])
        return self._eval(x)

    __call__ = evaluate

    def values(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=np.int64)
        if self._table is not None:
            return self._table[points]
        return np.fromiter((self._eval(int(p)) for p in points.ravel()), dtype=bool,
                           count=points.size).reshape(points.shape)

    def full_table(self) -> np.ndarray:
        """The truth table; oracle functions are evaluated at every point."""
        if self._table is not None:
            return self._table
        if self.arity > MAX_TABLE_ARITY:
            raise ValueError("arity too large to tabulate")
        return self.values(np.arange(1 << self.arity))

    def to_table(self) -> "PropertyFunction":
        if self._table is not None:
            return self
        return PropertyFunction(self.arity, table=self.full_table(), n=self.n)

    def __repr__(self):
        mode = "table" if self._table is not None else "oracle"
        return f"PropertyFunction(arity={self.arity}, n={self.n}, {mode})"


def evaluate(f: PropertyFunction, x) -> int:
    return f.evaluate(x)


def sensitivity_at(f: PropertyFunction, x) -> SensitivityResult:
    bits = f._point(x)
    fx = f.evaluate(bits)
    sens = frozenset(i for i in range(f.arity) if f.evaluate(bits ^ (1 << i)) != fx)
    return SensitivityResult(len(sens), BooleanPoint(f.arity, bits), sens)


def _halves(arr: np.ndarray, i: int) -> np.ndarray:
    # view the last axis as (..., high bits, bit i, low bits)
    return arr.reshape(arr.shape[:-1] + (-1, 2, 1 << i))


def sensitivity_counts(table: np.ndarray) -> np.ndarray:
    """s(f, x) for every point, for one table or a batch of tables on the last axis."""
    table = np.asarray(table, dtype=bool)
    m = table.shape[-1].bit_length() - 1
    counts = np.zeros(table.shape, dtype=np.uint8)
    for i in range(m):
        t = _halves(table, i)
        d = t[..., 0, :] != t[..., 1, :]
        c = _halves(counts, i)
        c[..., 0, :] += d
        c[..., 1, :] += d
    return counts


def max_sensitivity(f: PropertyFunction, candidates: Iterable | None = None) -> SensitivityResult:
    """s(f) with the smallest attaining point as witness.

    Table-backed functions are scanned in full; an oracle function needs an
    explicit candidate set and the result is the maximum over it.
    """
    if candidates is None:
        if not f.is_table:
            raise ValueError("oracle-backed function needs an explicit candidate set")
        counts = sensitivity_counts(f.table)
        return sensitivity_at(f, int(np.argmax(counts)))
    best = None
    for x in candidates:
        r = sensitivity_at(f, x)
        if best is None or r.value > best.value:
            best = r
    if best is None:
        raise ValueError("empty candidate set")
    return best


def up_closure(indicator: np.ndarray) -> np.ndarray:
    """Mark every point that has a marked point weakly below it (OR zeta transform)."""
    below = np.array(indicator, dtype=bool, copy=True)
    m = below.size.bit_length() - 1
    for i in range(m):
        b = _halves(below, i)
        b[:, 1, :] |= b[:, 0, :]
    return below


def minimal_points(indicator: np.ndarray) -> np.ndarray:
    """Points that are marked while none of their proper subsets is."""
    indicator = np.asarray(indicator, dtype=bool)
    below = up_closure(indicator)
    strictly = np.zeros_like(below)
    m = below.size.bit_length() - 1
    for i in range(m):
        s = _halves(strictly, i)
        s[:, 1, :] |= _halves(below, i)[:, 0, :]
    return indicator & ~strictly


def minimal_sensitive_blocks(f: PropertyFunction, x) -> list[int]:
    """Inclusion-minimal blocks B with f(x ^ B) != f(x), as bitmasks."""
    bits = f._point(x)
    if f.arity > MAX_BS_POINT_ARITY:
        raise ValueError(f"exact block sensitivity limited to arity <= {MAX_BS_POINT_ARITY}")
    table = f.full_table()
    flipped = table[np.arange(1 << f.arity) ^ bits]
    sensitive = flipped != table[bits]
    return np.flatnonzero(minimal_points(sensitive)).tolist()


def max_disjoint_packing(blocks: list[int]) -> int:
    """Largest number of pairwise disjoint blocks (exact, memoized on the free mask)."""
    if not blocks:
        return 0
    universe = 0
    for b in blocks:
        universe |= b
    containing: dict[int, list[int]] = {}
    for b in blocks:
        rest = b
        while rest:
            low = rest & -rest
            containing.setdefault(low, []).append(b)
            rest ^= low

    @lru_cache(maxsize=None)
    def best(free: int) -> int:
        if not free:
            return 0
        low = free & -free
        result = best(free ^ low)
        bound = bin(free).count("1")
        for b in containing.get(low, ()):
            if b & free == b:
                result = max(result, 1 + best(free & ~b))
                if result == bound:
                    break
        return result

    return best(universe)


def block_sensitivity_at(f: PropertyFunction, x) -> int:
    return max_disjoint_packing(minimal_sensitive_blocks(f, x))


def max_block_sensitivity(f: PropertyFunction, points: Iterable | None = None) -> int:
    """bs(f), the maximum of bs(f, x) over all points (or over ``points``).

    Restricting ``points`` is exact whenever it meets every orbit of a symmetry
    of f, e.g. isomorphism-class representatives for a graph property.
    """
    if not f.is_table:
        raise ValueError("max_block_sensitivity needs a truth table")
    if f.arity > MAX_BS_ARITY:
        raise ValueError(f"exact block sensitivity limited to arity <= {MAX_BS_ARITY}")
    if points is None:
        points = range(1 << f.arity)
    best = 0
    for x in points:
        best = max(best, block_sensitivity_at(f, x))
        if best == f.arity:
            break
    return best


def complement(f: PropertyFunction) -> PropertyFunction:
    if f.is_table:
        return PropertyFunction(f.arity, table=~f.table, n=f.n)
    g = f._eval
    return PropertyFunction(f.arity, oracle=lambda x: 1 - g(x), n=f.n, cache_size=f.cache_size)


def is_nontrivial(f: PropertyFunction) -> bool:
    t = f.table
    return bool(t.any() and not t.all())


def write_truth_table(path, f: PropertyFunction) -> None:
    """GPTT: magic, little-endian u32 n and m, then the table packed LSB-first."""
    table = f.full_table()
    payload = np.packbits(table, bitorder="little").tobytes()
    with open(path, "wb") as fh:
        fh.write(TT_MAGIC + struct.pack("<II", f.n or 0, f.arity) + payload)


def read_truth_table(path) -> PropertyFunction:
    data = Path(path).read_bytes()
    if len(data) < 12 or data[:4] != TT_MAGIC:
        raise MalformedInput(f"{path}: not a GPTT truth table")
    n, m = struct.unpack("<II", data[4:12])
    if m > MAX_TABLE_ARITY:
        raise MalformedInput(f"{path}: arity {m} exceeds {MAX_TABLE_ARITY}")
    if n and n * (n - 1) // 2 != m:
        raise MalformedInput(f"{path}: m={m} inconsistent with n={n}")
    nbytes = ((1 << m) + 7) // 8
    if len(data) != 12 + nbytes:
        raise MalformedInput(f"{path}: expected {nbytes} table bytes, found {len(data) - 12}")
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8, offset=12), bitorder="little")
    return PropertyFunction(m, table=bits[: 1 << m].astype(bool), n=n or None)
