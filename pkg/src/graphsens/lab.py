"""Report-producing operations behind the property-lab command line."""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .builtins import REGISTRY, builtin
from .graphs import (class_index_table, class_set_to_json, enumerate_iso_classes,
                     is_graph_property, is_monotone, num_edges, property_from_class_set,
                     read_class_set)
from .hypercube import (MAX_BS_ARITY, PropertyFunction, complement, is_nontrivial,
                        max_block_sensitivity, max_sensitivity, read_truth_table,
                        sensitivity_counts)
from .structures import json_measure, minimal_graphs
from .witness import run_extraction

SCHEMA = 1
EXHAUSTIVE_MAX_N = 4
SAMPLE_MAX_N = 6
_BATCH = 512


def default_jobs() -> int:
    return int(os.environ.get("PROPERTY_LAB_JOBS", "1"))


def load_property(name: str | None = None, n: int | None = None, path=None) -> PropertyFunction:
    """Resolve a builtin name, a GPTT truth table or a class-set JSON file."""
    if path is not None:
        with open(path, "rb") as fh:
            head = fh.read(4)
        if head == b"GPTT":
            return read_truth_table(path)
        cn, sigs = read_class_set(path)
        return property_from_class_set(cn, sigs)
    if name is None or n is None:
        raise ValueError("need a property name with --n, or --input")
    return builtin(name, n)


def batch_max_sensitivity(tables: np.ndarray) -> np.ndarray:
    return sensitivity_counts(tables).max(axis=-1)


def _scan_chunk(n: int, picked: np.ndarray):
    """Histogram, minimum and first minimizing row of s(f) over class-subset rows."""
    lookup = class_index_table(n)
    s = np.concatenate([batch_max_sensitivity(picked[k:k + _BATCH][:, lookup])
                        for k in range(0, len(picked), _BATCH)])
    hist = np.bincount(s, minlength=num_edges(n) + 1)
    arg = int(np.argmin(s))
    return hist, int(s[arg]), arg


def _exhaustive_rows(k: int) -> np.ndarray:
    codes = np.arange(1, (1 << k) - 1, dtype=np.int64)
    return ((codes[:, None] >> np.arange(k)) & 1).astype(bool)


def _sample_rows(k: int, count: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    rows = rng.random((count, k)) < 0.5
    while True:
        bad = ~rows.any(axis=1) | rows.all(axis=1)
        if not bad.any():
            return rows
        rows[bad] = rng.random((int(bad.sum()), k)) < 0.5


@dataclass
class VerificationReport:
    n: int
    mode: str
    examined: int
    min_sensitivity: int
    min_property: dict
    histogram: dict
    bounds: dict
    seed: int | None = None
    jobs: int = 1
    wall_time: float = 0.0

    def to_json(self) -> dict:
        return {"schema": SCHEMA, "n": self.n, "mode": self.mode, "examined": self.examined,
                "min_sensitivity": self.min_sensitivity, "min_property": self.min_property,
                "histogram": {str(k): v for k, v in self.histogram.items()},
                "bounds": self.bounds, "seed": self.seed, "jobs": self.jobs,
                "wall_time": round(self.wall_time, 3)}

    def deterministic_part(self) -> dict:
        d = self.to_json()
        d.pop("wall_time")
        d.pop("jobs")
        return d

    @property
    def asserted_ok(self) -> bool:
        return all(b["status"] == "holds" for b in self.bounds.values() if b["asserted"])


def verify(n: int, mode: str = "exhaustive", seed: int = 0, count: int = 1000,
           jobs: int = 1) -> VerificationReport:
    """s(f) for every non-trivial property in the sweep, with bound checks."""
    t0 = time.perf_counter()
    classes = enumerate_iso_classes(n)
    k = len(classes)
    if mode == "exhaustive":
        if n > EXHAUSTIVE_MAX_N:
            raise ValueError(f"exhaustive verification needs n <= {EXHAUSTIVE_MAX_N}")
        rows = _exhaustive_rows(k)
        seed = None
    elif mode == "sample":
        if not 2 <= n <= SAMPLE_MAX_N:
            raise ValueError(f"sampling supports 2 <= n <= {SAMPLE_MAX_N}")
        if count < 1:
            raise ValueError("count must be positive")
        rows = _sample_rows(k, count, seed)
    else:
        raise ValueError(f"unknown mode {mode!r}")

    jobs = max(1, jobs)
    bounds_idx = np.linspace(0, len(rows), min(jobs, len(rows)) + 1).astype(int)
    chunks = [rows[a:b] for a, b in zip(bounds_idx, bounds_idx[1:])]
    if jobs == 1:
        results = [_scan_chunk(n, c) for c in chunks]
    else:
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_scan_chunk, [n] * len(chunks), chunks))

    hist = sum(r[0] for r in results)
    best, where = None, None
    for offset, (_, lo, arg) in zip(bounds_idx, results):
        if best is None or lo < best:
            best, where = lo, offset + arg
    witness = class_set_to_json(n, [classes[i].signature for i in np.flatnonzero(rows[where])])

    def check(bound, asserted):
        ok = best >= bound
        return {"bound": bound, "asserted": asserted, "status": "holds" if ok else "violated",
                "witness": None if ok else witness}

    bounds = {"turan_quarter": check(n // 4, True),
              "half": check(n // 2, False),
              "conjecture": check(n - 1, False)}
    return VerificationReport(n, mode, len(rows), best, witness,
                              {s: int(c) for s, c in enumerate(hist) if c}, bounds,
                              seed=seed, jobs=jobs, wall_time=time.perf_counter() - t0)


def _class_points(f: PropertyFunction):
    if f.n is not None and f.n <= 7 and is_graph_property(f):
        return [c.signature.bitmask for c in enumerate_iso_classes(f.n)]
    return None


def analyze(f: PropertyFunction) -> dict:
    if not f.is_table:
        raise ValueError("analysis needs a truth-table backed property (n <= 7)")
    out = {"schema": SCHEMA, "n": f.n, "arity": f.arity}
    graph_prop = is_graph_property(f) if f.n is not None else False
    out["graph_property"] = graph_prop
    s = max_sensitivity(f)
    out["s"] = s.value
    out["s_witness"] = format(s.witness.bits, "x")
    if f.arity <= MAX_BS_ARITY:
        out["bs"] = max_block_sensitivity(f, _class_points(f) if graph_prop else None)
    out["nontrivial"] = is_nontrivial(f)
    out["monotone"] = is_monotone(f)
    if out["nontrivial"] and f.n is not None:
        g = complement(f) if f.evaluate(0) else f
        mset = minimal_graphs(g)
        sizes = {}
        for G in mset:
            sizes[G.size] = sizes.get(G.size, 0) + 1
        out["minimal"] = {"complemented": g is not f, "count": len(mset),
                          "sizes": {str(k): v for k, v in sorted(sizes.items())},
                          "delta_prime": json_measure(mset.delta_prime),
                          "c": json_measure(mset.c),
                          "graphs": [G.hex for G in mset.graphs[:64]]}
    return out


def witness(f: PropertyFunction, short_circuit: bool = False) -> dict:
    ex = run_extraction(f, short_circuit=short_circuit)
    doc = ex.to_json()
    doc["max_sensitivity"] = max_sensitivity(f).value
    doc["attains_max"] = ex.report.verified_sensitivity == doc["max_sensitivity"]
    return doc


def classes(n: int) -> dict:
    cls = enumerate_iso_classes(n)
    return {"schema": SCHEMA, "n": n, "count": len(cls),
            "classes": [{"signature": c.signature.hex, "edges": c.representative.pairs()}
                        for c in cls]}


def monotone_check(n: int) -> dict:
    rows = []
    for name in sorted(REGISTRY):
        f = builtin(name, n)
        mono, nontriv = is_monotone(f), is_nontrivial(f)
        row = {"property": name, "monotone": mono, "nontrivial": nontriv}
        if mono and nontriv:
            s = max_sensitivity(f).value
            row.update(s=s, bound=n - 1, status="holds" if s >= n - 1 else "violated")
        else:
            row["status"] = "excluded"
        rows.append(row)
    return {"schema": SCHEMA, "n": n, "results": rows,
            "ok": all(r["status"] != "violated" for r in rows)}
