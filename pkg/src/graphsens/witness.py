"""Constructive extraction of high-sensitivity points for a graph property.

The lower-bound argument runs by contradiction from "s(f) < floor(n/2)".  Here
every counting step becomes a harvest: a concrete point, the coordinates the
argument says must be sensitive there (each justified by an isomorphism that is
checked before the coordinate is claimed), and the sensitivity measured by
direct evaluation.  The best verified point is reported; nothing is asserted.

Each procedure records a Trace of the graph H it manipulates so the run can be
replayed and audited.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import ceil
from typing import Iterable, NamedTuple

from .graphs import (LabeledGraph, Permutation, apply_permutation, are_isomorphic,
                     edge_index, edge_unindex, is_graph_property)
from .hypercube import PropertyFunction, complement, is_nontrivial, max_sensitivity, sensitivity_at
from .structures import (INF, MinimalGraphSet, classify_components, isolated_vertices,
                         is_minimal, json_measure, minimal_below, minimal_graphs,
                         positive_min_degree, positive_min_tree_size, tree_construction_sequence)

log = logging.getLogger(__name__)

PENDANT = "pendant-edge"
CASE1 = "case1"
CASE2 = "case2"
CASE3 = "case3"
DIRECT = "minimal-graph"

WITNESS_FOUND = "witness-found"
INCONSISTENCY = "inconsistency"
INAPPLICABLE = "inapplicable"


@dataclass(frozen=True)
class TraceStep:
    action: str
    edge: tuple | None
    graph: LabeledGraph
    value: int
    note: str = ""

    def to_json(self) -> dict:
        return {"action": self.action, "edge": list(self.edge) if self.edge else None,
                "graph": self.graph.hex, "f": self.value, "note": self.note}


@dataclass(frozen=True)
class WitnessReport:
    point: LabeledGraph
    claimed: frozenset
    verified_sensitivity: int
    sensitive: frozenset
    method: str

    @property
    def false_claims(self) -> frozenset:
        return self.claimed - self.sensitive

    @property
    def sound(self) -> bool:
        return not self.false_claims

    def to_json(self) -> dict:
        return {"point": self.point.hex, "claimed": sorted(self.claimed),
                "verified_sensitivity": self.verified_sensitivity, "method": self.method}


@dataclass
class Trace:
    case: str
    steps: list = field(default_factory=list)
    harvested: list = field(default_factory=list)
    outcome: str = INAPPLICABLE
    reason: str = ""

    def to_json(self) -> dict:
        return {"case": self.case, "steps": [s.to_json() for s in self.steps],
                "harvests": [h.to_json() for h in self.harvested],
                "outcome": self.outcome, "reason": self.reason}


def replay(trace: Trace, f: PropertyFunction) -> list[int]:
    """Re-run the recorded actions; return the indices of steps that disagree."""
    bad = []
    H = None
    for k, step in enumerate(trace.steps):
        if step.action == "init":
            H = step.graph
        elif step.action == "add-edge":
            if H.has_edge(*step.edge):
                bad.append(k)
            H = H.add(*step.edge)
        elif step.action == "remove-edge":
            if not H.has_edge(*step.edge):
                bad.append(k)
            H = H.remove(*step.edge)
        if H != step.graph or f.evaluate(H) != step.value:
            bad.append(k)
    return bad


class _Recorder:
    def __init__(self, f: PropertyFunction, case: str, G: LabeledGraph, note: str = ""):
        self.f = f
        self.trace = Trace(case)
        self.init(G, note)

    def _step(self, action, edge, note=""):
        self.trace.steps.append(TraceStep(action, edge, self.H, self.f.evaluate(self.H), note))
        return self.trace.steps[-1].value

    def init(self, G: LabeledGraph, note: str = "") -> int:
        self.H = G
        return self._step("init", None, note)

    def add(self, i: int, j: int, note: str = "") -> int:
        self.H = self.H.add(i, j)
        return self._step("add-edge", (min(i, j), max(i, j)), note)

    def remove(self, i: int, j: int, note: str = "") -> int:
        self.H = self.H.remove(i, j)
        return self._step("remove-edge", (min(i, j), max(i, j)), note)

    def check(self, note: str) -> None:
        self._step("lemma-check", None, note)

    def harvest(self, point: LabeledGraph, claimed: Iterable[int], note: str = "") -> WitnessReport:
        s = sensitivity_at(self.f, point)
        report = WitnessReport(point, frozenset(claimed), s.value, s.sensitive_coordinates,
                               self.trace.case)
        self.trace.harvested.append(report)
        self._step("harvest", None,
                   f"at {point.hex}: claimed {len(report.claimed)}, verified {s.value}. {note}".strip())
        if not report.sound:
            log.warning("%s: false claims %s at %s", self.trace.case,
                        sorted(report.false_claims), point.hex)
        return report

    def finish(self, outcome: str, reason: str = "") -> Trace:
        self.trace.outcome = outcome
        self.trace.reason = reason
        return self.trace


def isomorphic_family(base: LabeledGraph, target: LabeledGraph, pairs) -> set[int]:
    """Coordinates c among ``pairs`` for which toggling c turns base into a copy of target.

    When f(base) != f(target) each such coordinate is sensitive at base.
    """
    out = set()
    for i, j in pairs:
        c = edge_index(base.n, i, j)
        if are_isomorphic(base.toggle(c), target):
            out.add(c)
    return out


def _removable_edge(f: PropertyFunction, H: LabeledGraph, G: LabeledGraph):
    """First edge of G still in H whose removal keeps f(H)."""
    fh = f.evaluate(H)
    for c in LabeledGraph(H.n, H.edges & G.edges).coordinates():
        if f.evaluate(H.edges ^ (1 << c)) == fh:
            return edge_unindex(H.n, c)
    return None


def _descend(rec: _Recorder, G: LabeledGraph) -> Trace:
    """The algorithm ran out without f(H) dropping: take a minimal graph below H."""
    below = minimal_below(rec.f, rec.H)
    if below is not None and below.edges != G.edges and below.issubset(G):
        rec.check(f"minimal graph {below.hex} with f = 1 lies strictly inside G = {G.hex}")
        return rec.finish(INCONSISTENCY, f"proper subgraph {below.hex} of a minimal graph has f = 1")
    return rec.finish(INAPPLICABLE, "ran to completion without a value change or contradiction")


def _check_oracle(f: PropertyFunction):
    if not f.is_table and not f.has_cache:
        raise ValueError("oracle-backed f needs a memo cache for witness extraction")


def _check_minimal(f: PropertyFunction, G: LabeledGraph):
    _check_oracle(f)
    if f.n != G.n:
        raise ValueError("graph and function disagree on n")
    if f.evaluate(0):
        raise ValueError("f(empty graph) must be 0")
    if not is_minimal(f, G):
        raise ValueError(f"{G} is not a minimal graph of f")


def pendant_edge_lemma(f: PropertyFunction, G: LabeledGraph, v: int) -> Trace:
    """Either f(G) = f(G - e) for the pendant edge e at v, or G - e has sensitivity >= |I(G)| + 1."""
    if G.degree(v) != 1:
        raise ValueError(f"vertex {v} has degree {G.degree(v)}, not 1")
    u = G.neighbors(v)[0]
    iso = sorted(isolated_vertices(G))
    rec = _Recorder(f, PENDANT, G)
    before = f.evaluate(G)
    after = rec.remove(v, u, "drop the pendant edge")
    if before == after:
        rec.check("equal-value branch: f(G) = f(G - e)")
        return rec.finish(INAPPLICABLE, "equal-value branch")
    point = rec.H
    claimed = isomorphic_family(point, G, [(v, u)] + [(u, w) for w in iso])
    h = rec.harvest(point, claimed, "pendant edge plus re-attachments to isolated vertices")
    rec.check(f"sensitivity {h.verified_sensitivity} vs |I(G)| + 1 = {len(iso) + 1}")
    return rec.finish(WITNESS_FOUND)


def _table_measures(f: PropertyFunction, minimal: MinimalGraphSet | None):
    if minimal is not None:
        return minimal
    if f.is_table:
        return minimal_graphs(f)
    return None


def run_case1(f: PropertyFunction, G: LabeledGraph, minimal: MinimalGraphSet | None = None) -> Trace:
    """Minimal graphs have no pendant vertices: grow edges from u_i to the isolated vertices."""
    _check_minimal(f, G)
    k = positive_min_degree(G)
    if k is INF or k < 2:
        raise ValueError(f"case 1 needs positive minimum degree >= 2, got {k}")
    minimal = _table_measures(f, minimal)
    if minimal is not None and minimal.delta_prime != k:
        raise ValueError(f"G has positive minimum degree {k} but f has {minimal.delta_prime}")

    degs = G.degrees()
    v = degs.index(k) + 1
    u, *us = sorted(G.neighbors(v))
    iso = sorted(isolated_vertices(G))
    m = len(iso)
    rec = _Recorder(f, CASE1, G, f"v={v}, u={u}, u_i={us}, isolated={iso}")

    for i, ui in enumerate(us, 1):
        for j, vj in enumerate(iso, 1):
            e = _removable_edge(f, rec.H, G)
            if e is not None:
                rec.remove(*e, "an edge of G is removable without changing f")
                return _descend(rec, G)
            before = rec.H
            if rec.add(ui, vj, f"i={i}, j={j}"):
                continue
            after = rec.H
            claimed = set(LabeledGraph(G.n, G.edges & before.edges).coordinates())
            claimed |= isomorphic_family(before, after, [(ui, iso[l]) for l in range(j - 1, m)])
            rec.harvest(before, claimed, f"H- : |G| edges plus {m - j + 1} u_i-v_l additions")
            back = isomorphic_family(after, before, [(ui, iso[l]) for l in range(j)])
            rec.harvest(after, back, f"H : {j} u_i-v_l removals")
            return rec.finish(WITNESS_FOUND, f"f dropped adding {{{ui},{vj}}}")

    before = rec.H
    if rec.remove(v, u, "final removal of {v,u}"):
        return _descend(rec, G)
    claimed = isomorphic_family(rec.H, before, [(v, u)] + [(w, u) for w in iso])
    rec.harvest(rec.H, claimed, f"{{v,u}} plus {m} twins v_i of v")
    return rec.finish(WITNESS_FOUND, "f dropped at the final removal")


def run_case2(f: PropertyFunction, G: LabeledGraph, minimal: MinimalGraphSet | None = None) -> Trace:
    """A smallest tree component T (>= 2 edges): build a copy of T on isolated vertices."""
    _check_minimal(f, G)
    if positive_min_degree(G) != 1:
        raise ValueError("case 2 needs positive minimum degree 1")
    c = positive_min_tree_size(G)
    if c is not INF and c < 2:
        raise ValueError("G has a single-edge component; that is case 3")
    minimal = _table_measures(f, minimal)
    if minimal is not None and c is not INF and minimal.c != c:
        raise ValueError(f"G has tree size {c} but f has {minimal.c}")

    rec = _Recorder(f, CASE2, G)
    if c is INF:
        rec.check("G has no tree component; only the pendant-edge argument applies")
        return rec.finish(INAPPLICABLE, "no tree component")
    iso = sorted(isolated_vertices(G))
    m = len(iso)
    if m < c:
        rec.check(f"|I(G)| = {m} < c(G) = {c}")
        return rec.finish(INAPPLICABLE, "insufficient isolated vertices")

    comp = min((t for t in classify_components(G).trees if t.edge_count == c),
               key=lambda t: min(t.vertices))
    T = G.induced(comp.vertices)
    seq = tree_construction_sequence(T)
    rec.check(f"tree T on {sorted(comp.vertices)} with {c} edges; copy goes on {iso[:c]}")

    for i in range(1, c):
        e = _removable_edge(f, rec.H, G)
        if e is not None:
            rec.remove(*e, "an edge of G is removable without changing f")
            return _descend(rec, G)
        new = iso[i]
        for j in range(1, i + 1):
            trial = rec.H.add(new, iso[j - 1])
            if are_isomorphic(trial.induced(iso[: i + 1]), seq[i - 1]):
                break
        else:
            raise RuntimeError("no attachment reproduces the construction sequence")
        vj = iso[j - 1]
        before = rec.H
        if rec.add(new, vj, f"i={i}: copy of T({i})"):
            continue
        claimed = set(LabeledGraph(G.n, G.edges & before.edges).coordinates())
        claimed |= isomorphic_family(before, rec.H, [(vj, iso[l]) for l in range(i, m)])
        rec.harvest(before, claimed, f"H- : |G| edges plus {m - i} v_j-v_l additions")
        return rec.finish(WITNESS_FOUND, f"f dropped adding {{{new},{vj}}}")

    # remove a leaf u of T so that what is left matches T(c-1)
    for u in sorted(comp.vertices):
        if G.degree(u) == 1:
            v = G.neighbors(u)[0]
            if are_isomorphic(T.remove(u, v), seq[c - 2]):
                break
    else:
        raise RuntimeError("no leaf of T leaves a copy of T(c-1)")
    before = rec.H
    if rec.remove(u, v, "final removal inside T"):
        return _descend(rec, G)
    H = rec.H
    free = sorted(isolated_vertices(H))
    claimed = isomorphic_family(H, before, [(v, w) for w in free])
    twin = next((x for x in iso[:c] if are_isomorphic(H.add(x, free[0]), before)), None)
    if twin is not None:
        claimed |= isomorphic_family(H, before, [(twin, w) for w in free])
    rec.harvest(H, claimed, f"two attachment points times |I(H)| = {len(free)}")
    return rec.finish(WITNESS_FOUND, "f dropped at the final removal")


def run_case3(f: PropertyFunction, G: LabeledGraph, minimal: MinimalGraphSet | None = None) -> Trace:
    """Isolated edges: two edge-addition chains ending in isomorphic graphs H and H'.

    No graph-property check is made here, so a function that is not
    isomorphism invariant can reach the H vs H' comparison.
    """
    _check_minimal(f, G)
    if positive_min_tree_size(G) != 1:
        raise ValueError("case 3 needs a single-edge component")
    n = G.n
    singles = sorted(min(c.vertices) for c in classify_components(G).trees if c.edge_count == 1)
    E = [(a, G.neighbors(a)[0]) for a in singles]  # (v_i, u_i)
    m = len(E)
    iso = sorted(isolated_vertices(G))
    r = len(iso)
    top = ceil(n / 6) + 1
    rec = _Recorder(f, CASE3, G, f"{m} single-edge components, {r} isolated vertices")
    rec.check(f"isolated vertices r = {r} (need >= 2)")
    if m < top:
        return rec.finish(INAPPLICABLE, f"needs {top} single-edge components, found {m}")
    if r < 2:
        return rec.finish(INAPPLICABLE, "fewer than two isolated vertices")
    v = [a for a, _ in E]
    u = [b for _, b in E]

    # removing an isolated edge frees r + 2 vertices; any edge among them restores a copy of G
    rec.remove(v[0], u[0], "drop E_1")
    Gm = rec.H
    free = sorted(isolated_vertices(Gm))
    fam = isomorphic_family(Gm, G, [(a, b) for k, a in enumerate(free) for b in free[k + 1:]])
    rec.harvest(Gm, fam, f"C(r+2,2) = {len(free) * (len(free) - 1) // 2} pairs of free vertices")

    # chain towards H
    rec.init(G, "chain to H")
    vals = [f.evaluate(G)]
    graphs = [G]
    rec.add(u[0], u[1], "G_2")
    for i in range(3, top + 1):
        vals.append(f.evaluate(rec.H))
        graphs.append(rec.H)
        rec.add(v[0], v[i - 1], f"G_{i}")
    vals.append(f.evaluate(rec.H))
    graphs.append(rec.H)
    H = rec.H
    flip = next((k for k in range(1, len(vals)) if vals[k] != vals[k - 1]), None)
    if flip == 1:
        fam = isomorphic_family(G, graphs[1], [(u[a], u[b]) for a in range(m) for b in range(a + 1, m)])
        rec.harvest(G, fam, "G is sensitive to every u_i-u_j edge")
    elif flip is not None:
        i = flip + 1
        pre, post = graphs[flip - 1], graphs[flip]
        pairs = [(v[0], v[j - 1]) for j in range(i, m + 1)] + [(v[0], u[j - 1]) for j in range(i, m + 1)]
        rec.harvest(pre, isomorphic_family(pre, post, pairs), f"G_{i - 1}: 2(m - i + 1) family")

    # chain towards H'
    rec.init(G, "chain to H'")
    rec.remove(u[0], v[0], "G'_1")
    vals = [f.evaluate(rec.H)]
    graphs = [rec.H]
    for i in range(2, top + 1):
        rec.add(v[0], v[i - 1], f"G'_{i}")
        vals.append(f.evaluate(rec.H))
        graphs.append(rec.H)
    rec.add(u[0], u[1], "H'")
    vals.append(f.evaluate(rec.H))
    graphs.append(rec.H)
    Hp = rec.H
    flip = next((k for k in range(1, len(vals)) if vals[k] != vals[k - 1]), None)
    if flip is not None and flip < len(vals) - 1:
        i = flip + 1
        pre, post = graphs[flip - 1], graphs[flip]
        pairs = [(v[0], v[j - 1]) for j in range(i, m + 1)] + [(v[0], u[j - 1]) for j in range(i, m + 1)]
        rec.harvest(pre, isomorphic_family(pre, post, pairs), f"G'_{i - 1}: 2(m - i + 1) family")
    elif flip is not None:
        pre = graphs[-2]
        ends = [u[0], iso[0], iso[1]]
        pairs = [(x, u[j - 1]) for x in ends for j in range(2, top + 1)]
        rec.harvest(pre, isomorphic_family(pre, Hp, pairs), f"H'-: 3 x {top - 1} family")

    pi = Permutation.transposition(n, v[1], u[0])
    explicit = apply_permutation(Hp, pi) == H
    rec.check(f"swap ({v[1]} {u[0]}) maps H' onto H: {explicit}; f(H) = {f.evaluate(H)}, "
              f"f(H') = {f.evaluate(Hp)}")
    if not (explicit and are_isomorphic(H, Hp)):
        return rec.finish(INAPPLICABLE, "H and H' are not isomorphic")
    if f.evaluate(H) != f.evaluate(Hp):
        return rec.finish(INCONSISTENCY, "f separates the isomorphic graphs H and H'")
    return rec.finish(WITNESS_FOUND if rec.trace.harvested else INAPPLICABLE)


@dataclass
class Extraction:
    report: WitnessReport
    traces: list
    minimal: MinimalGraphSet
    complemented: bool
    case: str
    chosen: LabeledGraph | None

    @property
    def harvests(self) -> list[WitnessReport]:
        return [h for t in self.traces for h in t.harvested]

    def to_json(self) -> dict:
        return {"schema": 1, "case": self.case, "complemented": self.complemented,
                "minimal": self.minimal.to_json(),
                "chosen": self.chosen.hex if self.chosen is not None else None,
                "witness": self.report.to_json(),
                "traces": [t.to_json() for t in self.traces]}


def _pick(graphs, pred) -> LabeledGraph | None:
    hits = [G for G in graphs if pred(G)]
    return min(hits, key=lambda G: G.edges) if hits else None


def run_extraction(f: PropertyFunction, short_circuit: bool = False) -> Extraction:
    """Harvest witnesses from every minimal graph, then run the case matching (delta'(f), c(f)).

    With ``short_circuit`` the case analysis is skipped when some minimal graph
    already has at least floor(n/2) edges.
    """
    if not f.is_table:
        raise ValueError("witness extraction needs a truth table")
    if not is_nontrivial(f):
        raise ValueError("f is constant")
    if not is_graph_property(f):
        raise ValueError("f is not invariant under vertex relabeling")
    complemented = bool(f.evaluate(0))
    g = complement(f) if complemented else f
    mset = minimal_graphs(g)
    n = g.n

    direct = _Recorder(g, DIRECT, mset.graphs[0])
    for k, G in enumerate(mset.graphs):
        if k:
            direct.init(G)
        direct.harvest(G, G.coordinates(), "a minimal graph is sensitive on each of its edges")
    direct.finish(WITNESS_FOUND)
    traces = [direct.trace]

    case, chosen = DIRECT, None
    if not (short_circuit and mset.max_size >= n // 2):
        if mset.delta_prime >= 2:
            case = CASE1
            chosen = _pick(mset, lambda G: positive_min_degree(G) == mset.delta_prime)
            traces.append(run_case1(g, chosen, mset))
        else:
            if mset.c == 1:
                case = CASE3
                chosen = _pick(mset, lambda G: positive_min_tree_size(G) == 1)
            else:
                case = CASE2
                chosen = _pick(mset, lambda G: positive_min_degree(G) == 1
                               and positive_min_tree_size(G) == mset.c)
                if chosen is None:
                    chosen = _pick(mset, lambda G: positive_min_degree(G) == 1)
            leaf = chosen.degrees().index(1) + 1
            traces.append(pendant_edge_lemma(g, chosen, leaf))
            traces.append((run_case3 if case == CASE3 else run_case2)(g, chosen, mset))

    harvests = [h for t in traces for h in t.harvested]
    best = max(harvests, key=lambda h: h.verified_sensitivity)
    return Extraction(best, traces, mset, complemented, case, chosen)


def extract_witness(f: PropertyFunction) -> WitnessReport:
    return run_extraction(f).report


class InequalityCheck(NamedTuple):
    name: str
    holds: bool
    values: dict


def check_structural_inequalities(f: PropertyFunction, G: LabeledGraph) -> list[InequalityCheck]:
    """Evaluate the finite inequalities of the lower-bound argument at a minimal graph G.

    Quantities that the argument only bounds (s(f, G), s(f, G - e), s(f)) are
    measured directly.  All arithmetic is over integers.
    """
    if not is_minimal(f, G):
        raise ValueError(f"{G} is not a minimal graph of f")
    n = G.n
    rep = classify_components(G)
    size = G.size
    iso = len(isolated_vertices(G))
    r = len(rep.trees)
    delta = positive_min_degree(G)
    c = positive_min_tree_size(G)
    s_at = sensitivity_at(f, G).value
    base = {"n": n, "edges": size, "isolated": iso, "trees": r, "cyclic": len(rep.cyclic),
            "delta_prime": json_measure(delta), "c": json_measure(c), "s_at_G": s_at}
    if f.is_table:
        base["s_f"] = max_sensitivity(f).value
    out = [
        InequalityCheck("edges-le-sensitivity", size <= s_at, dict(base)),
        InequalityCheck("edges-below-half-n", size < n // 2, dict(base, half=n // 2)),
        InequalityCheck("vertex-count-with-trees", iso + size >= n - r, dict(base)),
    ]
    if delta is not INF and delta >= 2:
        out.append(InequalityCheck("vertex-count-no-trees", size + iso >= n, dict(base)))
    if r >= 1:
        out.append(InequalityCheck("pigeonhole-tree-size", c * r <= size, dict(base)))
    if delta == 1:
        v = G.degrees().index(1) + 1
        s_pend = sensitivity_at(f, G.remove(v, G.neighbors(v)[0])).value
        out.append(InequalityCheck("pendant-edge", iso + 1 <= s_pend,
                                   dict(base, s_at_G_minus_e=s_pend)))
    if r >= 1 and c is not INF and c >= 2:
        out.append(InequalityCheck("case2-loop", n >= 2 * (n - r - c + 2), dict(base)))
        out.append(InequalityCheck("case2-final",
                                   n * r > 4 * r * (n - r + 1) - 2 * (n - 2) * (r + 1), dict(base)))
    return out
