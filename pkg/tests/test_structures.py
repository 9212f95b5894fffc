import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphsens.builtins import builtin
from graphsens.graphs import (LabeledGraph, enumerate_iso_classes, num_edges,
                              property_from_class_set)
from graphsens.hypercube import complement
from graphsens.structures import (INF, ISOLATED, TREE, classify_components, degree_truncation,
                                  is_minimal, is_tree_construction_sequence, isolated_vertices,
                                  minimal_below, minimal_graphs, positive_min_degree,
                                  positive_min_tree_size, tree_construction_sequence,
                                  tree_truncation)


def E(n, *pairs):
    return LabeledGraph.from_edges(n, pairs)


def submasks(mask):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def brute_largest(G, keep):
    """The largest subgraph satisfying ``keep``, checked to contain every other one."""
    good = [s for s in submasks(G.edges) if keep(LabeledGraph(G.n, s))]
    best = max(good, key=lambda s: bin(s).count("1"))
    assert all(s & ~best == 0 for s in good)
    return LabeledGraph(G.n, best)


def naive_minimal(f):
    ones = [x for x in range(1 << f.arity) if f(x)]
    return sorted(x for x in ones if not any(f(s) for s in submasks(x) if s != x))


def test_inf_sentinel():
    assert INF > 10 ** 9 and not INF < 3 and INF == INF and INF >= INF
    assert min(INF, 4) == 4
    with pytest.raises(TypeError):
        INF + 1


def test_isolated_vertices_examples():
    assert isolated_vertices(E(5, (1, 2), (1, 3), (2, 3))) == {4, 5}
    assert isolated_vertices(LabeledGraph.empty(4)) == {1, 2, 3, 4}
    assert isolated_vertices(E(4, (1, 2), (3, 4))) == set()


def test_classify_components_examples():
    rep = classify_components(E(5, (1, 2), (3, 4), (4, 5), (3, 5)))
    assert len(rep.trees) == 1 and rep.trees[0].edge_count == 1
    assert len(rep.cyclic) == 1 and rep.cyclic[0].vertices == {3, 4, 5}
    empty = classify_components(LabeledGraph.empty(4))
    assert len(empty.components) == 4 and all(c.kind == ISOLATED for c in empty.components)


def test_positive_min_degree_examples():
    assert positive_min_degree(E(4, (1, 2), (1, 3), (2, 3))) == 2
    assert positive_min_degree(LabeledGraph.empty(4)) is INF
    assert positive_min_degree(E(4, (1, 2))) == 1


def test_positive_min_tree_size_examples():
    assert positive_min_tree_size(E(5, (1, 2), (3, 4), (4, 5), (3, 5))) == 1
    assert positive_min_tree_size(E(6, (1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6))) is INF
    assert positive_min_tree_size(E(6, (1, 2), (2, 3), (4, 5), (5, 6), (4, 6))) == 2


def test_degree_truncation_examples():
    tri_pendant = E(5, (1, 2), (2, 3), (1, 3), (3, 4))
    assert degree_truncation(tri_pendant, 2) == E(5, (1, 2), (2, 3), (1, 3))
    # a path peels away completely once its leaves go
    assert degree_truncation(E(5, (1, 2), (2, 3), (3, 4), (4, 5)), 2).size == 0
    K4 = LabeledGraph.complete(4)
    assert degree_truncation(K4, 3) == K4


def test_tree_truncation_examples():
    assert tree_truncation(E(5, (1, 2), (3, 4), (4, 5), (3, 5)), 2) == E(5, (3, 4), (4, 5), (3, 5))
    G = E(6, (1, 2), (2, 3), (3, 4), (5, 6))
    assert tree_truncation(G, 3) == E(6, (1, 2), (2, 3), (3, 4))


@settings(max_examples=120, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(st.just(n),
                                                      st.integers(0, (1 << num_edges(n)) - 1))),
       st.integers(1, 4))
def test_truncations_are_largest_qualifying_subgraphs(args, k):
    n, mask = args
    G = LabeledGraph(n, mask)
    D = degree_truncation(G, k)
    T = tree_truncation(G, k)
    assert D == brute_largest(G, lambda H: positive_min_degree(H) >= k)
    assert T == brute_largest(G, lambda H: positive_min_tree_size(H) >= k)
    if positive_min_degree(G) >= k:
        assert D == G
    if positive_min_tree_size(G) >= k:
        assert T == G
    assert degree_truncation(G, 1) == G == tree_truncation(G, 1)


def test_truncation_rejects_bad_k():
    with pytest.raises(ValueError):
        degree_truncation(LabeledGraph.empty(3), 0)
    with pytest.raises(ValueError):
        tree_truncation(LabeledGraph.empty(3), 0)


def test_minimal_graphs_examples():
    mset = minimal_graphs(builtin("has-edge", 4))
    assert len(mset) == 6 and all(G.size == 1 for G in mset)
    assert mset.delta_prime == 1 and mset.c == 1
    tri = minimal_graphs(builtin("contains-triangle", 4))
    assert len(tri) == 4 and all(G.size == 3 for G in tri)
    assert tri.delta_prime == 2 and tri.c is INF
    assert json.loads(json.dumps(tri.to_json()))["c"] == "inf"


def test_minimal_graphs_preconditions():
    with pytest.raises(ValueError):
        minimal_graphs(builtin("has-isolated-vertex", 4))
    with pytest.raises(ValueError):
        minimal_graphs(builtin("perfect-matching", 5))


def test_minimal_graphs_match_subset_enumeration(rng):
    classes = enumerate_iso_classes(4)
    done = 0
    while done < 40:
        pick = [c.signature for c in classes if rng.random() < 0.5]
        f = property_from_class_set(4, pick)
        if not f.table.any() or f.table.all():
            continue
        if f(0):
            f = complement(f)
        mset = minimal_graphs(f)
        assert sorted(G.edges for G in mset) == naive_minimal(f)
        assert all(is_minimal(f, G) for G in mset)
        assert mset.delta_prime == min(positive_min_degree(G) for G in mset)
        done += 1


def test_minimal_below():
    f = builtin("contains-triangle", 5)
    K4 = E(5, (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))
    below = minimal_below(f, K4)
    assert below.size == 3 and below.issubset(K4) and is_minimal(f, below)
    assert minimal_below(f, E(5, (1, 2))) is None


def test_tree_construction_sequence_examples():
    star = E(4, (1, 2), (1, 3), (1, 4))
    seq = tree_construction_sequence(star)
    assert [T.size for T in seq] == [1, 2, 3] and seq[-1] == star
    assert is_tree_construction_sequence(seq, star)
    edge = E(4, (2, 3))
    assert tree_construction_sequence(edge) == (edge,)
    with pytest.raises(ValueError):
        tree_construction_sequence(E(4, (1, 2), (2, 3), (1, 3)))
    with pytest.raises(ValueError):
        tree_construction_sequence(E(4, (1, 2), (3, 4)))


def test_tree_construction_sequence_every_small_tree():
    # every labeled tree on 2..6 vertices, embedded in n = 6
    count = 0
    for x in range(1, 1 << num_edges(6)):
        G = LabeledGraph(6, x)
        rep = classify_components(G)
        if len(rep.trees) == 1 and not rep.cyclic:
            assert is_tree_construction_sequence(tree_construction_sequence(G), G)
            count += 1
    # Cayley: sum over k of C(6, k) * k^(k-2)
    assert count == 15 + 60 + 240 + 750 + 1296


def test_construction_sequence_checker_rejects_bad_sequences():
    path = E(4, (1, 2), (2, 3), (3, 4))
    skip = (E(4, (1, 2)), E(4, (1, 2), (3, 4)), path)
    assert not is_tree_construction_sequence(skip, path)
    assert not is_tree_construction_sequence((E(4, (1, 2)), E(4, (1, 2), (2, 3))), path)


def test_kind_constant():
    assert classify_components(E(3, (1, 2))).components[0].kind == TREE
