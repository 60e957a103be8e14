import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from pachgap.errors import CapacityError, ParameterError
from pachgap.extraction import (MultipartiteHypergraph, extract_box, format_hypergraph, largest_extracted,
                                max_box_exact, parse_hypergraph)
from pachgap.sweep import random_hypergraph


def complete(n, k=3):
    classes = tuple(tuple(f"{chr(97 + i)}{j}" for j in range(n)) for i in range(k))
    return MultipartiteHypergraph(classes, frozenset(product(range(n), repeat=k)))


def test_complete_instances():
    for n in (1, 2, 3, 4):
        F = complete(n)
        r = extract_box(F, n)
        assert r.m == n and r.box == tuple(tuple(range(n)) for _ in range(3))
    assert max_box_exact(complete(3)).m == 3


def test_empty_and_single_edge():
    F = MultipartiteHypergraph((("a", "b"), ("c", "d"), ("e", "f")), frozenset())
    assert extract_box(F, 1).m == 0
    assert max_box_exact(F).m == 0
    one = MultipartiteHypergraph(F.classes, frozenset({(1, 0, 1)}))
    assert max_box_exact(one).m == 1
    assert max_box_exact(one).witness == (("b",), ("c",), ("f",))


def test_bad_inputs():
    with pytest.raises(ParameterError):
        MultipartiteHypergraph((("a",), ("b",)), frozenset({(0, 1)}))
    with pytest.raises(ParameterError):
        extract_box(complete(2), 0)
    with pytest.raises(CapacityError):
        max_box_exact(complete(7))


def test_dense_random_against_oracle():
    rng = random.Random(5)
    for _ in range(20):
        F = random_hypergraph(rng, [4, 4, 4], 0.9)
        exact = max_box_exact(F).m
        assert exact == oracles.max_box(F.sizes, F.edges)
        for m in range(1, 5):
            r = extract_box(F, m)
            if r.m:
                assert F.is_complete_box(r.box) and m <= exact


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.floats(0.2, 1.0))
def test_monotone_under_deletion(seed, density):
    rng = random.Random(seed)
    F = random_hypergraph(rng, [3, 3, 3], density)
    m = max_box_exact(F).m
    assert m == oracles.max_box(F.sizes, F.edges)
    drop = [e for e in F.edges if rng.random() < 0.3]
    assert max_box_exact(F.delete_edges(drop)).m <= m
    assert largest_extracted(F).m <= m


def test_two_classes():
    # K_{2,2} inside a bipartite graph
    F = MultipartiteHypergraph((("a", "b", "c"), ("x", "y", "z")),
                               frozenset({(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)}))
    assert extract_box(F, 2).witness == (("a", "b"), ("x", "y"))
    assert max_box_exact(F).m == 2


def test_text_roundtrip():
    text = "classes: a b | c d | e f\n# one edge\na c e\nb d f\n"
    F = parse_hypergraph(text)
    assert F.sizes == (2, 2, 2) and len(F.edges) == 2
    assert parse_hypergraph(format_hypergraph(F)).edges == F.edges
    with pytest.raises(ParameterError):
        parse_hypergraph("a c e\n")
    with pytest.raises(ParameterError):
        parse_hypergraph("classes: a | b\na q\n")


def test_mask_and_density():
    F = complete(2)
    assert F.mask == (1 << 8) - 1
    assert F.density() == 1
