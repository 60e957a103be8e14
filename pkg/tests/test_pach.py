import random
from fractions import Fraction as F
from itertools import combinations

import pytest

import oracles
from pachgap.errors import ParameterError, PreconditionError
from pachgap.expander import incidence, neighborhood
from pachgap.extraction import largest_extracted
from pachgap.pach import (AffineJoinMap, HomogeneousBox, PartitionChoice, affine_selection_suite,
                          box_coatom_analysis, candidate_points, count_partitions, enumerate_partitions,
                          homogeneous_box_at, hypergraph_at, simplicial_depth_recount, tau_workbench,
                          theorem12_chain, witnessed_boxes)


@pytest.fixture(scope="module")
def fano_tau(fano_map):
    return tau_workbench(fano_map, 2)


def test_partition_enumeration_is_canonical():
    parts = list(enumerate_partitions(range(7), 2, 3))
    assert len(parts) == count_partitions(7, 2, 3) == 105
    assert len({frozenset(map(frozenset, p)) for p in parts}) == 105


def test_partition_choice_validation():
    with pytest.raises(ParameterError):
        PartitionChoice(((1, 2), (2, 3)))
    with pytest.raises(ParameterError):
        PartitionChoice(((1, 2), (3,)))


def test_tau_fano(fano_tau):
    assert fano_tau.tau_hat in (1, 2)
    assert fano_tau.partitions_examined == 105 and not fano_tau.sampled
    assert fano_tau.best_box.m == fano_tau.tau_hat


def test_tau_deterministic(fano_map, fano_tau):
    again = tau_workbench(fano_map, 2)
    assert again.as_dict() == fano_tau.as_dict()


def test_tau_precondition(fano_map):
    with pytest.raises(PreconditionError):
        tau_workbench(fano_map, 3)


def test_boxes_match_exact_oracle(fano_map, fano_tau):
    for P, B in witnessed_boxes(fano_map, fano_tau)[:40]:
        Fu = hypergraph_at(fano_map, P, B.u)
        assert B.m == oracles.max_box(Fu.sizes, Fu.edges)
        assert largest_extracted(Fu).m == B.m


def test_box_coatom_analysis_counts(fano, fano_map, fano_tau):
    G = incidence(fano)
    nbrs = {a: set(fano.coatoms_above(a)) for a in fano.atom_ids}
    for P, B in witnessed_boxes(fano_map, fano_tau):
        rep = box_coatom_analysis(fano, P, B, M=fano_map)
        assert rep.ok, rep.checks
        # recount C(Z) directly
        direct = [c for c in fano.coatom_ids if all(any(c in nbrs[z] for z in Z) for Z in B.parts)]
        assert list(rep.covered) == direct
        assert rep.min_gamma == oracles.min_expansion(nbrs, B.m)
        assert sum(len(neighborhood(G, Z)) for Z in B.parts) - 2 * 7 == rep.sum_gamma_minus
        assert len(rep.covered) <= 6 and rep.min_gamma <= F(20, 3)


def test_split_coatom_is_covered(fano):
    c = fano.coatom_ids[0]
    Ac = fano.atoms_below(c)
    B = HomogeneousBox((F(0), F(0)), tuple((a,) for a in Ac), 1)
    rep = box_coatom_analysis(fano, PartitionChoice(tuple((a,) for a in Ac)), B)
    assert c in rep.covered


def test_full_box_when_complete():
    # all transversal images contain the origin
    pts = {("r", 0): (F(-1), F(-1)), ("r", 1): (F(-2), F(-1)),
           ("g", 0): (F(1), F(-1)), ("g", 1): (F(2), F(-1)),
           ("b", 0): (F(0), F(1)), ("b", 1): (F(0), F(2))}
    M = AffineJoinMap(pts)
    P = PartitionChoice(tuple(tuple((c, i) for i in range(2)) for c in "rgb"))
    B = homogeneous_box_at(M, P, (F(0), F(0)))
    assert B.m == 2
    assert len(candidate_points(M, P)) > 6


@pytest.mark.parametrize("n,d,q,bound", [(16, 2, 7, 144), (81, 2, 17, 324), (256, 2, 29, 576)])
def test_chain(n, d, q, bound):
    r = theorem12_chain(n, d)
    assert r.q == q and r.ok
    assert r.final_bound_exact == bound
    step = next(c for c in r.comparisons if c["label"] == "q/(q-d) <= 2")
    assert step["lhs"] == f"{q}/{q - d}" and step["holds"]


def test_chain_precondition():
    with pytest.raises(PreconditionError):
        theorem12_chain(10, 2)


def test_affine_interval_full_box():
    rng = random.Random(0)
    left = [(F(rng.randrange(1, 500), 1000),) for _ in range(5)]
    right = [(F(rng.randrange(500, 1000), 1000),) for _ in range(5)]
    r = affine_selection_suite([left, right], "pach")
    assert r["m"] == 5 and r["ratio"] == "1/1"


def test_first_selection_recount():
    rng = random.Random(11)
    for k in (5, 6, 7):
        pts = [(F(rng.randrange(256), 256), F(rng.randrange(256), 256)) for _ in range(k)]
        r = affine_selection_suite([pts], "first_selection")
        assert r["notice"] is None
        assert r["max_depth"] == r["oracle_depth"] == simplicial_depth_recount(pts)


def test_first_selection_square():
    sq = [(F(0), F(0)), (F(1), F(0)), (F(1), F(1)), (F(0), F(1)), (F(1, 3), F(1, 5))]
    r = affine_selection_suite([sq], "first_selection")
    assert r["max_depth"] == r["oracle_depth"]
    assert r["max_depth"] <= len(list(combinations(sq, 3)))


def test_unknown_mode():
    with pytest.raises(ParameterError):
        affine_selection_suite([[(F(0),), (F(1),)]], "nope")
