import json
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from pachgap import fq
from pachgap._rational import iroot_exact, le_root, qstr
from pachgap.errors import ParameterError, PreconditionError
from pachgap.lattice import (GradedLattice, _boolean_lattice, build_subspace_lattice, find_prime_q,
                             from_json, subspace_join, subspace_meet, to_json, validate_lattice)


@pytest.mark.parametrize("r,q,profile", [
    (3, 2, (1, 7, 7, 1)),
    (2, 3, (1, 4, 1)),
    (3, 3, (1, 13, 13, 1)),
    (2, 5, (1, 6, 1)),
])
def test_rank_profiles(r, q, profile):
    L = build_subspace_lattice(r, q)
    assert L.rank_profile() == profile
    assert profile == tuple(oracles.gaussian_binomial(r, k, q) for k in range(r + 1))


@pytest.mark.parametrize("r,q", [(3, 2), (2, 3), (3, 3), (4, 2)])
def test_gaussian_binomials_match_oracle(r, q):
    for k in range(r + 1):
        assert fq.gaussian_binomial(r, k, q) == oracles.gaussian_binomial(r, k, q)
        assert sum(1 for _ in fq.enumerate_rrefs(r, k, q)) == oracles.gaussian_binomial(r, k, q)


def test_fano_atoms_and_coatoms(fano):
    assert len(fano.atom_ids) == len(fano.coatom_ids) == 7
    assert all(len(fano.coatoms_above(a)) == 3 for a in fano.atom_ids)
    for a, b in combinations(fano.atom_ids, 2):
        assert len(set(fano.coatoms_above(a)) & set(fano.coatoms_above(b))) == 1
    for c in fano.coatom_ids:
        assert fano.join_all(fano.atoms_below(c)) == c


def test_validation_passes(fano):
    rep = validate_lattice(fano)
    assert rep.ok, rep.failed
    assert validate_lattice(build_subspace_lattice(2, 5)).ok


def test_boolean_lattice_is_lattice():
    assert validate_lattice(_boolean_lattice(3)).ok


def test_validation_reports_non_lattice():
    # two incomparable tops: no join for them
    L = GradedLattice.from_relation(["0", "a", "b"], [0, 1, 1], [(0, 1), (0, 2)])
    rep = validate_lattice(L)
    assert not rep.ok
    assert rep.failed


def test_join_meet_agree_with_algebra(fano):
    L = build_subspace_lattice(3, 3)
    for x in range(0, len(L), 3):
        for y in range(0, len(L), 5):
            assert L.join(x, y) == subspace_join(L, x, y)
            assert L.meet(x, y) == subspace_meet(L, x, y)


def test_non_prime_q_rejected():
    with pytest.raises(ParameterError, match="q must be prime"):
        build_subspace_lattice(3, 4)


def test_json_roundtrip(fano):
    text = to_json(fano)
    doc = json.loads(text)
    assert doc["q"] == 2 and len(doc["elements"]) == 16
    L2 = from_json(text)
    assert L2.rank_profile() == fano.rank_profile()
    assert L2.down == fano.down


@pytest.mark.parametrize("n,d,q", [(16, 2, 7), (81, 2, 17), (256, 2, 29)])
def test_find_prime_q(n, d, q):
    w = find_prime_q(n, d)
    assert w.q == q
    assert w.contains(q)
    assert not any(fq.is_prime(p) and w.contains(p) for p in range(2, q))


def test_find_prime_q_precondition():
    with pytest.raises(PreconditionError):
        find_prime_q(15, 2)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(0, 2), min_size=3, max_size=3), min_size=0, max_size=3),
       st.lists(st.lists(st.integers(0, 2), min_size=3, max_size=3), min_size=0, max_size=3))
def test_dimension_formula(a, b):
    q = 3
    A, B = fq.rref(a, q, 3), fq.rref(b, q, 3)
    J, M = fq.join(A, B, q, 3), fq.meet(A, B, q, 3)
    assert len(J) + len(M) == len(A) + len(B)
    assert fq.contains(J, A, q) and fq.contains(A, M, q) and fq.contains(B, M, q)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(0, 4), min_size=4, max_size=4), max_size=5))
def test_rref_idempotent(rows):
    R = fq.rref(rows, 5, 4)
    assert fq.rref(R, 5, 4) == R


@given(st.integers(0, 10**6), st.integers(1, 6))
def test_iroot_exact(x, k):
    r = iroot_exact(x**k, k)
    assert r == x
    if x > 1 and k > 1:
        assert iroot_exact(x**k + 1, k) is None


def test_le_root_and_qstr():
    assert le_root(2, 8, 3) and not le_root(3, 8, 3)
    assert qstr(3) == "3/1"
