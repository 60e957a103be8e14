import json
import random
from fractions import Fraction as F
from itertools import combinations

import pytest

from pachgap.complex_maps import (PLMapInstance, coatom_cover_count, cover_certificate, embedding_bundle,
                                  join_vertex_map, load_embedding_bundle, order_complex,
                                  point_in_face_image, sample_generic_embedding, verify_general_position)
from pachgap.errors import CapacityError, ParameterError, PreconditionError
from pachgap.lattice import _boolean_lattice, build_subspace_lattice
from pachgap.pach import candidate_points_for_faces


def test_order_complex_counts(fano):
    K = order_complex(fano)
    assert len(K.ground) == 15
    assert K.f_vector() == [15, 35, 21]
    assert len(K.maximal_faces()) == 21
    assert all(len(c) == 3 and c[-1] == fano.top for c in K.maximal_faces())
    L22 = build_subspace_lattice(2, 2)
    assert len(order_complex(L22).maximal_faces()) == 3


def test_boolean_order_complex_is_cone():
    L = _boolean_lattice(2)
    assert order_complex(L).is_cone(L.top)


def test_order_complex_budget(fano):
    with pytest.raises(CapacityError):
        order_complex(fano, budget=10)


def test_join_vertex_map(fano):
    a, b = fano.atom_ids[:2]
    assert join_vertex_map(fano, [a]) == a
    ab = join_vertex_map(fano, [a, b])
    assert fano.rank[ab] == 2 and fano.leq(a, ab) and fano.leq(b, ab)
    for c in fano.coatom_ids:
        assert join_vertex_map(fano, fano.atoms_below(c)) == c
    with pytest.raises(ParameterError):
        join_vertex_map(fano, [])


def test_join_rule_stays_below(fano):
    # every vertex image of a face of <A_x> lies below x
    for x in range(len(fano)):
        if x == fano.bottom:
            continue
        Ax = fano.atoms_below(x)
        for k in range(1, len(Ax) + 1):
            for s in combinations(Ax, k):
                assert fano.leq(join_vertex_map(fano, s), x)


def test_embedding_deterministic_and_verified(fano):
    E1 = sample_generic_embedding(fano, 2, seed=42)
    E2 = sample_generic_embedding(fano, 2, seed=42)
    assert E1.points == E2.points
    assert not E1.verification["failures"]
    assert all(c.denominator <= 1 << 16 and 0 <= c <= 1 for p in E1.points.values() for c in p)
    assert len(set(E1.points.values())) == 15


def test_bundle_roundtrip(fano_map):
    text = embedding_bundle(fano_map.L, fano_map.E)
    E = load_embedding_bundle(text)
    assert E.points == fano_map.E.points
    assert json.loads(text)["seed"] == 42


def test_concurrent_lines_fail_verification():
    h = F(1, 2)
    pts = {0: (F(0), F(0)), 1: (F(1), F(1)), 2: (F(0), F(1)), 3: (F(1), F(0)),
           4: (h, F(0)), 5: (h, F(1))}
    log = verify_general_position(pts, 2, "exhaustive")
    assert log["failures"]
    # three separate points never fail on their own
    few = {0: pts[0], 1: pts[1], 2: (F(2), F(2))}
    assert not verify_general_position(few, 2, "exhaustive")["failures"]


def test_membership_examples(fano_map):
    L = fano_map.L
    A = L.atom_ids
    sigma = A[:3]
    for a in sigma:
        assert point_in_face_image(fano_map, fano_map.point(a), sigma).member
    for c in L.coatom_ids:
        m = point_in_face_image(fano_map, fano_map.point(c), L.atoms_below(c))
        assert m.member
        assert coatom_cover_count(fano_map, fano_map.point(c)).count >= 1
    far = (F(5), F(5))
    assert not point_in_face_image(fano_map, far, A).member
    assert coatom_cover_count(fano_map, far).count == 0
    with pytest.raises(PreconditionError):
        cover_certificate(fano_map, far)


def test_chains_collapse_repeated_joins(fano_map):
    L = fano_map.L
    c = L.coatom_ids[0]
    for chain, flag in fano_map.image_chains(L.atoms_below(c)).items():
        joins = [fano_map.vertex(s) for s in flag]
        dedup = [x for i, x in enumerate(joins) if i == 0 or joins[i - 1] != x]
        assert tuple(dedup) == chain
        assert chain[-1] == c


def test_monotone_images(fano_map):
    rng = random.Random(3)
    A = fano_map.L.atom_ids
    for _ in range(30):
        big = rng.sample(A, 3)
        small = big[:2]
        u = tuple(F(rng.randrange(65), 64) for _ in range(2))
        if point_in_face_image(fano_map, u, small).member:
            assert point_in_face_image(fano_map, u, big).member


def test_candidates_include_subdivision_vertices(fano_map):
    L = fano_map.L
    A = L.atom_ids
    sigma = next(s for s in combinations(A, 3) if L.join_all(list(s)) == L.top)
    cands = set(candidate_points_for_faces(fano_map, [sigma]))
    imgs = {fano_map.vertex_image(s) for k in (1, 2, 3) for s in combinations(sigma, k)}
    assert len(imgs) == 7
    assert imgs <= cands
    assert candidate_points_for_faces(fano_map, [sigma]) == candidate_points_for_faces(fano_map, [sigma])


def test_certificate_at_coatom_point(fano_map):
    L = fano_map.L
    for c in L.coatom_ids:
        cert = cover_certificate(fano_map, fano_map.point(c))
        assert cert.valid, cert.diagnostic
        assert len(cert.t_prime) <= 2
        assert cert.count <= cert.bound_sum <= 6


def test_single_image_certificate(fano_map):
    # near an atom's image only the chains through that atom contain u
    L = fano_map.L
    for a in L.atom_ids:
        u = fano_map.point(a)
        cert = cover_certificate(fano_map, u)
        assert cert.valid
        assert all(L.leq(cert.atoms[j], c) for c, j in cert.assignment.items())


def test_flag_budget(fano):
    E = sample_generic_embedding(fano, 2, seed=1)
    M = PLMapInstance(fano, E, flag_budget=2)
    with pytest.raises(CapacityError):
        M.image_chains(fano.atom_ids[:3])
