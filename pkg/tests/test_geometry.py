from fractions import Fraction as F

from hypothesis import assume, given, settings, strategies as st

import oracles
from pachgap import geometry as geo

coord = st.fractions(min_value=0, max_value=1, max_denominator=64)
pt2 = st.tuples(coord, coord)


def test_triangle_membership():
    tri = [(F(0), F(0)), (F(1), F(0)), (F(0), F(1))]
    assert geo.in_hull((F(1, 4), F(1, 4)), tri)
    assert geo.in_hull((F(1, 2), F(1, 2)), tri)  # on an edge
    assert not geo.in_hull((F(3, 4), F(1, 2)), tri)
    assert geo.in_relint((F(1, 4), F(1, 4)), tri)
    assert not geo.in_relint((F(1, 2), F(1, 2)), tri)


def test_degenerate_sets():
    seg = [(F(0), F(0)), (F(1), F(1)), (F(1, 2), F(1, 2))]
    assert geo.in_hull((F(1, 4), F(1, 4)), seg)
    assert geo.in_relint((F(1, 4), F(1, 4)), seg)
    assert not geo.in_relint((F(0), F(0)), seg)
    assert not geo.in_hull((F(1, 4), F(0)), seg)


def test_three_dimensional_hull():
    tet = [(F(0),) * 3, (F(1), F(0), F(0)), (F(0), F(1), F(0)), (F(0), F(0), F(1))]
    assert geo.in_hull((F(1, 5),) * 3, tet)
    assert not geo.in_hull((F(1, 2),) * 3, tet)
    assert geo.in_relint((F(1, 5),) * 3, tet)


def test_affine_equations_cut_out_hull():
    pts = [(F(0), F(0), F(1)), (F(1), F(0), F(1))]
    eqs = geo.affine_equations(pts)
    assert len(eqs) == 2
    for n, b in eqs:
        for p in pts:
            assert sum(a * x for a, x in zip(n, p)) == b


def test_intersection_point():
    a = [(F(0), F(0)), (F(1), F(1))]
    b = [(F(0), F(1)), (F(1), F(0))]
    assert geo.affine_intersection_point([a, b]) == (F(1, 2), F(1, 2))
    assert geo.segment_intersection(a[0], a[1], b[0], b[1]) == (F(1, 2), F(1, 2))
    assert geo.segment_intersection(a[0], a[1], (F(0), F(1)), (F(1), F(2))) is None


@settings(max_examples=200, deadline=None)
@given(pt2, pt2, pt2, pt2)
def test_hull_matches_orientation_oracle(a, b, c, u):
    assume(geo.affine_rank([a, b, c]) == 2)  # the oracle assumes a proper triangle
    assert geo.in_hull(u, [a, b, c]) == oracles.in_triangle(u, a, b, c)


@settings(max_examples=100, deadline=None)
@given(st.lists(pt2, min_size=1, max_size=5), pt2)
def test_relint_inside_hull(pts, u):
    if geo.in_relint(u, pts):
        assert geo.in_hull(u, pts)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(coord, coord, coord), min_size=1, max_size=4))
def test_barycenter_in_relint(pts):
    assert geo.in_relint(geo.barycenter(pts), pts)
