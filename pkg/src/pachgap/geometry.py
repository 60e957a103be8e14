"""Exact rational geometry in Q^d.

Points are tuples of ``Fraction``. Hull membership is decided by solving for
barycentric coordinates; for affinely dependent point sets the test runs
over affinely independent subsets (Caratheodory), so no LP is needed.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import lcm

Point = tuple


def as_point(coords) -> Point:
    return tuple(Fraction(c) for c in coords)


def sub(p, q) -> Point:
    return tuple(a - b for a, b in zip(p, q))


def rank_and_solve(A, b=None):
    """Row-reduce ``[A | b]`` over Q.

    Returns ``(rank_A, consistent, x)`` where ``x`` is one solution with free
    variables set to zero (``None`` if inconsistent or ``b`` is ``None``).
    """
    rows = [list(map(Fraction, r)) + ([Fraction(b[i])] if b is not None else []) for i, r in enumerate(A)]
    ncols = len(A[0]) if A else 0
    piv_cols = []
    r = 0
    for c in range(ncols):
        sel = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
        if r == len(rows):
            break
    if b is None:
        return r, True, None
    consistent = all(rows[i][ncols] == 0 for i in range(r, len(rows)))
    if not consistent:
        return r, False, None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(piv_cols):
        x[c] = rows[i][ncols]
    return r, True, x


def affine_rank(pts) -> int:
    pts = list(pts)
    if len(pts) <= 1:
        return 0
    return rank_and_solve([sub(p, pts[0]) for p in pts[1:]])[0]


def affinely_independent(pts) -> bool:
    return affine_rank(pts) == len(pts) - 1


def barycentric(u, pts):
    """Barycentric coordinates of ``u`` w.r.t. affinely independent ``pts``.

    ``None`` when ``u`` is off the affine hull.
    """
    k = len(pts)
    d = len(u)
    A = [[pts[j][i] for j in range(k)] for i in range(d)] + [[1] * k]
    b = list(u) + [1]
    _, ok, lam = rank_and_solve(A, b)
    return lam if ok else None


def _orient(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _dedupe(pts):
    out = []
    for p in pts:
        if p not in out:
            out.append(p)
    return out


def _in_hull_2d(u, pts):
    if len(pts) == 1:
        return u == pts[0]
    if len(pts) == 2:
        a, b = pts
        if _orient(a, b, u) != 0:
            return False
        return (min(a[0], b[0]) <= u[0] <= max(a[0], b[0])
                and min(a[1], b[1]) <= u[1] <= max(a[1], b[1]))
    a, b, c = pts
    area = _orient(a, b, c)
    if area == 0:
        return None
    s1, s2, s3 = _orient(a, b, u), _orient(b, c, u), _orient(c, a, u)
    if area > 0:
        return s1 >= 0 and s2 >= 0 and s3 >= 0
    return s1 <= 0 and s2 <= 0 and s3 <= 0


def in_hull(u, pts) -> bool:
    """Closed convex hull membership, exact."""
    pts = _dedupe(pts)
    if len(u) == 2 and len(pts) <= 3:
        res = _in_hull_2d(u, pts)
        if res is not None:
            return res
    for Q in _independent_subsets(pts):
        lam = barycentric(u, Q)
        if lam is not None and all(x >= 0 for x in lam):
            return True
    return False


def in_relint(u, pts) -> bool:
    """Relative-interior membership: some convex representation has every weight > 0.

    A point p_j can carry positive weight iff some vertex of the (polytope of)
    representations does; those vertices are supported on affinely
    independent subsets.
    """
    pts = _dedupe(pts)
    if affinely_independent(pts):
        lam = barycentric(u, pts)
        return lam is not None and all(x > 0 for x in lam)
    reps = []
    for Q in _independent_subsets(pts):
        lam = barycentric(u, Q)
        if lam is not None and all(x >= 0 for x in lam):
            reps.append({p: w for p, w in zip(Q, lam)})
    return all(any(r.get(p, 0) > 0 for r in reps) for p in pts)


def _independent_subsets(pts):
    for k in range(len(pts), 0, -1):
        for Q in combinations(pts, k):
            if affinely_independent(Q):
                yield list(Q)


def affine_equations(pts):
    """Integer equations ``(normal, rhs)`` cutting out the affine hull of ``pts``."""
    d = len(pts[0])
    base = pts[0]
    dirs = [sub(p, base) for p in pts[1:]]
    # null space of the direction matrix = normals of the hull
    normals = _nullspace(dirs, d)
    out = []
    for nvec in normals:
        den = lcm(*(x.denominator for x in nvec))
        ints = [int(x * den) for x in nvec]
        rhs = sum(Fraction(a) * b for a, b in zip(ints, base))
        rden = rhs.denominator
        out.append((tuple(a * rden for a in ints), rhs.numerator))
    return out


def _nullspace(rows, ncols):
    rows = [list(map(Fraction, r)) for r in rows if any(r)]
    piv = []
    r = 0
    for c in range(ncols):
        sel = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv.append(c)
        r += 1
    basis = []
    for f in (c for c in range(ncols) if c not in piv):
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, c in enumerate(piv):
            v[c] = -rows[i][f]
        basis.append(v)
    return basis


def equations_consistent(eqs) -> bool:
    """Does the stacked system of affine equations have a solution?"""
    if not eqs:
        return True
    A = [e[0] for e in eqs]
    b = [e[1] for e in eqs]
    return rank_and_solve(A, b)[1]


def affine_intersection_point(point_sets):
    """Unique common point of the affine hulls, or ``None``."""
    eqs = [e for P in point_sets for e in affine_equations(list(P))]
    d = len(point_sets[0][0])
    if not eqs:
        return None
    rk, ok, x = rank_and_solve([e[0] for e in eqs], [e[1] for e in eqs])
    if not ok or rk < d:
        return None
    return tuple(x)


def segment_intersection(a, b, c, e):
    """Single crossing point of closed segments ab and ce in Q^2, else ``None``.

    Parallel/collinear overlaps return ``None`` (no unique point).
    """
    den = (b[0] - a[0]) * (e[1] - c[1]) - (b[1] - a[1]) * (e[0] - c[0])
    if den == 0:
        return None
    t = ((c[0] - a[0]) * (e[1] - c[1]) - (c[1] - a[1]) * (e[0] - c[0])) / den
    s = ((c[0] - a[0]) * (b[1] - a[1]) - (c[1] - a[1]) * (b[0] - a[0])) / den
    if not (0 <= t <= 1 and 0 <= s <= 1):
        return None
    return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))


def barycenter(pts) -> Point:
    k = len(pts)
    return tuple(sum(p[i] for p in pts) / k for i in range(len(pts[0])))
