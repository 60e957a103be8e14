"""Brute-force reference implementations that share no code with the package.

They trade speed for obviousness: Python sets, itertools, explicit sums.
"""
from fractions import Fraction
from itertools import combinations, product


def projective_points(r, q):
    """Nonzero vectors of F_q^r scaled so the first nonzero entry is 1."""
    out = []
    for v in product(range(q), repeat=r):
        nz = [x for x in v if x]
        if nz and nz[0] == 1:
            out.append(v)
    return out


def point_hyperplane_incidence(r, q):
    """Atoms = projective points, coatoms = hyperplanes a.x = 0; returns neighbor sets."""
    pts = projective_points(r, q)
    return {i: {j for j, h in enumerate(pts) if sum(a * b for a, b in zip(p, h)) % q == 0}
            for i, p in enumerate(pts)}


def gaussian_binomial(n, k, q):
    num, den = 1, 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def min_expansion(nbrs, m):
    return min(len(set().union(*(nbrs[a] for a in Z))) for Z in combinations(sorted(nbrs), m))


def corradi(m, k, lam):
    """Corradi's bound for m sets of size k with pairwise intersections lam."""
    return Fraction(m * k * k, k + (m - 1) * lam)


# -- coboundary expansion, second implementation -------------------------

def faces_of(top_faces):
    """k -> list of frozensets, reverse-sorted so the ordering differs from the package."""
    out = {}
    for t in top_faces:
        for k in range(len(t) + 1):
            for s in combinations(t, k):
                out.setdefault(k - 1, set()).add(frozenset(s))
    return {k: sorted(v, key=lambda f: sorted(map(str, f)), reverse=True) for k, v in out.items()}


def weight_table(top_faces):
    tops = [frozenset(t) for t in top_faces]
    d = len(tops[0]) - 1
    F = faces_of(top_faces)
    from math import comb
    w = {}
    for k, fs in F.items():
        den = comb(d + 1, k + 1) * len(tops)
        for f in fs:
            w[f] = Fraction(sum(1 for t in tops if f <= t), den)
    return F, w, d


def _delta(F, k, support):
    """Coboundary of a set of k-faces, as a set of (k+1)-faces."""
    out = set()
    for t in F.get(k + 1, []):
        if sum(1 for s in support if s < t and len(t) == len(s) + 1) % 2:
            out.add(t)
    return out


def _subsets(items):
    for r in range(len(items) + 1):
        yield from combinations(items, r)


def h_value(top_faces, k):
    """min ||d phi|| / ||[phi]|| over non-coboundaries, or None when there are none."""
    F, w, d = weight_table(top_faces)
    Xk = F[k]
    cobs = {frozenset(_delta(F, k - 1, set(psi))) for psi in _subsets(F[k - 1])}
    best = None
    for phi in _subsets(Xk):
        phi = frozenset(phi)
        if phi in cobs:
            continue
        coset = min(sum((w[s] for s in phi ^ b), Fraction(0)) for b in cobs)
        num = sum((w[t] for t in _delta(F, k, phi)), Fraction(0))
        val = num / coset
        if best is None or val < best:
            best = val
    return best


# -- hypergraph boxes ------------------------------------------------------

def max_box(sizes, edges):
    edges = set(edges)
    best = 0
    for m in range(1, min(sizes) + 1):
        found = any(all(t in edges for t in product(*Zs))
                    for Zs in product(*(combinations(range(s), m) for s in sizes)))
        if found:
            best = m
        else:
            break
    return best


# -- planar geometry -------------------------------------------------------

def in_triangle(u, a, b, c):
    def cross(p, q, r):
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    s = [cross(a, b, u), cross(b, c, u), cross(c, a, u)]
    return all(x >= 0 for x in s) or all(x <= 0 for x in s)


def overlap_recount(tops, images, u):
    """How many top-face images (triangles) contain u."""
    return sum(1 for t in tops if in_triangle(u, *(images[v] for v in t)))
