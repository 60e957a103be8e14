"""Homogeneous boxes for the constructed map, the counting chains, and affine baselines.

Any object with ``d``, ``cache``, ``image_chains(face)``, ``chain_points``
and ``chain_contains`` can be searched here; :class:`PLMapInstance` and
:class:`AffineJoinMap` both qualify, so the topological and the affine
experiments differ only in the map.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import comb, factorial

from . import fq
from . import geometry as geo
from ._rational import iroot_exact, point_str, qstr
from .budget import DEFAULT
from .complex_maps import PLMapInstance, coatom_cover_count, point_in_face_image
from .errors import CapacityError, InvariantViolation, ParameterError, PreconditionError
from .expander import (corradi_lower_bound, incidence, min_vertex_expansion,
                       neighborhood, projective_incidence, theorem21_rhs_counts)
from .extraction import MultipartiteHypergraph, max_box_exact
from .lattice import GradedLattice, find_prime_q


@dataclass(frozen=True)
class PartitionChoice:
    parts: tuple[tuple, ...]

    def __post_init__(self):
        seen = set()
        for V in self.parts:
            if seen & set(V):
                raise ParameterError("parts must be pairwise disjoint")
            seen |= set(V)
        if len({len(V) for V in self.parts}) > 1:
            raise ParameterError("parts must have equal size")

    @property
    def n(self) -> int:
        return len(self.parts[0])

    def transversals(self):
        return product(*self.parts)


class AffineJoinMap:
    """The affine map of a join: each face goes to the hull of its points."""

    def __init__(self, points: dict):
        self.points = {k: geo.as_point(v) for k, v in points.items()}
        self.d = len(next(iter(self.points.values())))
        self.cache = {}
        self._contains = {}

    def point(self, x):
        return self.points[x]

    def image_chains(self, sigma) -> dict:
        t = tuple(sorted(sigma))
        return {t: (frozenset(t),)}

    def chain_points(self, chain):
        return [self.points[x] for x in chain]

    def chain_contains(self, chain, u) -> bool:
        key = (chain, u)
        v = self._contains.get(key)
        if v is None:
            v = self._contains[key] = geo.in_hull(u, self.chain_points(chain))
        return v


def face_member(M, face, u) -> bool:
    key = ("face", frozenset(face), u)
    v = M.cache.get(key)
    if v is None:
        v = any(M.chain_contains(ch, u) for ch in M.image_chains(face))
        M.cache[key] = v
    return v


def _pieces_intersections(M, chains):
    """Exact points where d boundary pieces of the image simplices cross."""
    d = M.d
    pieces = {}
    for ch in chains:
        pts = M.chain_points(ch)
        if len(pts) < d:
            continue
        for sub in combinations(range(len(ch)), d):
            key = tuple(sorted(ch[i] for i in sub))
            pieces.setdefault(key, None)
    keys = list(pieces)
    out = []
    xc = M.cache.setdefault("xings", {})
    for group in combinations(keys, d):
        if d == 1:
            continue  # 0-dim pieces are the vertices themselves
        got = xc.get(group, False)
        if got is False:
            got = None
            pts = [M.chain_points(g) for g in group]
            if d == 2:
                got = geo.segment_intersection(pts[0][0], pts[0][1], pts[1][0], pts[1][1])
            else:
                x = geo.affine_intersection_point(pts)
                if x is not None and all(geo.in_hull(x, P) for P in pts):
                    got = x
            xc[group] = got
        if got is not None:
            out.append(got)
    return out


def candidate_points_for_faces(M, faces, budget: int | None = None) -> list:
    """Vertices, boundary-piece crossings and barycenters of the face images."""
    budget = DEFAULT.candidates if budget is None else budget
    chains = {}
    for face in faces:
        for ch in M.image_chains(face):
            chains.setdefault(ch, None)
    chains = list(chains)
    seen = {}
    for ch in chains:
        for x in ch:
            seen.setdefault(M.point(x), None)
    for p in _pieces_intersections(M, chains):
        seen.setdefault(p, None)
    for ch in chains:
        seen.setdefault(geo.barycenter(M.chain_points(ch)), None)
    if len(seen) > budget:
        raise CapacityError(f"{len(seen)} candidate points exceed budget {budget}")
    return list(seen)


def candidate_points(M, P: PartitionChoice, budget: int | None = None) -> list:
    return candidate_points_for_faces(M, list(P.transversals()), budget)


@dataclass(frozen=True)
class HomogeneousBox:
    u: tuple
    parts: tuple[tuple, ...]  # Z_1, ..., Z_{d+1} as atom ids
    m: int

    def as_dict(self) -> dict:
        return {"u": point_str(self.u), "Z": [list(Z) for Z in self.parts], "m": self.m}


def hypergraph_at(M, P: PartitionChoice, u) -> MultipartiteHypergraph:
    edges = [idx for idx in product(*(range(len(V)) for V in P.parts))
             if face_member(M, [V[i] for V, i in zip(P.parts, idx)], u)]
    return MultipartiteHypergraph(P.parts, frozenset(edges))


def homogeneous_box_at(M, P: PartitionChoice, u) -> HomogeneousBox:
    """Largest complete box in F_u, every transversal re-checked exactly."""
    F = hypergraph_at(M, P, u)
    res = max_box_exact(F)
    if res.m == 0:
        return HomogeneousBox(u, tuple(() for _ in P.parts), 0)
    for t in product(*res.witness):
        if not _fresh_member(M, t, u):
            raise InvariantViolation(f"transversal {t} not in image at {u}")
    return HomogeneousBox(u, res.witness, res.m)


def _fresh_member(M, face, u) -> bool:
    return any(geo.in_hull(u, M.chain_points(ch)) for ch in M.image_chains(face))


def enumerate_partitions(atoms, n: int, k: int):
    """Unordered families of k disjoint n-subsets, canonical (blocks sorted by minimum)."""
    atoms = sorted(atoms)

    def split(rest, k):
        if k == 0:
            yield ()
            return
        first = rest[0]
        for others in combinations(rest[1:], n - 1):
            block = (first,) + others
            remaining = [x for x in rest if x not in block]
            for tail in split(remaining, k - 1):
                yield (block,) + tail

    for U in combinations(atoms, n * k):
        yield from split(list(U), k)


def count_partitions(n_atoms: int, n: int, k: int) -> int:
    return comb(n_atoms, n * k) * factorial(n * k) // (factorial(n) ** k * factorial(k))


@dataclass
class TauReport:
    n: int
    d: int
    tau_hat: int
    best_partition: PartitionChoice | None
    best_box: HomogeneousBox | None
    table: list = field(default_factory=list)  # (parts, m, candidate index, #candidates)
    sampled: bool = False
    partitions_examined: int = 0

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "tau_hat": self.tau_hat,
            "sampled": self.sampled,
            "partitions_examined": self.partitions_examined,
            "best_partition": [list(V) for V in self.best_partition.parts] if self.best_partition else None,
            "best_box": self.best_box.as_dict() if self.best_box else None,
            "table": [{"parts": [list(V) for V in p], "m": m, "u_index": i, "candidates": c}
                      for p, m, i, c in self.table],
        }


def tau_workbench(M: PLMapInstance, n: int, budget: int | None = None, seed: int = 0,
                  candidate_filter=None) -> TauReport:
    """Best homogeneous box over all partitions (or a seeded sample).

    ``tau_hat`` is a certified lower bound on max_P tau(f|P); it is never
    claimed to be exact because candidate points need not include every
    arrangement cell. ``candidate_filter`` (list -> list) restricts the
    candidate set, used to probe monotonicity.
    """
    L = M.L
    d = L.d
    A = L.atom_ids
    if n < 1 or (d + 1) * n > len(A):
        raise PreconditionError(f"need |A| = {len(A)} >= (d+1) n = {(d + 1) * n}")
    budget = DEFAULT.partitions if budget is None else budget
    total = count_partitions(len(A), n, d + 1)
    if total <= budget:
        parts_list = list(enumerate_partitions(A, n, d + 1))
        sampled = False
    else:
        rng = random.Random(seed)
        parts_list = []
        for _ in range(budget):
            pool = rng.sample(A, (d + 1) * n)
            blocks = sorted((tuple(sorted(pool[i * n:(i + 1) * n])) for i in range(d + 1)))
            parts_list.append(tuple(blocks))
        sampled = True
    report = TauReport(n, d, 0, None, None, sampled=sampled, partitions_examined=len(parts_list))
    for parts in parts_list:
        P = PartitionChoice(parts)
        cands = candidate_points(M, P)
        if candidate_filter is not None:
            cands = candidate_filter(cands)
        best_m, best_i, best_u = 0, None, None
        for i, u in enumerate(cands):
            F = hypergraph_at(M, P, u)
            if not F.edges:
                continue
            m = max_box_exact(F).m
            if m > best_m:
                best_m, best_i, best_u = m, i, u
                if m == n:
                    break
        report.table.append((parts, best_m, best_i, len(cands)))
        if best_m > report.tau_hat:
            report.tau_hat = best_m
            report.best_partition = P
            report.best_box = homogeneous_box_at(M, P, best_u)
    return report


def witnessed_boxes(M: PLMapInstance, report: TauReport) -> list[tuple[PartitionChoice, HomogeneousBox]]:
    """Re-derive the best box of every partition row with a positive m."""
    out = []
    for parts, m, i, _ in report.table:
        if not m:
            continue
        P = PartitionChoice(parts)
        u = candidate_points(M, P)[i]
        out.append((P, homogeneous_box_at(M, P, u)))
    return out


@dataclass
class BoxCoatomReport:
    m: int
    covered: tuple[int, ...]  # C(Z_1, ..., Z_{d+1})
    upper: int  # d max |C_a|
    sum_gamma_minus: int  # sum |Gamma(Z_i)| - d |C|
    lower: int  # (d+1) min Gamma(m) - d |C|
    min_gamma: int
    rhs21: Fraction
    checks: dict

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def as_dict(self) -> dict:
        return {
            "m": self.m,
            "covered": list(self.covered),
            "count": len(self.covered),
            "upper": self.upper,
            "sum_gamma_minus_dC": self.sum_gamma_minus,
            "lower": self.lower,
            "min_gamma": self.min_gamma,
            "rhs21": qstr(self.rhs21),
            "checks": self.checks,
        }


def box_coatom_analysis(L: GradedLattice, P: PartitionChoice, B: HomogeneousBox, m: int | None = None,
                        M: PLMapInstance | None = None) -> BoxCoatomReport:
    """Count the coatoms meeting every Z_i and check both counting bounds.

    With ``M`` given, also checks that each such coatom's image contains u,
    which is the step linking the box to the cover bound.
    """
    m = B.m if m is None else m
    if m < 1:
        raise PreconditionError("box must be witnessed (m >= 1)")
    d = L.d
    G = incidence(L)
    C = L.coatom_ids
    Zs = [set(Z) for Z in B.parts]
    covered = tuple(c for c in C if all(Z & set(L.atoms_below(c)) for Z in Zs))
    gammas = [set(neighborhood(G, Z)) for Z in B.parts]
    via_complement = set(C) - set().union(*(set(C) - g for g in gammas))
    max_ca = max(G.degrees)
    upper = d * max_ca
    sum_minus = sum(len(g) for g in gammas) - d * len(C)
    min_gamma = min_vertex_expansion(G, m).min_gamma
    lower = (d + 1) * min_gamma - d * len(C)
    rhs = theorem21_rhs_counts(d, max_ca, len(C))
    checks = {
        "complement identity": set(covered) == via_complement,
        "|C(Z)| <= d max|C_a|": len(covered) <= upper,
        "|C(Z)| >= sum|Gamma(Z_i)| - d|C|": len(covered) >= sum_minus,
        "sum|Gamma(Z_i)| - d|C| >= (d+1) min Gamma(m) - d|C|": sum_minus >= lower,
        "min Gamma(m) <= d/(d+1) (max|C_a| + |C|)": min_gamma <= rhs,
    }
    if M is not None:
        cov = set(coatom_cover_count(M, B.u).coatoms)
        checks["C(Z) inside coatom cover of u"] = set(covered) <= cov
    return BoxCoatomReport(m, covered, upper, sum_minus, lower, min_gamma, rhs, checks)


@dataclass
class ChainReport:
    n: int
    d: int
    q: int
    N: dict
    comparisons: list  # dicts: label, lhs, rhs, holds
    final_bound: str
    final_bound_exact: int | None
    final_bound_float: float
    coefficient: str

    @property
    def ok(self) -> bool:
        return all(c["holds"] for c in self.comparisons)

    def as_dict(self) -> dict:
        return {
            "n": self.n, "d": self.d, "q": self.q,
            "N": {str(k): v for k, v in self.N.items()},
            "comparisons": self.comparisons,
            "final_bound": self.final_bound,
            "final_bound_exact": self.final_bound_exact,
            "final_bound_float": repr(self.final_bound_float),
            "coefficient": self.coefficient,
            "all_hold": self.ok,
        }


def theorem12_chain(n: int, d: int, incidence_check_max_q: int = 11) -> ChainReport:
    """Replay the upper-bound arithmetic for (n, d) with the selected prime.

    d-th roots are never evaluated: ``a <= b^(1/d)`` is compared as
    ``a^d <= b``. The expansion bound is checked for every subset size
    m in 1..N_d.
    """
    w = find_prime_q(n, d)
    q = w.q
    Nd, Nd1, Nd2 = (fq.proj_count(k, q) for k in (d, d - 1, d - 2))
    R = (d + 1) * n
    comps = []

    def cmp(label, lhs, rhs, holds):
        comps.append({"label": label, "lhs": str(lhs), "rhs": str(rhs), "holds": bool(holds)})

    cmp("2d <= ((d+1)n)^(1/d)  [as (2d)^d <= (d+1)n]", (2 * d) ** d, R, (2 * d) ** d <= R)
    cmp("((d+1)n)^(1/d) <= q  [as (d+1)n <= q^d]", R, q**d, R <= q**d)
    cmp("q <= 2((d+1)n)^(1/d)  [as q^d <= 2^d (d+1)n]", q**d, 2**d * R, q**d <= 2**d * R)
    cmp("q prime", q, "prime", fq.is_prime(q))
    cmp("q >= 2d", q, 2 * d, q >= 2 * d)
    if q <= incidence_check_max_q:
        G = projective_incidence(d + 1, q)
        cmp("|A| = |C| = N_d (counted)", G.n_atoms, Nd, G.n_atoms == G.n_coatoms == Nd)
        cmp("|C_a| = N_{d-1} (counted)", sorted(set(G.degrees)), Nd1, set(G.degrees) == {Nd1})
        inter = {(G.masks[i] & G.masks[j]).bit_count()
                 for i in range(G.n_atoms) for j in range(i + 1, G.n_atoms)}
        cmp("|C_a & C_a'| = N_{d-2} (counted)", sorted(inter), Nd2, inter == {Nd2})
    cmp("N_d >= q^d", Nd, q**d, Nd >= q**d)
    cmp("q^d >= (d+1)n", q**d, R, q**d >= R)
    bad = [m for m in range(1, Nd + 1) if not corradi_lower_bound(m, q, d).ok]
    cmp("expansion bound chain for all m in 1..N_d", f"{Nd} values", f"{len(bad)} failures", not bad)
    # rearranging N_d - X/m <= d/(d+1)(N_{d-1} + N_d) for m
    gap = Nd - d * Nd1
    cmp("N_d - d N_{d-1} > 0", gap, 0, gap > 0)
    cmp("(d+1)N_d - d(N_{d-1}+N_d) = N_d - d N_{d-1}", (d + 1) * Nd - d * (Nd1 + Nd), gap,
        (d + 1) * Nd - d * (Nd1 + Nd) == gap)
    lhs24 = Fraction(Nd, gap)
    alt = Fraction(q ** (d + 1) - 1, q ** (d + 1) - 1 - d * (q**d - 1))
    mid = Fraction(q ** (d + 1), q ** (d + 1) - d * q**d)
    qq = Fraction(q, q - d)
    cmp("N_d/(N_d - d N_{d-1}) = (q^(d+1)-1)/(q^(d+1)-1-d(q^d-1))", qstr(lhs24), qstr(alt), lhs24 == alt)
    cmp("(q^(d+1)-1)/(q^(d+1)-1-d(q^d-1)) <= q^(d+1)/(q^(d+1)-d q^d)", qstr(alt), qstr(mid), alt <= mid)
    cmp("q^(d+1)/(q^(d+1)-d q^d) = q/(q-d)", qstr(mid), qstr(qq), mid == qq)
    cmp("q/(q-d) <= 2", qstr(qq), 2, qq <= 2)
    cmp("(d+1)N_d^(1+1/d)/(N_d-dN_{d-1}) <= 2(d+1)N_d^(1/d)  [as N_d/(N_d-dN_{d-1}) <= 2]",
        qstr(lhs24), 2, lhs24 <= 2)
    cmp("2(d+1)N_d^(1/d) <= 2(d+1)((d+1)q^d)^(1/d)  [as N_d <= (d+1)q^d]", Nd, (d + 1) * q**d,
        Nd <= (d + 1) * q**d)
    cmp("((d+1)q^d)^(1/d) <= ((d+1)2^d(d+1)n)^(1/d)  [as q^d <= 2^d(d+1)n]", q**d, 2**d * R,
        q**d <= 2**d * R)
    lhs_pow = (2 * (d + 1)) ** d * (d + 1) * 2**d * (d + 1) * n
    rhs_pow = (4 * (d + 1)) ** d * (d + 1) ** 2 * n
    cmp("2(d+1)((d+1)2^d(d+1)n)^(1/d) = 4(d+1)((d+1)^2 n)^(1/d)  [d-th powers]", lhs_pow, rhs_pow,
        lhs_pow == rhs_pow)
    rad = (d + 1) ** 2 * n
    root = iroot_exact(rad, d)
    exact = 4 * (d + 1) * root if root is not None else None
    return ChainReport(
        n, d, q, {d: Nd, d - 1: Nd1, d - 2: Nd2}, comps,
        f"4*{d + 1}*({rad})^(1/{d})", exact, 4 * (d + 1) * rad ** (1 / d),
        f"4(d+1)(d+1)^(2/d) = 4*{d + 1}*{(d + 1) ** 2}^(1/{d})",
    )


def _general_position_points(pts) -> bool:
    d = len(pts[0])
    if len(set(pts)) != len(pts):
        return False
    k = min(len(pts), d + 1)
    return all(geo.affinely_independent(list(S)) for S in combinations(pts, k))


def _perturb(classes, rng, bits=20):
    den = 1 << bits
    return [[tuple(c + Fraction(rng.randrange(-8, 9), den) for c in p) for p in U] for U in classes]


def affine_selection_suite(classes, mode: str = "pach", seed: int = 0) -> dict:
    """Affine baselines for the selection theorems.

    ``pach``: ``classes`` are d+1 point sets; reports the largest box found
    over the candidate points of the affine join map and m/n. ``first_selection``:
    all points together; reports the maximal simplicial depth and compares it
    with an independent recount.
    """
    classes = [[geo.as_point(p) for p in U] for U in classes]
    d = len(classes[0][0])
    rng = random.Random(seed)
    notice = None
    flat = [p for U in classes for p in U]
    tries = 0
    while not _general_position_points(flat):
        tries += 1
        if tries > 20:
            raise ParameterError("could not perturb input into general position")
        classes = _perturb(classes, rng)
        flat = [p for U in classes for p in U]
        notice = f"input perturbed into general position ({tries} draws)"
    if mode == "pach":
        if len(classes) != d + 1:
            raise ParameterError(f"pach mode needs d+1 = {d + 1} classes")
        labels = {(i, j): p for i, U in enumerate(classes) for j, p in enumerate(U)}
        M = AffineJoinMap(labels)
        P = PartitionChoice(tuple(tuple((i, j) for j in range(len(U))) for i, U in enumerate(classes)))
        best = HomogeneousBox((), (), 0)
        cands = candidate_points(M, P)
        for u in cands:
            B = homogeneous_box_at(M, P, u)
            if B.m > best.m:
                best = B
        n = min(len(U) for U in classes)
        return {
            "mode": mode, "d": d, "n": n, "m": best.m, "ratio": qstr(Fraction(best.m, n)),
            "u": point_str(best.u) if best.m else None,
            "Z": [[list(z) for z in Z] for Z in best.parts], "candidates": len(cands), "notice": notice,
        }
    if mode == "first_selection":
        pts = flat
        labels = dict(enumerate(pts))
        M = AffineJoinMap(labels)
        faces = list(combinations(range(len(pts)), d + 1))
        cands = candidate_points_for_faces(M, faces)
        best_depth, best_u = -1, None
        for u in cands:
            depth = sum(1 for f in faces if M.chain_contains(f, u))
            if depth > best_depth:
                best_depth, best_u = depth, u
        oracle = simplicial_depth_recount(pts) if d == 2 else None
        return {
            "mode": mode, "d": d, "n": len(pts), "max_depth": best_depth,
            "simplices": len(faces), "fraction": qstr(Fraction(best_depth, len(faces))),
            "u": point_str(best_u), "oracle_depth": oracle,
            "oracle_match": oracle is None or oracle == best_depth, "notice": notice,
        }
    raise ParameterError(f"unknown mode {mode!r}")


def simplicial_depth_recount(pts) -> int:
    """Independent planar recount: max closed-triangle depth over the arrangement vertices.

    Candidates are the input points and every crossing of two lines through
    point pairs; containment uses orientation signs, not barycentric solves.
    """
    pts = [tuple(map(Fraction, p)) for p in pts]

    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    cands = set(pts)
    segs = list(combinations(pts, 2))
    for (a, b), (c, e) in combinations(segs, 2):
        den = (a[0] - b[0]) * (c[1] - e[1]) - (a[1] - b[1]) * (c[0] - e[0])
        if den == 0:
            continue
        t1 = a[0] * b[1] - a[1] * b[0]
        t2 = c[0] * e[1] - c[1] * e[0]
        cands.add(((t1 * (c[0] - e[0]) - (a[0] - b[0]) * t2) / den,
                   (t1 * (c[1] - e[1]) - (a[1] - b[1]) * t2) / den))
    tris = list(combinations(pts, 3))
    best = 0
    for u in cands:
        depth = 0
        for a, b, c in tris:
            s = (orient(a, b, u), orient(b, c, u), orient(c, a, u))
            if all(x >= 0 for x in s) or all(x <= 0 for x in s):
                depth += 1
        best = max(best, depth)
    return best
