"""The map f = e o g from the atom simplex S(A) to Q^d.

g sends a vertex of the barycentric subdivision of S(A), i.e. a nonempty
atom set sigma, to the lattice element ``join(sigma)``, and is affine on each
subdivision simplex (a flag sigma_0 < sigma_1 < ... of atom sets). e places
every element of L - {bottom} at a generic rational point and is extended
affinely over chains. So the image of a face <sigma> is the union, over
maximal flags inside sigma, of the convex hulls of the embedded chain
``join(sigma_0) <= join(sigma_1) <= ...`` with repeated elements collapsed.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations

from . import geometry as geo
from ._rational import point_str, qstr
from .budget import DEFAULT
from .errors import CapacityError, GenericPositionError, ParameterError, PreconditionError
from .lattice import GradedLattice

COORD_BITS = 16


@dataclass(frozen=True)
class OrderComplex:
    ground: tuple[int, ...]
    faces: tuple[tuple[int, ...], ...]  # chains, each sorted by rank

    def maximal_faces(self) -> list[tuple[int, ...]]:
        fs = set(self.faces)
        return [c for c in self.faces if not any(set(c) < set(o) for o in fs if len(o) == len(c) + 1)]

    def below(self, L: GradedLattice, x: int) -> "OrderComplex":
        """Delta(L~_{<= x}) by filtering."""
        ground = tuple(y for y in self.ground if L.leq(y, x))
        keep = set(ground)
        return OrderComplex(ground, tuple(c for c in self.faces if keep.issuperset(c)))

    def is_cone(self, apex: int) -> bool:
        return all(apex in c for c in self.maximal_faces())

    def f_vector(self) -> list[int]:
        out = [0] * (max((len(c) for c in self.faces), default=0))
        for c in self.faces:
            out[len(c) - 1] += 1
        return out


def _chains(L: GradedLattice, ground, budget):
    ground = sorted(ground, key=lambda x: (L.rank[x], x))
    out = []

    def extend(chain, start):
        out.append(tuple(chain))
        if len(out) > budget:
            raise CapacityError(f"order complex exceeds chain budget {budget}")
        last = chain[-1]
        for i in range(start, len(ground)):
            y = ground[i]
            if L.lt(last, y):
                chain.append(y)
                extend(chain, i + 1)
                chain.pop()

    for i, x in enumerate(ground):
        extend([x], i + 1)
    out.sort(key=lambda c: (len(c), c))
    return out


def order_complex(L: GradedLattice, budget: int | None = None) -> OrderComplex:
    """All chains of L - {bottom}."""
    budget = DEFAULT.chains if budget is None else budget
    bot = L.bottom
    ground = tuple(x for x in range(len(L)) if x != bot)
    return OrderComplex(ground, tuple(_chains(L, ground, budget)))


def join_vertex_map(L: GradedLattice, sigma) -> int:
    """The vertex rule of g: a nonempty atom set goes to its join."""
    sigma = list(sigma)
    if not sigma:
        raise ParameterError("sigma must be nonempty")
    atoms = set(L.atom_ids)
    if not atoms.issuperset(sigma):
        raise ParameterError(f"{sigma} is not a set of atoms")
    return L.join_all(sorted(sigma))


@dataclass
class GenericEmbedding:
    seed: int
    d: int
    points: dict[int, tuple]
    verification: dict = field(default_factory=dict)


def _subsets_upto(ids, k):
    return [c for s in range(1, k + 1) for c in combinations(ids, s)]


def _family_ok(eq_sets):
    return not geo.equations_consistent([e for eqs in eq_sets for e in eqs])


def verify_general_position(points: dict, d: int, mode: str = "sampled", k: int = 10**4,
                            rng: random.Random | None = None, stop_at_first: bool = True) -> dict:
    """Check that affine hulls of d+1 pairwise disjoint sets of size <= d never meet.

    ``mode`` is ``"exhaustive"`` or ``"sampled"``; returns a log dict with
    the number of families tested and the failing families (as id tuples).
    """
    ids = sorted(points)
    if len(set(points.values())) != len(ids):
        dup = [i for i in ids if list(points.values()).count(points[i]) > 1]
        return {"mode": mode, "families_tested": 0, "failures": [[[i] for i in dup[:2]]]}
    eq_cache = {}

    def eqs(S):
        e = eq_cache.get(S)
        if e is None:
            e = eq_cache[S] = geo.affine_equations([points[i] for i in S])
        return e

    failures = []
    tested = 0
    if mode == "exhaustive":
        subs = _subsets_upto(ids, d)
        pos = {i: b for b, i in enumerate(ids)}
        masks = [sum(1 << pos[i] for i in S) for S in subs]
        pair_ok = {}

        def rec(start, fam, used):
            nonlocal tested
            if len(fam) == d + 1:
                tested += 1
                # a disjoint pair of hulls already settles the family
                for a, b in combinations(fam, 2):
                    key = (a, b)
                    v = pair_ok.get(key)
                    if v is None:
                        v = pair_ok[key] = _family_ok([eqs(subs[a]), eqs(subs[b])])
                    if v:
                        return False
                if not _family_ok([eqs(subs[j]) for j in fam]):
                    failures.append([list(subs[j]) for j in fam])
                    return stop_at_first
                return False
            for j in range(start, len(subs)):
                if masks[j] & used:
                    continue
                fam.append(j)
                stop = rec(j + 1, fam, used | masks[j])
                fam.pop()
                if stop:
                    return True
            return False

        rec(0, [], 0)
    elif mode == "sampled":
        rng = rng or random.Random(0)
        if len(ids) < d + 1:
            raise ParameterError("too few points for a family")
        for _ in range(k):
            sizes = [rng.randint(1, d) for _ in range(d + 1)]
            while sum(sizes) > len(ids):
                sizes[sizes.index(max(sizes))] -= 1
            chosen = rng.sample(ids, sum(sizes))
            fam, pos = [], 0
            for s in sizes:
                fam.append(tuple(sorted(chosen[pos:pos + s])))
                pos += s
            tested += 1
            if not _family_ok([eqs(S) for S in fam]):
                failures.append([list(S) for S in fam])
                if stop_at_first:
                    break
    else:
        raise ParameterError(f"unknown verify mode {mode!r}")
    return {"mode": mode, "families_tested": tested, "failures": failures}


def sample_generic_embedding(L: GradedLattice, d: int | None = None, seed: int = 0,
                             verify_mode: str = "sampled", k: int = 10**4,
                             retries: int = 20) -> GenericEmbedding:
    """Seeded rational points for L - {bottom} in [0,1]^d with denominator 2^16.

    A failed general-position check triggers a fresh draw from the same
    generator, up to ``retries`` attempts.
    """
    d = L.d if d is None else d
    if d < 1:
        raise ParameterError("d must be >= 1")
    rng = random.Random(seed)
    bot = L.bottom
    ids = [x for x in range(len(L)) if x != bot]
    den = 1 << COORD_BITS
    last = None
    for attempt in range(retries):
        pts = {x: tuple(Fraction(rng.randrange(den + 1), den) for _ in range(d)) for x in ids}
        log = verify_general_position(pts, d, verify_mode, k, rng)
        log["attempts"] = attempt + 1
        if not log["failures"]:
            return GenericEmbedding(seed, d, pts, log)
        last = log["failures"][0]
    raise GenericPositionError(f"no generic embedding after {retries} draws", family=last)


def embedding_bundle(L: GradedLattice, E: GenericEmbedding) -> str:
    doc = {
        "lattice": {"q": L.q, "r": L.r, "elements": len(L)},
        "seed": E.seed,
        "d": E.d,
        "points": [{"id": x, "coords": point_str(p)} for x, p in sorted(E.points.items())],
        "verification": {
            "mode": E.verification.get("mode"),
            "families_tested": E.verification.get("families_tested"),
            "failures": E.verification.get("failures", []),
        },
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def load_embedding_bundle(text: str) -> GenericEmbedding:
    doc = json.loads(text)
    pts = {p["id"]: tuple(Fraction(c) for c in p["coords"]) for p in doc["points"]}
    return GenericEmbedding(doc["seed"], doc["d"], pts, dict(doc["verification"]))


class PLMapInstance:
    """f = e o g on S(A) for a lattice and a verified embedding.

    Membership results are memoized per (chain, point); the instance is
    otherwise immutable.
    """

    def __init__(self, L: GradedLattice, E: GenericEmbedding, flag_budget: int | None = None):
        self.L = L
        self.E = E
        self.d = E.d
        self.flag_budget = DEFAULT.flags if flag_budget is None else flag_budget
        self._chains_of = {}
        self._contains = {}
        self._proper = None
        self.cache = {}

    def point(self, x: int):
        return self.E.points[x]

    def vertex(self, sigma) -> int:
        return join_vertex_map(self.L, sigma)

    def vertex_image(self, sigma):
        return self.point(self.vertex(sigma))

    def image_chains(self, sigma) -> dict:
        """Distinct embedded chains covering f(<sigma>), each with one flag producing it."""
        key = frozenset(sigma)
        got = self._chains_of.get(key)
        if got is not None:
            return got
        if not key:
            raise ParameterError("empty face")
        if math.factorial(len(key)) > self.flag_budget:
            raise CapacityError(f"|sigma|! = {math.factorial(len(key))} flags exceeds budget")
        L = self.L
        out = {}
        for perm in permutations(sorted(key)):
            chain, flag, acc = [], [], None
            for i, a in enumerate(perm):
                acc = a if acc is None else L.join(acc, a)
                flag.append(frozenset(perm[: i + 1]))
                if not chain or chain[-1] != acc:
                    chain.append(acc)
            t = tuple(chain)
            if t not in out:
                out[t] = tuple(flag)
        self._chains_of[key] = out
        return out

    def chain_points(self, chain):
        return [self.point(x) for x in chain]

    def chain_contains(self, chain, u) -> bool:
        key = (chain, u)
        v = self._contains.get(key)
        if v is None:
            v = self._contains[key] = geo.in_hull(u, self.chain_points(chain))
        return v

    def proper_chains(self):
        """Chains avoiding bottom and top: the union of all Delta(L~_{<= c})."""
        if self._proper is None:
            L = self.L
            ground = [x for x in range(len(L)) if x not in (L.bottom, L.top)]
            self._proper = _chains(L, ground, DEFAULT.chains)
        return self._proper


@dataclass(frozen=True)
class Membership:
    member: bool
    witness: tuple | None  # the flag (SdSimplex) whose image contains u
    chain: tuple | None = None


def point_in_face_image(M: PLMapInstance, u, sigma) -> Membership:
    for chain, flag in M.image_chains(sigma).items():
        if M.chain_contains(chain, u):
            return Membership(True, flag, chain)
    return Membership(False, None)


@dataclass(frozen=True)
class CoverCount:
    count: int
    coatoms: tuple[int, ...]


def coatom_cover_count(M: PLMapInstance, u) -> CoverCount:
    L = M.L
    cov = tuple(c for c in L.coatom_ids if point_in_face_image(M, u, L.atoms_below(c)).member)
    return CoverCount(len(cov), cov)


@dataclass
class CoverCertificate:
    t_prime: list  # pairwise disjoint chains, u in relint of each image
    atoms: list  # a(eta') <= min eta'
    assignment: dict  # covering coatom -> index into t_prime
    count: int
    bound_sum: int  # sum of |C_a(eta')|
    t_prime_closed: list
    boundary: bool  # u on the boundary of some chain image
    valid: bool
    diagnostic: str = ""

    def as_dict(self) -> dict:
        return {
            "t_prime": [list(c) for c in self.t_prime],
            "atoms": self.atoms,
            "assignment": {str(k): v for k, v in sorted(self.assignment.items())},
            "count": self.count,
            "bound_sum": self.bound_sum,
            "t_prime_size_relint": len(self.t_prime),
            "t_prime_size_closed": len(self.t_prime_closed),
            "boundary": self.boundary,
            "valid": self.valid,
            "diagnostic": self.diagnostic,
        }


def _greedy_disjoint(chains):
    used, out = set(), []
    for c in chains:
        if used.isdisjoint(c):
            out.append(c)
            used.update(c)
    return out


def cover_certificate(M: PLMapInstance, u) -> CoverCertificate:
    """Certificate that few coatom images contain u.

    T collects chains of the proper part whose embedded simplex has u in its
    relative interior; T' is a greedy maximal pairwise disjoint subfamily.
    Every covering coatom must lie above the atom chosen under some member
    of T'. The closed-hull variant of T' is computed alongside and reported.
    """
    L = M.L
    cov = coatom_cover_count(M, u)
    if cov.count == 0:
        raise PreconditionError("u lies in no coatom image")
    T_closed, T_rel = [], []
    for eta in M.proper_chains():
        pts = M.chain_points(eta)
        if M.chain_contains(eta, u):
            T_closed.append(eta)
            if geo.in_relint(u, pts):
                T_rel.append(eta)
    tp = _greedy_disjoint(T_rel)
    tp_closed = _greedy_disjoint(T_closed)
    atoms = [L.atoms_below(eta[0])[0] for eta in tp]
    assignment, missing = {}, []
    for c in cov.coatoms:
        j = next((i for i, a in enumerate(atoms) if L.leq(a, c)), None)
        if j is None:
            missing.append(c)
        else:
            assignment[c] = j
    bound_sum = sum(len(L.coatoms_above(a)) for a in atoms)
    max_ca = max(len(L.coatoms_above(a)) for a in L.atom_ids)
    diag = []
    if missing:
        diag.append(f"coatoms {missing} not covered by T'")
    if len(tp) > M.d or len(tp_closed) > M.d:
        diag.append(f"|T'| = {len(tp)} (closed {len(tp_closed)}) exceeds d = {M.d}: general position violated")
    if cov.count > bound_sum or bound_sum > M.d * max_ca:
        diag.append("count bound chain broken")
    return CoverCertificate(tp, atoms, assignment, cov.count, bound_sum, tp_closed,
                            len(T_closed) != len(T_rel), not diag, "; ".join(diag))


def format_point(u) -> str:
    return "(" + ", ".join(qstr(c) for c in u) + ")"
