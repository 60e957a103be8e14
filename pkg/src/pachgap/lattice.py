"""Finite graded lattices, chiefly the subspace lattice L(r, q) of F_q^r.

Elements are integer ids. The order is stored as up-set and down-set bitmasks
(bit ``j`` of ``down[i]`` is set iff ``j <= i``), which makes join/meet and the
atom/coatom queries plain bit operations.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

from . import fq
from .errors import CapacityError, ParameterError, PreconditionError

MAX_FIELD_POINTS = 10**6
MAX_ELEMENTS = 2000


def bits(mask: int):
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class NotALattice(ParameterError):
    pass


@dataclass(frozen=True, eq=False)
class GradedLattice:
    payloads: tuple
    rank: tuple[int, ...]
    down: tuple[int, ...]
    up: tuple[int, ...]
    q: int | None = None
    r: int | None = None
    index: dict = field(default_factory=dict, repr=False)

    @classmethod
    def from_relation(cls, payloads, rank, leq_pairs, q=None, r=None) -> "GradedLattice":
        """Build from an explicit list of ``(x, y)`` pairs meaning ``x <= y``.

        The relation is closed reflexively and transitively. No lattice axiom is
        enforced here; use :func:`validate_lattice` for that.
        """
        n = len(payloads)
        down = [1 << i for i in range(n)]
        for x, y in leq_pairs:
            down[y] |= 1 << x
        # transitive closure, Warshall over bitmasks
        for k in range(n):
            kb = 1 << k
            dk = down[k]
            for i in range(n):
                if down[i] & kb:
                    down[i] |= dk
        up = [0] * n
        for y in range(n):
            for x in bits(down[y]):
                up[x] |= 1 << y
        index = {p: i for i, p in enumerate(payloads)}
        return cls(tuple(payloads), tuple(rank), tuple(down), tuple(up), q, r, index)

    def __len__(self) -> int:
        return len(self.payloads)

    @cached_property
    def height(self) -> int:
        return max(self.rank)

    @property
    def d(self) -> int:
        """Rank of the top minus one (the target dimension)."""
        return self.height - 1

    @cached_property
    def bottom(self) -> int:
        return self._unique_extreme(self.down, "bottom")

    @cached_property
    def top(self) -> int:
        return self._unique_extreme(self.up, "top")

    def _unique_extreme(self, masks, what):
        c = [i for i, m in enumerate(masks) if m == 1 << i]
        if len(c) != 1:
            raise NotALattice(f"no unique {what} element ({len(c)} minimal/maximal)")
        return c[0]

    def ids_of_rank(self, k: int) -> list[int]:
        return [i for i, rk in enumerate(self.rank) if rk == k]

    @cached_property
    def atom_ids(self) -> list[int]:
        return self.ids_of_rank(1)

    @cached_property
    def coatom_ids(self) -> list[int]:
        return self.ids_of_rank(self.height - 1)

    def rank_profile(self) -> tuple[int, ...]:
        prof = [0] * (self.height + 1)
        for rk in self.rank:
            prof[rk] += 1
        return tuple(prof)

    def leq(self, x: int, y: int) -> bool:
        return bool(self.down[y] >> x & 1)

    def lt(self, x: int, y: int) -> bool:
        return x != y and self.leq(x, y)

    def minimal_upper_bounds(self, x: int, y: int) -> list[int]:
        ub = self.up[x] & self.up[y]
        return [u for u in bits(ub) if self.down[u] & ub == 1 << u]

    def maximal_lower_bounds(self, x: int, y: int) -> list[int]:
        lb = self.down[x] & self.down[y]
        return [v for v in bits(lb) if self.up[v] & lb == 1 << v]

    def join(self, x: int, y: int) -> int:
        c = self.minimal_upper_bounds(x, y)
        if len(c) != 1:
            raise NotALattice(f"join of {x} and {y} is not unique: {c}")
        return c[0]

    def meet(self, x: int, y: int) -> int:
        c = self.maximal_lower_bounds(x, y)
        if len(c) != 1:
            raise NotALattice(f"meet of {x} and {y} is not unique: {c}")
        return c[0]

    def join_all(self, ids) -> int:
        ids = list(ids)
        if not ids:
            return self.bottom
        acc = ids[0]
        for x in ids[1:]:
            acc = self.join(acc, x)
        return acc

    def atoms_below(self, x: int) -> list[int]:
        return [a for a in self.atom_ids if self.leq(a, x)]

    def coatoms_above(self, x: int) -> list[int]:
        return [c for c in self.coatom_ids if self.leq(x, c)]

    def covers(self) -> list[tuple[int, int]]:
        """All pairs ``(x, y)`` with ``y`` covering ``x``."""
        out = []
        for y in range(len(self)):
            strict = self.down[y] & ~(1 << y)
            for x in bits(strict):
                between = self.up[x] & strict & ~(1 << x)
                if not between:
                    out.append((x, y))
        return out


def join_meet(L: GradedLattice, x: int, y: int) -> tuple[int, int]:
    return L.join(x, y), L.meet(x, y)


def atoms_and_coatoms(L: GradedLattice, x: int) -> tuple[list[int], list[int]]:
    return L.atoms_below(x), L.coatoms_above(x)


def build_subspace_lattice(r: int, q: int) -> GradedLattice:
    """All subspaces of F_q^r ordered by inclusion, rank = dimension.

    Elements are ordered by dimension and then by the rref enumeration order,
    so ids are stable across runs.
    """
    if not isinstance(r, int) or r < 2:
        raise ParameterError(f"ambient dimension must be >= 2, got {r!r}")
    fq.check_prime(q)
    if q**r > MAX_FIELD_POINTS:
        raise CapacityError(f"q^r = {q ** r} exceeds enumeration guard {MAX_FIELD_POINTS}")
    total = sum(fq.gaussian_binomial(r, k, q) for k in range(r + 1))
    if total > MAX_ELEMENTS:
        raise CapacityError(f"L({r},{q}) has {total} elements, guard is {MAX_ELEMENTS}")

    layers = [list(fq.enumerate_rrefs(r, k, q)) for k in range(r + 1)]
    payloads, rank, offsets = [], [], []
    for k, layer in enumerate(layers):
        offsets.append(len(payloads))
        payloads.extend(layer)
        rank.extend([k] * len(layer))
    pairs = []
    for k in range(r):
        lo, hi = offsets[k], offsets[k + 1]
        for i, x in enumerate(layers[k]):
            for j, y in enumerate(layers[k + 1]):
                if fq.contains(y, x, q):
                    pairs.append((lo + i, hi + j))
    return GradedLattice.from_relation(payloads, rank, pairs, q=q, r=r)


def subspace_join(L: GradedLattice, x: int, y: int) -> int:
    """Join computed algebraically as the span of both row spaces."""
    return L.index[fq.join(L.payloads[x], L.payloads[y], L.q, L.r)]


def subspace_meet(L: GradedLattice, x: int, y: int) -> int:
    return L.index[fq.meet(L.payloads[x], L.payloads[y], L.q, L.r)]


def _boolean_lattice(k: int) -> GradedLattice:
    """Power set of ``range(k)`` under inclusion (test fixture)."""
    subsets = [frozenset(c) for s in range(k + 1) for c in combinations(range(k), s)]
    pairs = [
        (i, j)
        for i, a in enumerate(subsets)
        for j, b in enumerate(subsets)
        if len(b) == len(a) + 1 and a < b
    ]
    return GradedLattice.from_relation(subsets, [len(s) for s in subsets], pairs)


@dataclass(frozen=True)
class PrimeWindow:
    n: int
    d: int
    q: int
    radicand: int  # (d+1) n; window is [radicand^(1/d), 2 radicand^(1/d)]

    @property
    def lower(self) -> str:
        return f"({self.radicand})^(1/{self.d})"

    @property
    def upper(self) -> str:
        return f"2*({self.radicand})^(1/{self.d})"

    @property
    def lower_float(self) -> float:
        return self.radicand ** (1 / self.d)

    @property
    def upper_float(self) -> float:
        return 2 * self.radicand ** (1 / self.d)

    def contains(self, q: int) -> bool:
        # lower <= q <= upper, compared via d-th powers
        return self.radicand <= q**self.d <= 2**self.d * self.radicand


def find_prime_q(n: int, d: int) -> PrimeWindow:
    """Smallest prime q with ((d+1)n)^(1/d) <= q <= 2((d+1)n)^(1/d)."""
    if d < 1:
        raise ParameterError(f"d must be >= 1, got {d}")
    if n < (2 * d) ** d:
        raise PreconditionError(f"n = {n} < (2d)^d = {(2 * d) ** d}")
    w = PrimeWindow(n=n, d=d, q=0, radicand=(d + 1) * n)
    q = 2
    while q**d < w.radicand or not fq.is_prime(q):
        q += 1
    if not w.contains(q):  # Bertrand's postulate rules this out
        raise AssertionError(f"no prime in window for n={n}, d={d}")
    return PrimeWindow(n=n, d=d, q=q, radicand=w.radicand)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ValidationReport:
    checks: list[CheckResult]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def as_dict(self) -> dict:
        return {c.name: {"passed": c.passed, "detail": c.detail} for c in self.checks}


def validate_lattice(L: GradedLattice, sample: int = 2000, seed: int = 0) -> ValidationReport:
    """Check the lattice axioms; failures are report entries, never raised."""
    checks = []
    n = len(L)

    def extreme(masks, name):
        c = [i for i, m in enumerate(masks) if m == 1 << i]
        checks.append(CheckResult(name, len(c) == 1, f"{len(c)} candidates"))
        return c[0] if len(c) == 1 else None

    bot = extreme(L.down, "unique bottom")
    extreme(L.up, "unique top")

    bad_join = [(x, y) for x in range(n) for y in range(x, n) if len(L.minimal_upper_bounds(x, y)) != 1]
    bad_meet = [(x, y) for x in range(n) for y in range(x, n) if len(L.maximal_lower_bounds(x, y)) != 1]
    checks.append(CheckResult("join uniqueness", not bad_join, f"{len(bad_join)} bad pairs {bad_join[:3]}"))
    checks.append(CheckResult("meet uniqueness", not bad_meet, f"{len(bad_meet)} bad pairs {bad_meet[:3]}"))

    bad_grade = [(x, y) for x, y in L.covers() if L.rank[y] != L.rank[x] + 1]
    if bot is not None and L.rank[bot] != 0:
        bad_grade.append((bot, bot))
    checks.append(CheckResult("grading via covers", not bad_grade, f"{len(bad_grade)} bad covers"))

    if bad_join or bad_meet:
        for name in ("commutativity", "associativity", "absorption"):
            checks.append(CheckResult(name, False, "skipped: join/meet not total"))
        return ValidationReport(checks)

    rng = random.Random(seed)
    triples = [(x, y, z) for x in range(n) for y in range(n) for z in range(n)] if n**3 <= sample else [
        (rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(sample)
    ]
    j, m = L.join, L.meet
    comm = all(j(x, y) == j(y, x) and m(x, y) == m(y, x) for x, y, _ in triples)
    assoc = all(j(j(x, y), z) == j(x, j(y, z)) and m(m(x, y), z) == m(x, m(y, z)) for x, y, z in triples)
    absorb = all(j(x, m(x, y)) == x and m(x, j(x, y)) == x for x, y, _ in triples)
    checks.append(CheckResult("commutativity", comm, f"{len(triples)} triples"))
    checks.append(CheckResult("associativity", assoc, f"{len(triples)} triples"))
    checks.append(CheckResult("absorption", absorb, f"{len(triples)} triples"))
    return ValidationReport(checks)


def to_json(L: GradedLattice, derived: bool = True) -> str:
    """Serialize a subspace lattice; ``derived`` omits the order relation."""
    if L.q is None:
        raise ParameterError("only subspace lattices have a JSON form")
    doc = {
        "q": L.q,
        "r": L.r,
        "elements": [
            {"id": i, "rank": L.rank[i], "rref": [list(row) for row in L.payloads[i]]}
            for i in range(len(L))
        ],
    }
    if derived:
        doc["derived"] = True
    else:
        doc["leq"] = [[x, y] for y in range(len(L)) for x in bits(L.down[y]) if x != y]
    return json.dumps(doc, separators=(",", ":"))


def from_json(text: str) -> GradedLattice:
    doc = json.loads(text)
    q, r = doc["q"], doc["r"]
    fq.check_prime(q)
    elems = sorted(doc["elements"], key=lambda e: e["id"])
    if [e["id"] for e in elems] != list(range(len(elems))):
        raise ParameterError("element ids must be 0..n-1")
    payloads = [tuple(tuple(row) for row in e["rref"]) for e in elems]
    rank = [e["rank"] for e in elems]
    for p, rk in zip(payloads, rank):
        if fq.rref(p, q, r) != p or len(p) != rk:
            raise ParameterError(f"element {p} is not a canonical rref of rank {rk}")
    if doc.get("derived"):
        pairs = [
            (i, j)
            for i, x in enumerate(payloads)
            for j, y in enumerate(payloads)
            if rank[j] == rank[i] + 1 and fq.contains(y, x, q)
        ]
        return GradedLattice.from_relation(payloads, rank, pairs, q=q, r=r)
    return GradedLattice.from_relation(payloads, rank, [tuple(p) for p in doc["leq"]], q=q, r=r)
