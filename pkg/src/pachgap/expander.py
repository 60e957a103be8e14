"""Atom/coatom bipartite graph of a graded lattice and its vertex expansion.

All bounds are exact ``Fraction`` values. The only irrational quantity that
shows up, ``N_d - N_d^(1+1/d)/m``, is never evaluated; comparisons against
it are turned into integer power comparisons.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb

from . import fq, kernels
from .budget import DEFAULT
from .errors import CapacityError, ParameterError
from .lattice import GradedLattice, bits


@dataclass(frozen=True)
class BipartiteIncidence:
    atom_ids: tuple[int, ...]
    coatom_ids: tuple[int, ...]
    masks: tuple[int, ...]  # masks[i]: bit j set iff atom_ids[i] <= coatom_ids[j]
    d: int
    q: int | None = None

    @property
    def degrees(self) -> list[int]:
        return [m.bit_count() for m in self.masks]

    @property
    def n_atoms(self) -> int:
        return len(self.atom_ids)

    @property
    def n_coatoms(self) -> int:
        return len(self.coatom_ids)

    def proj_counts(self) -> dict[int, int]:
        """N_d, N_{d-1}, N_{d-2} for subspace lattices."""
        if self.q is None:
            raise ParameterError("projective counts need a subspace lattice")
        return {k: fq.proj_count(k, self.q) for k in (self.d, self.d - 1, self.d - 2)}

    def atom_index(self, a: int) -> int:
        try:
            return self._pos[a]
        except KeyError:
            raise ParameterError(f"unknown atom id {a!r}") from None

    @cached_property
    def _pos(self) -> dict[int, int]:
        return {a: i for i, a in enumerate(self.atom_ids)}


def incidence(L: GradedLattice) -> BipartiteIncidence:
    if L.d < 1:
        raise ParameterError("need rank >= 2 (d >= 1)")
    A, C = L.atom_ids, L.coatom_ids
    masks = []
    for a in A:
        m = 0
        for j, c in enumerate(C):
            if L.leq(a, c):
                m |= 1 << j
        masks.append(m)
    return BipartiteIncidence(tuple(A), tuple(C), tuple(masks), L.d, L.q)


def projective_incidence(r: int, q: int) -> BipartiteIncidence:
    """Points vs hyperplanes of F_q^r without building the whole lattice.

    Hyperplanes are indexed by the normalized normal vector, so atom and
    coatom ids are both positions in the projective point list.
    """
    fq.check_prime(q)
    if r < 2:
        raise ParameterError("ambient dimension must be >= 2")
    pts = fq.projective_points(r, q)
    masks = []
    for p in pts:
        m = 0
        for j, h in enumerate(pts):
            if fq.dot(p, h, q) == 0:
                m |= 1 << j
        masks.append(m)
    ids = tuple(range(len(pts)))
    return BipartiteIncidence(ids, ids, tuple(masks), r - 1, q)


def neighborhood(G: BipartiteIncidence, Z) -> list[int]:
    """Gamma(Z) as a sorted list of coatom ids."""
    acc = 0
    for a in Z:
        acc |= G.masks[G.atom_index(a)]
    return [G.coatom_ids[j] for j in bits(acc)]


def theorem21_rhs_counts(d: int, max_ca: int, n_coatoms: int) -> Fraction:
    if d < 1:
        raise ParameterError("d = 0 not supported")
    return Fraction(d, d + 1) * (max_ca + n_coatoms)


def theorem21_rhs(L) -> Fraction:
    """(d/(d+1)) (max_a |C_a| + |C|) for a lattice or an incidence graph."""
    G = L if isinstance(L, BipartiteIncidence) else None
    if G is None:
        if L.height < 2:
            raise ParameterError("d = 0 not supported")
        G = incidence(L)
    return theorem21_rhs_counts(G.d, max(G.degrees), G.n_coatoms)


@dataclass(frozen=True)
class CorradiBound:
    m: int
    q: int
    d: int
    value: Fraction
    chain: tuple = ()  # (label, exact value or None) in display order
    checks: tuple = ()  # (description, holds)

    @property
    def ok(self) -> bool:
        return all(h for _, h in self.checks)


def corradi_lower_bound(m: int, q: int, d: int) -> CorradiBound:
    """Lower bound on |Gamma(Z)| for |Z| = m in L(d+1, q), plus its weakenings.

    Checks recorded: the two algebraic rewrites of the first expression are
    identities, and each of the three weaker bounds is <= its predecessor.
    The weakening chain needs N_{d-2} > 0, i.e. d >= 2.
    """
    if m < 1:
        raise ParameterError("m must be >= 1")
    fq.check_prime(q)
    if d < 1:
        raise ParameterError("d must be >= 1")
    Nd, N1, N2 = (fq.proj_count(k, q) for k in (d, d - 1, d - 2))
    qd1 = q ** (d - 1)
    first = Fraction(m * N1 * N1, N1 + (m - 1) * N2)
    chain = [("m N_{d-1}^2 / (N_{d-1} + (m-1) N_{d-2})", first)]
    checks = []
    second = Fraction(m * N1 * N1, qd1 + m * N2)
    third = Nd - Fraction(qd1 * (Nd - m), qd1 + m * N2)
    checks.append(("N_{d-1} - N_{d-2} = q^(d-1)", N1 - N2 == qd1))
    checks.append(("first = m N_{d-1}^2/(q^(d-1) + m N_{d-2})", first == second))
    checks.append(("first = N_d - q^(d-1)(N_d - m)/(q^(d-1) + m N_{d-2})", first == third))
    if N2 > 0:
        fourth = Nd - Fraction(qd1 * Nd, m * N2)
        fifth = Nd - Fraction(q * Nd, m)
        chain += [
            ("N_d - q^(d-1) N_d/(m N_{d-2})", fourth),
            ("N_d - q N_d/m", fifth),
            ("N_d - N_d^(1+1/d)/m", None),
        ]
        checks.append(("N_d - q^(d-1) N_d/(m N_{d-2}) <= first", fourth <= first))
        checks.append(("N_d - q N_d/m <= previous", fifth <= fourth))
        # N_d - N_d^(1+1/d)/m <= N_d - q N_d/m  <=>  q^d <= N_d
        checks.append(("N_d - N_d^(1+1/d)/m <= previous", q**d <= Nd))
    return CorradiBound(m, q, d, first, tuple(chain), tuple(checks))


@dataclass(frozen=True)
class ExpansionRecord:
    m: int
    min_gamma: int
    witness: tuple[int, ...]
    corradi: Fraction | None
    rhs21: Fraction
    neighbors: tuple[int, ...] = field(default=(), repr=False)


def min_vertex_expansion(G: BipartiteIncidence, m: int, budget: int | None = None,
                         backend: str | None = None) -> ExpansionRecord:
    """Exact min |Gamma(Z)| over m-subsets of atoms, lexicographically-first witness."""
    n = G.n_atoms
    if not 1 <= m <= n:
        raise ParameterError(f"m must be in 1..{n}")
    budget = DEFAULT.subsets if budget is None else budget
    if comb(n, m) > budget:
        raise CapacityError(f"C({n},{m}) = {comb(n, m)} subsets exceeds budget {budget}")
    best, idx = kernels.min_union_popcount(G.masks, m, backend=backend)
    witness = tuple(G.atom_ids[i] for i in idx)
    corradi = corradi_lower_bound(m, G.q, G.d).value if G.q is not None else None
    rhs = theorem21_rhs_counts(G.d, max(G.degrees), G.n_coatoms)
    return ExpansionRecord(m, best, witness, corradi, rhs, tuple(neighborhood(G, witness)))


def expansion_table(G: BipartiteIncidence, ms=None, budget: int | None = None) -> list[ExpansionRecord]:
    ms = range(1, G.n_atoms + 1) if ms is None else ms
    return [min_vertex_expansion(G, m, budget) for m in ms]


CSV_COLUMNS = ["m", "min_gamma", "corradi_num", "corradi_den", "rhs21_num", "rhs21_den", "witness"]


def expansion_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        c = r.corradi if r.corradi is not None else Fraction(0)
        w.writerow([r.m, r.min_gamma, c.numerator, c.denominator,
                    r.rhs21.numerator, r.rhs21.denominator, ";".join(map(str, r.witness))])
    return buf.getvalue()


def read_expansion_csv(text: str) -> list[dict]:
    rows = []
    for row in csv.DictReader(io.StringIO(text)):
        rows.append({
            "m": int(row["m"]),
            "min_gamma": int(row["min_gamma"]),
            "corradi": Fraction(int(row["corradi_num"]), int(row["corradi_den"])),
            "rhs21": Fraction(int(row["rhs21_num"]), int(row["rhs21_den"])),
            "witness": tuple(int(x) for x in row["witness"].split(";") if x),
        })
    return rows
