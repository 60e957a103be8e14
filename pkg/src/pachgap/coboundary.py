"""Weighted F_2 coboundary expansion of small pure complexes.

Cochains are int bitmasks over a fixed ordering of the k-faces. The complex
is augmented with the empty face in dimension -1, so h_0 sees the reduced
cohomology (the constant cochains are coboundaries).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

from . import kernels
from ._rational import qstr
from .budget import DEFAULT
from .errors import CapacityError, ParameterError
from .lattice import bits


@dataclass(frozen=True, eq=False)
class WeightedPureComplex:
    dim: int
    labels: tuple  # vertex labels; faces use indices into this
    faces: dict  # k -> tuple of sorted index tuples, k = -1..dim
    counts: dict  # k -> tuple c(sigma) aligned with faces[k]

    @property
    def f_top(self) -> int:
        return len(self.faces[self.dim])

    def denom(self, k: int) -> int:
        """Common denominator of the k-weights: binom(d+1, k+1) f_d."""
        return comb(self.dim + 1, k + 1) * self.f_top

    def weight(self, k: int, i: int) -> Fraction:
        return Fraction(self.counts[k][i], self.denom(k))

    def weights(self, k: int) -> list[Fraction]:
        return [self.weight(k, i) for i in range(len(self.faces.get(k, ())))]

    def index(self, k: int) -> dict:
        return {f: i for i, f in enumerate(self.faces.get(k, ()))}

    def face_labels(self, k: int, i: int) -> tuple:
        return tuple(self.labels[v] for v in self.faces[k][i])


def build_weighted_complex(top_faces) -> WeightedPureComplex:
    """Downward closure of the given top faces with c(sigma) and weights."""
    top_faces = [tuple(f) for f in top_faces]
    if not top_faces:
        raise ParameterError("need at least one top face")
    sizes = {len(f) for f in top_faces}
    if len(sizes) != 1:
        raise ParameterError(f"top faces have mixed dimensions {sorted(s - 1 for s in sizes)}")
    if any(len(set(f)) != len(f) for f in top_faces):
        raise ParameterError("repeated vertex in a face")
    labels = []
    pos = {}
    for f in top_faces:
        for v in f:
            if v not in pos:
                pos[v] = len(labels)
                labels.append(v)
    d = sizes.pop() - 1
    tops = sorted({tuple(sorted(pos[v] for v in f)) for f in top_faces})
    if len(tops) != len(top_faces):
        raise ParameterError("duplicate top face")
    cnt = {k: {} for k in range(-1, d + 1)}
    for t in tops:
        for k in range(-1, d + 1):
            for s in combinations(t, k + 1):
                cnt[k][s] = cnt[k].get(s, 0) + 1
    faces = {k: tuple(sorted(cnt[k])) for k in cnt}
    counts = {k: tuple(cnt[k][f] for f in faces[k]) for k in cnt}
    return WeightedPureComplex(d, tuple(labels), faces, counts)


def parse_complex(text: str) -> WeightedPureComplex:
    """One top face per line, whitespace-separated vertex labels; '#' comments."""
    faces = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].split()
        if line:
            faces.append(tuple(line))
    return build_weighted_complex(faces)


def join_complex(n: int, d: int) -> WeightedPureComplex:
    """V_1 * ... * V_{d+1} with |V_i| = n (complete (d+1)-partite complex)."""
    from itertools import product
    classes = [[f"v{i}_{j}" for j in range(n)] for i in range(d + 1)]
    return build_weighted_complex(list(product(*classes)))


def coboundary_masks(X: WeightedPureComplex, k: int) -> list[int]:
    """d(e_i) for every k-face i, as masks over the (k+1)-faces."""
    up = X.faces.get(k + 1, ())
    idx = {f: i for i, f in enumerate(X.faces[k])}
    out = [0] * len(X.faces[k])
    for j, t in enumerate(up):
        for s in combinations(t, len(t) - 1):
            out[idx[s]] |= 1 << j
    return out


def coboundary(X: WeightedPureComplex, k: int, phi: int) -> int:
    dm = coboundary_masks(X, k)
    acc = 0
    for i in bits(phi):
        acc ^= dm[i]
    return acc


def norm(X: WeightedPureComplex, k: int, phi: int) -> Fraction:
    return Fraction(sum(X.counts[k][i] for i in bits(phi)), X.denom(k))


def _span(vectors) -> list[int]:
    basis = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    out = [0]
    for b in basis:
        out += [x ^ b for x in out]
    return sorted(out)


def coboundary_space(X: WeightedPureComplex, k: int, budget_bits: int | None = None) -> list[int]:
    """B^k = d(C^{k-1}) as a sorted list of masks."""
    budget_bits = DEFAULT.cochain_bits if budget_bits is None else budget_bits
    if k - 1 < -1:
        return [0]
    if len(X.faces[k - 1]) > budget_bits:
        raise CapacityError(f"|X({k - 1})| = {len(X.faces[k - 1])} exceeds {budget_bits} bits")
    return _span(coboundary_masks(X, k - 1))


def cosystolic_norm(X: WeightedPureComplex, k: int, phi: int, budget_bits: int | None = None) -> Fraction:
    cobs = coboundary_space(X, k, budget_bits)
    return min(norm(X, k, phi ^ b) for b in cobs)


@dataclass(frozen=True)
class CochainReport:
    dphi: int
    norm: Fraction
    cosystolic_norm: Fraction


def cochain_calculus(X: WeightedPureComplex, k: int, phi: int,
                     budget_bits: int | None = None) -> CochainReport:
    if k not in X.faces:
        raise ParameterError(f"no faces of dimension {k}")
    if phi >> len(X.faces[k]):
        raise ParameterError("cochain support outside X(k)")
    return CochainReport(coboundary(X, k, phi), norm(X, k, phi), cosystolic_norm(X, k, phi, budget_bits))


@dataclass(frozen=True)
class HResult:
    k: int
    value: Fraction | None  # None: every k-cochain is a coboundary (empty minimum)
    minimizer: int | None

    def as_dict(self, X: WeightedPureComplex | None = None) -> dict:
        out = {
            "k": self.k,
            "h_num": self.value.numerator if self.value is not None else None,
            "h_den": self.value.denominator if self.value is not None else None,
            "h": qstr(self.value) if self.value is not None else None,
            "minimizer_mask": self.minimizer,
        }
        if X is not None and self.minimizer is not None:
            out["minimizer_support"] = [list(map(str, X.face_labels(self.k, i))) for i in bits(self.minimizer)]
        return out


def h_k(X: WeightedPureComplex, k: int, budget_bits: int | None = None, backend: str | None = None) -> HResult:
    """Exact k-th coboundary expansion constant by double exhaustion."""
    budget_bits = DEFAULT.cochain_bits if budget_bits is None else budget_bits
    if not 0 <= k <= X.dim:
        raise ParameterError(f"k must be in 0..{X.dim}")
    nk = len(X.faces[k])
    if nk > budget_bits:
        raise CapacityError(f"|X({k})| = {nk} exceeds {budget_bits} bits")
    cobs = coboundary_space(X, k, budget_bits)
    dmasks = coboundary_masks(X, k)
    wk = list(X.counts[k])
    wk1 = list(X.counts.get(k + 1, ()))
    res = kernels.coboundary_scan(nk, dmasks, wk, wk1, cobs, backend=backend)
    if res is None:
        return HResult(k, None, None)
    num, den, phi = res
    value = Fraction(num * X.denom(k), den * X.denom(k + 1)) if wk1 else Fraction(0)
    return HResult(k, value, phi)


def f2_rank(rows) -> int:
    """Rank over F_2 of a matrix given as row bitmasks."""
    pivots = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top not in pivots:
                pivots[top] = r
                break
            r ^= pivots[top]
    return len(pivots)


def reduced_betti_f2(X: WeightedPureComplex, k: int) -> int:
    """dim H~^k(X; F_2) from boundary-matrix ranks, built straight from the face lists."""
    def boundary_rank(j):
        # rank of the map from j-faces to (j-1)-faces
        if j not in X.faces or (j - 1) not in X.faces:
            return 0
        lower = {f: i for i, f in enumerate(X.faces[j - 1])}
        rows = []
        for f in X.faces[j]:
            r = 0
            for v in f:
                r |= 1 << lower[tuple(x for x in f if x != v)]
            rows.append(r)
        return f2_rank(rows)

    return len(X.faces[k]) - boundary_rank(k) - boundary_rank(k + 1)


@dataclass(frozen=True)
class OverlapResult:
    u: tuple | None
    covered: int
    fraction: Fraction


def overlap_point(X: WeightedPureComplex, M, budget: int | None = None) -> OverlapResult:
    """Point covered by the most top-face images among the candidate points.

    ``M`` is a map object as used by :mod:`pachgap.pach` whose labels are the
    vertex labels of ``X`` (see :func:`affine_map`).
    """
    from .pach import candidate_points_for_faces, face_member
    tops = [X.face_labels(X.dim, i) for i in range(X.f_top)]
    if M.d != X.dim:
        raise ParameterError(f"map target dimension {M.d} differs from complex dimension {X.dim}")
    best_u, best = None, -1
    for u in candidate_points_for_faces(M, tops, budget):
        c = sum(1 for f in tops if face_member(M, f, u))
        if c > best:
            best_u, best = u, c
    return OverlapResult(best_u, best, Fraction(best, X.f_top))


def affine_map(X: WeightedPureComplex, images: dict):
    from .pach import AffineJoinMap
    missing = [v for v in X.labels if v not in images]
    if missing:
        raise ParameterError(f"no image for vertices {missing}")
    return AffineJoinMap({v: images[v] for v in X.labels})


def h_report_json(X: WeightedPureComplex, res: HResult) -> str:
    return json.dumps(res.as_dict(X), sort_keys=True)
