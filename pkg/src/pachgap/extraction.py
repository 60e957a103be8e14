"""Complete multipartite sub-hypergraphs ("boxes") in (d+1)-partite hypergraphs.

Two routes: :func:`extract_box` mines the counting proof (pick m vertices of
the last class whose common link is large, recurse on that link) and may
fail below its density threshold; :func:`max_box_exact` is plain exhaustive
search used as the oracle.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from .errors import CapacityError, ParameterError
from .lattice import bits

MAX_EXACT_CLASS = 6
MAX_EXACT_CLASSES = 3


@dataclass(frozen=True)
class MultipartiteHypergraph:
    classes: tuple[tuple, ...]
    edges: frozenset  # index tuples, one index per class

    def __post_init__(self):
        k = len(self.classes)
        if k < 1:
            raise ParameterError("need at least one class")
        sizes = [len(c) for c in self.classes]
        for e in self.edges:
            if len(e) != k or any(not 0 <= i < s for i, s in zip(e, sizes)):
                raise ParameterError(f"edge {e} does not pick one vertex per class")

    @classmethod
    def from_labels(cls, classes, edges) -> "MultipartiteHypergraph":
        classes = tuple(tuple(c) for c in classes)
        pos = [{v: i for i, v in enumerate(c)} for c in classes]
        try:
            idx = frozenset(tuple(p[v] for p, v in zip(pos, e)) for e in edges)
        except KeyError as exc:
            raise ParameterError(f"unknown vertex {exc}") from None
        return cls(classes, idx)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.classes)

    @property
    def mask(self) -> int:
        """Edge set as a bitset over the product, mixed radix with class 0 most significant."""
        m = 0
        for e in self.edges:
            m |= 1 << self.flat_index(e)
        return m

    def flat_index(self, e) -> int:
        i = 0
        for x, s in zip(e, self.sizes):
            i = i * s + x
        return i

    def density(self) -> Fraction:
        total = 1
        for s in self.sizes:
            total *= s
        return Fraction(len(self.edges), total)

    def has_edge(self, e) -> bool:
        return tuple(e) in self.edges

    def last_class_links(self) -> dict:
        """prefix tuple -> bitmask of last-class vertices completing it to an edge."""
        out = {}
        for e in self.edges:
            out[e[:-1]] = out.get(e[:-1], 0) | 1 << e[-1]
        return out

    def labels(self, box) -> tuple[tuple, ...]:
        return tuple(tuple(self.classes[i][j] for j in Z) for i, Z in enumerate(box))

    def is_complete_box(self, box) -> bool:
        return all(t in self.edges for t in product(*box))

    def delete_edges(self, drop) -> "MultipartiteHypergraph":
        return MultipartiteHypergraph(self.classes, self.edges - frozenset(drop))


@dataclass(frozen=True)
class BoxResult:
    m: int
    box: tuple | None  # index sets per class
    witness: tuple | None  # label sets per class


def max_box_exact(F: MultipartiteHypergraph) -> BoxResult:
    """Largest m with a complete m x ... x m box; lexicographically-first witness."""
    k = len(F.classes)
    if k > MAX_EXACT_CLASSES or max(F.sizes) > MAX_EXACT_CLASS:
        raise CapacityError(
            f"exact box search is limited to {MAX_EXACT_CLASSES} classes of size <= {MAX_EXACT_CLASS}")
    if not F.edges:
        return BoxResult(0, None, None)
    links = F.last_class_links()
    for m in range(min(F.sizes), 0, -1):
        box = _find_box(F, m, links)
        if box is not None:
            return BoxResult(m, box, F.labels(box))
    raise AssertionError("nonempty hypergraph has a 1-box")


def _find_box(F, m, links):
    k = len(F.classes)
    if k == 1:
        pts = sorted(e[0] for e in F.edges)
        return (tuple(pts[:m]),) if len(pts) >= m else None
    heads = [combinations(range(s), m) for s in F.sizes[:-1]]
    for choice in product(*heads):
        common = (1 << F.sizes[-1]) - 1
        for t in product(*choice):
            common &= links.get(t, 0)
            if common.bit_count() < m:
                break
        else:
            last = tuple(list(bits(common))[:m])
            return tuple(choice) + (last,)
    return None


def extract_box(F: MultipartiteHypergraph, m: int) -> BoxResult:
    """Counting-driven extraction of an m-box, or ``BoxResult(0, None, None)`` on failure.

    For two classes, an m-set of the first class whose common neighbourhood
    has m vertices is found by scanning all m-sets (the Kovari-Sos-Turan
    count). For more classes, m-sets T of the last class are ranked by the
    size of their common link; only those at or above the average link size
    (which some T must reach) are recursed into.
    """
    if m < 1:
        raise ParameterError("m must be >= 1")
    if m > min(F.sizes):
        return BoxResult(0, None, None)
    box = _extract(F, m)
    if box is None:
        return BoxResult(0, None, None)
    if not F.is_complete_box(box):
        raise AssertionError(f"extracted box {box} is not complete")
    return BoxResult(m, box, F.labels(box))


def _extract(F, m):
    k = len(F.classes)
    if k == 1:
        pts = sorted(e[0] for e in F.edges)
        return (tuple(pts[:m]),) if len(pts) >= m else None
    if k == 2:
        links = F.last_class_links()
        best = None
        for S in combinations(range(F.sizes[0]), m):
            common = (1 << F.sizes[1]) - 1
            for s in S:
                common &= links.get((s,), 0)
            if common.bit_count() >= m and (best is None or common.bit_count() > best[1].bit_count()):
                best = (S, common)
        if best is None:
            return None
        return (best[0], tuple(list(bits(best[1]))[:m]))
    by_last = {}
    for e in F.edges:
        by_last.setdefault(e[-1], set()).add(e[:-1])
    ranked = []
    total = 0
    for T in combinations(range(F.sizes[-1]), m):
        link = set.intersection(*(by_last.get(t, set()) for t in T))
        total += len(link)
        ranked.append((len(link), T, link))
    if not ranked:
        return None
    avg = Fraction(total, len(ranked))
    ranked.sort(key=lambda r: (-r[0], r[1]))
    for size, T, link in ranked:
        if size < avg or size < m ** (k - 1):
            break
        sub = MultipartiteHypergraph(F.classes[:-1], frozenset(link))
        inner = _extract(sub, m)
        if inner is not None:
            return tuple(inner) + (T,)
    return None


def largest_extracted(F: MultipartiteHypergraph) -> BoxResult:
    """Largest m for which :func:`extract_box` succeeds."""
    for m in range(min(F.sizes), 0, -1):
        r = extract_box(F, m)
        if r.m:
            return r
    return BoxResult(0, None, None)


def parse_hypergraph(text: str) -> MultipartiteHypergraph:
    """Edge-list format: header ``classes: a b | c d | e f``, then one edge per line."""
    classes = None
    edges = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("classes:"):
            classes = [c.split() for c in line[len("classes:"):].split("|")]
            continue
        if classes is None:
            raise ParameterError("missing 'classes:' header line")
        edges.append(tuple(line.split()))
    if classes is None:
        raise ParameterError("missing 'classes:' header line")
    return MultipartiteHypergraph.from_labels(classes, edges)


def format_hypergraph(F: MultipartiteHypergraph) -> str:
    head = "classes: " + " | ".join(" ".join(map(str, c)) for c in F.classes)
    lines = [" ".join(str(F.classes[i][j]) for i, j in enumerate(e)) for e in sorted(F.edges)]
    return "\n".join([head] + lines) + "\n"
