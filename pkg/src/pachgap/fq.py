"""Linear algebra over the prime field F_q.

Vectors are tuples of ints in ``range(q)``; matrices are tuples of row
vectors. Everything here is small and exact; no numpy.
"""
from itertools import combinations, product

from .errors import ParameterError


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


def check_prime(q: int) -> None:
    if not isinstance(q, int) or not is_prime(q):
        raise ParameterError(f"q must be prime, got {q!r}")


def rref(rows, q: int, ncols: int | None = None) -> tuple[tuple[int, ...], ...]:
    """Reduced row-echelon form mod q with zero rows dropped."""
    m = [[x % q for x in r] for r in rows]
    if not m:
        return ()
    ncols = len(m[0]) if ncols is None else ncols
    piv_row = 0
    for col in range(ncols):
        sel = None
        for i in range(piv_row, len(m)):
            if m[i][col]:
                sel = i
                break
        if sel is None:
            continue
        m[piv_row], m[sel] = m[sel], m[piv_row]
        inv = pow(m[piv_row][col], -1, q)
        pr = [(x * inv) % q for x in m[piv_row]]
        m[piv_row] = pr
        for i in range(len(m)):
            if i != piv_row and m[i][col]:
                f = m[i][col]
                m[i] = [(a - f * b) % q for a, b in zip(m[i], pr)]
        piv_row += 1
        if piv_row == len(m):
            break
    return tuple(tuple(r) for r in m[:piv_row])


def pivots(rr) -> list[int]:
    out = []
    for r in rr:
        for j, x in enumerate(r):
            if x:
                out.append(j)
                break
    return out


def reduce_vector(v, rr, q: int) -> tuple[int, ...]:
    """Reduce ``v`` against an rref basis; zero iff ``v`` lies in its row space."""
    v = list(v)
    for r, p in zip(rr, pivots(rr)):
        f = v[p] % q
        if f:
            v = [(a - f * b) % q for a, b in zip(v, r)]
    return tuple(x % q for x in v)


def contains(outer, inner, q: int) -> bool:
    """Row space of ``inner`` is contained in row space of ``outer`` (both rref)."""
    if len(inner) > len(outer):
        return False
    return all(not any(reduce_vector(r, outer, q)) for r in inner)


def nullspace(rr, q: int, ncols: int) -> tuple[tuple[int, ...], ...]:
    """Basis (in rref) of ``{x : r . x = 0 for all rows r}``."""
    piv = pivots(rr)
    free = [j for j in range(ncols) if j not in piv]
    basis = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for r, p in zip(rr, piv):
            x[p] = (-r[f]) % q
        basis.append(x)
    return rref(basis, q, ncols)


def join(x, y, q: int, ncols: int):
    return rref(list(x) + list(y), q, ncols)


def meet(x, y, q: int, ncols: int):
    """Intersection via double annihilator: (x^perp + y^perp)^perp."""
    ax = nullspace(x, q, ncols)
    ay = nullspace(y, q, ncols)
    return nullspace(rref(list(ax) + list(ay), q, ncols), q, ncols)


def dot(u, v, q: int) -> int:
    return sum(a * b for a, b in zip(u, v)) % q


def enumerate_rrefs(r: int, k: int, q: int):
    """Yield every k-dimensional subspace of F_q^r as its rref, in a fixed order."""
    if k == 0:
        yield ()
        return
    for piv in combinations(range(r), k):
        slots = [(i, j) for i, p in enumerate(piv) for j in range(p + 1, r) if j not in piv]
        for vals in product(range(q), repeat=len(slots)):
            m = [[0] * r for _ in range(k)]
            for i, p in enumerate(piv):
                m[i][p] = 1
            for (i, j), v in zip(slots, vals):
                m[i][j] = v
            yield tuple(tuple(row) for row in m)


def projective_points(r: int, q: int) -> list[tuple[int, ...]]:
    """Normalized representatives of the 1-dim subspaces (first nonzero entry 1)."""
    return [rr[0] for rr in enumerate_rrefs(r, 1, q)]


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def proj_count(k: int, q: int) -> int:
    """N_k = (q^(k+1) - 1)/(q - 1): points of projective k-space; N_{-1} = 0."""
    if k < -1:
        raise ParameterError("N_k undefined for k < -1")
    return (q ** (k + 1) - 1) // (q - 1)
