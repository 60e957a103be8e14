"""Reference Python versions of the hot loops in ``_core.pyx``.

Both modules expose the same functions with the same tie-breaking, so either
can back the public API.
"""


def min_union_popcount(masks, m):
    """Minimum of ``popcount(OR of masks[i] for i in Z)`` over all m-subsets Z.

    Subsets are visited in lexicographic order and only a strictly smaller
    value replaces the incumbent, so the witness is the lexicographically
    first minimizer. Returns ``(best, witness)``.
    """
    n = len(masks)
    if not 1 <= m <= n:
        raise ValueError(f"m must be in 1..{n}")
    best = None
    witness = None
    idx = list(range(m))
    acc = [0] * (m + 1)
    for i in range(m):
        acc[i + 1] = acc[i] | masks[idx[i]]
    while True:
        c = acc[m].bit_count()
        if best is None or c < best:
            best, witness = c, tuple(idx)
        # advance to the next combination
        i = m - 1
        while i >= 0 and idx[i] == n - m + i:
            i -= 1
        if i < 0:
            break
        idx[i] += 1
        acc[i + 1] = acc[i] | masks[idx[i]]
        for j in range(i + 1, m):
            idx[j] = idx[j - 1] + 1
            acc[j + 1] = acc[j] | masks[idx[j]]
    return best, witness


def weighted_popcount(mask, weights):
    s = 0
    while mask:
        low = mask & -mask
        s += weights[low.bit_length() - 1]
        mask ^= low
    return s


def coset_min(phi, cobs, weights):
    return min(weighted_popcount(phi ^ b, weights) for b in cobs)


def coboundary_scan(n_k, dmasks, wk, wk1, cobs):
    """Exhaustive minimum of ``|d phi|_{k+1} / |[phi]|_k`` over non-coboundaries.

    ``dmasks[i]`` is the coboundary of the i-th basis cochain, ``wk``/``wk1``
    are integer (common-denominator) weights and ``cobs`` lists the
    coboundary subspace B^k. Cochains are visited in Gray-code order; ties
    go to the numerically smallest support mask. Returns ``(num, den, phi)``
    where the ratio is ``num/den`` in the scaled weights, or ``None`` when
    every cochain is a coboundary.
    """
    best = None
    gray_prev = 0
    dphi = 0
    for i in range(1, 1 << n_k):
        g = i ^ (i >> 1)
        flip = (g ^ gray_prev).bit_length() - 1
        gray_prev = g
        dphi ^= dmasks[flip]
        den = coset_min(g, cobs, wk)
        if den == 0:
            continue
        num = weighted_popcount(dphi, wk1)
        if best is None:
            best = (num, den, g)
            continue
        lhs, rhs = num * best[1], best[0] * den
        if lhs < rhs or (lhs == rhs and g < best[2]):
            best = (num, den, g)
    return best
