from fractions import Fraction


def qstr(x) -> str:
    """Serialize a rational as ``"p/q"`` (always with a denominator)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_q(s) -> Fraction:
    return Fraction(s)


def point_str(u) -> list[str]:
    return [qstr(c) for c in u]


def iroot_exact(x: int, k: int):
    """Integer k-th root of ``x`` if ``x`` is a perfect k-th power, else None."""
    if x < 0:
        return None
    lo, hi = 0, 1 << (x.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid**k <= x:
            lo = mid
        else:
            hi = mid - 1
    return lo if lo**k == x else None


def le_root(a, b, k: int) -> bool:
    """Exact test of ``a <= b**(1/k)`` for rational ``a`` and ``b >= 0``."""
    a, b = Fraction(a), Fraction(b)
    if a <= 0:
        return True
    return a**k <= b
