"""Enumeration budgets.

``PACHGAP_BUDGET_SCALE`` (a rational such as ``"1/2"`` or ``"4"``) multiplies
every budget. Cochain budgets are bit counts, so they scale by adding
``floor(log2(scale))`` bits instead.
"""
import math
import os
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParameterError


def budget_scale() -> Fraction:
    raw = os.environ.get("PACHGAP_BUDGET_SCALE", "1")
    try:
        s = Fraction(raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParameterError(f"PACHGAP_BUDGET_SCALE={raw!r} is not a rational") from exc
    if s <= 0:
        raise ParameterError("PACHGAP_BUDGET_SCALE must be positive")
    return s


@dataclass(frozen=True)
class Budgets:
    subsets: int = 10**7
    partitions: int = 10**4
    chains: int = 10**5
    flags: int = 5040
    cochain_bits: int = 25
    candidates: int = 10**5

    @classmethod
    def from_env(cls, **overrides) -> "Budgets":
        s = budget_scale()
        base = cls(**overrides)
        extra_bits = math.floor(math.log2(s)) if s >= 1 else -math.ceil(math.log2(1 / s))
        return cls(
            subsets=max(1, int(base.subsets * s)),
            partitions=max(1, int(base.partitions * s)),
            chains=max(1, int(base.chains * s)),
            flags=max(1, int(base.flags * s)),
            cochain_bits=max(1, base.cochain_bits + extra_bits),
            candidates=max(1, int(base.candidates * s)),
        )


DEFAULT = Budgets()
