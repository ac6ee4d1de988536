"""Monomials in the polynomial generators t_i (|t_i| = 2p^i - 2) and v_i."""
from __future__ import annotations

from functools import lru_cache
from typing import List, Tuple

Index = Tuple[int, ...]  # sorted multiset of generator indices


def t_degree(p: int, i: int) -> int:
    return 2 * p ** i - 2


def max_index(p: int, t: int) -> int:
    i = 0
    while t_degree(p, i + 1) <= t:
        i += 1
    return i


@lru_cache(maxsize=None)
def monomials(p: int, t: int) -> Tuple[Index, ...]:
    """All multisets I with sum of t-degrees equal to t, in lex order."""
    if t < 0:
        return ()
    out: List[Index] = []

    def rec(rem: int, lo: int, acc: List[int]):
        if rem == 0:
            out.append(tuple(acc))
            return
        i = lo
        while t_degree(p, i) <= rem:
            acc.append(i)
            rec(rem - t_degree(p, i), i, acc)
            acc.pop()
            i += 1

    rec(t, 1, [])
    return tuple(sorted(out))


def degree(p: int, index: Index) -> int:
    return sum(t_degree(p, i) for i in index)


def label(index: Index, var: str = "t") -> str:
    """t1^2*t3 style label; '1' for the empty monomial."""
    if not index:
        return "1"
    parts = []
    for i in sorted(set(index)):
        k = index.count(i)
        parts.append(f"{var}{i}" if k == 1 else f"{var}{i}^{k}")
    return "*".join(parts)
