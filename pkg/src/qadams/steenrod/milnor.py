"""Milnor basis of the mod 2 Steenrod algebra and the Milnor product.

A basis element Sq(r_1, r_2, ...) is a tuple with trailing zeros trimmed;
an element of the algebra is a frozenset of such tuples (coefficients in F_2).
"""
from __future__ import annotations

from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Tuple

from ..errors import UnsupportedPrime

Monomial = Tuple[int, ...]
Element = FrozenSet[Monomial]


def trim(r: Iterable[int]) -> Monomial:
    r = list(r)
    while r and r[-1] == 0:
        r.pop()
    return tuple(r)


def degree(r: Monomial, p: int = 2) -> int:
    if p != 2:
        raise UnsupportedPrime(p)
    return sum(x * (2 ** (i + 1) - 1) for i, x in enumerate(r))


@lru_cache(maxsize=None)
def basis(n: int, p: int = 2) -> Tuple[Monomial, ...]:
    """Milnor basis in degree n, sorted lexicographically."""
    if p != 2:
        raise UnsupportedPrime(p)
    if n < 0:
        return ()
    weights = []
    k = 1
    while 2 ** k - 1 <= n:
        weights.append(2 ** k - 1)
        k += 1
    out: List[Monomial] = []

    def rec(i: int, rem: int, acc: List[int]):
        if i < 0:
            if rem == 0:
                out.append(trim(acc))
            return
        w = weights[i]
        for x in range(rem // w, -1, -1):
            acc[i] = x
            rec(i - 1, rem - x * w, acc)
        acc[i] = 0

    if not weights:
        return ((),) if n == 0 else ()
    rec(len(weights) - 1, n, [0] * len(weights))
    return tuple(sorted(set(out)))


@lru_cache(maxsize=1 << 16)
def product(r: Monomial, s: Monomial) -> Element:
    """Sq(r)·Sq(s) by enumerating Milnor matrices.

    Matrices x_ij (i, j >= 0, x_00 unused) with sum_j 2^j x_ij = r_i and
    sum_i x_ij = s_j; the term Sq(t) with t_n = sum_{i+j=n} x_ij appears with
    coefficient prod_n multinomial(x_n0, ..., x_0n) mod 2, which is 1 exactly
    when the entries on each diagonal have pairwise disjoint binary digits.
    """
    if not r:
        return frozenset([s])
    if not s:
        return frozenset([r])
    rows, cols = len(r) + 1, len(s) + 1
    diags = len(r) + len(s)
    M = [[0] * cols for _ in range(rows)]
    for i in range(1, rows):
        M[i][0] = r[i - 1]
    for j in range(1, cols):
        M[0][j] = s[j - 1]
    result = set()
    found = True
    while found:
        ok = True
        t = [0] * diags
        for n in range(1, diags + 1):
            acc = 0
            bits = 0
            for i in range(max(0, n - cols + 1), min(n, rows - 1) + 1):
                x = M[i][n - i]
                if bits & x:
                    ok = False
                    break
                bits |= x
                acc += x
            if not ok:
                break
            t[n - 1] = acc
        if ok:
            result ^= {trim(t)}
        # advance to the next matrix
        found = False
        i = 1
        while not found and i < rows:
            total = M[i][0]
            j = 1
            while not found and j < cols:
                if total >= 2 ** j:
                    col = sum(M[k][j] for k in range(i))
                    if col:
                        found = True
                        for row in range(1, i):
                            M[row][0] = r[row - 1]
                            for c in range(1, cols):
                                M[0][c] += M[row][c]
                                M[row][c] = 0
                        for c in range(1, j):
                            M[0][c] += M[i][c]
                            M[i][c] = 0
                        M[0][j] -= 1
                        M[i][j] += 1
                        M[i][0] = total - 2 ** j
                    else:
                        total += M[i][j] * 2 ** j
                else:
                    total += M[i][j] * 2 ** j
                j += 1
            i += 1
    return frozenset(result)


def multiply(a: Iterable[Monomial], b: Iterable[Monomial]) -> Element:
    """Product of two elements given as sets of monomials."""
    out = set()
    for x in a:
        for y in b:
            out ^= product(x, y)
    return frozenset(out)


def milnor_product(a, b, p: int = 2) -> Element:
    """Product of monomials or elements; odd primes are not supported."""
    if p != 2:
        raise UnsupportedPrime(f"Milnor product implemented at p = 2 only (got {p})")
    a = frozenset([a]) if isinstance(a, tuple) else frozenset(a)
    b = frozenset([b]) if isinstance(b, tuple) else frozenset(b)
    return multiply(a, b)


def name(r: Monomial) -> str:
    return "Sq(" + ",".join(map(str, r)) + ")" if r else "1"
