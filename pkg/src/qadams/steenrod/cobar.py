"""Reduced cobar complexes of connected graded coalgebras over F_p.

The engine takes a positive-degree basis and a reduced coproduct and returns
the dimensions of H^{s,t}. It serves as an independent oracle for the
minimal resolution (dual Steenrod algebra at p = 2) and for Ext over
exterior algebras (Koszul check).
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np

from ..charts import ChartEntry, ExtChart
from ..errors import CompositeNonzero, CostGuard, UnsupportedPrime
from ..linalg import rank_f2_rows, rank_fp

Coproduct = Callable[[Hashable], Dict[Tuple[Hashable, Hashable], int]]

MAX_COBAR_T = 14


def _words(basis: Dict[int, List[Hashable]], t: int, s: int, memo=None) -> List[Tuple[Hashable, ...]]:
    """Sequences of s positive-degree basis elements with total degree t."""
    if memo is None:
        memo = {}
    key = (t, s)
    if key in memo:
        return memo[key]
    if s == 0:
        out = [()] if t == 0 else []
    else:
        out = []
        for d in range(1, t - s + 2):
            for a in basis.get(d, ()):
                for rest in _words(basis, t - d, s - 1, memo):
                    out.append((a,) + rest)
    memo[key] = out
    return out


def _differential(words_s, words_next, coproduct: Coproduct, p: int) -> List[Dict[int, int]]:
    """Columns of d: C^s -> C^{s+1} as sparse dicts over row indices."""
    index = {w: i for i, w in enumerate(words_next)}
    cols = []
    for w in words_s:
        col: Dict[int, int] = {}
        for i, a in enumerate(w):
            sign = -1 if i % 2 else 1
            for (x, y), c in coproduct(a).items():
                key = index[w[:i] + (x, y) + w[i + 1:]]
                col[key] = (col.get(key, 0) + sign * c) % p
        cols.append({k: v for k, v in col.items() if v})
    return cols


def _rank(cols: List[Dict[int, int]], nrows: int, p: int) -> int:
    if not cols or not nrows:
        return 0
    if p == 2:
        return rank_f2_rows(sum(1 << k for k in c) for c in cols)
    m = np.zeros((nrows, len(cols)), dtype=np.int64)
    for j, c in enumerate(cols):
        for k, v in c.items():
            m[k, j] = v
    return rank_fp(m, p)


def cobar_dims(basis: Dict[int, List[Hashable]], coproduct: Coproduct, p: int, max_t: int,
               max_s: Optional[int] = None, check_d2: bool = False) -> Dict[Tuple[int, int], int]:
    """dim H^{s,t} of the reduced cobar complex for t <= max_t."""
    out = {}
    memo: dict = {}
    for t in range(0, max_t + 1):
        top = t if max_s is None else min(t, max_s)
        words = [_words(basis, t, s, memo) for s in range(top + 2)]
        ranks = []
        diffs = []
        for s in range(top + 1):
            d = _differential(words[s], words[s + 1], coproduct, p) if s >= 1 else []
            diffs.append(d)
            ranks.append(_rank(d, len(words[s + 1]), p))
        if check_d2:
            for s in range(1, top):
                _check_d2(diffs[s], diffs[s + 1], p)
        for s in range(top + 1):
            dim = len(words[s]) - ranks[s] - (ranks[s - 1] if s else 0)
            if dim:
                out[(s, t)] = dim
    return out


def _check_d2(d1, d2, p):
    for col in d1:
        acc: Dict[int, int] = {}
        for k, v in col.items():
            for k2, v2 in d2[k].items():
                acc[k2] = (acc.get(k2, 0) + v * v2) % p
        if any(acc.values()):
            raise CompositeNonzero("cobar differential does not square to zero")


# ---------------------------------------------------------------------------
# Dual Steenrod algebra at p = 2
# ---------------------------------------------------------------------------

Exps = Tuple[int, ...]


def _trim(e) -> Exps:
    e = list(e)
    while e and e[-1] == 0:
        e.pop()
    return tuple(e)


def xi_degree(e: Exps) -> int:
    return sum(x * (2 ** (i + 1) - 1) for i, x in enumerate(e))


def dual_basis(n: int) -> List[Exps]:
    """Monomials xi_1^{e_1} xi_2^{e_2} ... of degree n."""
    out = []

    def rec(i: int, rem: int, acc: List[int]):
        w = 2 ** (i + 1) - 1
        if w > rem:
            if rem == 0:
                out.append(_trim(acc))
            return
        for x in range(rem // w + 1):
            rec(i + 1, rem - x * w, acc + [x])

    rec(0, n, [])
    return sorted(set(out))


def _mul(a: Exps, b: Exps) -> Exps:
    n = max(len(a), len(b))
    return _trim((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def _xi_power(n: int, k: int) -> Exps:
    """xi_n^k as an exponent tuple (xi_0 = 1)."""
    if n == 0:
        return ()
    e = [0] * n
    e[n - 1] = k
    return tuple(e)


@lru_cache(maxsize=None)
def dual_coproduct(e: Exps) -> Dict[Tuple[Exps, Exps], int]:
    """Full coproduct of xi^e, Δxi_n = sum_i xi_{n-i}^{2^i} ⊗ xi_i, mod 2."""
    acc: Dict[Tuple[Exps, Exps], int] = {((), ()): 1}
    for idx, r in enumerate(e):
        n = idx + 1
        for _ in range(r):
            factor = [(_xi_power(n - i, 2 ** i), _xi_power(i, 1)) for i in range(n + 1)]
            new: Dict[Tuple[Exps, Exps], int] = {}
            for (l, rr), c in acc.items():
                for fl, fr in factor:
                    key = (_mul(l, fl), _mul(rr, fr))
                    new[key] = (new.get(key, 0) + c) % 2
            acc = {k: v for k, v in new.items() if v}
    return acc


def reduced_dual_coproduct(e: Exps) -> Dict[Tuple[Exps, Exps], int]:
    return {k: v for k, v in dual_coproduct(e).items() if k[0] and k[1]}


def cobar_ext_oracle(p: int, max_t: int, max_s: Optional[int] = None) -> ExtChart:
    """Ext_A(F_p, F_p) dimensions from the cobar complex of A_*; p = 2, t <= 14."""
    if p != 2:
        raise UnsupportedPrime(f"cobar oracle implemented at p = 2 only (got {p})")
    if max_t > MAX_COBAR_T:
        raise CostGuard(f"cobar oracle limited to t <= {MAX_COBAR_T} (asked {max_t})")
    basis = {n: dual_basis(n) for n in range(1, max_t + 1)}
    dims = cobar_dims(basis, reduced_dual_coproduct, 2, max_t, max_s)
    top = max_t if max_s is None else max_s
    ch = ExtChart(2, top, max_t, name="Ext_A cobar")
    for (s, t), d in dims.items():
        ch.set(s, t, ChartEntry.fp(d))
    return ch


# ---------------------------------------------------------------------------
# Exterior coalgebras (Koszul oracle)
# ---------------------------------------------------------------------------

def exterior_cobar_dims(p: int, generator_degrees: Sequence[int], max_t: int,
                        max_s: Optional[int] = None, check_d2: bool = True) -> Dict[Tuple[int, int], int]:
    """Ext over the exterior algebra on primitive generators, by brute force."""
    k = len(generator_degrees)
    basis: Dict[int, List[Tuple[int, ...]]] = {}
    for size in range(1, k + 1):
        for sub in combinations(range(k), size):
            d = sum(generator_degrees[i] for i in sub)
            basis.setdefault(d, []).append(sub)

    def coproduct(sub):
        out = {}
        for size in range(1, len(sub)):
            for left in combinations(sub, size):
                right = tuple(i for i in sub if i not in left)
                # sign of moving right-hand factors past later left-hand ones
                n = sum(1 for u in right for l in left
                        if u < l and generator_degrees[u] % 2 and generator_degrees[l] % 2)
                out[(left, right)] = (-1) ** n % p
        return out

    return cobar_dims(basis, coproduct, p, max_t, max_s, check_d2=check_d2)
