"""Minimal free resolution of F_2 over the Steenrod algebra.

Stage s has generators g with internal degree |g|; an element of stage s in
degree t is a bitmask over the basis pairs (generator, Milnor monomial of
degree t - |g|). The differential of a generator is stored as a set of
(target generator, monomial) pairs. Bidegrees are processed t first, then s.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

from ..charts import ChartEntry, ExtChart
from ..errors import ResourceBudgetExceeded, UnsupportedPrime
from . import milnor
from .milnor import Monomial

Term = Tuple[int, Monomial]  # (generator index in the previous stage, monomial)


@dataclass
class Stage:
    degrees: List[int] = field(default_factory=list)
    differentials: List[frozenset] = field(default_factory=list)  # frozenset of Terms


class _Basis:
    """Basis of (C_s)_t: pairs (generator, monomial) in generator order."""

    def __init__(self, stage: Stage, t: int):
        self.pairs: List[Term] = []
        for gi, d in enumerate(stage.degrees):
            if d <= t:
                for m in milnor.basis(t - d):
                    self.pairs.append((gi, m))
        self.index = {pr: i for i, pr in enumerate(self.pairs)}

    def __len__(self):
        return len(self.pairs)


def _act(a: Monomial, terms, index: Dict[Term, int]) -> int:
    """Bitmask of a·(sum of m·h) in the target basis."""
    v = 0
    for h, m in terms:
        for r in milnor.product(a, m):
            v ^= 1 << index[(h, r)]
    return v


def _eliminate(cols: List[int]):
    """Column-reduce bitmask vectors over F_2.

    Returns (pivots: lowbit -> (vector, combo)), kernel combos as bitmasks
    over the column positions.
    """
    pivots: Dict[int, Tuple[int, int]] = {}
    kernel = []
    for i, v in enumerate(cols):
        combo = 1 << i
        while v:
            low = v & -v
            hit = pivots.get(low)
            if hit is None:
                pivots[low] = (v, combo)
                break
            v ^= hit[0]
            combo ^= hit[1]
        if not v:
            kernel.append(combo)
    return pivots, kernel


def _reduce(v: int, pivots: Dict[int, Tuple[int, int]]) -> int:
    while v:
        low = v & -v
        hit = pivots.get(low)
        if hit is None:
            return v
        v ^= hit[0]
    return 0


@dataclass
class MinimalResolution:
    p: int
    max_s: int
    max_t: int
    stages: List[Stage]
    certified_t: int

    def generators(self, s: int) -> List[int]:
        return self.stages[s].degrees

    def count(self, s: int, t: int) -> int:
        return sum(1 for d in self.stages[s].degrees if d == t) if s < len(self.stages) else 0

    def chart(self, name: str = "Ext_A") -> ExtChart:
        ch = ExtChart(self.p, self.max_s, self.certified_t, name=name)
        for s in range(self.max_s + 1):
            for t in range(self.certified_t + 1):
                n = self.count(s, t)
                if n:
                    ch.set(s, t, ChartEntry.fp(n))
        return ch

    def check_d_squared(self) -> bool:
        for s in range(2, len(self.stages)):
            prev = self.stages[s - 1]
            for d in self.stages[s].differentials:
                acc: Set[Term] = set()
                for h, m in d:
                    for k, n in prev.differentials[h]:
                        for r in milnor.product(m, n):
                            acc ^= {(k, r)}
                if acc:
                    return False
        return True

    def is_minimal(self) -> bool:
        return all(m for st in self.stages[1:] for d in st.differentials for _, m in d)

    def check_exact(self) -> bool:
        """dim ker d_s = rank d_{s+1} in every degree t <= certified_t, s < max_s."""
        for t in range(1, self.certified_t + 1):
            for s in range(0, self.max_s):
                src = _Basis(self.stages[s], t)
                if s == 0:
                    ker = len(src)
                else:
                    tgt = _Basis(self.stages[s - 1], t)
                    cols = [_act(m, self.stages[s].differentials[g], tgt.index) for g, m in src.pairs]
                    _, kern = _eliminate(cols)
                    ker = len(kern)
                nxt = _Basis(self.stages[s + 1], t)
                cols = [_act(m, self.stages[s + 1].differentials[g], src.index) for g, m in nxt.pairs]
                piv, _ = _eliminate(cols)
                if len(piv) != ker:
                    return False
        return True

    # -- checkpoint --------------------------------------------------------

    def to_dict(self) -> dict:
        stages = []
        for s, st in enumerate(self.stages):
            gens = [{"s": s, "t": d, "id": i} for i, d in enumerate(st.degrees)]
            diffs = [{"id": i, "entries": [[h, list(m), 1] for h, m in sorted(d)]}
                     for i, d in enumerate(st.differentials)]
            stages.append({"s": s, "generators": gens, "differentials": diffs})
        return {"prime": self.p, "max_s": self.max_s, "max_t": self.max_t,
                "certified_t": self.certified_t, "stages": stages}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "MinimalResolution":
        stages = []
        for st in d["stages"]:
            stage = Stage([g["t"] for g in st["generators"]],
                          [frozenset((e[0], tuple(e[1])) for e in x["entries"] if e[2] % 2)
                           for x in st["differentials"]])
            stages.append(stage)
        return cls(d["prime"], d["max_s"], d["max_t"], stages, d["certified_t"])

    @classmethod
    def from_json(cls, text: str) -> "MinimalResolution":
        return cls.from_dict(json.loads(text))


def minimal_resolution(p: int, max_s: int, max_t: int, budget_seconds: Optional[float] = None
                       ) -> MinimalResolution:
    """Resolve F_p through (max_s, max_t); p = 2 only."""
    if p != 2:
        raise UnsupportedPrime(f"minimal resolution implemented at p = 2 only (got {p})")
    start = time.monotonic()
    stages = [Stage([0], [frozenset()])] + [Stage() for _ in range(max_s)]
    for t in range(1, max_t + 1):
        if budget_seconds is not None and time.monotonic() - start > budget_seconds:
            raise ResourceBudgetExceeded(f"budget exhausted before t = {t}", certified=(max_s, t - 1))
        kernel: List[int] = []  # kernel of d_{s-1} at t, in the basis of (C_{s-1})_t
        prev_basis = _Basis(stages[0], t)
        kernel = [1 << i for i in range(len(prev_basis))]  # augmentation kills positive degrees
        for s in range(1, max_s + 1):
            st = stages[s]
            basis = _Basis(st, t)
            cols = [_act(m, st.differentials[g], prev_basis.index) for g, m in basis.pairs]
            pivots, _ = _eliminate(cols)
            for v in kernel:
                r = _reduce(v, pivots)
                if r:
                    terms = frozenset(prev_basis.pairs[i] for i in range(r.bit_length()) if r >> i & 1)
                    st.degrees.append(t)
                    st.differentials.append(terms)
                    low = r & -r
                    pivots[low] = (r, 0)
            # kernel of d_s at t, now including the new generators
            basis = _Basis(st, t)
            cols = [_act(m, st.differentials[g], prev_basis.index) for g, m in basis.pairs]
            _, kern = _eliminate(cols)
            kernel = []
            for combo in kern:
                kernel.append(combo)
            prev_basis = basis
    return MinimalResolution(p, max_s, max_t, stages, max_t)
