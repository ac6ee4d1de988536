"""The Steenrod-side corners for BP and the comparison map between them.

Ext_A(F_p, H_*(BP; F_p)) = F_p[v_0, v_1, ...] with v_i in bidegree (1, 2p^i - 1);
Ext_{A(0)}(F_p, H_*(BP; F_p)) = F_p[v_0] ⊗ F_p[t_1, t_2, ...] with t_i in (0, 2p^i - 2).
The comparison map is the ring map v_0 -> v_0, v_i -> v_0 t_i.
"""
from __future__ import annotations

from typing import Dict, List, Tuple

from ..charts import ChartMap
from ..linalg import GradedFpSpace
from ..monomials import label, max_index, monomials, t_degree
from .exterior import PolyExtChart, ext_exterior


def v_degree(p: int, i: int) -> int:
    return 2 * p ** i - 1


def bp_ext_a(p: int, max_s: int, max_t: int) -> PolyExtChart:
    n = max(max_index(p, max_t), 0)
    gens = [("v0", 1, 1)] + [(f"v{i}", 1, v_degree(p, i)) for i in range(1, n + 1)]
    return PolyExtChart(p, gens, {0: ["1"]}, max_s, max_t, name="Ext_A(BP)")


def bp_fp_homology(p: int, max_t: int) -> Tuple[GradedFpSpace, Dict[int, List[str]]]:
    dims, labels = {}, {}
    for t in range(max_t + 1):
        ms = monomials(p, t)
        if ms:
            dims[t] = len(ms)
            labels[t] = [label(i) for i in ms]
    return GradedFpSpace(dims), labels


def bp_ext_a0(p: int, max_s: int, max_t: int) -> PolyExtChart:
    dims, labels = bp_fp_homology(p, max_t)
    ch = ext_exterior(p, [1], dims, max_s, max_t, names=["v0"], coefficient_labels=labels)
    ch.name = "Ext_A(0)(BP)"
    return ch


def _image_monomial(src: PolyExtChart, e: Tuple[int, ...]) -> Tuple[int, Tuple[int, ...]]:
    """v0^a prod v_i^{k_i} -> (v0 exponent, t-index multiset)."""
    a = e[0] + sum(e[1:])
    idx: List[int] = []
    for i, k in enumerate(e[1:], start=1):
        idx.extend([i] * k)
    return a, tuple(idx)


def bp_comparison_map(p: int, max_s: int, max_t: int) -> Tuple[PolyExtChart, PolyExtChart, ChartMap]:
    """Per-bidegree matrices of F_p[v_0, v_i] -> F_p[v_0, t_i] in monomial bases."""
    src = bp_ext_a(p, max_s, max_t)
    tgt = bp_ext_a0(p, max_s, max_t)
    sc, tc = src.to_ext_chart(), tgt.to_ext_chart()
    cm = ChartMap(sc, tc)
    for s in range(max_s + 1):
        for t in range(max_t + 1):
            sb = src.basis(s, t)
            tb = tgt.basis(s, t)
            if not sb or not tb:
                continue
            pos = {}
            for r, (e, c) in enumerate(tb):
                deg = t - e[0]
                pos[(e[0], monomials(p, deg)[c])] = r
            m = [[0] * len(sb) for _ in tb]
            for j, (e, _) in enumerate(sb):
                m[pos[_image_monomial(src, e)]][j] = 1
            cm.matrices[(s, t)] = m
    return src, tgt, cm
