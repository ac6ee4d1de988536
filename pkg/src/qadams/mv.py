"""Mayer–Vietoris assembly of the integral Adams E2 page.

The sequence ... -> E2^{s,t} -> Ext_P^{s,t} ⊕ Ext_A^{s,t} -d^s-> Ext_A(0)^{s,t} -> E2^{s+1,t} -> ...
with d^s = map1 ⊕ (-map2) gives, at each bidegree,
0 -> coker(d^{s-1}) -> E2^{s,t} -> ker(d^s) -> 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg as la
from .charts import ChartEntry, ChartMap, ExtChart
from .couples import Couple, bp_couple, bp_basis_labels, integral_preset, sphere_couple
from .errors import (AdamsEdgeViolated, ExactnessFailure, NonCommutingInput, UnexpectedHigherExtP,
                     WindowMismatch)
from .linalg import Matrix, Module
from .quiver import FP, Arrow, HomGroup, Representation, RepMap, SimplesPreset, ext, hom
from .steenrod import bp_comparison_map, ext_exterior, minimal_resolution
from .linalg import GradedFpSpace

AMBIGUOUS = "AMBIGUOUS_EXTENSION"


@dataclass
class LESCell:
    s: int
    t: int
    coker: Module
    ker: Module
    entry: ChartEntry


@dataclass
class LESReport:
    chart: ExtChart
    cells: Dict[Tuple[int, int], LESCell] = field(default_factory=dict)
    audit: List[str] = field(default_factory=list)

    @property
    def ambiguous(self) -> List[Tuple[int, int]]:
        return [k for k, c in self.cells.items() if AMBIGUOUS in c.entry.flags]


def _same_window(a: ExtChart, b: ExtChart) -> bool:
    return (a.prime, a.max_s, a.min_t, a.max_t, a.max_stem) == (b.prime, b.max_s, b.min_t, b.max_t, b.max_stem)


def _difference_map(extP, extA, extA0, map1, map2, s, t) -> Tuple[Matrix, Module, Module]:
    src = extP[(s, t)].module() + extA[(s, t)].module()
    tgt = extA0[(s, t)].module()
    m1, m2 = map1.matrix(s, t), map2.matrix(s, t)
    mat = [list(r1) + [-x for x in r2] for r1, r2 in zip(m1, m2)]
    return la.reduce_matrix(mat, tgt, extP.prime) if tgt.ngens else [], src, tgt


def _monomial_label(vec: Sequence, labels: Sequence[str], p: int) -> Optional[Tuple[int, str]]:
    """(position, label) when vec is a p-power multiple of one basis vector."""
    nz = [(i, x) for i, x in enumerate(vec) if x]
    if len(nz) != 1 or not labels:
        return None
    i, x = nz[0]
    v = la.valuation(x, p)
    base = labels[i]
    if v == 0:
        return i, base
    pre = "p" if v == 1 else f"p^{v}"
    return i, (pre if base == "1" else f"{pre}*{base}")


def _ordered(found: List[Tuple[int, str]], orders: Sequence[int]) -> List[str]:
    # generators of one order are interchangeable; list them in basis order
    if len(set(orders)) <= 1:
        found = sorted(found)
    return [lab for _, lab in found]


def _kernel_labels(k: la.Subquotient, extP_e: ChartEntry, extA_e: ChartEntry, p: int) -> Optional[List[str]]:
    nP = extP_e.ngens
    out = []
    for j in range(k.module.ngens):
        col = [k.gens[i][j] for i in range(len(k.gens))]
        head, tail = col[:nP], col[nP:]
        if any(head):
            lab = _monomial_label(head, extP_e.basis_labels, p)
        else:
            lab = _monomial_label(tail, extA_e.basis_labels, p)
            lab = lab and (lab[0] + nP, lab[1])
        if lab is None:
            return None
        out.append(lab)
    return _ordered(out, k.module.orders)


def _coker_labels(c: la.Subquotient, extA0_e: ChartEntry, p: int) -> Optional[List[str]]:
    out = []
    for j in range(c.module.ngens):
        col = [c.gens[i][j] for i in range(len(c.gens))]
        lab = _monomial_label(col, extA0_e.basis_labels, p)
        if lab is None:
            return None
        out.append((lab[0], f"delta({lab[1]})"))
    return _ordered(out, c.module.orders)


def _audit_short_exact(k: la.Subquotient, d: Matrix, src: Module, tgt: Module, p: int, where: str) -> List[str]:
    """0 -> ker -> src -> im -> 0 and im -> tgt -> coker -> 0 bookkeeping."""
    notes = []
    if k.module.ngens and tgt.ngens:
        comp = la.matmul(d, k.gens, inner=src.ngens)
        if not la.is_zero_map(comp, tgt, p):
            raise ExactnessFailure(f"{where}: d does not vanish on its kernel", degree=where)
    kg = k.gens if k.module.ngens else la.zeros(src.ngens, 0)
    if src.ngens and not la.homology_at(kg, d if tgt.ngens else [], k.module, src, tgt, p).module.is_zero:
        raise ExactnessFailure(f"{where}: kernel inclusion not exact", degree=where)
    im = la.image_module(d, src, tgt, p) if tgt.ngens else Module()
    if src.free_rank != k.module.free_rank + im.free_rank:
        raise ExactnessFailure(f"{where}: free ranks do not balance", degree=where)
    if src.free_rank == 0 and src.length() != k.module.length() + im.length():
        raise ExactnessFailure(f"{where}: lengths do not balance", degree=where)
    notes.append(f"{where}: ok")
    return notes


def assemble(extP: ExtChart, extA: ExtChart, extA0: ExtChart, map1: ChartMap, map2: ChartMap,
             name: str = "integral Adams E2") -> LESReport:
    """Splice the Mayer–Vietoris sequence into an E2 chart, with an exactness audit."""
    if not (_same_window(extP, extA) and _same_window(extA, extA0)):
        raise WindowMismatch("corner charts do not share a window")
    for m, src, tgt, nm in ((map1, extP, extA0, "map1"), (map2, extA, extA0, "map2")):
        if not (m.source.same_groups(src) and m.target.same_groups(tgt)):
            raise NonCommutingInput(f"{nm} does not connect the expected charts")
        try:
            m.validate()
        except ValueError as e:
            raise NonCommutingInput(f"{nm}: {e}") from e
    p = extP.prime
    chart = ExtChart(p, extP.max_s, extP.max_t, name=name, min_t=extP.min_t, max_stem=extP.max_stem)
    report = LESReport(chart)
    kernels: Dict[Tuple[int, int], Tuple[la.Subquotient, Module, Module]] = {}
    cokers: Dict[Tuple[int, int], la.Subquotient] = {}
    for t in range(extP.min_t, extP.max_t + 1):
        for s in range(extP.max_s + 1):
            d, src, tgt = _difference_map(extP, extA, extA0, map1, map2, s, t)
            k = la.kernel(d, src, tgt, p) if src.ngens else la.quotient([], [], p, 0, 0)
            kernels[(s, t)] = (k, src, tgt)
            cokers[(s, t)] = la.cokernel(d, src, tgt, p) if tgt.ngens else la.quotient([], [], p, 0, 0)
            report.audit += _audit_short_exact(k, d, src, tgt, p, f"d^{s} at ({s},{t})")
    for (s, t), (k, src, tgt) in kernels.items():
        if not chart.in_window(s, t):
            continue
        c = cokers.get((s - 1, t)) if s >= 1 else None
        cm = c.module if c is not None else Module()
        ker_labels = _kernel_labels(k, extP[(s, t)], extA[(s, t)], p)
        co_labels = _coker_labels(c, extA0[(s - 1, t)], p) if c is not None else []
        labels = (co_labels or []) + (ker_labels or []) if ker_labels is not None and co_labels is not None else []
        if cm.is_zero:
            entry = ChartEntry.from_module(k.module, labels=labels)
        elif k.module.is_zero:
            entry = ChartEntry.from_module(cm, labels=labels)
        else:
            entry = ChartEntry.from_module(cm + k.module, flags=(AMBIGUOUS,), labels=labels)
        report.cells[(s, t)] = LESCell(s, t, cm, k.module, entry)
        chart.set(s, t, entry)
    return report


# ---------------------------------------------------------------------------
# Comparison on Hom
# ---------------------------------------------------------------------------

def a0_preset(p: int) -> SimplesPreset:
    """Single F node with β of degree -1, β² = 0: comodules over the dual of A(0)."""
    return SimplesPreset(f"a0-{p}", p, [("F", FP)], [Arrow("beta", "F", "F", -1, 1)], {},
                         relations=[("beta", "beta")])


def restrict_to_v(c: Representation, preset: SimplesPreset) -> Representation:
    vals = {"F": dict(c.values["F"])}
    acts = {(lab, n): m for (lab, n), m in c.actions.items() if lab == "beta"}
    return Representation(preset, vals, acts)


def hom0_comparison(X: Couple, Y: Couple, t_window: Tuple[int, int]) -> ChartMap:
    """Hom_P(X, Y) -> Hom_A(0)(V_X, V_Y), a couple map going to its V-component."""
    p = X.p
    A0 = a0_preset(p)
    VX, VY = restrict_to_v(X.rep, A0), restrict_to_v(Y.rep, A0)
    lo, hi = t_window
    src = ExtChart(p, 0, hi, name="Hom_P", min_t=lo)
    tgt = ExtChart(p, 0, hi, name="Hom_A(0)", min_t=lo)
    cm = ChartMap(src, tgt)
    for t in range(lo, hi + 1):
        hp = hom(X.rep, Y.rep, t)
        ha = hom(VX, VY, t)
        src.set(0, t, ChartEntry.from_module(hp.module))
        tgt.set(0, t, ChartEntry.from_module(ha.module))
        if not hp.module.ngens or not ha.module.ngens:
            continue
        cols = []
        for f in hp.maps:
            blocks = {k: b for k, b in f.blocks.items() if k[0] == "F"}
            cols.append(ha.coords(RepMap(VX, VY, blocks, t)))
        cm.matrices[(0, t)] = [[cols[j][i] for j in range(len(cols))] for i in range(ha.module.ngens)]
    return cm


def yoneda_map1(X: Couple, Y: Couple, t: int) -> Tuple[HomGroup, Matrix]:
    """For X ≅ P_Z[0]: the V-component of Hom^t(X, Y) in the basis of A(Y)_t.

    Hom^t(X, Y) is computed by solving naturality; evaluating at the
    generator 1 of A(X)_0 must be an isomorphism onto A(Y)_t.
    """
    p = X.p
    hp = hom(X.rep, Y.rep, t)
    A_t = Y.rep.value("Z", t)
    V_t = Y.rep.value("F", t)
    if hp.module.descriptor() != A_t.descriptor():
        raise ExactnessFailure(f"Hom^{t} disagrees with A_{t}", degree=t)
    if not A_t.ngens:
        return hp, []
    ea = [[f.block("Z", 0)[r][0] for f in hp.maps] for r in range(A_t.ngens)]
    ev = [[f.block("F", 0)[r][0] if V_t.ngens else 0 for f in hp.maps] for r in range(V_t.ngens)]
    inv = la.solve(ea, hp.module, A_t, la.identity(A_t.ngens), A_t.ngens, p)
    if inv is None:
        raise ExactnessFailure(f"Yoneda evaluation is not invertible in degree {t}", degree=t)
    m = la.matmul(ev, inv, inner=hp.module.ngens)
    return hp, la.reduce_matrix(m, V_t, p)


# ---------------------------------------------------------------------------
# Pipelines
# ---------------------------------------------------------------------------

def _exterior_a0(p: int, coeffs: GradedFpSpace, max_s: int, max_t: int, labels=None) -> ExtChart:
    return ext_exterior(p, [1], coeffs, max_s, max_t, names=["v0" if labels else "h0"],
                        coefficient_labels=labels).to_ext_chart()


def _restrict(chart: ExtChart, max_stem: Optional[int]) -> ExtChart:
    chart.max_stem = max_stem
    for k in [k for k in chart.entries if not chart.in_window(*k)]:
        del chart.entries[k]
    return chart


def _ext_p(X: Couple, Y: Couple, max_s: int, max_t: int, labels) -> Tuple[ExtChart, Dict[int, Matrix]]:
    """Ext_P chart in Yoneda coordinates and the V-component matrices at s = 0."""
    p = X.p
    raw = ext(X.rep, Y.rep, max_s, (0, max_t), name="Ext_P")
    higher = [k for k in raw.entries if k[0] > 0]
    if higher:
        raise UnexpectedHigherExtP(f"Ext_P has content in positive filtration at {higher[0]}")
    chart = ExtChart(p, max_s, max_t, name="Ext_P")
    mats = {}
    for t in range(max_t + 1):
        hp, m = yoneda_map1(X, Y, t)
        e = raw[(0, t)]
        if (e.free_rank, e.torsion) != hp.module.descriptor():
            raise ExactnessFailure(f"Ext^0 differs from Hom in degree {t}", degree=t)
        if not e.is_zero:
            chart.set(0, t, ChartEntry(e.free_rank, e.torsion, (), tuple(labels(t))))
            mats[t] = m
    return chart, mats


def sphere_pipeline(p: int, max_stem: int, max_s: Optional[int] = None) -> LESReport:
    """E2 for the sphere: Z at (0,0), zero on the rest of t = s, Ext_A elsewhere."""
    max_s = max_stem + 1 if max_s is None else max_s
    max_t = max_stem + max_s
    res = minimal_resolution(p, max_s, max_t)
    extA = res.chart()
    extA.name = "Ext_A"
    for s in range(max_s + 1):
        if extA[(s, s)].ngens != 1:
            raise AdamsEdgeViolated(f"Ext_A^{s},{s} has dimension {extA[(s, s)].ngens}")
        for t in range(s):
            if not extA[(s, t)].is_zero:
                raise AdamsEdgeViolated(f"Ext_A nonzero below the edge at ({s},{t})")
    S = sphere_couple(p)
    extP, mats = _ext_p(S, S, max_s, max_t, lambda t: ["1"])
    extA0 = _exterior_a0(p, GradedFpSpace({0: 1}), max_s, max_t)
    for c in (extA, extA0):
        c.entries = {k: ChartEntry(e.free_rank, e.torsion) for k, e in c.entries.items()}
    map1 = ChartMap(extP, extA0)
    for t, m in mats.items():
        if extA0[(0, t)].ngens:
            map1.matrices[(0, t)] = m
    map2 = ChartMap(extA, extA0)
    for s in range(max_s + 1):
        # the h0-tower: Ext_A^{s,s} -> Ext_A(0)^{s,s} is onto, both one-dimensional
        map2.matrices[(s, s)] = [[1]]
    report = assemble(extP, extA, extA0, map1, map2, name=f"integral Adams E2 of S, p={p}")
    # the rectangle is complete; publish the stem-bounded part
    _restrict(report.chart, max_stem)
    report.cells = {k: c for k, c in report.cells.items() if report.chart.in_window(*k)}
    return report


def bp_pipeline(p: int, max_t: int, max_s: Optional[int] = None) -> LESReport:
    """E2 for BP from Ext_P(S, BP), F_p[v_0, v_i], F_p[v_0, t_i] and v_i -> v_0 t_i."""
    max_s = max_t if max_s is None else max_s
    S, B = sphere_couple(p), bp_couple(p, max_t)
    extP, mats = _ext_p(S, B, max_s, max_t, lambda t: bp_basis_labels(p, t))
    src, tgt, map2 = bp_comparison_map(p, max_s, max_t)
    extA, extA0 = map2.source, map2.target
    map1 = ChartMap(extP, extA0)
    for t, m in mats.items():
        if extA0[(0, t)].ngens:
            map1.matrices[(0, t)] = m
    return assemble(extP, extA, extA0, map1, map2, name=f"integral Adams E2 of BP, p={p}")
