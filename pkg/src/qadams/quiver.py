"""Representations of a finite class of simples.

A preset is a small graded Z_(p)-linear category given by a hom table:
basis arrows with degrees and orders, plus structure constants for
composition. An arrow of hom(i, j) of degree d acts on a representation
X(i)_n -> X(j)_{n+d}. The representable P_i[n] has P_i[n](j)_m =
hom(i, j)_{m-n}, so Hom(P_i[n], X) = X(i)_n.

Everything here is degreewise exact linear algebra from :mod:`qadams.linalg`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import linalg as la
from .charts import ChartEntry, ExtChart
from .errors import NotMultiplicative, PresetError, RepresentationError, UnknownNode, WindowInsufficient
from .linalg import Matrix, Module

Combination = Dict[str, object]  # arrow label -> p-local coefficient

INTEGRAL = "integral"
FP = "fp"


@dataclass(frozen=True)
class Arrow:
    label: str
    source: str
    target: str
    degree: int
    order: int = 0  # 0: free over Z_(p); e: order p^e


def _add_into(acc: Combination, comb: Combination, scale=1) -> None:
    for k, v in comb.items():
        x = acc.get(k, 0) + scale * v
        if x:
            acc[k] = x
        else:
            acc.pop(k, None)


class SimplesPreset:
    """Finite node set, hom table, composition table and relations.

    ``compositions[(b, a)]`` is the combination b∘a (a applied first);
    missing entries are zero. ``tensor_nodes`` / ``tensor_arrows`` describe
    the monoidal structure on representables when the preset is
    multiplicative.
    """

    def __init__(self, name: str, p: int, nodes: Sequence[Tuple[str, str]], arrows: Sequence[Arrow],
                 compositions: Dict[Tuple[str, str], Combination], relations: Sequence[Tuple[str, str]] = (),
                 tensor_nodes: Optional[Dict[Tuple[str, str], List[Tuple[str, int]]]] = None,
                 tensor_arrows: Optional[Dict[Tuple[str, str, str], Dict[Tuple[int, int], Combination]]] = None,
                 unit: Optional[str] = None, exact_span: Optional[int] = None, version: str = "1"):
        self.name = name
        self.p = p
        self.nodes = [n for n, _ in nodes]
        self.regime = dict(nodes)
        self.version = version
        self._arrows: Dict[str, Arrow] = {}
        for n, reg in nodes:
            if reg not in (INTEGRAL, FP):
                raise PresetError(f"unknown regime {reg!r}")
            self._arrows[self.identity(n)] = Arrow(self.identity(n), n, n, 0, 0 if reg == INTEGRAL else 1)
        self.arrows = list(arrows)
        for a in arrows:
            if a.label in self._arrows:
                raise PresetError(f"duplicate arrow {a.label}")
            if a.source not in self.regime or a.target not in self.regime:
                raise PresetError(f"arrow {a.label} has unknown endpoint")
            self._arrows[a.label] = a
        self.compositions = {k: dict(v) for k, v in compositions.items()}
        self.relations = list(relations)
        self.tensor_nodes = tensor_nodes
        self.tensor_arrows = tensor_arrows or {}
        self.unit = unit
        self.exact_span = exact_span
        self._hom: Dict[Tuple[str, str], List[str]] = {}
        for lab, a in self._arrows.items():
            self._hom.setdefault((a.source, a.target), []).append(lab)
        for k in self._hom:
            self._hom[k].sort(key=lambda l: (self._arrows[l].degree, 0 if l.startswith("id_") else 1,
                                             self._order_index(l)))
        self.validate()

    def _order_index(self, label: str) -> int:
        for i, a in enumerate(self.arrows):
            if a.label == label:
                return i
        return -1

    @staticmethod
    def identity(node: str) -> str:
        return f"id_{node}"

    def arrow(self, label: str) -> Arrow:
        return self._arrows[label]

    def check_node(self, node: str) -> None:
        if node not in self.regime:
            raise UnknownNode(node)

    def hom_basis(self, i: str, j: str, degree: Optional[int] = None) -> List[str]:
        labs = self._hom.get((i, j), [])
        if degree is None:
            return list(labs)
        return [l for l in labs if self._arrows[l].degree == degree]

    def hom_degrees(self) -> List[int]:
        return sorted({a.degree for a in self.arrows})

    @property
    def min_arrow_degree(self) -> int:
        return min([0] + [a.degree for a in self.arrows])

    @property
    def max_arrow_degree(self) -> int:
        return max([0] + [a.degree for a in self.arrows])

    def compose(self, b: str, a: str) -> Combination:
        """b∘a as a combination of basis arrows."""
        A, B = self._arrows[a], self._arrows[b]
        if A.target != B.source:
            raise PresetError(f"{b}∘{a} is not composable")
        if b.startswith("id_") and b == self.identity(B.source):
            return {a: 1}
        if a.startswith("id_") and a == self.identity(A.source):
            return {b: 1}
        return dict(self.compositions.get((b, a), {}))

    def compose_comb(self, cb: Combination, ca: Combination) -> Combination:
        out: Combination = {}
        for b, x in cb.items():
            for a, y in ca.items():
                _add_into(out, self.compose(b, a), x * y)
        return self.reduce_comb(out)

    def reduce_comb(self, comb: Combination) -> Combination:
        out = {}
        for lab, c in comb.items():
            e = self._arrows[lab].order
            c = la.residue(c, self.p ** e) if e else c
            if c:
                out[lab] = c
        return out

    def validate(self) -> None:
        p = self.p
        for (b, a), comb in self.compositions.items():
            A, B = self._arrows[a], self._arrows[b]
            if A.target != B.source:
                raise PresetError(f"composition entry {b}∘{a} not composable")
            for lab in comb:
                C = self._arrows[lab]
                if (C.source, C.target) != (A.source, B.target):
                    raise PresetError(f"{b}∘{a} lands outside hom({A.source},{B.target})")
                if C.degree != A.degree + B.degree:
                    raise PresetError(f"degree not additive in {b}∘{a}")
        for (b, a) in self.relations:
            if self.reduce_comb(self.compose(b, a)):
                raise PresetError(f"declared relation {b}∘{a} = 0 does not hold in the table")
        labels = list(self._arrows)
        for a in labels:
            A = self._arrows[a]
            for b in self.hom_outgoing(A.target):
                for c in self.hom_outgoing(self._arrows[b].target):
                    left = self.compose_comb({c: 1}, self.compose(b, a))
                    right = self.compose_comb(self.compose(c, b), {a: 1})
                    if left != right:
                        raise PresetError(f"composition not associative on ({c},{b},{a})")
        # composites through an arrow of order p^e are killed by p^e
        for (b, a), comb in self.compositions.items():
            es = [x for x in (self._arrows[a].order, self._arrows[b].order) if x]
            if not es:
                continue
            e = min(es)
            for lab, c in comb.items():
                f = self._arrows[lab].order
                if f == 0 or la.residue(c * p ** e, p ** f):
                    raise PresetError(f"{b}∘{a} not annihilated by p^{e}")
        # two-sided ideal: relations stay zero after composing on either side
        for (b, a) in self.relations:
            for c in self.hom_outgoing(self._arrows[b].target):
                if self.compose_comb({c: 1}, self.compose_comb({b: 1}, {a: 1})):
                    raise PresetError("relation ideal not closed")
            for c in self.hom_incoming(self._arrows[a].source):
                if self.compose_comb(self.compose_comb({b: 1}, {a: 1}), {c: 1}):
                    raise PresetError("relation ideal not closed")

    def hom_outgoing(self, node: str) -> List[str]:
        return [l for l, a in self._arrows.items() if a.source == node]

    def hom_incoming(self, node: str) -> List[str]:
        return [l for l, a in self._arrows.items() if a.target == node]

    # -- monoidal structure ------------------------------------------------

    @property
    def multiplicative(self) -> bool:
        return self.tensor_nodes is not None

    def tensor_summands(self, i: str, k: str) -> List[Tuple[str, int]]:
        if not self.multiplicative:
            raise NotMultiplicative(self.name)
        return self.tensor_nodes[(i, k)]

    def arrow_tensor(self, label: str, k: str, side: str) -> Dict[Tuple[int, int], Combination]:
        """Components of label⊗k (side 'R') or k⊗label (side 'L').

        Keys are (summand index of source⊗k, summand index of target⊗k) where
        the arrow runs source -> target; values lie in hom(source summand,
        target summand).
        """
        if not self.multiplicative:
            raise NotMultiplicative(self.name)
        A = self._arrows[label]
        if label == self.identity(A.source):
            n = len(self.tensor_summands(A.source, k))
            return {(i, i): {self.identity(self.tensor_summands(A.source, k)[i][0]): 1} for i in range(n)}
        if k == self.unit:
            return {(0, 0): {label: 1}}
        return self.tensor_arrows[(label, k, side)]

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "prime": self.p,
            "version": self.version,
            "nodes": [{"name": n, "regime": self.regime[n]} for n in self.nodes],
            "homs": [{"label": a.label, "source": a.source, "target": a.target,
                      "degree": a.degree, "order": a.order} for a in self.arrows],
            "compositions": [{"left": b, "right": a, "result": _comb_out(c)}
                             for (b, a), c in sorted(self.compositions.items())],
            "relations": [{"left": b, "right": a} for b, a in self.relations],
            "unit": self.unit,
            "exact_span": self.exact_span,
            "tensor_nodes": None if self.tensor_nodes is None else [
                {"left": i, "right": k, "summands": [list(s) for s in v]}
                for (i, k), v in sorted(self.tensor_nodes.items())],
            "tensor_arrows": [
                {"arrow": l, "node": k, "side": side,
                 "components": [{"from": a, "to": b, "value": _comb_out(c)} for (a, b), c in sorted(v.items())]}
                for (l, k, side), v in sorted(self.tensor_arrows.items())],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SimplesPreset":
        tn = None
        if d.get("tensor_nodes") is not None:
            tn = {(e["left"], e["right"]): [tuple(s) for s in e["summands"]] for e in d["tensor_nodes"]}
        ta = {(e["arrow"], e["node"], e["side"]): {(c["from"], c["to"]): _comb_in(c["value"])
                                                    for c in e["components"]}
              for e in d.get("tensor_arrows", [])}
        return cls(d["name"], d["prime"], [(n["name"], n["regime"]) for n in d["nodes"]],
                   [Arrow(h["label"], h["source"], h["target"], h["degree"], h["order"]) for h in d["homs"]],
                   {(c["left"], c["right"]): _comb_in(c["result"]) for c in d["compositions"]},
                   [(r["left"], r["right"]) for r in d["relations"]],
                   tensor_nodes=tn, tensor_arrows=ta, unit=d.get("unit"), exact_span=d.get("exact_span"),
                   version=d.get("version", "1"))


def _scalar_out(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return int(x)


def _scalar_in(x):
    if isinstance(x, str):
        return Fraction(x)
    return x


def _comb_out(c: Combination) -> dict:
    return {k: _scalar_out(v) for k, v in sorted(c.items())}


def _comb_in(c: dict) -> Combination:
    return {k: _scalar_in(v) for k, v in c.items()}


def _matrix_out(m: Matrix) -> list:
    return [[_scalar_out(x) for x in row] for row in m]


def _matrix_in(m: list) -> Matrix:
    return [[_scalar_in(x) for x in row] for row in m]


# ---------------------------------------------------------------------------
# Representations and maps
# ---------------------------------------------------------------------------

class Representation:
    """Per-node graded modules with structure maps for every non-identity arrow."""

    def __init__(self, preset: SimplesPreset, values: Dict[str, Dict[int, Module]],
                 actions: Dict[Tuple[str, int], Matrix], name: str = ""):
        self.preset = preset
        self.values = {n: {d: m for d, m in values.get(n, {}).items() if not m.is_zero} for n in preset.nodes}
        self.actions = actions
        self.name = name

    @property
    def p(self) -> int:
        return self.preset.p

    def value(self, node: str, n: int) -> Module:
        return self.values[node].get(n, Module())

    def degrees(self, node: str) -> List[int]:
        return sorted(self.values[node])

    def support(self) -> List[int]:
        return sorted({d for n in self.preset.nodes for d in self.values[n]})

    @property
    def is_zero(self) -> bool:
        return not any(self.values[n] for n in self.preset.nodes)

    def act(self, label: str, n: int) -> Matrix:
        a = self.preset.arrow(label)
        src = self.value(a.source, n)
        tgt = self.value(a.target, n + a.degree)
        if label == self.preset.identity(a.source):
            return la.identity(src.ngens)
        m = self.actions.get((label, n))
        if m is None:
            return la.zeros(tgt.ngens, src.ngens)
        return m

    def act_comb(self, comb: Combination, source: str, n: int) -> Optional[Matrix]:
        """Sum of coefficient * X(arrow) over the combination, reduced in the target."""
        out = None
        tgt_mod = None
        for lab, c in comb.items():
            a = self.preset.arrow(lab)
            if a.source != source:
                raise RepresentationError("combination has mixed sources")
            m = self.act(lab, n)
            tgt_mod = self.value(a.target, n + a.degree)
            if out is None:
                out = [[c * x for x in row] for row in m]
            else:
                out = [[x + c * y for x, y in zip(r1, r2)] for r1, r2 in zip(out, m)]
        if out is None:
            return None
        return la.reduce_matrix(out, tgt_mod, self.p)

    def validate(self) -> None:
        P = self.preset
        p = self.p
        for node in P.nodes:
            if P.regime[node] == FP:
                for d, m in self.values[node].items():
                    if any(e != 1 for e in m.orders):
                        raise RepresentationError(f"F_p node {node} carries non-F_p value in degree {d}")
        for (lab, n), m in self.actions.items():
            a = P.arrow(lab)
            src, tgt = self.value(a.source, n), self.value(a.target, n + a.degree)
            if len(m) != tgt.ngens or any(len(r) != src.ngens for r in m):
                raise RepresentationError(f"action {lab}@{n} has wrong shape")
            if not la.is_compatible(m, src, tgt, p):
                raise RepresentationError(f"action {lab}@{n} not torsion-compatible")
            if a.order and src.ngens and tgt.ngens:
                scaled = [[x * p ** a.order for x in row] for row in m]
                if not la.is_zero_map(scaled, tgt, p):
                    raise RepresentationError(f"p^{a.order} does not kill {lab}@{n}")
        for a in P.arrows:
            for b in P.hom_outgoing(a.target):
                if b.startswith("id_"):
                    continue
                B = P.arrow(b)
                for n in self.degrees(a.source):
                    tgt = self.value(B.target, n + a.degree + B.degree)
                    if tgt.is_zero:
                        continue
                    mid = self.value(a.target, n + a.degree).ngens
                    lhs = la.matmul(self.act(b, n + a.degree), self.act(a.label, n), inner=mid,
                                    cols=self.value(a.source, n).ngens)
                    comb = P.compose(b, a.label)
                    rhs = self.act_comb(comb, a.source, n) if comb else None
                    if rhs is None:
                        rhs = la.zeros(tgt.ngens, self.value(a.source, n).ngens)
                    diff = [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(lhs, rhs)]
                    if not la.is_zero_map(diff, tgt, p):
                        raise RepresentationError(f"functoriality fails for {b}∘{a.label} at degree {n}")

    def shift(self, k: int) -> "Representation":
        """X[k] with X[k]_n = X_{n-k}."""
        vals = {node: {d + k: m for d, m in self.values[node].items()} for node in self.preset.nodes}
        acts = {(lab, n + k): m for (lab, n), m in self.actions.items()}
        return Representation(self.preset, vals, acts, name=f"{self.name}[{k}]" if self.name else "")

    def descriptor(self) -> Dict[str, Dict[int, Tuple[int, Tuple[int, ...]]]]:
        return {node: {d: m.descriptor() for d, m in sorted(self.values[node].items())}
                for node in self.preset.nodes}

    def direct_sum(self, other: "Representation") -> "Representation":
        vals: Dict[str, Dict[int, Module]] = {}
        for node in self.preset.nodes:
            ds = set(self.values[node]) | set(other.values[node])
            vals[node] = {d: self.value(node, d) + other.value(node, d) for d in ds}
        acts = {}
        for a in self.preset.arrows:
            for n in set(self.degrees(a.source)) | set(other.degrees(a.source)):
                m1, m2 = self.act(a.label, n), other.act(a.label, n)
                r1, r2 = len(m1), len(m2)
                c1 = self.value(a.source, n).ngens
                c2 = other.value(a.source, n).ngens
                blk = [list(m1[i]) + [0] * c2 for i in range(r1)] + [[0] * c1 + list(m2[i]) for i in range(r2)]
                if blk and any(any(x for x in row) for row in blk):
                    acts[(a.label, n)] = blk
        return Representation(self.preset, vals, acts)

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "preset": self.preset.name,
            "name": self.name,
            "values": [{"node": node, "degree": d, "free_rank": m.free_rank, "torsion": list(m.torsion),
                        "orders": list(m.orders)}
                       for node in self.preset.nodes for d, m in sorted(self.values[node].items())],
            "arrows": [{"label": lab, "degree": n, "matrix": _matrix_out(m)}
                       for (lab, n), m in sorted(self.actions.items())],
        }

    def to_json(self) -> str:
        return json.dumps({"preset_def": self.preset.to_dict(), "representation": self.to_dict()},
                          sort_keys=True, indent=1) + "\n"

    @classmethod
    def from_dict(cls, d: dict, preset: SimplesPreset) -> "Representation":
        vals: Dict[str, Dict[int, Module]] = {n: {} for n in preset.nodes}
        for v in d["values"]:
            orders = v.get("orders")
            if orders is None:
                orders = [0] * v["free_rank"] + list(v["torsion"])
            vals[v["node"]][v["degree"]] = Module(tuple(orders))
        acts = {(a["label"], a["degree"]): _matrix_in(a["matrix"]) for a in d["arrows"]}
        return cls(preset, vals, acts, name=d.get("name", ""))

    @classmethod
    def from_json(cls, text: str) -> "Representation":
        doc = json.loads(text)
        preset = SimplesPreset.from_dict(doc["preset_def"])
        return cls.from_dict(doc["representation"], preset)


@dataclass
class RepMap:
    """Per-node, per-degree matrices X(i)_n -> Y(i)_{n+degree}."""

    source: Representation
    target: Representation
    blocks: Dict[Tuple[str, int], Matrix]
    degree: int = 0

    @property
    def p(self) -> int:
        return self.source.p

    def block(self, node: str, n: int) -> Matrix:
        b = self.blocks.get((node, n))
        if b is None:
            return la.zeros(self.target.value(node, n + self.degree).ngens, self.source.value(node, n).ngens)
        return b

    def validate(self) -> None:
        P = self.source.preset
        for node in P.nodes:
            for n in self.source.degrees(node):
                if not la.is_compatible(self.block(node, n), self.source.value(node, n),
                                        self.target.value(node, n + self.degree), self.p):
                    raise RepresentationError(f"map block {node}@{n} not torsion-compatible")
        for a in P.arrows:
            for n in self.source.degrees(a.source):
                tgt = self.target.value(a.target, n + a.degree + self.degree)
                if tgt.is_zero:
                    continue
                mid1 = self.source.value(a.target, n + a.degree).ngens
                mid2 = self.target.value(a.source, n + self.degree).ngens
                ncols = self.source.value(a.source, n).ngens
                lhs = la.matmul(self.block(a.target, n + a.degree), self.source.act(a.label, n), inner=mid1,
                                cols=ncols)
                rhs = la.matmul(self.target.act(a.label, n + self.degree), self.block(a.source, n), inner=mid2,
                                cols=ncols)
                diff = [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(lhs, rhs)]
                if not la.is_zero_map(diff, tgt, self.p):
                    raise RepresentationError(f"naturality fails for {a.label} at degree {n}")

    def compose(self, other: "RepMap") -> "RepMap":
        """self ∘ other."""
        blocks = {}
        for node in other.source.preset.nodes:
            for n in other.source.degrees(node):
                mid = n + other.degree
                inner = other.target.value(node, mid).ngens
                tgt = self.target.value(node, mid + self.degree)
                if tgt.is_zero:
                    continue
                blocks[(node, n)] = la.reduce_matrix(
                    la.matmul(self.block(node, mid), other.block(node, n), inner=inner,
                              cols=other.source.value(node, n).ngens), tgt, self.p)
        return RepMap(other.source, self.target, blocks, self.degree + other.degree)

    def is_zero(self) -> bool:
        for node in self.source.preset.nodes:
            for n in self.source.degrees(node):
                if not la.is_zero_map(self.block(node, n), self.target.value(node, n + self.degree), self.p):
                    return False
        return True


def kernel(f: RepMap) -> Tuple[Representation, RepMap]:
    """Kernel representation with its inclusion."""
    X, Y = f.source, f.target
    P = X.preset
    subs: Dict[Tuple[str, int], la.Subquotient] = {}
    vals: Dict[str, Dict[int, Module]] = {n: {} for n in P.nodes}
    for node in P.nodes:
        for n in X.degrees(node):
            k = la.kernel(f.block(node, n), X.value(node, n), Y.value(node, n + f.degree), f.p)
            if not k.module.is_zero:
                subs[(node, n)] = k
                vals[node][n] = k.module
    acts = {}
    for a in P.arrows:
        for n in X.degrees(a.source):
            src = subs.get((a.source, n))
            tgt = subs.get((a.target, n + a.degree))
            if src is None or tgt is None:
                continue
            amb = la.matmul(X.act(a.label, n), src.gens, inner=X.value(a.source, n).ngens)
            amb = la.reduce_matrix(amb, X.value(a.target, n + a.degree), f.p)
            acts[(a.label, n)] = tgt.coords(amb, src.module.ngens)
    K = Representation(P, vals, acts)
    incl = RepMap(K, X, {k: la.reduce_matrix(s.gens, X.value(*k), f.p) for k, s in subs.items()})
    return K, incl


def cokernel(f: RepMap) -> Tuple[Representation, RepMap]:
    """Cokernel representation with its projection."""
    X, Y = f.source, f.target
    P = X.preset
    subs: Dict[Tuple[str, int], la.Subquotient] = {}
    vals: Dict[str, Dict[int, Module]] = {n: {} for n in P.nodes}
    for node in P.nodes:
        for n in Y.degrees(node):
            c = la.cokernel(f.block(node, n - f.degree), X.value(node, n - f.degree), Y.value(node, n), f.p)
            subs[(node, n)] = c
            if not c.module.is_zero:
                vals[node][n] = c.module
    acts = {}
    for a in P.arrows:
        for n in Y.degrees(a.source):
            src = subs[(a.source, n)]
            tgt = subs.get((a.target, n + a.degree))
            if src.module.is_zero or tgt is None or tgt.module.is_zero:
                continue
            amb = la.matmul(Y.act(a.label, n), src.gens, inner=Y.value(a.source, n).ngens)
            acts[(a.label, n)] = tgt.coords(amb, src.module.ngens)
    C = Representation(P, vals, acts)
    proj = {}
    for (node, n), s in subs.items():
        if not s.module.is_zero:
            b = Y.value(node, n).ngens
            proj[(node, n)] = s.coords(la.identity(b), b)
    return C, RepMap(Y, C, proj)


# ---------------------------------------------------------------------------
# Free objects (finite sums of shifted representables)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FreeGen:
    node: str
    degree: int


class FreeObject:
    """⊕ P_{node}[degree] over the generator list."""

    def __init__(self, preset: SimplesPreset, gens: Sequence[FreeGen]):
        self.preset = preset
        self.gens = tuple(gens)
        self._rep: Optional[Representation] = None
        self._basis: Dict[Tuple[str, int], List[Tuple[int, str]]] = {}

    def basis(self, node: str, m: int) -> List[Tuple[int, str]]:
        key = (node, m)
        if key not in self._basis:
            out = []
            for gi, g in enumerate(self.gens):
                for lab in self.preset.hom_basis(g.node, node, m - g.degree):
                    out.append((gi, lab))
            self._basis[key] = out
        return self._basis[key]

    def degrees(self, node: str) -> List[int]:
        ds = set()
        for g in self.gens:
            for src in [g.node]:
                for lab in self.preset.hom_outgoing(src):
                    if self.preset.arrow(lab).target == node:
                        ds.add(g.degree + self.preset.arrow(lab).degree)
        return sorted(d for d in ds if self.basis(node, d))

    def module(self, node: str, m: int) -> Module:
        return Module(tuple(self.preset.arrow(lab).order for _, lab in self.basis(node, m)))

    def representation(self) -> Representation:
        if self._rep is not None:
            return self._rep
        P = self.preset
        vals = {node: {m: self.module(node, m) for m in self.degrees(node)} for node in P.nodes}
        acts = {}
        for a in P.arrows:
            for m in vals[a.source]:
                src = self.basis(a.source, m)
                tgt = self.basis(a.target, m + a.degree)
                if not tgt:
                    continue
                index = {b: r for r, b in enumerate(tgt)}
                mat = la.zeros(len(tgt), len(src))
                for c, (gi, f) in enumerate(src):
                    for lab, x in P.compose(a.label, f).items():
                        mat[index[(gi, lab)]][c] += x
                tmod = vals[a.target][m + a.degree]
                mat = la.reduce_matrix(mat, tmod, P.p)
                if any(any(x for x in row) for row in mat):
                    acts[(a.label, m)] = mat
        self._rep = Representation(P, vals, acts)
        return self._rep

    def map_to(self, target: Representation, images: Sequence[Sequence]) -> RepMap:
        """The map determined (Yoneda) by images[g] in target.value(g.node, g.degree)."""
        src = self.representation()
        P = self.preset
        blocks = {}
        for node in P.nodes:
            for m in src.degrees(node):
                tmod = target.value(node, m)
                if tmod.is_zero:
                    continue
                cols = []
                for gi, f in self.basis(node, m):
                    g = self.gens[gi]
                    img = [[x] for x in images[gi]]
                    if f == P.identity(g.node):
                        col = [r[0] for r in img]
                    else:
                        col = [r[0] for r in la.matmul(target.act(f, g.degree), img,
                                                         inner=target.value(g.node, g.degree).ngens)]
                    cols.append(col)
                mat = [[cols[c][r] for c in range(len(cols))] for r in range(tmod.ngens)]
                blocks[(node, m)] = la.reduce_matrix(mat, tmod, P.p)
        return RepMap(src, target, blocks)


def representable(preset: SimplesPreset, node: str, shift: int = 0) -> Representation:
    """P_node[shift]; Hom(P_node[shift], X) = X(node)_shift."""
    preset.check_node(node)
    rep = FreeObject(preset, [FreeGen(node, shift)]).representation()
    rep.name = f"P_{node}[{shift}]"
    return rep


def identity_index(preset: SimplesPreset, free: FreeObject, gen_index: int) -> int:
    g = free.gens[gen_index]
    return free.basis(g.node, g.degree).index((gen_index, preset.identity(g.node)))


# ---------------------------------------------------------------------------
# Hom
# ---------------------------------------------------------------------------

@dataclass
class HomGroup:
    module: Module
    maps: List[RepMap]
    degree: int
    sub: Optional[la.Subquotient] = None
    unknowns: List[Tuple[str, int, int, int, object]] = field(default_factory=list)

    def coords(self, f: RepMap) -> List:
        """Coordinates of a map X -> Y of this degree in the generators ``maps``."""
        if not self.module.ngens:
            return []
        p = f.p
        x = []
        for node, n, r, c, scale in self.unknowns:
            tgt = f.target.value(node, n + self.degree)
            v = f.block(node, n)[r][c] if tgt.ngens else 0
            e = tgt.orders[r]
            if e:
                v = la.residue(v, p ** e)
            x.append(Fraction(v) / scale)
        return [row[0] for row in self.sub.coords([[v] for v in x], 1)]


def _hom_cells(M: Module, N: Module, p: int):
    """Generators of Hom_Z(M, N): (row, col, scale, order)."""
    out = []
    for c, e in enumerate(M.orders):
        for r, f in enumerate(N.orders):
            if e == 0:
                out.append((r, c, 1, f))
            elif f == 0:
                continue
            else:
                out.append((r, c, p ** max(f - e, 0), min(e, f)))
    return out


def hom(X: Representation, Y: Representation, degree: int = 0) -> HomGroup:
    """The group of RepMaps X -> Y raising degree by ``degree``, by solving naturality."""
    if X.preset is not Y.preset and X.preset.to_dict() != Y.preset.to_dict():
        raise RepresentationError("representations over different presets")
    P, p, t = X.preset, X.p, degree
    unknowns = []  # (node, n, r, c, scale)
    orders = []
    for node in P.nodes:
        for n in X.degrees(node):
            for r, c, scale, order in _hom_cells(X.value(node, n), Y.value(node, n + t), p):
                unknowns.append((node, n, r, c, scale))
                orders.append(order)
    src_mod = Module(tuple(orders))
    rows: List[Tuple[str, int, int, int]] = []
    row_orders: List[int] = []
    row_index = {}
    cons = []
    for a in P.arrows:
        for n in X.degrees(a.source):
            tgt = Y.value(a.target, n + a.degree + t)
            if tgt.is_zero:
                continue
            cols = X.value(a.source, n).ngens
            for r, f in enumerate(tgt.orders):
                for c in range(cols):
                    row_index[(a.label, n, r, c)] = len(rows)
                    rows.append((a.label, n, r, c))
                    row_orders.append(f)
            cons.append((a, n))
    mat = la.zeros(len(rows), len(unknowns))
    for u, (node, n, r, c, scale) in enumerate(unknowns):
        # F_{node,n} = scale * E_{r,c}
        for a, m in cons:
            if a.source == node and m == n:
                # - Y(a) F : column c of result = -scale * Y(a)[:, r]
                ya = Y.act(a.label, n + t)
                for rr in range(len(ya)):
                    if ya[rr][r]:
                        mat[row_index[(a.label, m, rr, c)]][u] -= scale * ya[rr][r]
            if a.target == node and m + a.degree == n:
                # F X(a): row r of result = scale * X(a)[c, :]
                xa = X.act(a.label, m)
                if c < len(xa):
                    for cc, x in enumerate(xa[c]):
                        if x:
                            mat[row_index[(a.label, m, r, cc)]][u] += scale * x
    tgt_mod = Module(tuple(row_orders))
    if unknowns:
        mat = la.reduce_matrix(mat, tgt_mod, p) if rows else mat
        k = la.kernel(mat, src_mod, tgt_mod, p)
    else:
        k = la.quotient([], [], p, 0, 0)
    maps = []
    for j in range(k.module.ngens):
        blocks: Dict[Tuple[str, int], Matrix] = {}
        for u, (node, n, r, c, scale) in enumerate(unknowns):
            x = k.gens[u][j]
            if not x:
                continue
            key = (node, n)
            if key not in blocks:
                blocks[key] = la.zeros(Y.value(node, n + t).ngens, X.value(node, n).ngens)
            blocks[key][r][c] += scale * x
        blocks = {key: la.reduce_matrix(b, Y.value(key[0], key[1] + t), p) for key, b in blocks.items()}
        maps.append(RepMap(X, Y, blocks, t))
    return HomGroup(k.module, maps, t, k, unknowns)


def yoneda_evaluation(hg: HomGroup, node: str, shift: int) -> Matrix:
    """Matrix of φ -> φ(id) from a Hom group out of P_node[shift] to Y(node)_{shift+degree}."""
    if not hg.maps:
        return []
    X = hg.maps[0].source
    Y = hg.maps[0].target
    free = FreeObject(X.preset, [FreeGen(node, shift)])
    idx = identity_index(X.preset, free, 0)
    n = Y.value(node, shift + hg.degree).ngens
    out = la.zeros(n, len(hg.maps))
    for j, f in enumerate(hg.maps):
        b = f.block(node, shift)
        for r in range(n):
            out[r][j] = b[r][idx]
    return out


# ---------------------------------------------------------------------------
# Covers and resolutions
# ---------------------------------------------------------------------------

def cover(X: Representation) -> Tuple[FreeObject, List[List], RepMap]:
    """Near-minimal projective cover: lifts of a basis of X/(p + radical)X.

    Returns the free object, the generator images (vectors in X) and the
    epimorphism.
    """
    P, p = X.preset, X.p
    chosen: List[Tuple[int, int, int, str]] = []
    for node in P.nodes:
        for n in X.degrees(node):
            M = X.value(node, n)
            cols = []
            for a in P.arrows:
                if a.target != node:
                    continue
                src_deg = n - a.degree
                if X.value(a.source, src_deg).is_zero:
                    continue
                m = X.act(a.label, src_deg)
                for c in range(len(m[0]) if m else 0):
                    cols.append([la.residue(m[r][c], p) for r in range(M.ngens)])
            if cols:
                img = [[cols[c][r] for c in range(len(cols))] for r in range(M.ngens)]
                free_idx = la.complement_fp(img, M.ngens, p)
            else:
                free_idx = list(range(M.ngens))
            for i in free_idx:
                chosen.append((n, P.nodes.index(node), i, node))
    chosen.sort()
    gens = [FreeGen(node, n) for n, _, _, node in chosen]
    images = []
    for n, _, i, node in chosen:
        v = [0] * X.value(node, n).ngens
        v[i] = 1
        images.append(v)
    free = FreeObject(P, gens)
    epi = free.map_to(X, images)
    _, proj = cokernel(epi)
    if not proj.target.is_zero:
        # radical not nilpotent enough on this object: cover by every generator
        gens, images = [], []
        for node in P.nodes:
            for n in X.degrees(node):
                for i in range(X.value(node, n).ngens):
                    v = [0] * X.value(node, n).ngens
                    v[i] = 1
                    gens.append(FreeGen(node, n))
                    images.append(v)
        free = FreeObject(P, gens)
        epi = free.map_to(X, images)
    return free, images, epi


@dataclass
class ProjectiveResolution:
    """P_0 <- P_1 <- ... with d_s given by generator images in P_{s-1}."""

    target: Representation
    stages: List[FreeObject]
    images: List[List[List]]  # images[s][g]: vector in P_{s-1} (or X for s = 0)
    maps: List[RepMap]  # maps[0] augmentation, maps[s] = d_s
    max_s: int
    certified_hi: Optional[int] = None  # internal-degree bound of exactness (None: exact everywhere)

    def generators(self, s: int) -> Tuple[FreeGen, ...]:
        return self.stages[s].gens if s < len(self.stages) else ()

    def check_d_squared(self) -> bool:
        for s in range(1, len(self.maps)):
            if not self.maps[s - 1].compose(self.maps[s]).is_zero():
                return False
        return True

    def check_exact(self) -> bool:
        """Homology vanishes at P_s (s < max_s) and P_0 -> X is onto."""
        _, proj = cokernel(self.maps[0])
        if not proj.target.is_zero:
            return False
        for s in range(len(self.maps) - 1):
            K, _ = kernel(self.maps[s])
            img_rep, _ = cokernel(self.maps[s + 1])
            # ker d_s = im d_{s+1}  <=>  coker(P_{s+1} -> ker d_s) = 0
            lift = _factor_through_kernel(self.maps[s + 1], self.maps[s])
            _, pr = cokernel(lift)
            if not pr.target.is_zero:
                return False
        return True


def _factor_through_kernel(g: RepMap, f: RepMap) -> RepMap:
    """g: Q -> X with f∘g = 0, as a map Q -> ker f."""
    K, incl = kernel(f)
    blocks = {}
    for (node, n), b in g.blocks.items():
        tgt = K.value(node, n)
        if tgt.is_zero:
            continue
        src = g.source.value(node, n)
        amb = f.source.value(node, n)
        x = la.solve(incl.block(node, n), tgt, amb, b, src.ngens, g.p)
        if x is None:
            raise RepresentationError("map does not factor through the kernel")
        blocks[(node, n)] = x
    return RepMap(g.source, K, blocks)


def resolve(X: Representation, max_s: int) -> ProjectiveResolution:
    """Iterated cover-and-kernel resolution through stage ``max_s``."""
    P = X.preset
    free, images, epi = cover(X)
    stages, imgs, maps = [free], [images], [epi]
    K, incl = kernel(epi)
    for s in range(1, max_s + 1):
        if K.is_zero:
            break
        free_s, k_images, _ = cover(K)
        prev = stages[-1].representation()
        amb_images = []
        for g, v in zip(free_s.gens, k_images):
            col = la.matmul(incl.block(g.node, g.degree), [[x] for x in v],
                            inner=K.value(g.node, g.degree).ngens)
            amb_images.append(la.reduce_vector([r[0] for r in col], prev.value(g.node, g.degree), P.p))
        d = free_s.map_to(prev, amb_images)
        stages.append(free_s)
        imgs.append(amb_images)
        maps.append(d)
        K, incl = kernel(d)
    cert = None
    if P.exact_span is not None:
        # A truncated free generator in degree d agrees with the untruncated one
        # below d + exact_span - |min arrow degree|; each further stage loses one
        # more |min arrow degree| because lowering arrows feed the radical from above.
        degs = [g.degree for st in stages for g in st.gens]
        lo = min(degs) if degs else (min(X.support()) if not X.is_zero else 0)
        drop = max(-P.min_arrow_degree, 1)
        cert = lo + P.exact_span - (max_s + 1) * drop - 1
    return ProjectiveResolution(X, stages, imgs, maps, max_s, cert)


def certified_t_min(res: ProjectiveResolution, Y: Representation) -> Optional[int]:
    """Smallest internal degree t for which Ext(X, Y) from ``res`` is certified (None: all t)."""
    if res.certified_hi is None or Y.is_zero:
        return None
    return max(Y.support()) - res.certified_hi


def _cochain(res: ProjectiveResolution, Y: Representation, s: int, t: int) -> Module:
    out = Module()
    for g in res.generators(s):
        out = out + Y.value(g.node, g.degree + t)
    return out


def _coboundary(res: ProjectiveResolution, Y: Representation, s: int, t: int) -> Matrix:
    """Hom^t(P_s, Y) -> Hom^t(P_{s+1}, Y)."""
    P = Y.preset
    src_gens = res.generators(s)
    tgt_gens = res.generators(s + 1)
    offs, o = [], 0
    for g in src_gens:
        offs.append(o)
        o += Y.value(g.node, g.degree + t).ngens
    ncols = o
    rows = []
    if not tgt_gens:
        return []
    prev = res.stages[s]
    for gi, g in enumerate(tgt_gens):
        ymod = Y.value(g.node, g.degree + t)
        block = la.zeros(ymod.ngens, ncols)
        vec = res.images[s + 1][gi]
        for coef, (hi, lab) in zip(vec, prev.basis(g.node, g.degree)):
            if not coef or ymod.is_zero:
                continue
            h = src_gens[hi]
            hmod = Y.value(h.node, h.degree + t)
            if hmod.is_zero:
                continue
            ym = Y.act(lab, h.degree + t)
            for r in range(ymod.ngens):
                for c in range(hmod.ngens):
                    if ym[r][c]:
                        block[r][offs[hi] + c] += coef * ym[r][c]
        rows.extend(la.reduce_matrix(block, ymod, P.p))
    return rows


def ext(X: Representation, Y: Representation, max_s: int, t_window: Tuple[int, int],
        name: str = "") -> ExtChart:
    """Chart of Ext^{s,t}(X, Y) = H^s Hom^t(P_•, Y) for t in the window."""
    res = resolve(X, max_s + 1)
    return ext_from_resolution(res, Y, max_s, t_window, name)


def ext_from_resolution(res: ProjectiveResolution, Y: Representation, max_s: int,
                        t_window: Tuple[int, int], name: str = "") -> ExtChart:
    p = Y.p
    t_lo, t_hi = t_window
    t_min = certified_t_min(res, Y)
    if t_min is not None and t_lo < t_min:
        raise WindowInsufficient(f"Ext certified only for t >= {t_min}", certified=(t_min, t_hi))
    chart = ExtChart(p, max_s, t_hi, name=name, min_t=t_lo)
    for t in range(t_lo, t_hi + 1):
        mods = [_cochain(res, Y, s, t) for s in range(max_s + 2)]
        for s in range(max_s + 1):
            if mods[s].is_zero:
                continue
            f = _coboundary(res, Y, s - 1, t) if s > 0 else []
            g = _coboundary(res, Y, s, t)
            L = mods[s - 1] if s > 0 else Module()
            N = mods[s + 1]
            if L.is_zero:
                f = la.zeros(mods[s].ngens, 0)
            if N.is_zero:
                g = []
            h = la.homology_at(f, g, L, mods[s], N, p)
            chart.set(s, t, ChartEntry.from_module(h.module))
    return chart


# ---------------------------------------------------------------------------
# Tensor products
# ---------------------------------------------------------------------------

def _presentation(X: Representation) -> Tuple[FreeObject, FreeObject, List[List]]:
    res = resolve(X, 1)
    f0 = res.stages[0]
    f1 = res.stages[1] if len(res.stages) > 1 else FreeObject(X.preset, [])
    im1 = res.images[1] if len(res.images) > 1 else []
    return f0, f1, im1


def _tensor_free(A: FreeObject, B: FreeObject) -> Tuple[FreeObject, Dict[Tuple[int, int], List[int]]]:
    P = A.preset
    gens, index = [], {}
    for i, g in enumerate(A.gens):
        for j, h in enumerate(B.gens):
            idx = []
            for u, sigma in P.tensor_summands(g.node, h.node):
                idx.append(len(gens))
                gens.append(FreeGen(u, g.degree + h.degree + sigma))
            index[(i, j)] = idx
    return FreeObject(P, gens), index


def _tensor_images(src_free: FreeObject, tgt_free: FreeObject, images: List[List],
                   other: FreeObject, left_varies: bool):
    """Generator images of d⊗id (left_varies) or id⊗d in the tensor of free objects."""
    P = src_free.preset
    if left_varies:
        S, s_index = _tensor_free(src_free, other)
        T, t_index = _tensor_free(tgt_free, other)
    else:
        S, s_index = _tensor_free(other, src_free)
        T, t_index = _tensor_free(other, tgt_free)
    out: List[Optional[List]] = [None] * len(S.gens)
    for gi, g in enumerate(src_free.gens):
        vec = images[gi]
        basis = tgt_free.basis(g.node, g.degree)
        for ki, k in enumerate(other.gens):
            key_s = (gi, ki) if left_varies else (ki, gi)
            for u_idx, sg in enumerate(s_index[key_s]):
                gen = S.gens[sg]
                tbasis = T.basis(gen.node, gen.degree)
                pos = {b: r for r, b in enumerate(tbasis)}
                acc = [0] * len(tbasis)
                for coef, (hi, lab) in zip(vec, basis):
                    if not coef:
                        continue
                    key_t = (hi, ki) if left_varies else (ki, hi)
                    comps = P.arrow_tensor(lab, k.node, "R" if left_varies else "L")
                    for (w_idx, uu), comb in comps.items():
                        if uu != u_idx:
                            continue
                        tg = t_index[key_t][w_idx]
                        for l2, c2 in comb.items():
                            acc[pos[(tg, l2)]] += coef * c2
                out[sg] = la.reduce_vector(acc, T.module(gen.node, gen.degree), P.p)
    return S, T, out


def tensor(X: Representation, Y: Representation) -> Representation:
    """Day-convolution tensor product, computed on presentations.

    X⊗Y = coker(P_1⊗Q_0 ⊕ P_0⊗Q_1 -> P_0⊗Q_0).
    """
    P = X.preset
    if not P.multiplicative:
        raise NotMultiplicative(P.name)
    P0, P1, dP = _presentation(X)
    Q0, Q1, dQ = _presentation(Y)
    S1, T, im1 = _tensor_images(P1, P0, dP, Q0, True)
    S2, T2, im2 = _tensor_images(Q1, Q0, dQ, P0, False)
    assert T.gens == T2.gens
    rel = FreeObject(P, S1.gens + S2.gens)
    target = T.representation()
    f = rel.map_to(target, im1 + im2)
    C, _ = cokernel(f)
    C.name = f"({X.name})⊗({Y.name})"
    return C
