"""Bockstein couples and the two concrete presets.

The integral preset has nodes Z (p-local integers) and F (F_p). A
representation is a couple (A, V, π, δ): A = X(Z), V = X(F), π: A_n -> V_n
and δ: V_n -> A_{n-1}, with β = π∘δ on V.

The Morava preset replaces Z by k(n): nodes K and F, both F_p-valued, with
End(K) = F_p[v_n] truncated at a chosen power.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg as la
from .errors import ExactnessFailure, RepresentationError
from .linalg import GradedFpSpace, GradedZpModule, Matrix, Module
from .monomials import label, monomials
from .quiver import FP, INTEGRAL, Arrow, Representation, RepMap, SimplesPreset, representable


# ---------------------------------------------------------------------------
# Presets
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def integral_preset(p: int) -> SimplesPreset:
    arrows = [
        Arrow("pi", "Z", "F", 0, 1),
        Arrow("delta", "F", "Z", -1, 1),
        Arrow("beta", "F", "F", -1, 1),
    ]
    comps = {("pi", "delta"): {"beta": 1}}
    # F⊗F = F ⊕ ΣF; summands listed as (node, shift in the table grading)
    tnodes = {("Z", "Z"): [("Z", 0)], ("Z", "F"): [("F", 0)], ("F", "Z"): [("F", 0)],
              ("F", "F"): [("F", 0), ("F", -1)]}
    tarrows = {
        ("pi", "F", "R"): {(0, 0): {"id_F": 1}},
        ("delta", "F", "R"): {(1, 0): {"id_F": 1}},
        ("beta", "F", "R"): {(1, 0): {"id_F": 1}},
        # left versions: conjugate by the swap on F⊗F, which is -1 on ΣF
        ("pi", "F", "L"): {(0, 0): {"id_F": 1}},
        ("delta", "F", "L"): {(1, 0): {"id_F": -1}},
        ("beta", "F", "L"): {(1, 0): {"id_F": -1}},
    }
    return SimplesPreset(f"integral-{p}", p, [("Z", INTEGRAL), ("F", FP)], arrows, comps,
                         relations=[("delta", "pi")], tensor_nodes=tnodes, tensor_arrows=tarrows, unit="Z")


def vn_degree(p: int, n: int) -> int:
    return 2 * p ** n - 2


@lru_cache(maxsize=None)
def morava_preset(p: int, n: int, kmax: int = 4) -> SimplesPreset:
    """Two-node preset for k(n): v_n powers up to v_n^kmax act on K."""
    if n < 1:
        raise ValueError("n must be at least 1")
    q = vn_degree(p, n)
    arrows = [Arrow(f"v{k}", "K", "K", k * q, 1) for k in range(1, kmax + 1)]
    arrows += [Arrow("pi", "K", "F", 0, 1), Arrow("delta", "F", "K", -(q + 1), 1),
               Arrow("betap", "F", "F", -(q + 1), 1)]
    comps: Dict[Tuple[str, str], Dict[str, int]] = {("pi", "delta"): {"betap": 1}}
    for a in range(1, kmax + 1):
        for b in range(1, kmax + 1 - a):
            comps[(f"v{a}", f"v{b}")] = {f"v{a + b}": 1}
    rels = [("pi", "v1"), ("v1", "delta"), ("delta", "pi")]
    return SimplesPreset(f"morava-{p}-{n}", p, [("K", FP), ("F", FP)], arrows, comps, relations=rels,
                         exact_span=(kmax + 1) * q)


# ---------------------------------------------------------------------------
# Couples
# ---------------------------------------------------------------------------

@dataclass
class Couple:
    """A representation of the integral preset viewed as (A, V, π, δ)."""

    rep: Representation

    @property
    def p(self) -> int:
        return self.rep.p

    @property
    def A(self) -> GradedZpModule:
        degs = dict(self.rep.values["Z"])
        w = (min(degs), max(degs)) if degs else (0, 0)
        return GradedZpModule(degs, w)

    @property
    def V(self) -> GradedFpSpace:
        return GradedFpSpace({n: m.ngens for n, m in self.rep.values["F"].items()})

    def pi(self, n: int) -> Matrix:
        return self.rep.act("pi", n)

    def delta(self, n: int) -> Matrix:
        return self.rep.act("delta", n)

    def check(self) -> None:
        """δπ = 0 and p·V = 0, plus full functoriality."""
        for n in self.rep.degrees("Z"):
            a = self.rep.value("Z", n)
            v = self.rep.value("F", n)
            comp = la.matmul(self.delta(n), self.pi(n), inner=v.ngens)
            if not la.is_zero_map(comp, self.rep.value("Z", n - 1), self.p):
                raise RepresentationError(f"δπ ≠ 0 in degree {n}")
        for n, m in self.rep.values["F"].items():
            if any(e != 1 for e in m.orders):
                raise RepresentationError(f"V_{n} is not killed by p")
        self.rep.validate()

    @classmethod
    def from_data(cls, p: int, A: Dict[int, Module], V: Dict[int, int], pi: Dict[int, Matrix],
                  delta: Dict[int, Matrix], name: str = "") -> "Couple":
        P = integral_preset(p)
        vals = {"Z": dict(A), "F": {n: Module.fp(d) for n, d in V.items()}}
        acts = {}
        for n, m in pi.items():
            acts[("pi", n)] = la.reduce_matrix(m, vals["F"].get(n, Module()), p)
        for n, m in delta.items():
            acts[("delta", n)] = la.reduce_matrix(m, vals["Z"].get(n - 1, Module()), p)
            inner = vals["Z"].get(n - 1, Module()).ngens
            pm = pi.get(n - 1)
            if pm is not None and inner:
                acts[("beta", n)] = la.reduce_matrix(la.matmul(pm, m, inner=inner),
                                                     vals["F"].get(n - 1, Module()), p)
        return cls(Representation(P, vals, acts, name=name))


@dataclass
class SpectrumHomologyDatum:
    name: str
    homology: GradedZpModule
    even: bool = False
    polynomial_generators: List[Tuple[str, int]] = field(default_factory=list)

    def __post_init__(self):
        for n, m in self.homology.degrees.items():
            if self.even and n % 2 and not m.is_zero:
                raise ValueError(f"{self.name}: homology in odd degree {n}")


def couple_from_integral_homology(h: GradedZpModule, p: int, name: str = "") -> Couple:
    """V_n = A_n/p ⊕ A_{n-1}[p], π the projection, δ the inclusion of p-torsion."""
    A = {n: m for n, m in h.degrees.items() if not m.is_zero}
    degs = sorted(set(A) | {n + 1 for n, m in A.items() if m.torsion})
    V, pi, delta = {}, {}, {}
    for n in degs:
        a = A.get(n, Module())
        below = A.get(n - 1, Module())
        tors = [(j, e) for j, e in enumerate(below.orders) if e]
        dim = a.ngens + len(tors)
        if not dim:
            continue
        V[n] = dim
        if a.ngens:
            pi[n] = [[1 if r == c else 0 for c in range(a.ngens)] for r in range(dim)]
        if tors:
            d = la.zeros(below.ngens, dim)
            for k, (j, e) in enumerate(tors):
                d[j][a.ngens + k] = p ** (e - 1)
            delta[n] = d
    return Couple.from_data(p, A, V, pi, delta, name=name)


def bockstein_les_exact(c: Couple) -> bool:
    """Exactness of A_n -p-> A_n -π-> V_n -δ-> A_{n-1} -p-> A_{n-1} in every degree."""
    p = c.p
    rep = c.rep
    degs = sorted(set(rep.degrees("Z")) | set(rep.degrees("F")) | {n + 1 for n in rep.degrees("Z")})
    for n in degs:
        a, v, b = rep.value("Z", n), rep.value("F", n), rep.value("Z", n - 1)
        pa = [[p if r == c_ else 0 for c_ in range(a.ngens)] for r in range(a.ngens)]
        pb = [[p if r == c_ else 0 for c_ in range(b.ngens)] for r in range(b.ngens)]
        pairs = [
            (pa, c.pi(n), a, a, v),
            (c.pi(n), c.delta(n), a, v, b),
            (c.delta(n), pb, v, b, b),
        ]
        for f, g, L, M, N in pairs:
            if M.is_zero:
                continue
            f = f if L.ngens else la.zeros(M.ngens, 0)
            g = g if N.ngens else []
            if not la.homology_at(f, g, L, M, N, p).module.is_zero:
                return False
    return True


def sphere_couple(p: int) -> Couple:
    return couple_from_integral_homology(GradedZpModule({0: Module.free(1)}, (0, 0)), p, name="S")


def moore_couple(p: int, k: int) -> Couple:
    return couple_from_integral_homology(GradedZpModule({0: Module((k,))}, (0, 0)), p, name=f"S/p^{k}")


def bp_homology(p: int, max_t: int) -> GradedZpModule:
    degs = {t: Module.free(len(monomials(p, t))) for t in range(0, max_t + 1) if monomials(p, t)}
    return GradedZpModule(degs, (0, max_t))


def bp_couple(p: int, max_t: int) -> Couple:
    return couple_from_integral_homology(bp_homology(p, max_t), p, name="BP")


def bp_basis_labels(p: int, t: int) -> List[str]:
    return [label(i) for i in monomials(p, t)]


def homology_normalized_pf(p: int, shift: int = 0) -> Representation:
    """P(F_p) with A = F_p@0 and V = F_p@{0,1}; this is representable(F)[+1]."""
    rep = representable(integral_preset(p), "F", shift + 1)
    rep.name = f"P_F^h[{shift}]"
    return rep


# ---------------------------------------------------------------------------
# Moore resolutions
# ---------------------------------------------------------------------------

def moore_maps(p: int, k: int) -> Tuple[Matrix, Matrix]:
    """The integral matrices (p^{k-1}, -1)^T and (1, p^{k-1})."""
    return [[p ** (k - 1)], [-1]], [[1, p ** (k - 1)]]


@dataclass
class MooreReport:
    p: int
    k: int
    checked: List[str]
    ok: bool


def _sequence_exact(f: Matrix, g: Matrix, L: Module, M: Module, N: Module, p: int, where: str) -> None:
    fm = f if L.ngens else la.zeros(M.ngens, 0)
    comp = la.matmul(g, fm, inner=M.ngens) if L.ngens and N.ngens else []
    if comp and not la.is_zero_map(comp, N, p):
        raise ExactnessFailure(f"{where}: composite nonzero", degree=where)
    if L.ngens and not la.kernel(f, L, M, p).module.is_zero:
        raise ExactnessFailure(f"{where}: first map not injective", degree=where)
    if M.ngens and not la.homology_at(fm, g if N.ngens else [], L, M, N, p).module.is_zero:
        raise ExactnessFailure(f"{where}: not exact in the middle", degree=where)
    if N.ngens and not la.cokernel(g, M, N, p).module.is_zero:
        raise ExactnessFailure(f"{where}: last map not onto", degree=where)


def moore_resolution_check(p: int, k: int, f_int: Optional[Matrix] = None,
                           g_int: Optional[Matrix] = None) -> MooreReport:
    """Verify S -> S ⊕ S/p -> S/p^k on integral and mod-p homology and as couple maps.

    ``f_int`` / ``g_int`` override the integral matrices (negative controls).
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    f0, g0 = moore_maps(p, k)
    f_int = f0 if f_int is None else f_int
    g_int = g0 if g_int is None else g_int
    checked = []
    Zm, mid, Zk = Module.free(1), Module((0, 1)), Module((k,))
    if not la.is_compatible(f_int, Zm, mid, p) or not la.is_compatible(g_int, mid, Zk, p):
        raise ExactnessFailure("integral matrices not torsion-compatible", degree=0)
    _sequence_exact(f_int, g_int, Zm, mid, Zk, p, "integral homology, degree 0")
    checked.append("integral homology: 0 -> Z -> Z + Z/p -> Z/p^k -> 0")

    # mod-p homology, degreewise; middle basis (F_p@0, F_p@0, F_p@1)
    f_fp = [[0], [-1], [0]]
    g_fp = [[1, 0, 0], [0, 0, 1]]
    deg = {0: ([0], [0, 1], [0]), 1: ([], [2], [1])}
    for n, (rs, rm, rt) in deg.items():
        fb = [[f_fp[r][c] for c in range(len(rs))] for r in rm]
        gb = [[g_fp[r][c] for c in rm] for r in rt]
        _sequence_exact(fb, gb, Module.fp(len(rs)), Module.fp(len(rm)), Module.fp(len(rt)), p,
                        f"mod-p homology, degree {n}")
    checked.append("mod-p homology: 0 -> F_p -> F_p + F_p + F_p[1] -> F_p + F_p[1] -> 0")

    # couple maps
    S, M1, Mk = sphere_couple(p), moore_couple(p, 1), moore_couple(p, k)
    middle = S.rep.direct_sum(M1.rep)
    F = RepMap(S.rep, middle, {("Z", 0): f_int, ("F", 0): [r[:1] for r in f_fp[:2]]})
    G = RepMap(middle, Mk.rep, {("Z", 0): g_int, ("F", 0): [[1, 0]], ("F", 1): [[1]]})
    for name, m in (("first", F), ("second", G)):
        try:
            m.validate()
        except RepresentationError as e:
            raise ExactnessFailure(f"{name} map is not a couple map: {e}", degree=0) from e
    checked.append("both maps commute with pi and delta")
    return MooreReport(p, k, checked, True)


# ---------------------------------------------------------------------------
# Morava couples
# ---------------------------------------------------------------------------

@dataclass
class MoravaCouple:
    """A representation of the Morava preset viewed as (A, V, π, δ) with v_n acting on A."""

    rep: Representation
    n: int

    @property
    def A(self) -> GradedFpSpace:
        return GradedFpSpace({d: m.ngens for d, m in self.rep.values["K"].items()})

    @property
    def V(self) -> GradedFpSpace:
        return GradedFpSpace({d: m.ngens for d, m in self.rep.values["F"].items()})

    def check(self) -> None:
        self.rep.validate()

    @classmethod
    def from_data(cls, p: int, n: int, A: Dict[int, int], V: Dict[int, int], v: Dict[int, Matrix],
                  pi: Dict[int, Matrix], delta: Dict[int, Matrix], kmax: int = 4) -> "MoravaCouple":
        """``v[d]`` is the v_n action A_d -> A_{d+q}; higher powers are composed."""
        P = morava_preset(p, n, kmax)
        q = vn_degree(p, n)
        vals = {"K": {d: Module.fp(x) for d, x in A.items()}, "F": {d: Module.fp(x) for d, x in V.items()}}
        acts: Dict[Tuple[str, int], Matrix] = {}
        for d in A:
            cur = la.identity(A[d])
            for k in range(1, kmax + 1):
                m = v.get(d + (k - 1) * q)
                tgt = A.get(d + k * q, 0)
                if m is None or not tgt:
                    break
                cur = la.reduce_matrix(la.matmul(m, cur, inner=A.get(d + (k - 1) * q, 0)), Module.fp(tgt), p)
                acts[(f"v{k}", d)] = cur
        for d, m in pi.items():
            acts[("pi", d)] = la.reduce_matrix(m, Module.fp(V.get(d, 0)), p)
        for d, m in delta.items():
            acts[("delta", d)] = la.reduce_matrix(m, Module.fp(A.get(d - q - 1, 0)), p)
            pm = pi.get(d - q - 1)
            if pm is not None:
                acts[("betap", d)] = la.reduce_matrix(la.matmul(pm, m, inner=A.get(d - q - 1, 0)),
                                                      Module.fp(V.get(d - q - 1, 0)), p)
        return cls(Representation(P, vals, acts), n)
