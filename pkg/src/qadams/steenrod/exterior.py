"""Polynomial Ext charts, and Ext over exterior algebras by the Koszul closed form."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ..charts import ChartEntry, ExtChart
from ..errors import EvennessViolated
from ..linalg import GradedFpSpace

BasisElement = Tuple[Tuple[int, ...], int]  # (exponents of the generators, coefficient index)


@dataclass
class PolyExtChart:
    """F_p[x_1, ...] ⊗ (coefficients in s = 0), with x_i of bidegree (s_i, t_i).

    ``coefficients`` maps an internal degree to the labels of a basis there.
    """

    prime: int
    generators: List[Tuple[str, int, int]]
    coefficients: Dict[int, List[str]] = field(default_factory=lambda: {0: ["1"]})
    max_s: int = 0
    max_t: int = 0
    name: str = ""

    def _exponents(self, s: int, t: int) -> List[Tuple[int, ...]]:
        gens = self.generators
        out: List[Tuple[int, ...]] = []

        def rec(i: int, rs: int, rt: int, acc: List[int]):
            if i == len(gens):
                if rs == 0 and rt >= 0:
                    out.append(tuple(acc))
                return
            _, gs, gt = gens[i]
            k = 0
            while k * gs <= rs and k * gt <= rt:
                acc.append(k)
                rec(i + 1, rs - k * gs, rt - k * gt, acc)
                acc.pop()
                k += 1
                if gs == 0 and gt == 0:
                    break

        rec(0, s, t, [])
        return out

    def basis(self, s: int, t: int) -> List[BasisElement]:
        """Basis at (s, t), ordered by exponents (descending on the first generator) then coefficient."""
        out = []
        for e in sorted(self._exponents(s, t), reverse=True):
            deg = sum(k * g[2] for k, g in zip(e, self.generators))
            for c in range(len(self.coefficients.get(t - deg, ()))):
                out.append((e, c))
        return out

    def dim(self, s: int, t: int) -> int:
        return len(self.basis(s, t))

    def label(self, s: int, t: int, b: BasisElement) -> str:
        e, c = b
        deg = sum(k * g[2] for k, g in zip(e, self.generators))
        parts = []
        for k, (nm, _, _) in zip(e, self.generators):
            if k:
                parts.append(nm if k == 1 else f"{nm}^{k}")
        coeff = self.coefficients[t - deg][c]
        if coeff != "1" or not parts:
            parts.append(coeff)
        return "*".join(parts)

    def labels(self, s: int, t: int) -> List[str]:
        return [self.label(s, t, b) for b in self.basis(s, t)]

    def to_ext_chart(self, with_labels: bool = True) -> ExtChart:
        ch = ExtChart(self.prime, self.max_s, self.max_t, name=self.name)
        for s in range(self.max_s + 1):
            for t in range(self.max_t + 1):
                n = self.dim(s, t)
                if n:
                    ch.set(s, t, ChartEntry.fp(n, labels=self.labels(s, t) if with_labels else ()))
        return ch


def ext_exterior(p: int, generator_degrees: Sequence[int], trivial_coefficients: GradedFpSpace,
                 max_s: int, max_t: int, names: Optional[Sequence[str]] = None,
                 coefficient_labels: Optional[Dict[int, List[str]]] = None) -> PolyExtChart:
    """Ext over the exterior algebra on the given generators, coefficients with trivial coaction.

    Koszul: F_p[x_i] ⊗ coefficients, |x_i| = (1, d_i). The shortcut needs odd
    generator degrees and coefficients of a single parity.
    """
    degs = list(generator_degrees)
    coeff_degrees = [d for d, n in trivial_coefficients.dims.items() if n]
    if degs:
        if any(d % 2 == 0 for d in degs):
            raise EvennessViolated(f"exterior generators must have odd degree, got {degs}")
        if len({d % 2 for d in coeff_degrees}) > 1:
            raise EvennessViolated("coefficients are not concentrated in a single parity")
    if names is None:
        names = [f"h{i}" for i in range(len(degs))] if len(degs) > 1 else ["h0"] * len(degs)
    coeffs: Dict[int, List[str]] = {}
    for d, n in sorted(trivial_coefficients.dims.items()):
        if n:
            labels = (coefficient_labels or {}).get(d)
            coeffs[d] = list(labels) if labels else ([f"c{d}_{i}" for i in range(n)] if (d, n) != (0, 1) else ["1"])
    return PolyExtChart(p, [(nm, 1, d) for nm, d in zip(names, degs)], coeffs, max_s, max_t,
                        name="Ext over exterior")
