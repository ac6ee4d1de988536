"""Bigraded Ext charts and their JSON / ASCII / SVG views.

JSON is the interchange format; ASCII and SVG are derived from the same
entries. Axes follow the Adams convention: stem t - s horizontally,
filtration s vertically.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from .linalg import Module


@dataclass(frozen=True)
class ChartEntry:
    free_rank: int = 0
    torsion: Tuple[int, ...] = ()
    flags: Tuple[str, ...] = ()
    basis_labels: Tuple[str, ...] = ()

    @classmethod
    def from_module(cls, m: Module, flags=(), labels=()) -> "ChartEntry":
        return cls(m.free_rank, m.torsion, tuple(flags), tuple(labels))

    @classmethod
    def fp(cls, dim: int, flags=(), labels=()) -> "ChartEntry":
        return cls(0, (1,) * dim, tuple(flags), tuple(labels))

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion)

    def module(self) -> Module:
        return Module((0,) * self.free_rank + tuple(self.torsion))

    def describe(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        counts: Dict[int, int] = {}
        for e in self.torsion:
            counts[e] = counts.get(e, 0) + 1
        for e in sorted(counts):
            base = "F_p" if e == 1 else f"Z/p^{e}"
            parts.append(base if counts[e] == 1 else f"({base})^{counts[e]}")
        return " + ".join(parts) if parts else "0"


@dataclass
class ExtChart:
    """(s, t) -> group descriptor inside a completeness window.

    Cells inside the window that are absent from ``entries`` are zero.
    """

    prime: int
    max_s: int
    max_t: int
    entries: Dict[Tuple[int, int], ChartEntry] = field(default_factory=dict)
    name: str = ""
    min_t: int = 0
    max_stem: Optional[int] = None

    def __getitem__(self, st: Tuple[int, int]) -> ChartEntry:
        return self.entries.get(st, ChartEntry())

    def in_window(self, s: int, t: int) -> bool:
        if s < 0 or s > self.max_s or t < self.min_t or t > self.max_t:
            return False
        return self.max_stem is None or t - s <= self.max_stem

    def set(self, s: int, t: int, entry: ChartEntry) -> None:
        if entry.is_zero and not entry.flags:
            self.entries.pop((s, t), None)
        else:
            self.entries[(s, t)] = entry

    def cells(self) -> Iterable[Tuple[int, int]]:
        for s in range(self.max_s + 1):
            for t in range(self.min_t, self.max_t + 1):
                if self.in_window(s, t):
                    yield s, t

    def dims(self) -> Dict[Tuple[int, int], int]:
        """Number of cyclic summands per nonzero cell."""
        return {k: e.ngens for k, e in self.entries.items() if not e.is_zero}

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "prime": self.prime,
            "window": {"max_s": self.max_s, "min_t": self.min_t, "max_t": self.max_t,
                       "max_stem": self.max_stem},
            "entries": [
                {"s": s, "t": t, "free_rank": e.free_rank, "torsion": list(e.torsion),
                 "flags": list(e.flags), "basis_labels": list(e.basis_labels)}
                for (s, t), e in sorted(self.entries.items())
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "ExtChart":
        w = d["window"]
        chart = cls(d["prime"], w["max_s"], w["max_t"], name=d.get("name", ""),
                    min_t=w.get("min_t", 0), max_stem=w.get("max_stem"))
        for e in d["entries"]:
            chart.entries[(e["s"], e["t"])] = ChartEntry(
                e["free_rank"], tuple(e["torsion"]), tuple(e["flags"]), tuple(e["basis_labels"]))
        return chart

    @classmethod
    def from_json(cls, text: str) -> "ExtChart":
        return cls.from_dict(json.loads(text))

    def same_groups(self, other: "ExtChart") -> bool:
        keys = set(self.entries) | set(other.entries)
        return all((self[k].free_rank, self[k].torsion) == (other[k].free_rank, other[k].torsion)
                   for k in keys)


def _glyph(e: ChartEntry) -> str:
    if e.is_zero:
        return "."
    if "AMBIGUOUS_EXTENSION" in e.flags:
        return "?"
    if e.free_rank:
        return "Z" if e.ngens == 1 else "Z+"
    n = len(e.torsion)
    if all(x == 1 for x in e.torsion):
        return str(n) if n > 1 else "o"
    return "T"


def to_ascii(chart: ExtChart) -> str:
    """Grid with stems left to right and filtration bottom to top."""
    max_stem = chart.max_stem if chart.max_stem is not None else chart.max_t
    width = 3
    title = chart.name if f"p={chart.prime}" in chart.name else f"{chart.name} p={chart.prime}"
    lines = [f"# {title}  (x = t-s, y = s)"]
    for s in range(chart.max_s, -1, -1):
        row = []
        for n in range(0, max_stem + 1):
            t = n + s
            cell = _glyph(chart[(s, t)]) if chart.in_window(s, t) else " "
            row.append(cell.rjust(width))
        lines.append(f"{s:>3} |" + "".join(row))
    lines.append("    +" + "-" * (width * (max_stem + 1)))
    lines.append("     " + "".join(str(n).rjust(width) for n in range(max_stem + 1)))
    return "\n".join(lines) + "\n"


def to_svg(chart: ExtChart, cell: int = 28) -> str:
    """Static SVG 1.1 chart: one dot per cyclic summand, boxed labels for free ones."""
    max_stem = chart.max_stem if chart.max_stem is not None else chart.max_t
    margin = 36
    w = margin * 2 + cell * (max_stem + 1)
    h = margin * 2 + cell * (chart.max_s + 1)

    def xy(n, s):
        return margin + cell * n + cell // 2, h - margin - cell * s - cell // 2

    out: List[str] = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<title>{chart.name} p={chart.prime}</title>',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>',
        '<g stroke="#dddddd" stroke-width="1">',
    ]
    for n in range(max_stem + 2):
        x = margin + cell * n
        out.append(f'<line x1="{x}" y1="{margin}" x2="{x}" y2="{h - margin}"/>')
    for s in range(chart.max_s + 2):
        y = h - margin - cell * s
        out.append(f'<line x1="{margin}" y1="{y}" x2="{w - margin}" y2="{y}"/>')
    out.append("</g>")
    out.append('<g font-family="monospace" font-size="9" fill="#444444" text-anchor="middle">')
    for n in range(max_stem + 1):
        x, _ = xy(n, 0)
        out.append(f'<text x="{x}" y="{h - margin + 14}">{n}</text>')
    for s in range(chart.max_s + 1):
        _, y = xy(0, s)
        out.append(f'<text x="{margin - 12}" y="{y + 3}">{s}</text>')
    out.append("</g>")
    out.append('<g fill="black">')
    for (s, t), e in sorted(chart.entries.items()):
        n = t - s
        if e.is_zero or n < 0 or n > max_stem or s > chart.max_s:
            continue
        cx, cy = xy(n, s)
        k = e.ngens
        for i in range(k):
            dx = (i - (k - 1) / 2) * 6
            if i < e.free_rank:
                out.append(f'<rect x="{cx + dx - 3:.1f}" y="{cy - 3}" width="6" height="6" '
                           f'fill="none" stroke="black"/>')
            else:
                out.append(f'<circle cx="{cx + dx:.1f}" cy="{cy}" r="2.5"/>')
        if "AMBIGUOUS_EXTENSION" in e.flags:
            out.append(f'<text x="{cx}" y="{cy - 6}" font-size="8" text-anchor="middle">?</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


@dataclass
class ChartMap:
    """Per-bidegree matrices between the chosen generators of two charts."""

    source: ExtChart
    target: ExtChart
    matrices: Dict[Tuple[int, int], list] = field(default_factory=dict)

    def matrix(self, s: int, t: int) -> list:
        m = self.matrices.get((s, t))
        if m is None:
            return [[0] * self.source[(s, t)].ngens for _ in range(self.target[(s, t)].ngens)]
        return m

    def validate(self) -> None:
        from .linalg import is_compatible
        for (s, t), m in self.matrices.items():
            src, tgt = self.source[(s, t)], self.target[(s, t)]
            if len(m) != tgt.ngens or any(len(r) != src.ngens for r in m):
                raise ValueError(f"chart map at ({s},{t}) has the wrong shape")
            if not is_compatible(m, src.module(), tgt.module(), self.source.prime):
                raise ValueError(f"chart map at ({s},{t}) is not torsion-compatible")
