"""Exact linear algebra over F_p and over the p-local integers Z_(p).

F_p matrices are numpy integer arrays with entries in [0, p). Over Z_(p) a
scalar is an ``int`` or a ``Fraction`` whose denominator is prime to p;
anything coprime to p is a unit. A finitely generated Z_(p)-module is kept
in normal form as a tuple of generator *orders*: ``0`` for a free summand,
``e >= 1`` for a cyclic summand Z/p^e.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .errors import CompositeNonzero

Matrix = List[List]  # row-major, entries int or Fraction


# ---------------------------------------------------------------------------
# F_p
# ---------------------------------------------------------------------------

class RrefResult(NamedTuple):
    rank: int
    kernel_basis: np.ndarray  # cols x (cols - rank); columns span the kernel
    image_basis: np.ndarray  # rows x rank; columns span the column space


def _rref(m: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    a = np.array(m, dtype=np.int64) % p
    rows, cols = a.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rref_fp(m, p: int) -> RrefResult:
    """Row-reduce ``m`` over F_p.

    Returns the rank, a basis of the kernel (as columns) and a basis of the
    column space (as columns, a subset of the original columns).
    """
    m = np.atleast_2d(np.asarray(m, dtype=np.int64)) % p
    rows, cols = m.shape
    if rows == 0 or cols == 0:
        return RrefResult(0, np.eye(cols, dtype=np.int64), np.zeros((rows, 0), dtype=np.int64))
    red, pivots = _rref(m, p)
    rank = len(pivots)
    free = [c for c in range(cols) if c not in set(pivots)]
    ker = np.zeros((cols, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        ker[f, k] = 1
        for r, pc in enumerate(pivots):
            ker[pc, k] = (-red[r, f]) % p
    return RrefResult(rank, ker, m[:, pivots].copy())


def rank_fp(m, p: int) -> int:
    m = np.atleast_2d(np.asarray(m, dtype=np.int64))
    if m.size == 0:
        return 0
    if p == 2:
        return rank_f2_rows(_pack_rows(m))
    return len(_rref(m, p)[1])


def _pack_rows(m: np.ndarray) -> List[int]:
    out = []
    for row in np.asarray(m) % 2:
        v = 0
        for j in np.nonzero(row)[0]:
            v |= 1 << int(j)
        out.append(v)
    return out


def rank_f2_rows(rows: Iterable[int]) -> int:
    """Rank over F_2 of a matrix whose rows are given as integer bitmasks."""
    basis: Dict[int, int] = {}  # leading bit -> row
    for v in rows:
        while v:
            lead = v.bit_length() - 1
            b = basis.get(lead)
            if b is None:
                basis[lead] = v
                break
            v ^= b
    return len(basis)


def solve_fp(m, rhs, p: int) -> Optional[np.ndarray]:
    """Return some x with m x = rhs over F_p (rhs may be a matrix), or None."""
    m = np.atleast_2d(np.asarray(m, dtype=np.int64)) % p
    rhs = np.asarray(rhs, dtype=np.int64) % p
    vec = rhs.ndim == 1
    if vec:
        rhs = rhs[:, None]
    rows, cols = m.shape
    aug = np.concatenate([m, rhs], axis=1)
    red, pivots = _rref(aug, p)
    if any(pc >= cols for pc in pivots):
        return None
    x = np.zeros((cols, rhs.shape[1]), dtype=np.int64)
    for r, pc in enumerate(pivots):
        x[pc] = red[r, cols:]
    return x[:, 0] if vec else x


def complement_fp(image_cols, ambient_dim: int, p: int) -> List[int]:
    """Indices of standard basis vectors completing span(image_cols) to the ambient space.

    The choice is the non-pivot coordinates of the transposed echelon form,
    so the complement is spanned by unit vectors (stable labels).
    """
    img = np.asarray(image_cols, dtype=np.int64).reshape(ambient_dim, -1) % p
    if img.shape[1] == 0:
        return list(range(ambient_dim))
    _, pivots = _rref(img.T, p)
    taken = set(pivots)
    return [i for i in range(ambient_dim) if i not in taken]


# ---------------------------------------------------------------------------
# Z_(p) scalars
# ---------------------------------------------------------------------------

def valuation(x, p: int) -> int:
    """p-adic valuation of a nonzero p-local scalar."""
    n = x.numerator if isinstance(x, Fraction) else int(x)
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def normalize_scalar(x, p: int) -> int:
    """Canonical representative p^v of a nonzero scalar modulo units (0 stays 0)."""
    if x == 0:
        return 0
    return p ** valuation(x, p)


def _check_plocal(x, p: int):
    if isinstance(x, Fraction) and x.denominator % p == 0:
        raise ValueError(f"{x} is not p-local at p={p}")


def residue(x, modulus: int) -> int:
    """Image of a p-local scalar in Z/modulus (modulus a power of p)."""
    if isinstance(x, Fraction):
        return x.numerator * pow(x.denominator, -1, modulus) % modulus
    return int(x) % modulus


def _simplify(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[0] * c for _ in range(r)]


def matmul(a: Matrix, b: Matrix, inner: Optional[int] = None, cols: Optional[int] = None) -> Matrix:
    """a @ b; pass ``inner`` / ``cols`` when a factor may have no rows or columns."""
    if not a:
        return []
    n = len(a[0]) if inner is None else inner
    if cols is None:
        cols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [0] * cols
        for k in range(n):
            x = row[k]
            if x:
                bk = b[k]
                for j in range(cols):
                    y = bk[j]
                    if y:
                        acc[j] += x * y
        out.append([_simplify(v) for v in acc])
    return out


def transpose(a: Matrix, rows: int, cols: int) -> Matrix:
    return [[a[i][j] for i in range(rows)] for j in range(cols)]


def hconcat(blocks: Sequence[Matrix], rows: int) -> Matrix:
    return [sum((list(b[i]) for b in blocks), []) for i in range(rows)]


class SNF(NamedTuple):
    U: Matrix
    D: Matrix
    V: Matrix
    Uinv: Matrix
    Vinv: Matrix
    rank: int
    exponents: Tuple[int, ...]  # valuations of the nonzero diagonal entries


def smith_normal_form(m: Matrix, p: int, rows: Optional[int] = None, cols: Optional[int] = None) -> SNF:
    """Smith normal form over Z_(p).

    Returns U, D, V with ``U m V = D`` exactly; D is diagonal with entries
    p^e (nondecreasing e) followed by zeros. U, V are invertible over Z_(p);
    their inverses are returned as well.
    """
    r = len(m) if rows is None else rows
    c = (len(m[0]) if m else 0) if cols is None else cols
    A = [[Fraction(x) for x in row] for row in m]
    for row in A:
        for x in row:
            _check_plocal(x, p)
    U = [[Fraction(v) for v in row] for row in identity(r)]
    Uinv = [[Fraction(v) for v in row] for row in identity(r)]
    V = [[Fraction(v) for v in row] for row in identity(c)]
    Vinv = [[Fraction(v) for v in row] for row in identity(c)]
    exps: List[int] = []
    k = 0
    while k < min(r, c):
        best = None
        for i in range(k, r):
            Ai = A[i]
            for j in range(k, c):
                x = Ai[j]
                if x:
                    v = valuation(x, p)
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, i, j = best
        if i != k:
            A[i], A[k] = A[k], A[i]
            U[i], U[k] = U[k], U[i]
            for row in Uinv:
                row[i], row[k] = row[k], row[i]
        if j != k:
            for row in A:
                row[j], row[k] = row[k], row[j]
            for row in V:
                row[j], row[k] = row[k], row[j]
            Vinv[j], Vinv[k] = Vinv[k], Vinv[j]
        pk = p ** v
        unit = A[k][k] / pk
        if unit != 1:
            A[k] = [x / unit for x in A[k]]
            U[k] = [x / unit for x in U[k]]
            for row in Uinv:
                row[k] = row[k] * unit
        Ak = A[k]
        for i in range(k + 1, r):
            f = A[i][k]
            if f:
                f = f / pk
                Ai = A[i]
                for j in range(k, c):
                    if Ak[j]:
                        Ai[j] -= f * Ak[j]
                Ui, Uk = U[i], U[k]
                for j in range(r):
                    if Uk[j]:
                        Ui[j] -= f * Uk[j]
                for row in Uinv:
                    if row[i]:
                        row[k] += f * row[i]
        for j in range(k + 1, c):
            f = Ak[j]
            if f:
                f = f / pk
                for row in A:
                    if row[k]:
                        row[j] -= f * row[k]
                for row in V:
                    if row[k]:
                        row[j] -= f * row[k]
                Vk, Vj = Vinv[k], Vinv[j]
                for t in range(c):
                    if Vj[t]:
                        Vk[t] += f * Vj[t]
        exps.append(v)
        k += 1
    simp = lambda M: [[_simplify(x) for x in row] for row in M]
    return SNF(simp(U), simp(A), simp(V), simp(Uinv), simp(Vinv), len(exps), tuple(exps))


def elementary_divisors(m: Matrix, p: int) -> Tuple[int, ...]:
    return smith_normal_form(m, p).exponents


# ---------------------------------------------------------------------------
# Finitely generated Z_(p)-modules in normal form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Module:
    """Z_(p)^f ⊕ ⊕ Z/p^e, one entry of ``orders`` per generator."""

    orders: Tuple[int, ...] = ()

    @classmethod
    def free(cls, n: int) -> "Module":
        return cls((0,) * n)

    @classmethod
    def fp(cls, n: int) -> "Module":
        return cls((1,) * n)

    @property
    def ngens(self) -> int:
        return len(self.orders)

    @property
    def free_rank(self) -> int:
        return sum(1 for e in self.orders if e == 0)

    @property
    def torsion(self) -> Tuple[int, ...]:
        return tuple(sorted(e for e in self.orders if e > 0))

    @property
    def is_zero(self) -> bool:
        return not self.orders

    def descriptor(self) -> Tuple[int, Tuple[int, ...]]:
        return self.free_rank, self.torsion

    def length(self) -> int:
        """Composition length of the torsion part (sum of exponents)."""
        return sum(self.orders)

    def __add__(self, other: "Module") -> "Module":
        return Module(self.orders + other.orders)


def reduce_vector(vec: Sequence, mod: Module, p: int) -> list:
    out = []
    for x, e in zip(vec, mod.orders):
        out.append(residue(x, p ** e) if e else _simplify(x))
    return out


def reduce_matrix(mat: Matrix, target: Module, p: int) -> Matrix:
    out = []
    for x_row, e in zip(mat, target.orders):
        if e:
            q = p ** e
            out.append([residue(x, q) for x in x_row])
        else:
            out.append([_simplify(x) for x in x_row])
    return out


def relation_matrix(mod: Module, p: int) -> Matrix:
    """Columns p^e * e_i for each torsion generator."""
    tors = [i for i, e in enumerate(mod.orders) if e]
    out = zeros(mod.ngens, len(tors))
    for k, i in enumerate(tors):
        out[i][k] = p ** mod.orders[i]
    return out


def is_compatible(mat: Matrix, source: Module, target: Module, p: int) -> bool:
    """p^e times the image of each order-p^e source generator vanishes in the target."""
    for j, e in enumerate(source.orders):
        if e == 0:
            continue
        for i, f in enumerate(target.orders):
            x = mat[i][j] * p ** e
            if f == 0:
                if x != 0:
                    return False
            elif residue(x, p ** f) != 0:
                return False
    return True


def is_zero_map(mat: Matrix, target: Module, p: int) -> bool:
    return all(v == 0 for row in reduce_matrix(mat, target, p) for v in row)


@dataclass
class Subquotient:
    """A module L/R with L a lattice in an ambient Z_(p)^n.

    ``gens`` holds the kept generators as ambient columns; ``coords`` maps an
    ambient vector of L to coordinates on those generators.
    """

    module: Module
    gens: Matrix  # n x module.ngens
    _basis: Matrix  # n x k lattice basis of L (full column rank)
    _transform: Matrix  # k x k; coordinates wrt the adapted basis
    _kept: List[int]
    p: int
    ambient: int

    def coords(self, vectors: Matrix, ncols: int) -> Matrix:
        """Coordinates (module.ngens x ncols) of ambient columns lying in L."""
        c = solve_lattice(self._basis, vectors, self.p, self.ambient, ncols)
        if c is None:
            raise ValueError("vector not in lattice")
        y = matmul(self._transform, c, inner=len(self._transform))
        kept = [y[i] for i in self._kept]
        return reduce_matrix(kept, self.module, self.p) if kept else []


def lattice_basis(m: Matrix, p: int, rows: int, cols: int) -> Matrix:
    """Basis (as columns) of the Z_(p)-lattice spanned by the columns of m."""
    if cols == 0 or rows == 0:
        return zeros(rows, 0)
    s = smith_normal_form(m, p, rows, cols)
    out = zeros(rows, s.rank)
    for k, e in enumerate(s.exponents):
        d = p ** e
        for i in range(rows):
            out[i][k] = _simplify(s.Uinv[i][k] * d)
    return out


def solve_lattice(basis: Matrix, rhs: Matrix, p: int, rows: int, ncols: int) -> Optional[Matrix]:
    """Solve basis · C = rhs over Z_(p) for full-column-rank ``basis``; None if impossible."""
    k = len(basis[0]) if basis else 0
    if k == 0:
        if any(x != 0 for row in rhs for x in row):
            return None
        return []
    s = smith_normal_form(basis, p, rows, k)
    ur = matmul(s.U, rhs, inner=rows)
    for i in range(s.rank, rows):
        if any(x != 0 for x in ur[i]):
            return None
    y = []
    for i in range(k):
        d = p ** s.exponents[i]
        row = []
        for x in ur[i]:
            q = Fraction(x) / d
            if q.denominator % p == 0:
                return None
            row.append(_simplify(q))
        y.append(row)
    return matmul(s.V, y, inner=k)


def quotient(basis: Matrix, rels: Matrix, p: int, ambient: int, nrels: int) -> Subquotient:
    """The module span(basis) / span(rels), with rels inside span(basis)."""
    k = len(basis[0]) if ambient and basis else 0
    if k == 0:
        return Subquotient(Module(), zeros(ambient, 0), zeros(ambient, 0), [], [], p, ambient)
    if nrels:
        c = solve_lattice(basis, rels, p, ambient, nrels)
        if c is None:
            raise ValueError("relations do not lie in the lattice")
        s = smith_normal_form(c, p, k, nrels)
        transform, adapted_inv, exps = s.U, s.Uinv, s.exponents
    else:
        transform = adapted_inv = identity(k)
        exps = ()
    orders, kept = [], []
    for i in range(k):
        if i < len(exps):
            if exps[i] == 0:
                continue
            orders.append(exps[i])
        else:
            orders.append(0)
        kept.append(i)
    new_basis = matmul(basis, adapted_inv, inner=k)
    gens = [[row[i] for i in kept] for row in new_basis]
    return Subquotient(Module(tuple(orders)), gens, basis, transform, kept, p, ambient)


def kernel_lattice(mat: Matrix, source: Module, target: Module, p: int) -> Matrix:
    """Basis of {x in Z_(p)^a : mat·x = 0 in target} (columns)."""
    a, b = source.ngens, target.ngens
    if a == 0:
        return zeros(0, 0)
    if b == 0:
        return identity(a)
    rel = relation_matrix(target, p)
    big = hconcat([mat, rel], b)
    ncols = a + sum(1 for e in target.orders if e)
    s = smith_normal_form(big, p, b, ncols)
    kc = ncols - s.rank
    vecs = [[s.V[i][j] for j in range(s.rank, ncols)] for i in range(a)]
    return lattice_basis(vecs, p, a, kc)


def kernel(mat: Matrix, source: Module, target: Module, p: int) -> Subquotient:
    """Kernel of a map of normal-form modules, as a subquotient of the source."""
    a = source.ngens
    if a == 0:
        return quotient([], [], p, 0, 0)
    lat = kernel_lattice(mat, source, target, p)
    rel = relation_matrix(source, p)
    return quotient(lat, rel, p, a, sum(1 for e in source.orders if e))


def cokernel(mat: Matrix, source: Module, target: Module, p: int) -> Subquotient:
    """Cokernel target / im(mat); ``coords`` gives the projection from the target."""
    b = target.ngens
    if b == 0:
        return quotient([], [], p, 0, 0)
    rel = relation_matrix(target, p)
    big = hconcat([mat, rel], b)
    return quotient(identity(b), big, p, b, len(big[0]))


def homology_at(f: Matrix, g: Matrix, L: Module, M: Module, N: Module, p: int) -> Subquotient:
    """ker(g: M -> N) / im(f: L -> M) as a subquotient of M.

    Raises CompositeNonzero when g∘f is not zero in N.
    """
    if L.ngens and N.ngens and M.ngens:
        gf = matmul(g, f, inner=M.ngens)
        if not is_zero_map(gf, N, p):
            raise CompositeNonzero("g∘f is nonzero")
    a = M.ngens
    if a == 0:
        return quotient([], [], p, 0, 0)
    lat = kernel_lattice(g, M, N, p) if N.ngens else identity(a)
    rel = relation_matrix(M, p)
    rels = hconcat([f, rel] if L.ngens else [rel], a)
    return quotient(lat, rels, p, a, L.ngens + sum(1 for e in M.orders if e))


def solve(mat: Matrix, source: Module, target: Module, rhs: Matrix, ncols: int, p: int) -> Optional[Matrix]:
    """Some X with mat·X = rhs in the target module, or None."""
    a, b = source.ngens, target.ngens
    if b == 0:
        return zeros(a, ncols)
    rel = relation_matrix(target, p)
    big = hconcat([mat, rel], b)
    tot = len(big[0])
    if tot == 0:
        return zeros(a, ncols) if all(x == 0 for row in rhs for x in row) else None
    s = smith_normal_form(big, p, b, tot)
    ur = matmul(s.U, rhs, inner=b)
    for i in range(s.rank, b):
        if any(x != 0 for x in ur[i]):
            return None
    y = zeros(tot, ncols)
    for i in range(s.rank):
        d = p ** s.exponents[i]
        for j in range(ncols):
            q = Fraction(ur[i][j]) / d
            if q.denominator % p == 0:
                return None
            y[i][j] = _simplify(q)
    x = matmul(s.V, y, inner=tot)
    return reduce_matrix(x[:a], source, p)


def image_module(mat: Matrix, source: Module, target: Module, p: int) -> Module:
    """Isomorphism type of the image, as source / kernel."""
    k = kernel(mat, source, target, p)
    return cokernel(k.gens, k.module, source, p).module if source.ngens else Module()


# ---------------------------------------------------------------------------
# Graded objects
# ---------------------------------------------------------------------------

@dataclass
class GradedZpModule:
    """Per-degree normal-form modules with a support window ``[t_min, t_max]``.

    Degrees inside the window that are absent are zero; outside the window
    the module is unspecified.
    """

    degrees: Dict[int, Module] = field(default_factory=dict)
    window: Tuple[int, int] = (0, 0)

    def __getitem__(self, n: int) -> Module:
        return self.degrees.get(n, Module())

    def descriptor(self) -> Dict[int, Tuple[int, Tuple[int, ...]]]:
        return {n: m.descriptor() for n, m in sorted(self.degrees.items()) if not m.is_zero}


@dataclass
class GradedFpSpace:
    dims: Dict[int, int] = field(default_factory=dict)

    def __getitem__(self, n: int) -> int:
        return self.dims.get(n, 0)


@dataclass
class PresentedMap:
    """Per-degree matrix blocks between normal-form graded modules.

    ``degree`` is the shift: the block at n maps source[n] to target[n + degree].
    """

    source: GradedZpModule
    target: GradedZpModule
    blocks: Dict[int, Matrix]
    p: int
    degree: int = 0

    def block(self, n: int) -> Matrix:
        b = self.blocks.get(n)
        if b is None:
            return zeros(self.target[n + self.degree].ngens, self.source[n].ngens)
        return b

    def validate(self) -> None:
        for n, b in self.blocks.items():
            if not is_compatible(b, self.source[n], self.target[n + self.degree], self.p):
                raise ValueError(f"block at degree {n} is not torsion-compatible")

    def compose(self, other: "PresentedMap") -> "PresentedMap":
        """self ∘ other."""
        blocks = {}
        for n in other.blocks:
            mid = n + other.degree
            inner = other.target[mid].ngens
            blocks[n] = reduce_matrix(
                matmul(self.block(mid), other.block(n), inner=inner),
                self.target[mid + self.degree], self.p)
        return PresentedMap(other.source, self.target, blocks, self.p, self.degree + other.degree)


def graded_kernel(f: PresentedMap) -> Tuple[GradedZpModule, PresentedMap]:
    degs, incl = {}, {}
    for n, src in f.source.degrees.items():
        k = kernel(f.block(n), src, f.target[n + f.degree], f.p)
        if not k.module.is_zero:
            degs[n] = k.module
            incl[n] = k.gens
    km = GradedZpModule(degs, f.source.window)
    return km, PresentedMap(km, f.source, incl, f.p, 0)


def graded_homology(f: PresentedMap, g: PresentedMap) -> GradedZpModule:
    """Degreewise ker(g)/im(f); f is expected to have degree 0 into g's source."""
    out = {}
    for n, mid in g.source.degrees.items():
        src_deg = n - f.degree
        h = homology_at(f.block(src_deg), g.block(n), f.source[src_deg], mid,
                        g.target[n + g.degree], f.p)
        if not h.module.is_zero:
            out[n] = h.module
    return GradedZpModule(out, g.source.window)
