import random
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qadams import linalg as la
from qadams.linalg import Module


def det(m):
    m = [[Fraction(x) for x in row] for row in m]
    n, d = len(m), Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k]), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            d = -d
        d *= m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            m[i] = [a - f * b for a, b in zip(m[i], m[k])]
    return d


def minor_exponents(m, p):
    """Elementary divisor exponents from valuations of gcds of k x k minors."""
    r, c = len(m), len(m[0])
    out, prev = [], 0
    for k in range(1, min(r, c) + 1):
        vals = [la.valuation(x, p) for rows in combinations(range(r), k) for cols in combinations(range(c), k)
                if (x := det([[m[i][j] for j in cols] for i in rows]))]
        if not vals:
            break
        v = min(vals)
        out.append(v - prev)
        prev = v
    return tuple(out)


def test_rank_examples():
    assert la.rank_fp([[1, 1], [1, 1]], 2) == 1
    assert la.rank_fp(la.identity(3), 5) == 3


def test_rank_random_against_transpose():
    rng = np.random.default_rng(7)
    m = rng.integers(0, 3, size=(20, 30))
    r = la.rank_fp(m, 3)
    # a second elimination order: eliminate the transpose
    assert r == la.rank_fp(m.T.copy(), 3)
    null = 30 - r
    assert r + null == 30


def test_solve_fp_roundtrip():
    rng = np.random.default_rng(1)
    m = rng.integers(0, 5, size=(6, 8))
    x = rng.integers(0, 5, size=8)
    rhs = (m @ x) % 5
    y = la.solve_fp(m, rhs, 5)
    assert y is not None and np.array_equal((m @ y) % 5, rhs)


def test_snf_examples():
    assert la.smith_normal_form([[3]], 2).D == [[1]]
    assert la.smith_normal_form(la.identity(3), 5).D == la.identity(3)
    s = la.smith_normal_form([[2, 4], [6, 8]], 2)
    assert s.exponents == (1, 2)
    assert minor_exponents([[2, 4], [6, 8]], 2) == (1, 2)


def _check_snf(m, p):
    r, c = len(m), len(m[0])
    s = la.smith_normal_form(m, p)
    assert la.matmul(la.matmul(s.U, m), s.V) == s.D
    assert la.matmul(s.U, s.Uinv) == la.identity(r)
    assert la.matmul(s.V, s.Vinv) == la.identity(c)
    for M in (s.U, s.V, s.Uinv, s.Vinv):
        assert all(la.valuation(x, p) >= 0 for row in M for x in row if x)
    for i in range(r):
        for j in range(c):
            if i != j:
                assert s.D[i][j] == 0
    assert [s.D[i][i] for i in range(s.rank)] == [p ** e for e in s.exponents]
    assert list(s.exponents) == sorted(s.exponents)
    assert s.exponents == minor_exponents(m, p)


matrices = st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(
    lambda c: st.lists(st.lists(st.integers(-30, 30), min_size=c, max_size=c), min_size=r, max_size=r)))


@pytest.mark.parametrize("p", [2, 3, 5])
@settings(max_examples=1000, deadline=None, derandomize=True)
@given(m=matrices)
def test_snf_invariants(p, m):
    _check_snf(m, p)


def test_snf_rejects_nonlocal():
    with pytest.raises(ValueError):
        la.smith_normal_form([[Fraction(1, 2)]], 2)


def test_homology_examples():
    Z = Module.free(1)
    assert la.homology_at([[0]], [[0]], Z, Z, Z, 2).module.is_zero is False
    h = la.homology_at([[3]], [], Z, Z, Module(), 3)
    assert h.module == Module((1,))
    h = la.homology_at([[3, 0], [0, 1]], [], Module.free(2), Module.free(2), Module(), 3)
    assert h.module == Module((1,))


def test_kernel_examples():
    Z = Module.free(1)
    assert la.kernel([[2]], Z, Z, 2).module.is_zero
    k = la.kernel([[2]], Module((2,)), Module((2,)), 2)
    assert k.module == Module((1,))
    assert la.valuation(k.gens[0][0], 2) == 1
    k = la.kernel([[1, 1]], Module.free(2), Z, 5)
    assert k.module == Z
    col = [row[0] for row in k.gens]
    assert col[0] == -col[1] and la.valuation(col[0], 5) == 0


def test_cokernel_torsion():
    c = la.cokernel([[4, 0], [0, 6]], Module.free(2), Module.free(2), 2)
    assert c.module == Module((1, 2))


def test_module_descriptor():
    m = Module.free(1) + Module((2, 1))
    assert m.free_rank == 1 and sorted(m.torsion) == [1, 2]
    assert m.length() == 3
