import itertools
from math import comb

import pytest

from qadams.errors import CostGuard, EvennessViolated, UnsupportedPrime
from qadams.linalg import GradedFpSpace
from qadams.monomials import monomials
from qadams.steenrod import (MinimalResolution, bp_comparison_map, bp_ext_a, bp_ext_a0, cobar_ext_oracle,
                             ext_exterior, exterior_cobar_dims, milnor_product, minimal_resolution)
from qadams.steenrod import milnor


def brute_product(r, s):
    """Milnor's formula by enumerating every matrix with the right row and column sums."""
    r, s = list(r), list(s)
    n = len(r) + len(s) + 1
    out = {}

    def rows(i, acc):
        if i > len(r):
            yield acc
            return
        # row i: x_{i0} + sum_j 2^j x_{ij} = r_i
        target = r[i - 1]
        for xs in itertools.product(*[range(target // 2 ** j + 1) for j in range(1, len(s) + 1)]):
            rest = target - sum(2 ** (j + 1) * x for j, x in enumerate(xs))
            if rest >= 0:
                yield from rows(i + 1, acc + [[rest] + list(xs)])

    for body in rows(1, []):
        first = []
        ok = True
        for j in range(1, len(s) + 1):
            x0 = s[j - 1] - sum(row[j] for row in body)
            if x0 < 0:
                ok = False
                break
            first.append(x0)
        if not ok:
            continue
        M = [[0] + first] + body
        coef = 1
        res = []
        for d in range(1, n):
            diag = [M[i][d - i] for i in range(d + 1) if i < len(M) and d - i < len(M[0])]
            tot, c = 0, 1
            for x in diag:
                c *= comb(tot + x, x)
                tot += x
            coef = coef * (c % 2) % 2
            res.append(tot)
        if coef:
            key = milnor.trim(res)
            out[key] = (out.get(key, 0) + 1) % 2
    return {k for k, v in out.items() if v}


def test_milnor_small():
    assert milnor_product((1,), (1,)) == {} or not milnor_product((1,), (1,))
    assert set(milnor_product((2,), (2,))) == {(1, 1)}
    assert set(milnor_product((), (3, 1))) == {(3, 1)}


def test_milnor_against_brute_force():
    for da in range(1, 9):
        for db in range(1, 9):
            for a in milnor.basis(da):
                for b in milnor.basis(db):
                    assert set(milnor_product(a, b)) == brute_product(a, b), (a, b)


def test_milnor_associative():
    elems = [b for d in range(1, 7) for b in milnor.basis(d)]
    for a, b, c in itertools.product(elems[:6], repeat=3):
        left = milnor.multiply(milnor.multiply([a], [b]), [c])
        right = milnor.multiply([a], milnor.multiply([b], [c]))
        assert left == right


def test_milnor_odd_prime_unsupported():
    with pytest.raises(UnsupportedPrime):
        milnor_product((1,), (1,), p=3)


def test_minimal_resolution_basics():
    res = minimal_resolution(2, 6, 16)
    ch = res.chart()
    assert ch[(0, 0)].ngens == 1
    assert all(ch[(0, t)].is_zero for t in range(1, 17))
    h = {t for t in range(1, 17) if not ch[(1, t)].is_zero}
    assert h == {1, 2, 4, 8, 16}
    for s in range(7):
        assert ch[(s, s)].ngens == 1
        assert all(ch[(s, t)].is_zero for t in range(s))
    assert res.check_d_squared() and res.is_minimal() and res.check_exact()


def test_minimal_resolution_json_roundtrip():
    res = minimal_resolution(2, 4, 10)
    back = MinimalResolution.from_json(res.to_json())
    assert back.chart().to_json() == res.chart().to_json()


def test_cobar_values():
    ch = cobar_ext_oracle(2, 8)
    assert ch[(0, 0)].ngens == 1
    assert ch[(2, 4)].ngens == 1
    assert ch[(1, 3)].is_zero


def test_cobar_cost_guard():
    with pytest.raises(CostGuard):
        cobar_ext_oracle(2, 20)


def test_cobar_matches_resolution_small():
    res = minimal_resolution(2, 8, 8).chart()
    cob = cobar_ext_oracle(2, 8, 8)
    for s in range(9):
        for t in range(9):
            assert res[(s, t)].ngens == cob[(s, t)].ngens


@pytest.mark.parametrize("p", [2, 3, 5])
def test_exterior_a0(p):
    ch = ext_exterior(p, [1], GradedFpSpace({0: 1}), 40, 40)
    for s in range(41):
        for t in range(41):
            assert ch.dim(s, t) == (1 if s == t else 0)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_exterior_against_koszul_oracle(p):
    dims = exterior_cobar_dims(p, [1], 12, 12)
    ch = ext_exterior(p, [1], GradedFpSpace({0: 1}), 12, 12)
    for (s, t), d in dims.items():
        assert ch.dim(s, t) == d


def test_exterior_two_generators_against_oracle():
    dims = exterior_cobar_dims(3, [1, 5], 12, 6)
    ch = ext_exterior(3, [1, 5], GradedFpSpace({0: 1}), 6, 12)
    for (s, t), d in dims.items():
        assert ch.dim(s, t) == d


def test_exterior_bp_coefficients():
    ch = bp_ext_a0(2, 6, 6)
    for s in range(7):
        for t in range(7):
            assert ch.dim(s, t) == len(monomials(2, t - s))


def test_exterior_empty_generators():
    ch = ext_exterior(2, [], GradedFpSpace({0: 1, 4: 2}), 3, 6)
    assert ch.dim(0, 4) == 2 and ch.dim(1, 5) == 0


def test_exterior_parity_guard():
    with pytest.raises(EvennessViolated):
        ext_exterior(2, [2], GradedFpSpace({0: 1}), 3, 6)
    with pytest.raises(EvennessViolated):
        ext_exterior(2, [1], GradedFpSpace({0: 1, 1: 1}), 3, 6)


@pytest.mark.parametrize("p", [2, 3])
def test_bp_comparison(p):
    top = 2 * p ** 3
    src, tgt, cm = bp_comparison_map(p, top, top)
    cm.validate()
    from qadams.linalg import rank_fp
    for s in range(top + 1):
        for t in range(top + 1):
            n = src.dim(s, t)
            if n:
                assert rank_fp(cm.matrix(s, t), p) == n
    # v0^s -> v0^s
    assert cm.matrix(3, 3) == [[1]]
    # v1 v2 -> v0^2 t1 t2
    s, t = 2, (2 * p - 1) + (2 * p * p - 1)
    j = src.labels(s, t).index("v1*v2")
    col = [row[j] for row in cm.matrix(s, t)]
    hits = [tgt.labels(s, t)[i] for i, x in enumerate(col) if x]
    assert hits == ["v0^2*t1*t2"]
