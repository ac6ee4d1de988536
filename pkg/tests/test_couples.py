import random

import pytest

from conftest import random_homology
from qadams import linalg as la
from qadams.couples import (Couple, MoravaCouple, bockstein_les_exact, bp_couple, couple_from_integral_homology,
                            moore_couple, moore_maps, moore_resolution_check, morava_preset, sphere_couple,
                            vn_degree)
from qadams.errors import ExactnessFailure, RepresentationError, WindowInsufficient
from qadams.linalg import GradedZpModule, Module
from qadams.quiver import certified_t_min, ext, ext_from_resolution, representable, resolve


def test_sphere_couple():
    S = sphere_couple(3)
    S.check()
    assert S.rep.descriptor() == {"Z": {0: (1, ())}, "F": {0: (0, (1,))}}
    assert S.pi(0) == [[1]]
    assert S.rep.value("Z", -1).is_zero  # δ = 0


@pytest.mark.parametrize("p,k", [(2, 1), (2, 3), (3, 2), (5, 4)])
def test_moore_couple(p, k):
    M = moore_couple(p, k)
    M.check()
    assert M.A.degrees == {0: Module((k,))}
    assert M.V.dims == {0: 1, 1: 1}
    d = M.delta(1)[0][0]
    assert la.valuation(d, p) == k - 1
    assert bockstein_les_exact(M)


def test_zero_homology():
    c = couple_from_integral_homology(GradedZpModule({}, (0, 0)), 2)
    assert c.rep.is_zero


def test_bp_couple_ranks():
    A = bp_couple(2, 6).A
    assert {n: A[n].free_rank for n in (0, 2, 4, 6)} == {0: 1, 2: 1, 4: 1, 6: 2}
    assert all(A[n].is_zero for n in (1, 3, 5))


def test_random_couples_satisfy_bockstein_les():
    rng = random.Random(4)
    for p in (2, 3, 5):
        for _ in range(30):
            c = couple_from_integral_homology(random_homology(rng, p), p)
            c.check()
            assert bockstein_les_exact(c)


def test_delta_pi_violation_detected():
    P = sphere_couple(2).rep.preset
    bad = Couple.from_data(2, {0: Module.free(1), -1: Module.free(1)}, {0: 1}, {0: [[1]]}, {0: [[1]]})
    with pytest.raises(RepresentationError):
        bad.check()


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_moore_resolution(p, k):
    r = moore_resolution_check(p, k)
    assert r.ok and len(r.checked) == 3


@pytest.mark.parametrize("p", [2, 3, 5])
def test_moore_scaled_matrix_fails(p):
    f, _ = moore_maps(p, 3)
    with pytest.raises(ExactnessFailure):
        moore_resolution_check(p, 3, f_int=[[p * f[0][0]], f[1]])


@pytest.mark.parametrize("p", [3, 5])
def test_moore_sign_flip_fails_at_odd_p(p):
    f, _ = moore_maps(p, 4)
    with pytest.raises(ExactnessFailure):
        moore_resolution_check(p, 4, f_int=[[-f[0][0]], f[1]])


def test_moore_sign_flip_harmless_at_two():
    # -2^(k-1) and 2^(k-1) differ by 2^k, which is zero in Z/2^k
    f, _ = moore_maps(2, 4)
    assert moore_resolution_check(2, 4, f_int=[[-f[0][0]], f[1]]).ok


# -- Morava preset ---------------------------------------------------------

@pytest.mark.parametrize("p,n", [(2, 1), (3, 1), (2, 2)])
def test_morava_delta_degree(p, n):
    P = morava_preset(p, n)
    assert P.arrow("delta").degree == -(2 * p ** n - 1)
    assert P.arrow("v1").degree == vn_degree(p, n)


@pytest.mark.parametrize("p,n", [(2, 1), (3, 1), (2, 2)])
def test_morava_relations_on_representables(p, n):
    P = morava_preset(p, n)
    for node in P.nodes:
        X = representable(P, node, 0)
        X.validate()
        for b, a in P.relations:
            A = P.arrow(a)
            for d in X.degrees(A.source):
                mid = X.value(A.target, d + A.degree).ngens
                comp = la.matmul(X.act(b, d + A.degree), X.act(a, d), inner=mid,
                                 cols=X.value(A.source, d).ngens)
                assert la.is_zero_map(comp, X.value(P.arrow(b).target, d + A.degree + P.arrow(b).degree), p)


@pytest.mark.parametrize("p,n", [(2, 1), (3, 1), (2, 2)])
def test_morava_representable_ext(p, n):
    P = morava_preset(p, n, kmax=8)
    q = vn_degree(p, n)
    X = representable(P, "K", 0)
    Y = representable(P, "F", 0).direct_sum(X.shift(q))
    res = resolve(X, 3)
    lo = certified_t_min(res, Y)
    assert lo < max(Y.support())
    ch = ext_from_resolution(res, Y, 2, (lo, max(Y.support())))
    nonzero = {k for k, e in ch.entries.items() if not e.is_zero}
    assert nonzero and all(s == 0 for s, _ in nonzero)
    for t in range(lo, max(Y.support()) + 1):
        assert (ch[(0, t)].free_rank, ch[(0, t)].torsion) == Y.value("K", t).descriptor()


def test_morava_window_guard():
    P = morava_preset(2, 1, kmax=2)
    X = representable(P, "K", 0)
    with pytest.raises(WindowInsufficient):
        ext(X, X, 2, (-20, 6))


def test_morava_couple_from_data():
    q = vn_degree(2, 1)
    c = MoravaCouple.from_data(2, 1, {0: 1, q: 1}, {0: 1}, {0: [[1]]}, {}, {}, kmax=2)
    c.check()
    assert c.rep.act("v1", 0) == [[1]]
