"""Shared generators for random representations and couples."""
import random

import pytest

from qadams import linalg as la
from qadams.couples import couple_from_integral_homology, integral_preset, morava_preset
from qadams.linalg import GradedZpModule, Module
from qadams.quiver import RepMap, cokernel, hom, kernel, representable


def random_homology(rng: random.Random, p: int) -> GradedZpModule:
    degs = {}
    for n in range(rng.randint(0, 2), rng.randint(2, 4)):
        orders = tuple(sorted(rng.choice([0, 0, 1, 2]) for _ in range(rng.randint(0, 2))))
        if orders:
            degs[n] = Module(orders)
    w = (min(degs), max(degs)) if degs else (0, 0)
    return GradedZpModule(degs, w)


def random_map(rng: random.Random, X, Y, degree=0):
    hg = hom(X, Y, degree)
    blocks = {}
    for f in hg.maps:
        c = rng.randint(-2, 2)
        if not c:
            continue
        for key, b in f.blocks.items():
            acc = blocks.setdefault(key, la.zeros(len(b), len(b[0]) if b else 0))
            for r, row in enumerate(b):
                for j, x in enumerate(row):
                    acc[r][j] += c * x
    return RepMap(X, Y, blocks, degree)


def random_free(rng: random.Random, preset, lo=-1, hi=2):
    nodes = list(preset.nodes)
    rep = None
    for _ in range(rng.randint(1, 2)):
        r = representable(preset, rng.choice(nodes), rng.randint(lo, hi))
        rep = r if rep is None else rep.direct_sum(r)
    return rep


def random_rep(rng: random.Random, preset):
    """Representables, sums, shifts and (co)kernels of random maps between them."""
    kind = rng.random()
    if preset.name.startswith("integral") and kind < 0.3:
        return couple_from_integral_homology(random_homology(rng, preset.p), preset.p).rep
    X = random_free(rng, preset)
    if kind < 0.5:
        return X.shift(rng.randint(-1, 1))
    Y = random_free(rng, preset)
    f = random_map(rng, X, Y)
    if kind < 0.75:
        return cokernel(f)[0]
    return kernel(f)[0]


@pytest.fixture(params=["integral", "morava"])
def preset(request):
    if request.param == "integral":
        return integral_preset(2)
    return morava_preset(2, 1, kmax=2)
