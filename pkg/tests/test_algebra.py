import itertools
import random

import pytest

from trunctilt.algebra import AlgebraError, TruncatedAlgebra
from trunctilt.fields import QQ, field_from_spec
from trunctilt.quiver import Quiver
from trunctilt.random_suite import random_algebra


def test_dimension_example91(alg91):
    # 5 trivial paths, 6 arrows, 6 composable pairs
    assert alg91.dim == 17
    assert alg91.L == 2
    assert sum(1 for p in alg91.basis if p.length == 2) == 6


def test_bad_truncation():
    with pytest.raises(AlgebraError):
        TruncatedAlgebra(Quiver([1], []), 0)


def test_unit_and_idempotents(alg91):
    one = alg91.unit()
    rng = random.Random(1)
    for _ in range(10):
        x = {k: QQ(rng.randint(-3, 3)) for k in rng.sample(range(alg91.dim), 4)}
        x = {k: c for k, c in x.items() if c}
        assert alg91.multiply(one, x) == x == alg91.multiply(x, one)
    eps = alg91.epsilon()
    assert alg91.multiply(eps, eps) == eps
    ome = alg91.one_minus_epsilon()
    assert alg91.multiply(eps, ome) == {}


def test_one_minus_eps_lambda_eps_vanishes(alg91):
    # no basis path starts non-precyclic and ends precyclic
    for p in alg91.basis:
        assert not (p.start in alg91.nonprecyclic and p.end in alg91.precyclic)
    prod = alg91.multiply(alg91.multiply(alg91.one_minus_epsilon(), {k: QQ(1) for k in range(alg91.dim)}),
                          alg91.epsilon())
    assert prod == {}


def test_after_convention(alg91):
    q = alg91.quiver
    a, b = q.parse_path("a"), q.parse_path("b")
    ba = alg91.path_product(b, a)
    assert ba == q.parse_path("b*a")
    # b*a*b has length 3 = t and vanishes
    assert alg91.path_product(ba, b) is None


@pytest.mark.parametrize("seed", range(8))
def test_associativity_random(seed):
    rng = random.Random(seed)
    alg = random_algebra(rng, max_dim=30)
    n = alg.dim
    basis = [{k: QQ(1)} for k in range(n)]
    triples = list(itertools.product(range(n), repeat=3))
    for i, j, k in rng.sample(triples, min(300, len(triples))):
        x, y, z = basis[i], basis[j], basis[k]
        assert alg.multiply(alg.multiply(x, y), z) == alg.multiply(x, alg.multiply(y, z))


def test_radical_power_vanishes():
    q = Quiver([1], [("x", 1, 1)])
    alg = TruncatedAlgebra(q, 4)
    x = {alg.index[q.parse_path("x")]: QQ(1)}
    p = x
    for _ in range(3):
        p = alg.multiply(p, x)
    assert p == {}
    assert alg.dim == 4


def test_prime_field():
    F = field_from_spec("zp:5")
    alg = TruncatedAlgebra(Quiver([1, 2], [("a", 1, 2)]), 2, F)
    x = {alg.index[alg.quiver.parse_path("a")]: F(3)}
    assert alg.multiply({0: F(2)}, {0: F(3)}) == {0: F(1)}
    assert alg.element_str(x) == "3*a"
