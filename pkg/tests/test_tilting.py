import random

import pytest

from trunctilt.algebra import TruncatedAlgebra
from trunctilt.graphs import module_graph
from trunctilt.homological import INF
from trunctilt.modules import direct_sum, find_isomorphism, injective_envelope_simple, projective, simple
from trunctilt.quiver import Quiver
from trunctilt.random_suite import random_algebra, strongness_case
from trunctilt.tilting import (
    StrongTiltingModule,
    TiltingError,
    build_B,
    injective_cogenerator,
    is_strong_right,
    preorder_leq,
    standard_module,
    stratification_report,
    strong_tilting,
    sum_of_B_precyclic,
    verify_tilting,
    verify_tilting_candidate,
)


def test_example91_summands(st91):
    assert st91.dims() == {2: 3, 3: 3, 4: 4, 5: 5, 6: 6}
    assert st91.kinds == {2: "A", 3: "A", 4: "B", 5: "B", 6: "B"}
    assert st91.pdim.value == 2
    assert st91.checks["trees"]


def test_example91_verify(st91):
    rep = verify_tilting(st91)
    assert rep["ext"] == [0, 0]
    assert rep["coresolution_length"] <= 2


def test_lambda1(lam1):
    st = strong_tilting(lam1)
    assert [st.summands[v].dim for v in lam1.vertices] == [2, 2, 2, 2, 9]
    g = module_graph(st.summands[5])
    assert g.layer_sizes()[:2] == [4, 5]
    assert st.summands[5].socle_vector()[5] == 1
    _, ap = build_B(lam1, 5)
    assert ap.eps_C_dim == 3
    assert ap.B.dim + ap.eps_C_dim == 12


def test_lambda2_sum_of_B(alg92):
    assert sum_of_B_precyclic(alg92) == {1: 3, 2: 1, 3: 1}


def test_acyclic_gives_injective_cogenerator():
    q = Quiver([1, 2, 3], [("a", 1, 2), ("b", 2, 3), ("c", 1, 3)])
    alg = TruncatedAlgebra(q, 3)
    st = strong_tilting(alg)
    assert find_isomorphism(st.module(), injective_cogenerator(alg)) is not None
    verify_tilting(st)


def test_regular_module_is_tilting(alg91):
    cand = {v: projective(alg91, v) for v in alg91.vertices}
    rep = verify_tilting_candidate(alg91, cand)
    assert rep["ok"] and rep["pdim"] == 0


def test_non_rigid_candidate_fails(alg91):
    cand = {v: projective(alg91, v) for v in alg91.vertices}
    cand["x"] = simple(alg91, 2)
    rep = verify_tilting_candidate(alg91, cand)
    assert not rep["ok"] and "infinite" in rep["reason"]


@pytest.mark.parametrize("seed", range(5))
def test_random_tilting(seed):
    alg = random_algebra(random.Random(100 + seed))
    verify_tilting(strong_tilting(alg))


def test_strongness_examples(st91, alg92):
    assert is_strong_right(st91)[0] is True
    val, cert = is_strong_right(strong_tilting(alg92, verify=False))
    assert val is False and not cert["no_precyclic_source"]


def test_strongness_random():
    rng = random.Random(9)
    for _ in range(15):
        val, no_src = strongness_case(random_algebra(rng))
        assert val == no_src


def test_stratification(alg91):
    rep = stratification_report(alg91)
    assert all(r["agree"] is not False for r in rep["rows"])
    assert preorder_leq(alg91, 2, 6) and preorder_leq(alg91, 4, 6) and not preorder_leq(alg91, 6, 4)
    assert standard_module(alg91, 4).dim == 1


def test_stratification_acyclic_is_path_order():
    q = Quiver([1, 2], [("a", 1, 2)])
    alg = TruncatedAlgebra(q, 2)
    assert preorder_leq(alg, 1, 2) and not preorder_leq(alg, 2, 1)
    # S_2 is not below S_1, so Delta_1 = S_1
    assert standard_module(alg, 1).dim == 1
