import random

import pytest

from trunctilt.endo import (
    check_projective_duals,
    corollary_submodules,
    dualize_left,
    dualize_right,
    endomorphism_algebra,
    k_matrix,
    round_trip_ok,
    separation_U,
    separation_table,
    tilted_report,
)
from trunctilt.fdalgebra import fd_find_isomorphism, fd_pdim
from trunctilt.homological import finite_pdim_test
from trunctilt.modules import find_isomorphism, hom_dim, projective, simple
from trunctilt.random_suite import random_finpd_module
from trunctilt.tilting import StrongTiltingModule, TiltingError
from collections import Counter


def _arrows(q):
    return Counter((a.source, a.target) for a in q.arrows)


def test_dimension_is_sum_of_homs(bundle91, st91):
    total = sum(hom_dim(st91.summands[i], st91.summands[j]) for i in st91.vertices for j in st91.vertices)
    assert bundle91.E.dim == total == 31


def test_projective_dims(bundle91):
    assert {v: bundle91.projective(v).dim for v in bundle91.vertices} == {2: 5, 3: 5, 4: 6, 5: 7, 6: 8}


def test_quiver_example91(bundle91):
    q = bundle91.quiver().quiver
    assert _arrows(q) == Counter({(2, 3): 1, (3, 5): 1, (4, 3): 1, (5, 4): 1, (5, 2): 1,
                                  (2, 6): 1, (6, 2): 1, (6, 5): 1})
    assert len(bundle91.quiver().relations) == 7


def test_relations_reproduce_algebra(bundle91):
    from trunctilt.fdalgebra import algebra_from_quiver_relations

    qwr = bundle91.quiver()
    A = algebra_from_quiver_relations(qwr.quiver, qwr.relations, bundle91.E.field, qwr.N + 1)
    assert [e.rank for e in A.radical_powers()] == [e.rank for e in bundle91.E.radical_powers()]


def test_regular_module_gives_opposite(alg91):
    st = StrongTiltingModule(alg91, {v: projective(alg91, v) for v in alg91.vertices},
                             {v: "P" for v in alg91.vertices})
    b = endomorphism_algebra(st)
    assert b.E.dim == alg91.dim
    assert _arrows(b.quiver().quiver) == _arrows(alg91.quiver.opposite())


def test_example92_quiver(bundle92):
    q = bundle92.quiver().quiver
    arr = _arrows(q)
    assert arr[(4, 1)] == 2
    assert arr[(5, 4)] == 1
    assert sum(arr.values()) == 11
    assert bundle92.E.loewy_length() == 7
    assert fd_find_isomorphism(bundle92.simple(1), bundle92.projective(1)) is not None


def test_projective_duals(bundle91, bundle92):
    assert all(check_projective_duals(bundle91).values())
    assert all(check_projective_duals(bundle92).values())


@pytest.mark.parametrize("kind", ["T", "S", "P"])
def test_round_trip_standard(bundle91, alg91, kind):
    for v in alg91.vertices:
        if kind == "T":
            M = bundle91.st.summands[v]
        elif kind == "S":
            if v in alg91.precyclic:
                continue
            M = simple(alg91, v)
        else:
            M = projective(alg91, v)
        assert round_trip_ok(bundle91, M)


def test_round_trip_random_members(bundle91, alg91):
    rng = random.Random(31)
    count = 0
    for _ in range(50):
        M = random_finpd_module(alg91, rng)
        assert finite_pdim_test(M)[0]
        assert round_trip_ok(bundle91, M)
        count += 1
    assert count == 50


def test_hom_into_T_two_ways(bundle91, alg91):
    rng = random.Random(5)
    T = bundle91.st.module()
    for _ in range(10):
        M = random_finpd_module(alg91, rng)
        direct = hom_dim(M, T)
        parts = sum(hom_dim(M, bundle91.st.summands[v]) for v in alg91.vertices)
        D, _ = dualize_left(bundle91, M)
        assert direct == parts == D.dim


def test_composition_length_bridge(bundle91, alg91):
    rng = random.Random(8)
    for _ in range(20):
        M = random_finpd_module(alg91, rng)
        D, _ = dualize_left(bundle91, M)
        _, Q = separation_U(bundle91, D)
        epsM = sum(n for v, n in M.dim_vector().items() if v in alg91.nonprecyclic)
        assert Q.dim == epsM


def test_dualize_right_of_projective(bundle91):
    for v in bundle91.vertices:
        M, _ = dualize_right(bundle91, bundle91.projective(v))
        assert find_isomorphism(M, bundle91.st.summands[v]) is not None


def test_separation(bundle91):
    rows = {r["vertex"]: r for r in separation_table(bundle91)}
    assert rows[4]["k"] == {3: 1} and rows[4]["quotient_layering"] == [[4]]
    assert rows[5]["k"] == {2: 1} and rows[5]["quotient_layering"] == [[5], [4]]
    assert rows[6]["k"] == {2: 1} and rows[6]["quotient_layering"] == [[6], [5], [4]]
    assert rows[2]["U_is_whole"] and rows[3]["U_is_whole"]
    assert k_matrix(bundle91) == {(4, 3): 1, (5, 2): 1, (6, 2): 1}


def test_radical_nonzero_at_precyclic(bundle91):
    for i in bundle91.precyclic:
        assert bundle91.projective(i).dim > 1


def test_report_example91(bundle91):
    rep = tilted_report(bundle91)
    assert rep["chain_equal"]
    assert rep["pdim_T_left"] == rep["lfindim"] == rep["max_pdim_simple"] == 2
    assert rep["pdim_T_right"] == "2"


def test_report_example92_notes_restriction(bundle92):
    rep = tilted_report(bundle92)
    assert not rep["no_precyclic_source"]
    assert "note" in rep


def test_precyclic_projectives_have_no_finite_submodules(bundle91):
    res = corollary_submodules(bundle91)
    assert res["2_all_infinite"] and res["3_all_infinite"]


def test_right_simple_pdims(bundle91):
    assert {j: fd_pdim(bundle91.simple(j)).value for j in bundle91.eps_vertices} == {4: 1, 5: 2, 6: 2}
