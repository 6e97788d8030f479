import json
import random

import pytest

from trunctilt.quiver import (
    DuplicateArrowName,
    ParseError,
    Quiver,
    UndeclaredVertex,
    classify_vertices,
    has_precyclic_source,
    parse_quiver,
)
from trunctilt.random_suite import random_quiver


def test_example91_classification(alg91):
    c = classify_vertices(alg91.quiver)
    assert c.cyclebound == c.precyclic == {2, 3}
    assert c.postcyclic == {2, 3, 4, 5, 6}
    assert not has_precyclic_source(alg91.quiver)


def test_q2_has_precyclic_source(alg92):
    c = alg92.classification
    assert c.precyclic == {1, 2, 3}
    assert c.precyclic_sources == {1}
    assert has_precyclic_source(alg92.quiver)


def test_acyclic():
    q = Quiver([1, 2, 3], [("a", 1, 2), ("b", 2, 3)])
    c = classify_vertices(q)
    assert not c.precyclic and not c.postcyclic
    assert not has_precyclic_source(q)


def _brute_precyclic(q):
    # v is on a cycle iff some path of length 1..n returns to v
    on_cycle = set()
    for v in q.vertices:
        for p in q.paths(start=v, min_len=1, max_len=q.n):
            if p.end == v:
                on_cycle.add(v)
                break
    pre = set()
    for v in q.vertices:
        if v in on_cycle or any(p.end in on_cycle for p in q.paths(start=v, min_len=1, max_len=q.n)):
            pre.add(v)
    return on_cycle, pre


@pytest.mark.parametrize("seed", range(25))
def test_classification_matches_bruteforce(seed):
    q = random_quiver(random.Random(seed), max_vertices=4, max_arrows=5)
    c = classify_vertices(q)
    cyc, pre = _brute_precyclic(q)
    assert c.cyclebound == cyc
    assert c.precyclic == pre
    assert c.cyclebound <= c.postcyclic
    for a in q.arrows:
        if a.target in c.precyclic:
            assert a.source in c.precyclic
        if a.source in c.postcyclic:
            assert a.target in c.postcyclic


def test_path_convention(alg91):
    q = alg91.quiver
    p = q.parse_path("b*a")
    assert (p.start, p.end, p.length) == (2, 2, 2)
    assert q.path_str(p) == "b*a"
    assert q.concat(q.parse_path("b"), q.parse_path("a")) == p
    assert q.concat(q.parse_path("a"), q.parse_path("c")) is None


def test_parse_errors():
    with pytest.raises(DuplicateArrowName, match="line 3"):
        parse_quiver("vertices: 1 2\narrow a: 1 -> 2\narrow a: 2 -> 1\n")
    with pytest.raises(UndeclaredVertex, match="column"):
        parse_quiver("vertices: 1 2\narrow a: 1 -> 7\n")
    with pytest.raises(ParseError) as exc:
        parse_quiver("vertices: 1\nnonsense\n")
    assert exc.value.line == 2


def test_structured_round_trip(alg91):
    q = alg91.quiver
    text = q.to_text(truncation=3)
    q2, t, _ = parse_quiver(text)
    assert q2 == q and t == 3
    data = dict(q.to_dict(), truncation=3)
    q3, t3, _ = parse_quiver(json.dumps(data))
    assert q3 == q and t3 == 3
    yaml_text = "vertices: [2, 3, 4, 5, 6]\ntruncation: 3\narrows:\n" + "".join(
        f"  - [{a.name}, {a.source}, {a.target}]\n" for a in q.arrows)
    q4, t4, _ = parse_quiver(yaml_text)
    assert q4 == q and t4 == 3


def test_paths_of_length_L_into_4(alg91):
    # the only length-2 path ending at 4 that starts at a precyclic vertex is c*b from 3
    ps = [p for p in alg91.basis if p.length == alg91.L and p.end == 4 and p.start in alg91.precyclic]
    assert [alg91.quiver.path_str(p) for p in ps] == ["c*b"]
