"""Seeded random quivers, truncated algebras and modules, and the property checks run on them."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .algebra import TruncatedAlgebra
from .fields import QQ
from .homological import (
    INF,
    compute_skeleton,
    finite_pdim_test,
    min_finpd_approx,
    pdim,
    pdim_by_resolution,
    syzygy_explicit,
    syzygy_type,
    interval_sum,
)
from .linalg import Echelon, compose
from .modules import (
    Module,
    Presentation,
    build_A,
    eps_truncate,
    find_isomorphism,
    hom_space,
    identity_map,
    simple,
    _flatten,
)
from .quiver import Quiver, has_precyclic_source


def random_quiver(rng: random.Random, max_vertices: int = 5, max_arrows: int = 8,
                  loops: bool = True) -> Quiver:
    n = rng.randint(2, max_vertices)
    vs = list(range(1, n + 1))
    m = rng.randint(1, max_arrows)
    arrows = []
    for k in range(m):
        s = rng.choice(vs)
        t = rng.choice(vs)
        if s == t and not loops:
            continue
        arrows.append((f"a{k + 1}", s, t))
    return Quiver(vs, arrows)


def random_algebra(rng: random.Random, max_dim: int = 60, max_L: int = 3, field=QQ,
                   **kw) -> TruncatedAlgebra:
    """Random truncated algebra with L <= max_L and bounded dimension."""
    while True:
        q = random_quiver(rng, **kw)
        t = rng.randint(2, max_L + 1)
        alg = TruncatedAlgebra(q, t, field)
        if alg.dim <= max_dim:
            return alg


def random_module(alg: TruncatedAlgebra, rng: random.Random, max_dim: int = 20,
                  max_slots: int = 3, tries: int = 50) -> Module:
    """Random finitely presented module P/C with C generated by random elements of JP.

    Each relation is a combination of up to three paths of positive length,
    possibly from different slots, all ending at one vertex.
    """
    F = alg.field
    fallback = None
    for _ in range(tries):
        slots = [rng.choice(alg.vertices) for _ in range(rng.randint(1, max_slots))]
        terms = [(r, p) for r, v in enumerate(slots) for p in alg.paths_from[v] if p.length >= 1]
        rels = []
        if terms:
            for _ in range(rng.randint(1, 2 * len(slots) + 1)):
                end = rng.choice(terms)[1].end
                same = [rp for rp in terms if rp[1].end == end]
                pick = rng.sample(same, min(len(same), rng.randint(1, 3)))
                rels.append({rp: F(rng.choice([1, -1, 2, 3])) for rp in pick})
        M = Presentation(alg, slots, rels).to_module("X")
        if 0 < M.dim <= max_dim:
            if M.dim >= 3 or rng.random() < 0.2:
                return M
            fallback = fallback or M
    return fallback or simple(alg, rng.choice(alg.vertices))


@dataclass
class SuiteCase:
    seed: int
    alg: TruncatedAlgebra
    M: Module


def module_suite(seed: int = 0, count: int = 100, **kw) -> list[SuiteCase]:
    rng = random.Random(seed)
    out = []
    for k in range(count):
        alg = random_algebra(rng, **kw)
        out.append(SuiteCase(seed * 100003 + k, alg, random_module(alg, rng)))
    return out


# --------------------------------------------------------------- checks

def check_syzygy_oracle(M: Module, orders: int = 3, seed: int = 0) -> dict:
    """Explicit kernel vs predicted interval types, plus order independence of the type."""
    pred = syzygy_type(M)
    types = [syzygy_type(M, random.Random(seed + k)) for k in range(orders)]
    Om, _, _ = syzygy_explicit(M)
    S = interval_sum(M.alg, pred)
    if Om.dim == 0 or S.dim == 0:
        iso = Om.dim == S.dim
    else:
        iso = find_isomorphism(S, Om) is not None
    return {"iso": iso, "stable": all(t == pred for t in types), "type": pred}


def check_pdim_consistency(M: Module) -> dict:
    p = pdim(M)
    fin, _ = finite_pdim_test(M)
    out = {"pdim": p.value, "test": fin, "agree": fin == (p.value != INF)}
    if p.value != INF:
        r = pdim_by_resolution(M)
        out["resolution"] = r.value
        out["agree"] = out["agree"] and r.value == p.value and not r.exceeds_bound
    return out


def check_simple_pdims(alg: TruncatedAlgebra) -> bool:
    return all((pdim(simple(alg, v)).value == INF) == (v in alg.precyclic) for v in alg.vertices)


def random_finpd_module(alg: TruncatedAlgebra, rng: random.Random, tries: int = 30) -> Module:
    """A random module of finite projective dimension (eps-part or filtered random module)."""
    for _ in range(tries):
        X = random_module(alg, rng, max_dim=16)
        if finite_pdim_test(X)[0]:
            return X
        ap = min_finpd_approx(X)
        if ap.B.dim and ap.B.dim <= 24:
            return ap.B
    return build_A(alg, rng.choice(alg.vertices))


def factors_through(X: Module, ap) -> bool:
    """Every map X -> M factors through phi: B -> M."""
    HM = hom_space(X, ap.target)
    if not HM:
        return True
    E = Echelon(X.field)
    for g in hom_space(X, ap.B):
        fg = compose(ap.phi, g)
        if fg:
            E.add(_flatten(fg, ap.target.dim))
    return all(E.contains(_flatten(f, ap.target.dim)) for f in HM)


def is_right_minimal(ap) -> bool:
    """No nonzero summand of B in ker phi: {h in End B : phi h = 0} is a nilpotent right ideal."""
    B = ap.B
    F = B.field
    H = []
    for h in hom_space(B, B):
        H.append(h)
    # solve phi o h = 0 on the span of End(B)
    from .linalg import kernel

    cols = [_flatten(compose(ap.phi, h), ap.target.dim) for h in H]
    ideal = []
    for rel in kernel(F, cols):
        h = {}
        for i, c in rel.items():
            for k, col in H[i].items():
                acc = h.setdefault(k, {})
                for j, x in col.items():
                    acc[j] = acc.get(j, F.zero) + c * x
        h = {k: {j: x for j, x in col.items() if x != 0} for k, col in h.items()}
        h = {k: col for k, col in h.items() if col}
        if h:
            ideal.append(h)
    cur = ideal
    for _ in range(B.dim + 1):
        if not cur:
            return True
        nxt = Echelon(F)
        maps = []
        for a in cur:
            for b in ideal:
                ab = compose(a, b)
                if ab and nxt.add(_flatten(ab, B.dim)):
                    maps.append(ab)
        cur = maps
    return False


def check_approximation(M: Module, rng: random.Random, samples: int = 2) -> dict:
    ap = min_finpd_approx(M)
    fin = finite_pdim_test(ap.B)[0] if ap.B.dim else True
    fac = all(factors_through(random_finpd_module(M.alg, rng), ap) for _ in range(samples))
    return {"B_finite": fin, "factors": fac, "minimal": is_right_minimal(ap)}


def check_simple_approximations(alg: TruncatedAlgebra) -> bool:
    for v in alg.vertices:
        ap = min_finpd_approx(simple(alg, v))
        if find_isomorphism(ap.B, build_A(alg, v)) is None:
            return False
    return True


def strongness_case(alg: TruncatedAlgebra):
    from .tilting import is_strong_right, strong_tilting

    st = strong_tilting(alg, verify=False)
    val, cert = is_strong_right(st)
    return val, not has_precyclic_source(alg.quiver)
