"""The basic strong tilting module and its verification."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from .algebra import TruncatedAlgebra
from .graphs import module_graph
from .homological import (
    INF,
    ext_dims,
    min_finpd_approx,
    pdim,
)
from .linalg import Echelon, compose
from .modules import (
    Module,
    build_A,
    cokernel_of_map,
    direct_sum,
    endomorphism_radical,
    find_isomorphism,
    hom_space,
    injective_envelope_simple,
    is_indecomposable,
    map_rank,
    projective,
    quotient,
    simple,
    sum_offsets,
    _flatten,
)
from .quiver import has_precyclic_source


class TiltingError(AssertionError):
    pass


def build_B(alg: TruncatedAlgebra, v):
    """Minimal P^{<oo}-approximation of E(S_v): returns (B_v, approximation)."""
    ap = min_finpd_approx(injective_envelope_simple(alg, v))
    ap.B.name = f"B{v}"
    return ap.B, ap


@dataclass
class StrongTiltingModule:
    alg: TruncatedAlgebra
    summands: dict  # vertex -> Module
    kinds: dict  # vertex -> "A" or "B"
    pdim: object = None
    checks: dict = field(default_factory=dict)
    _T: Optional[Module] = None

    @property
    def vertices(self):
        # summand labels; vertices of Q for the strong tilting module itself
        return list(self.summands)

    def module(self) -> Module:
        if self._T is None:
            self._T = direct_sum(*[self.summands[v] for v in self.vertices], name="T")
        return self._T

    def offsets(self) -> dict:
        offs = sum_offsets([self.summands[v] for v in self.vertices])
        return dict(zip(self.vertices, offs))

    def dims(self) -> dict:
        return {v: self.summands[v].dim for v in self.vertices}


def strong_tilting(alg: TruncatedAlgebra, verify: bool = True) -> StrongTiltingModule:
    summands, kinds = {}, {}
    for v in alg.vertices:
        if v in alg.precyclic:
            summands[v], kinds[v] = build_A(alg, v), "A"
        else:
            summands[v], _ = build_B(alg, v)
            kinds[v] = "B"
    st = StrongTiltingModule(alg, summands, kinds)
    st.pdim = pdim(st.module())
    if verify:
        check_summands(st)
    return st


def check_summands(st: StrongTiltingModule, rng=None) -> dict:
    """Indecomposable, pairwise non-isomorphic summands whose graphs are trees."""
    rng = rng or random.Random(2024)
    alg = st.alg
    out = {}
    for v in st.vertices:
        M = st.summands[v]
        if not is_indecomposable(M):
            raise TiltingError(f"summand T_{v} is decomposable")
        if not module_graph(M).is_tree():
            raise TiltingError(f"graph of T_{v} is not a tree")
    vs = list(st.vertices)
    for i, v in enumerate(vs):
        for w in vs[i + 1:]:
            if find_isomorphism(st.summands[v], st.summands[w], rng) is not None:
                raise TiltingError(f"T_{v} and T_{w} are isomorphic")
    for v in vs:
        if v in alg.nonprecyclic:
            _check_B(alg, v, st.summands[v])
    out["indecomposable"] = out["pairwise_nonisomorphic"] = out["trees"] = True
    st.checks.update(out)
    return out


def _check_B(alg, v, B: Module) -> None:
    """Structure of B_v for non-precyclic v (top, socle copy, U(B) and B/U(B))."""
    E = injective_envelope_simple(alg, v)
    if B.top_vector() != E.top_vector():
        raise TiltingError(f"B_{v} and E(S_{v}) have different tops")
    # eps B = U(B) must be isomorphic to eps E(S_v)
    epsB = sum(n for w, n in B.dim_vector().items() if w in alg.nonprecyclic)
    epsE = sum(n for w, n in E.dim_vector().items() if w in alg.nonprecyclic)
    if epsB != epsE:
        raise TiltingError(f"U(B_{v}) differs from eps E(S_{v})")
    # B/U(B) = sum of A_j^{k_vj}, k_vj = multiplicity of S_j in top E(S_v)
    expected = sum(n * build_A(alg, w).dim for w, n in E.top_vector().items()
                   if w in alg.precyclic)
    if B.dim - epsB != expected:
        raise TiltingError(f"B_{v}/U(B_{v}) is not the expected sum of A_j")


def sum_of_B_precyclic(st_or_alg) -> dict:
    """Multiplicities t_i with sum_{i precyclic} B_i = sum A_i^{t_i} (for precyclic i)."""
    alg = st_or_alg.alg if isinstance(st_or_alg, StrongTiltingModule) else st_or_alg
    mult = {v: 0 for v in alg.vertices if v in alg.precyclic}
    parts = []
    for v in alg.vertices:
        if v in alg.precyclic:
            B, _ = build_B(alg, v)
            parts.append(B)
    if not parts:
        return {}
    total = direct_sum(*parts)
    # every summand is some A_i, so the top determines the candidate
    for v, n in total.top_vector().items():
        if n:
            mult[v] = n
    cand = direct_sum(*[build_A(alg, v) for v, n in mult.items() for _ in range(n)])
    if find_isomorphism(cand, total) is None:
        raise TiltingError("sum of B_i over precyclic i is not a sum of A_i")
    return {v: n for v, n in mult.items() if n}


# --------------------------------------------------------- coresolution

def left_add_approximation(X: Module, summands: list[Module], rads: dict):
    """Minimal left add(T)-approximation X -> sum T_j^{s_j}."""
    F = X.field
    homs = [hom_space(X, Tj) for Tj in summands]
    chosen = []
    for j, Tj in enumerate(summands):
        R = Echelon(F)
        for k, Tk in enumerate(summands):
            for h in rads[(k, j)]:
                for g in homs[k]:
                    hg = compose(h, g)
                    if hg:
                        R.add(_flatten(hg, Tj.dim))
        for g in homs[j]:
            if R.add(_flatten(g, Tj.dim)):
                chosen.append((j, g))
    targets = [summands[j] for j, _ in chosen]
    if not targets:
        return None, {}, []
    M = direct_sum(*targets)
    offs = sum_offsets(targets)
    f = {}
    for (j, g), off in zip(chosen, offs):
        for k, col in g.items():
            acc = f.setdefault(k, {})
            for t, x in col.items():
                acc[t + off] = x
    return M, f, [j for j, _ in chosen]


def radical_maps(summands: list[Module]) -> dict:
    rads = {}
    for k, Tk in enumerate(summands):
        for j, Tj in enumerate(summands):
            rads[(k, j)] = endomorphism_radical(Tk) if k == j else hom_space(Tk, Tj)
    return rads


def add_T_coresolution(st: StrongTiltingModule, X: Optional[Module] = None, max_steps=None):
    """0 -> X -> M_0 -> M_1 -> ... -> M_t -> 0 with M_i in add(T); returns the terms."""
    alg = st.alg
    summands = [st.summands[v] for v in st.vertices]
    rads = radical_maps(summands)
    if X is None:
        X = direct_sum(*[projective(alg, v) for v in alg.vertices], name="Lambda")
    max_steps = alg.dim if max_steps is None else max_steps
    terms = []
    for step in range(max_steps + 1):
        if X.dim == 0:
            return terms
        M, f, idx = left_add_approximation(X, summands, rads)
        if M is None or map_rank(X.field, f, X.dim) != X.dim:
            raise TiltingError(f"coresolution step {step}: approximation is not injective")
        terms.append({st.vertices[j]: idx.count(j) for j in set(idx)})
        X, _ = cokernel_of_map(X, M, f)
    raise TiltingError(f"coresolution did not terminate within {max_steps} steps")


def verify_tilting(st: StrongTiltingModule) -> dict:
    pd = st.pdim if st.pdim is not None else pdim(st.module())
    if pd.value == INF:
        raise TiltingError("pdim T is infinite")
    T = st.module()
    exts = ext_dims(T, T, pd.value)
    if any(exts):
        k = next(i for i, x in enumerate(exts, 1) if x)
        raise TiltingError(f"Ext^{k}(T, T) has dimension {exts[k - 1]}")
    terms = add_T_coresolution(st)
    length = len(terms) - 1
    if length > pd.value:
        raise TiltingError(f"coresolution length {length} exceeds pdim T = {pd.value}")
    rep = {"pdim": pd.value, "ext": exts, "coresolution": terms, "coresolution_length": length}
    st.checks.update(rep)
    return rep


def verify_tilting_candidate(alg: TruncatedAlgebra, summands: dict) -> dict:
    """Run the tilting axioms on an arbitrary candidate; reports instead of raising."""
    st = StrongTiltingModule(alg, summands, {v: "?" for v in summands})
    st.pdim = pdim(st.module())
    try:
        return {"ok": True, **verify_tilting(st)}
    except TiltingError as exc:
        return {"ok": False, "reason": str(exc)}


# -------------------------------------------------------- strongness

def is_strong_right(st: StrongTiltingModule) -> tuple[bool, dict]:
    alg = st.alg
    soc = st.module().socle_vector()
    all_simples = all(soc[v] > 0 for v in alg.vertices)
    no_source = not has_precyclic_source(alg.quiver)
    ends_L = {p.end for p in alg.basis if p.length == alg.L}
    for v in alg.precyclic:
        if (soc[v] > 0) != (v in ends_L):
            raise TiltingError(f"socle of T at precyclic {v} disagrees with length-L path criterion")
    if all_simples != no_source:
        raise TiltingError("socle criterion and precyclic-source criterion disagree")
    return all_simples, {"socle": soc, "no_precyclic_source": no_source}


# ------------------------------------------------------- stratification

def preorder_leq(alg: TruncatedAlgebra, i, j) -> bool:
    """S_i <= S_j iff e_i is precyclic or there is a path from e_i to e_j."""
    if i in alg.precyclic:
        return True
    q = alg.quiver
    seen, stack = {i}, [i]
    while stack:
        v = stack.pop()
        if v == j:
            return True
        for a in q.out_arrows[v]:
            w = q.arrows[a].target
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return False


def standard_module(alg: TruncatedAlgebra, i) -> Module:
    """Largest quotient of Lambda e_i with composition factors S_j <= S_i."""
    P = projective(alg, i)
    bad = [P.unit(k) for k, (_, p) in enumerate(P.pbasis) if not preorder_leq(alg, p.end, i)]
    D, _ = quotient(P, bad, f"Delta{i}")
    return D


def stratification_report(alg: TruncatedAlgebra) -> dict:
    from .modules import submodule

    rows = []
    for i in alg.vertices:
        D = standard_module(alg, i)
        A = build_A(alg, i)
        if find_isomorphism(D, A) is None:
            raise TiltingError(f"Delta_{i} is not isomorphic to A_{i}")
        P = projective(alg, i)
        eps_gens = [P.unit(k) for k, (_, p) in enumerate(P.pbasis) if p.end in alg.nonprecyclic]
        U, _ = submodule(P, eps_gens)
        mult = {}
        counts = {}
        for j in alg.vertices:
            if j in alg.nonprecyclic:
                mult[j] = U.dim_vector()[j]
                counts[j] = len([p for p in alg.paths_from[i] if p.end == j])
        if P.dim != D.dim + sum(mult[j] * standard_module(alg, j).dim for j in mult) and i in alg.precyclic:
            raise TiltingError(f"Delta filtration of Lambda e_{i} has the wrong length")
        rows.append({"vertex": i, "precyclic": i in alg.precyclic, "Delta_dim": D.dim,
                     "U_multiplicities": mult, "path_counts": counts,
                     "agree": all(mult[j] == counts[j] for j in mult) if i in alg.precyclic else None})
    order = [[preorder_leq(alg, i, j) for j in alg.vertices] for i in alg.vertices]
    return {"preorder": order, "rows": rows}


def injective_cogenerator(alg: TruncatedAlgebra) -> Module:
    return direct_sum(*[injective_envelope_simple(alg, v) for v in alg.vertices])


def simple_module(alg, v):
    return simple(alg, v)
