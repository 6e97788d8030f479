"""Skeleta, syzygies, projective dimension, Ext and P^{<oo}-approximations."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from .algebra import TruncatedAlgebra
from .linalg import Echelon, apply, vadd_inplace
from .modules import (
    Module,
    ModuleError,
    build_A,
    direct_sum,
    find_isomorphism,
    hom_space,
    injective_envelope_simple,
    interval_module,
    eps_truncate,
    quotient_by_echelon,
    simple,
    submodule_echelon,
    submodule_from_echelon,
)
from .quiver import QPath


class HomologicalError(ValueError):
    pass


# ------------------------------------------------------------------ skeleta

@dataclass
class Skeleton:
    module: Module
    layers: list  # layers[l] = list of (slot, path)
    critical: list = field(default_factory=list)

    @property
    def elements(self) -> list:
        return [x for layer in self.layers for x in layer]

    def __len__(self):
        return sum(len(l) for l in self.layers)

    def describe(self) -> list[str]:
        q = self.module.alg.quiver
        return [f"{q.path_str(p)}@{r}" for (r, p) in self.elements]


def compute_skeleton(M: Module, rng: Optional[random.Random] = None) -> Skeleton:
    """Greedy layer-by-layer skeleton on the canonical cover of M.

    Candidates in each layer are taken in canonical (length, slot, arrows)
    order, or shuffled when ``rng`` is given.
    """
    cov = M.cover()
    alg = M.alg
    q = alg.quiver
    img = {rp: cov.images[j] for j, rp in enumerate(cov.P.pbasis)}
    series = M.radical_series()
    layer = [(r, q.trivial(v)) for r, v in enumerate(cov.slots)]
    layers = [layer]
    critical = []
    l = 0
    while layer:
        cands = []
        for (r, p) in layer:
            if p.length >= alg.L:
                continue
            for a in q.out_arrows[p.end]:
                cands.append((r, q.extend(p, a)))
        cands.sort(key=lambda rp: (rp[1].length, rp[0], rp[1].arrows))
        if rng is not None:
            rng.shuffle(cands)
        e = series[l + 2].copy() if l + 2 < len(series) else Echelon(M.field)
        nxt = []
        for rp in cands:
            if e.add(img[rp]):
                nxt.append(rp)
            else:
                critical.append(rp)
        nxt.sort(key=lambda rp: (rp[1].length, rp[0], rp[1].arrows))
        want = series[l + 1].rank - (series[l + 2].rank if l + 2 < len(series) else 0)
        if len(nxt) != want:
            raise HomologicalError("skeleton layer does not match radical layer")
        if nxt:
            layers.append(nxt)
        layer = nxt
        l += 1
    critical.sort(key=lambda rp: (rp[1].length, rp[0], rp[1].arrows))
    return Skeleton(M, layers, critical)


def critical_paths(sk: Skeleton) -> list:
    return list(sk.critical)


# ------------------------------------------------------------------ syzygies

def syzygy_type(M: Module, rng: Optional[random.Random] = None) -> Counter:
    """Multiset {(end, length)} of critical paths: Omega^1(M) = sum of Lambda q."""
    if M.dim == 0:
        raise HomologicalError("syzygy type of the zero module is undefined")
    sk = compute_skeleton(M, rng)
    return Counter((p.end, p.length) for (_, p) in sk.critical)


def type_str(t: Counter) -> str:
    if not t:
        return "0"
    return " + ".join(f"{n}x({v},{l})" if n > 1 else f"({v},{l})"
                      for (v, l), n in sorted(t.items(), key=lambda kv: (str(kv[0][0]), kv[0][1])))


def syzygy_explicit(M: Module) -> tuple[Module, dict, Module]:
    """Omega^1(M) as the kernel of the cover, with its inclusion into P."""
    cov = M.cover()
    e = Echelon(M.field)
    for c in cov.C:
        e.add(c)
    Om, incl = submodule_from_echelon(cov.P, e, f"Omega({M.name})")
    return Om, incl, cov.P


def interval_sum(alg: TruncatedAlgebra, t: Counter) -> Module:
    parts = []
    for (v, l), n in sorted(t.items(), key=lambda kv: (alg.quiver.vindex[kv[0][0]], kv[0][1])):
        parts.extend(interval_module(alg, v, l) for _ in range(n))
    if not parts:
        return Module(alg, [], {}, "0")
    return direct_sum(*parts)


def verify_syzygy_type(M: Module, rng=None) -> bool:
    """Explicit kernel is isomorphic to the predicted sum of cyclic ideals."""
    pred = syzygy_type(M)
    Om, _, _ = syzygy_explicit(M)
    S = interval_sum(M.alg, pred)
    if Om.dim == 0 or S.dim == 0:
        return Om.dim == S.dim
    return find_isomorphism(S, Om, rng) is not None


# ------------------------------------------------------------------ pdim

INF = float("inf")


@dataclass
class PdimResult:
    value: object  # int or INF
    witness: object = None
    zero: bool = False
    exceeds_bound: bool = False

    @property
    def finite(self) -> bool:
        return self.value != INF and not self.exceeds_bound

    def __str__(self):
        if self.exceeds_bound:
            return f">{self.value} (bound exceeded)"
        return "inf" if self.value == INF else str(self.value)

    def to_json(self):
        if self.exceeds_bound:
            return {"exceeds_bound": self.value}
        return None if self.value == INF else self.value


def _interval_table(alg: TruncatedAlgebra):
    tab = getattr(alg, "_pdim_interval", None)
    if tab is None:
        tab = {}
        alg._pdim_interval = tab
    return tab


def pdim_interval(alg: TruncatedAlgebra, v, ell: int) -> PdimResult:
    if not 1 <= ell <= alg.L:
        raise HomologicalError(f"interval length {ell} outside 1..{alg.L}")
    if v in alg.precyclic:
        return PdimResult(INF, witness=v)
    tab = _interval_table(alg)
    key = (v, ell)
    if key in tab:
        return tab[key]
    m = alg.L + 1 - ell
    sub = [u for u in alg.paths_from[v] if u.length == m]
    if not sub:
        res = PdimResult(0)
    else:
        vals = [pdim_interval(alg, u.end, m) for u in sub]
        worst = max(vals, key=lambda r: r.value)
        res = PdimResult(1 + worst.value if worst.value != INF else INF, witness=worst.witness)
    tab[key] = res
    return res


def pdim(M: Module) -> PdimResult:
    if M.dim == 0:
        return PdimResult(0, zero=True)
    t = syzygy_type(M)
    if not t:
        return PdimResult(0)
    vals = [pdim_interval(M.alg, v, l) for (v, l) in t]
    worst = max(vals, key=lambda r: r.value)
    if worst.value == INF:
        return PdimResult(INF, witness=worst.witness)
    return PdimResult(1 + worst.value)


def pdim_by_resolution(M: Module, bound: Optional[int] = None) -> PdimResult:
    """Iterate explicit syzygies; no structural shortcut (used as an oracle)."""
    bound = M.alg.dim if bound is None else bound
    X = M
    for k in range(bound + 1):
        if X.dim == 0:
            return PdimResult(max(k - 1, 0), zero=(k == 0))
        Om, _, _ = syzygy_explicit(X)
        if Om.dim == 0:
            return PdimResult(k)
        X = Om
    return PdimResult(bound, exceeds_bound=True)


def min_projective_resolution(M: Module, k: int) -> list:
    """[(P_0, d_0 image data), ...]: list of (cover, syzygy) steps up to length k."""
    steps = []
    X = M
    for i in range(k + 1):
        if X.dim == 0:
            break
        cov = X.cover()
        Om, incl, P = syzygy_explicit(X)
        if P.dim != X.dim + Om.dim:
            raise HomologicalError("resolution step is not exact")
        steps.append({"module": X, "slots": list(cov.slots), "P": P, "syzygy": Om, "incl": incl})
        X = Om
    return steps


def ext_dim(M: Module, N: Module, k: int) -> int:
    """dim Ext^k(M, N) for k >= 1 from the minimal resolution."""
    if k < 1:
        raise HomologicalError("ext_dim needs k >= 1; use hom_space for k = 0")
    X = M
    for _ in range(k - 1):
        if X.dim == 0:
            return 0
        X, _, _ = syzygy_explicit(X)
    if X.dim == 0:
        return 0
    Om, incl, P = syzygy_explicit(X)
    if Om.dim == 0:
        return 0
    h = len(hom_space(Om, N))
    if h == 0:
        return 0
    # restrictions of the maps P -> N, z_r -> n_b, to Omega
    cov = X.cover()
    e = Echelon(M.field)
    nd = N.dim
    for r, v in enumerate(cov.slots):
        for b in N.basis_at(v):
            pim = N.path_images(b)
            flat: dict = {}
            for t, pvec in incl.items():
                for j, x in pvec.items():
                    rr, p = P.pbasis[j]
                    if rr == r:
                        w = pim.get(p)
                        if w:
                            vadd_inplace(flat, {t * nd + s: y for s, y in w.items()}, x)
            if flat:
                e.add(flat)
    return h - e.rank


def ext_dims(M: Module, N: Module, upto: int) -> list[int]:
    return [ext_dim(M, N, k) for k in range(1, upto + 1)]


# --------------------------------------------------- approximations

@dataclass
class Approximation:
    target: Module
    B: Module
    phi: dict
    eps_C_dim: int


def min_finpd_approx(M: Module) -> Approximation:
    """B(M) = P/eps C with the canonical map onto M = P/C."""
    alg = M.alg
    cov = M.cover()
    P = cov.P
    eC = Echelon(M.field)
    for c in cov.C:
        ec = {j: x for j, x in c.items() if P.pbasis[j][1].end in alg.nonprecyclic}
        if ec:
            eC.add(ec)
    closed = submodule_echelon(P, eC.basis())
    if closed.rank != eC.rank:
        raise HomologicalError("eps C is not a submodule")
    B, proj = quotient_by_echelon(P, eC, f"B({M.name})")
    phi = {}
    for j in range(P.dim):
        if j in eC.rows:
            continue
        (t, _), = proj[j].items()
        if cov.images[j]:
            phi[t] = dict(cov.images[j])
    return Approximation(M, B, phi, eC.rank)


def finite_pdim_test(M: Module) -> tuple[bool, dict]:
    """pdim M < oo iff M/eps J M is a sum of the A_i; certificate = top multiplicities."""
    alg = M.alg
    if M.dim == 0:
        return True, {}
    F, _ = eps_truncate(M)
    r = M.top_vector()
    expected = sum(n * _A_dim(alg, v) for v, n in r.items() if n)
    return F.dim == expected, {v: n for v, n in r.items() if n}


def _A_dim(alg, v) -> int:
    cache = getattr(alg, "_A_dims", None)
    if cache is None:
        cache = alg._A_dims = {}
    if v not in cache:
        cache[v] = build_A(alg, v).dim
    return cache[v]


def findim(alg: TruncatedAlgebra) -> tuple[int, dict]:
    """l.findim = max{pdim A_i (i precyclic), pdim S_j (j non-precyclic)}."""
    table = {}
    for v in alg.vertices:
        if v in alg.precyclic:
            table[("A", v)] = pdim(build_A(alg, v))
        else:
            table[("S", v)] = pdim(simple(alg, v))
    vals = [r.value for r in table.values()]
    if any(x == INF for x in vals):
        raise HomologicalError("infinite value in findim table")
    return max(vals) if vals else 0, table


# ---------------------------------------------------- T-perp and Theta

def theta_V(X: Module) -> Echelon:
    """Largest submodule of X whose composition factors are all precyclic."""
    alg = X.alg
    e = Echelon(X.field)
    for v in alg.vertices:
        if v not in alg.precyclic:
            continue
        idx = X.basis_at(v)
        if not idx:
            continue
        cols = []
        for k in idx:
            col: dict = {}
            off = 0
            for p, w in X.path_images(k).items():
                if p.end in alg.nonprecyclic:
                    for j, x in w.items():
                        col[off + j] = x
                    off += X.dim
            cols.append(col)
        from .linalg import kernel

        for rel in kernel(X.field, cols):
            e.add({idx[t]: x for t, x in rel.items()})
    return e


def theta_structure(X: Module) -> dict:
    """V(X) and whether X/V(X) is a sum of injective envelopes of non-precyclic simples."""
    alg = X.alg
    V = theta_V(X)
    if submodule_echelon(X, V.basis()).rank != V.rank:
        raise HomologicalError("V(X) is not a submodule")
    Q, _ = quotient_by_echelon(X, V, "X/V")
    soc = Q.socle_vector()
    ok = all(n == 0 for v, n in soc.items() if v in alg.precyclic)
    expected = sum(n * injective_envelope_simple(alg, v).dim for v, n in soc.items() if n)
    ok = ok and expected == Q.dim
    return {"V_dim": V.rank, "quotient_dim": Q.dim,
            "injective_multiplicities": {v: n for v, n in soc.items() if n},
            "sum_of_injectives": ok}


def t_perp_membership(X: Module, T: Module, pdT: int) -> tuple[bool, list[int]]:
    exts = ext_dims(T, X, pdT)
    return all(x == 0 for x in exts), exts
