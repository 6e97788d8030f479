"""Finite-dimensional left modules over a truncated path algebra.

A :class:`Module` has a global basis, each basis vector living at one vertex,
and one sparse column map per arrow.  This is the representation encoding;
:class:`Presentation` is the P/C encoding.  Module homomorphisms are plain
column maps ``{source_index: target_vector}``.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional

from .algebra import TruncatedAlgebra
from .linalg import Echelon, apply, compose, kernel, vadd_inplace
from .quiver import QPath


class ModuleError(ValueError):
    pass


def _prefix(alg, p: QPath) -> QPath:
    """p with its last arrow removed."""
    if len(p.arrows) == 1:
        return QPath(p.start, p.start, ())
    return QPath(p.start, alg.quiver.arrows[p.arrows[-2]].target, p.arrows[:-1])


class Module:
    def __init__(self, alg: TruncatedAlgebra, vertex_of: list, act: dict, name: str = ""):
        self.alg = alg
        self.field = alg.field
        self.vertex_of = list(vertex_of)
        q = alg.quiver
        self.act = {a: dict(act.get(a, {})) for a in range(len(q.arrows))}
        self.name = name
        self._cache: dict = {}

    # ------------------------------------------------------------- basics
    @property
    def dim(self) -> int:
        return len(self.vertex_of)

    def __repr__(self):
        return f"Module({self.name or '?'}, dim={self.dim})"

    def basis_at(self, v) -> list[int]:
        return [k for k, w in enumerate(self.vertex_of) if w == v]

    def dim_vector(self) -> dict:
        c = Counter(self.vertex_of)
        return {v: c.get(v, 0) for v in self.alg.vertices}

    def dim_tuple(self) -> tuple:
        c = Counter(self.vertex_of)
        return tuple(c.get(v, 0) for v in self.alg.vertices)

    def unit(self, k: int) -> dict:
        return {k: self.field.one}

    def act_arrow(self, a: int, vec: dict) -> dict:
        return apply(self.act[a], vec)

    def act_path(self, p: QPath, vec: dict) -> dict:
        for a in p.arrows:
            if not vec:
                break
            vec = apply(self.act[a], vec)
        if not p.arrows:
            return {k: x for k, x in vec.items() if self.vertex_of[k] == p.start}
        return vec

    def act_element(self, x: dict, vec: dict) -> dict:
        out: dict = {}
        for i, c in x.items():
            vadd_inplace(out, self.act_path(self.alg.basis[i], vec), c)
        return out

    def vertex_component(self, vec: dict, v) -> dict:
        return {k: x for k, x in vec.items() if self.vertex_of[k] == v}

    def homogeneous_parts(self, vec: dict) -> list[dict]:
        parts: dict = {}
        for k, x in vec.items():
            parts.setdefault(self.vertex_of[k], {})[k] = x
        return [parts[v] for v in self.alg.vertices if v in parts]

    def check(self) -> None:
        """Verify vertex homogeneity of arrow maps and J^{L+1} M = 0."""
        q = self.alg.quiver
        for a, cols in self.act.items():
            arr = q.arrows[a]
            for k, col in cols.items():
                if self.vertex_of[k] != arr.source:
                    raise ModuleError(f"arrow {arr.name} acts on a vector outside vertex {arr.source}")
                for j in col:
                    if self.vertex_of[j] != arr.target:
                        raise ModuleError(f"arrow {arr.name} maps outside vertex {arr.target}")
        if self.radical_power(self.alg.L + 1).rank:
            raise ModuleError("paths of length L+1 act nonzero")

    # ------------------------------------------------------ radical data
    def arrow_images(self, vectors: Iterable[dict]) -> list[dict]:
        out = []
        for v in vectors:
            for a in self.act:
                w = self.act_arrow(a, v)
                if w:
                    out.append(w)
        return out

    def radical_series(self) -> list[Echelon]:
        """[J^0 M, J^1 M, ...] ending with the first zero power."""
        if "rad" not in self._cache:
            cur = Echelon(self.field)
            for k in range(self.dim):
                cur.add(self.unit(k))
            series = [cur]
            while cur.rank:
                nxt = Echelon(self.field)
                for w in self.arrow_images(cur.basis()):
                    nxt.add(w)
                series.append(nxt)
                cur = nxt
            self._cache["rad"] = series
        return self._cache["rad"]

    def radical_power(self, l: int) -> Echelon:
        s = self.radical_series()
        return s[l] if l < len(s) else s[-1]

    def loewy_length(self) -> int:
        return len(self.radical_series()) - 1

    def radical_layering(self) -> list[dict]:
        """Dimension vectors of J^l M / J^{l+1} M."""
        s = self.radical_series()
        out = []
        for l in range(len(s) - 1):
            c = Counter()
            for v in self.alg.vertices:
                a = sum(1 for p in s[l].rows if self.vertex_of[p] == v)
                b = sum(1 for p in s[l + 1].rows if self.vertex_of[p] == v)
                c[v] = a - b
            out.append({v: c[v] for v in self.alg.vertices})
        return out

    def layering_tuple(self) -> tuple:
        return tuple(tuple(d[v] for v in self.alg.vertices) for d in self.radical_layering())

    def top_indices(self) -> list[int]:
        """Basis indices whose classes form a basis of M/JM (canonical choice)."""
        if "top" not in self._cache:
            e = self.radical_power(1).copy()
            self._cache["top"] = [k for k in range(self.dim) if e.add(self.unit(k))]
        return self._cache["top"]

    def top_vector(self) -> dict:
        c = Counter(self.vertex_of[k] for k in self.top_indices())
        return {v: c.get(v, 0) for v in self.alg.vertices}

    def socle_basis(self) -> list[dict]:
        """Basis of soc M = vectors killed by every arrow, one vertex at a time."""
        out = []
        for v in self.alg.vertices:
            idx = self.basis_at(v)
            if not idx:
                continue
            cols = []
            for k in idx:
                col: dict = {}
                off = 0
                for a in self.alg.quiver.out_arrows[v]:
                    for j, x in self.act[a].get(k, {}).items():
                        col[off + j] = x
                    off += self.dim
                cols.append(col)
            for rel in kernel(self.field, cols):
                out.append({idx[t]: x for t, x in rel.items()})
        return out

    def socle_vector(self) -> dict:
        c = Counter()
        for vec in self.socle_basis():
            c[self.vertex_of[next(iter(vec))]] += 1
        return {v: c.get(v, 0) for v in self.alg.vertices}

    # ------------------------------------------------ path images & cover
    def path_images(self, k: int) -> dict:
        """{path: p*b_k} for every basis path p starting at the vertex of b_k."""
        key = ("pimg", k)
        if key not in self._cache:
            v = self.vertex_of[k]
            out = {}
            for p in self.alg.paths_from[v]:
                if not p.arrows:
                    out[p] = self.unit(k)
                else:
                    prev = out[_prefix(self.alg, p)]
                    out[p] = self.act_arrow(p.arrows[-1], prev) if prev else {}
            self._cache[key] = out
        return self._cache[key]

    def path_images_of(self, vec: dict, v) -> dict:
        """{path from v: p*vec} for a vector supported at vertex v."""
        out: dict = {}
        for k, x in vec.items():
            for p, w in self.path_images(k).items():
                if w:
                    acc = out.setdefault(p, {})
                    vadd_inplace(acc, w, x)
        return {p: w for p, w in out.items() if w}

    def cover(self) -> "Cover":
        if "cover" not in self._cache:
            self._cache["cover"] = Cover.of(self)
        return self._cache["cover"]

    def to_rep(self) -> dict:
        """Per-vertex dimensions and per-arrow matrices in local coordinates."""
        local = {}
        for v in self.alg.vertices:
            for t, k in enumerate(self.basis_at(v)):
                local[k] = t
        dims = self.dim_vector()
        maps = {}
        for a, arr in enumerate(self.alg.quiver.arrows):
            rows = [[self.field.zero] * dims[arr.source] for _ in range(dims[arr.target])]
            for k, col in self.act[a].items():
                for j, x in col.items():
                    rows[local[j]][local[k]] = x
            maps[arr.name] = rows
        return {"dims": dims, "maps": maps}


def module_from_rep(alg: TruncatedAlgebra, dims: dict, maps: dict, name: str = "") -> Module:
    """Build a module from per-vertex dimensions and per-arrow matrices.

    ``maps[name]`` is a row-major matrix of shape dim(target) x dim(source).
    """
    q = alg.quiver
    offset = {}
    vertex_of = []
    for v in q.vertices:
        offset[v] = len(vertex_of)
        vertex_of.extend([v] * int(dims.get(v, 0)))
    act = {}
    for a, arr in enumerate(q.arrows):
        mat = maps.get(arr.name)
        ds, dt = int(dims.get(arr.source, 0)), int(dims.get(arr.target, 0))
        if mat is None:
            continue
        if len(mat) != dt or any(len(r) != ds for r in mat):
            raise ModuleError(f"matrix for arrow {arr.name} must be {dt}x{ds}")
        cols = {}
        for c in range(ds):
            col = {}
            for r in range(dt):
                x = alg.field(mat[r][c])
                if x != 0:
                    col[offset[arr.target] + r] = x
            if col:
                cols[offset[arr.source] + c] = col
        act[a] = cols
    m = Module(alg, vertex_of, act, name)
    m.check()
    return m


# --------------------------------------------------------------- free modules

def free_module(alg: TruncatedAlgebra, slots: list) -> Module:
    """P = sum_r Lambda z_r with basis (slot, path), ordered by (length, slot, arrows)."""
    pbasis = []
    for r, v in enumerate(slots):
        for p in alg.paths_from[v]:
            pbasis.append((r, p))
    pbasis.sort(key=lambda rp: (rp[1].length, rp[0], rp[1].arrows))
    index = {rp: k for k, rp in enumerate(pbasis)}
    act = {a: {} for a in range(len(alg.quiver.arrows))}
    one = alg.field.one
    q = alg.quiver
    for k, (r, p) in enumerate(pbasis):
        if p.length >= alg.L:
            continue
        for a in q.out_arrows[p.end]:
            act[a][k] = {index[(r, q.extend(p, a))]: one}
    m = Module(alg, [p.end for (_, p) in pbasis], act, name="P")
    m.pbasis = pbasis
    m.pindex = index
    m.slots = list(slots)
    return m


def pbasis_key(rp):
    r, p = rp
    return (p.length, r, p.arrows)


@dataclass
class Cover:
    """Projective cover P -> M with kernel C and a linear section M -> P."""

    module: Module
    slots: list
    gens: list
    P: Module
    images: list
    C: list
    C_gens: list
    section: dict

    @classmethod
    def of(cls, M: Module) -> "Cover":
        alg = M.alg
        top = M.top_indices()
        slots = [M.vertex_of[k] for k in top]
        gens = [M.unit(k) for k in top]
        P = free_module(alg, slots)
        images = []
        for (r, p) in P.pbasis:
            images.append(M.path_images(top[r])[p])
        e = Echelon(M.field, track=True)
        C = []
        for j, img in enumerate(images):
            rel = e.add_or_relation(img, j)
            if rel is not None:
                C.append(rel)
        if e.rank != M.dim:
            raise ModuleError("top elements do not generate the module")
        section = {k: e.express(M.unit(k)) for k in range(M.dim)}
        # minimal generators of C as a submodule: complement of JC inside C
        jc = Echelon(M.field)
        for w in P.arrow_images(C):
            jc.add(w)
        C_gens = [c for c in C if jc.add(c)]
        return cls(M, slots, gens, P, images, C, C_gens, section)

    def project(self, pvec: dict) -> dict:
        """Image in M of a vector of P."""
        return apply(dict(enumerate(self.images)), pvec)


# ------------------------------------------------------- sub and quotients

def submodule_echelon(M: Module, gens: Iterable[dict]) -> Echelon:
    e = Echelon(M.field)
    queue = []
    for g in gens:
        for part in M.homogeneous_parts(g):
            if e.add(part):
                queue.append(part)
    while queue:
        v = queue.pop()
        for a in M.act:
            w = M.act_arrow(a, v)
            if w and e.add(w):
                queue.append(w)
    return e


def submodule_from_echelon(M: Module, e: Echelon, name: str = "") -> tuple[Module, dict]:
    """Submodule spanned by a Lambda-stable echelon; returns (module, inclusion)."""
    piv = e.pivots()
    pos = {p: t for t, p in enumerate(piv)}
    vertex_of = [M.vertex_of[p] for p in piv]
    act = {a: {} for a in M.act}
    for t, p in enumerate(piv):
        row = e.rows[p]
        for a in M.act:
            w = M.act_arrow(a, row)
            if not w:
                continue
            co = e.coordinates(w)
            if co is None:
                raise ModuleError("subspace is not a submodule")
            act[a][t] = {pos[c]: x for c, x in co.items()}
    sub = Module(M.alg, vertex_of, act, name)
    incl = {t: dict(e.rows[p]) for t, p in enumerate(piv)}
    return sub, incl


def submodule(M: Module, gens: Iterable[dict], name: str = "") -> tuple[Module, dict]:
    return submodule_from_echelon(M, submodule_echelon(M, gens), name)


def quotient_by_echelon(M: Module, e: Echelon, name: str = "") -> tuple[Module, dict]:
    """M/U for a Lambda-stable echelon U; returns (module, projection)."""
    keep = [k for k in range(M.dim) if k not in e.rows]
    pos = {k: t for t, k in enumerate(keep)}

    def relabel(vec):
        r = e.reduce(vec)
        return {pos[k]: x for k, x in r.items()}

    act = {a: {} for a in M.act}
    for t, k in enumerate(keep):
        for a in M.act:
            w = M.act.get(a, {}).get(k)
            if w:
                r = relabel(w)
                if r:
                    act[a][t] = r
    Q = Module(M.alg, [M.vertex_of[k] for k in keep], act, name)
    proj = {}
    for k in range(M.dim):
        r = relabel(M.unit(k))
        if r:
            proj[k] = r
    return Q, proj


def quotient(M: Module, gens: Iterable[dict], name: str = "") -> tuple[Module, dict]:
    return quotient_by_echelon(M, submodule_echelon(M, gens), name)


def direct_sum(*mods: Module, name: str = "") -> Module:
    if not mods:
        raise ModuleError("empty direct sum needs an algebra")
    alg = mods[0].alg
    vertex_of = []
    act = {a: {} for a in range(len(alg.quiver.arrows))}
    for M in mods:
        off = len(vertex_of)
        vertex_of.extend(M.vertex_of)
        for a, cols in M.act.items():
            for k, col in cols.items():
                act[a][k + off] = {j + off: x for j, x in col.items()}
    return Module(alg, vertex_of, act, name)


def sum_offsets(mods) -> list[int]:
    offs, o = [], 0
    for M in mods:
        offs.append(o)
        o += M.dim
    return offs


def zero_module(alg) -> Module:
    return Module(alg, [], {}, "0")


# --------------------------------------------------------- presentations

class Presentation:
    """M = P/C with P = sum_r Lambda z_r and C generated by ``relations``.

    Relation vectors are dicts ``{(slot, path): coeff}`` and must lie in JP.
    """

    def __init__(self, alg: TruncatedAlgebra, slots: list, relations: Iterable[dict] = ()):
        self.alg = alg
        self.slots = list(slots)
        self.relations = [dict(r) for r in relations]
        for rel in self.relations:
            for (r, p), c in rel.items():
                if not 0 <= r < len(self.slots):
                    raise ModuleError(f"slot index {r} out of range")
                if p.start != self.slots[r]:
                    raise ModuleError(f"path {alg.quiver.path_str(p)} does not start at slot {r}")
                if p.length == 0 and c != 0:
                    raise ModuleError("relation has a length-zero term (C must lie in JP)")
                if p.length > alg.L:
                    raise ModuleError("relation path exceeds the truncation length")

    def free(self) -> Module:
        return free_module(self.alg, self.slots)

    def to_module(self, name: str = "") -> Module:
        P = self.free()
        gens = []
        for rel in self.relations:
            gens.append({P.pindex[rp]: self.alg.field(c) for rp, c in rel.items() if c != 0})
        M, _ = quotient(P, gens, name)
        return M

    def is_minimal(self) -> bool:
        return True  # C in JP is enforced on construction

    def to_text(self, sep="\n") -> str:
        q = self.alg.quiver
        f = self.alg.field
        lines = ["slots: [" + ", ".join(str(v) for v in self.slots) + "]"]
        for rel in self.relations:
            terms = []
            for (r, p), c in sorted(rel.items(), key=lambda t: pbasis_key(t[0])):
                terms.append((c, f"({q.path_str(p)}@{r})"))
            from .algebra import format_combination

            lines.append("relation: " + format_combination(f, terms))
        return sep.join(lines)


def presentation_of(M: Module) -> Presentation:
    """Minimal presentation: slots = canonical tops, relations = minimal kernel generators."""
    cov = M.cover()
    rels = [{cov.P.pbasis[j]: x for j, x in c.items()} for c in cov.C_gens]
    return Presentation(M.alg, cov.slots, rels)


# ------------------------------------------------------- standard modules

def simple(alg: TruncatedAlgebra, v) -> Module:
    return Module(alg, [v], {}, f"S{v}")


def projective(alg: TruncatedAlgebra, v) -> Module:
    P = free_module(alg, [v])
    P.name = f"P{v}"
    return P


def interval_module(alg: TruncatedAlgebra, v, ell: int) -> Module:
    """The cyclic ideal generated by a path of length ell ending at v."""
    if not 1 <= ell <= alg.L:
        raise ModuleError(f"interval length {ell} outside 1..{alg.L}")
    P = free_module(alg, [v])
    kill = [P.unit(k) for k, (_, p) in enumerate(P.pbasis) if p.length > alg.L - ell]
    M, _ = quotient(P, kill, f"I({v},{ell})")
    return M


def injective_envelope_simple(alg: TruncatedAlgebra, v) -> Module:
    """D(e_v Lambda): basis u* for paths u ending at v, u* sitting at start(u)."""
    paths = alg.paths_to[v]
    pos = {u: t for t, u in enumerate(paths)}
    one = alg.field.one
    act = {a: {} for a in range(len(alg.quiver.arrows))}
    for t, u in enumerate(paths):
        if u.arrows:
            a = u.arrows[0]
            w = QPath(alg.quiver.arrows[a].target, u.end, u.arrows[1:])
            act[a][t] = {pos[w]: one}
    return Module(alg, [u.start for u in paths], act, f"E(S{v})")


def eps_truncate(M: Module) -> tuple[Module, dict]:
    """M / eps J M."""
    alg = M.alg
    jm = M.radical_power(1)
    gens = [row for p, row in jm.rows.items() if M.vertex_of[p] in alg.nonprecyclic]
    return quotient(M, gens, f"F({M.name})")


def top(M: Module) -> tuple[Module, dict]:
    return quotient_by_echelon(M, M.radical_power(1), f"top({M.name})")


def socle(M: Module) -> tuple[Module, dict]:
    return submodule(M, M.socle_basis(), f"soc({M.name})")


def build_A(alg: TruncatedAlgebra, v) -> Module:
    M, _ = eps_truncate(projective(alg, v))
    M.name = f"A{v}"
    return M


# --------------------------------------------------------------- homs

def hom_space(M: Module, N: Module) -> list[dict]:
    """Basis of Hom(M, N) as column maps on M's basis."""
    key = ("hom", id(N))
    hit = M._cache.get(key)
    if hit is not None and hit[0] is N:
        return hit[1]
    cov = M.cover()
    unknowns = []  # (slot r, basis index b of N at the slot vertex)
    for r, v in enumerate(cov.slots):
        for b in N.basis_at(v):
            unknowns.append((r, b))
    nd = N.dim
    cols = []
    for (r, b) in unknowns:
        pim = N.path_images(b)
        col: dict = {}
        for ci, c in enumerate(cov.C_gens):
            for j, x in c.items():
                rr, p = cov.P.pbasis[j]
                if rr != r:
                    continue
                w = pim.get(p)
                if w:
                    vadd_inplace(col, {ci * nd + t: y for t, y in w.items()}, x)
        cols.append(col)
    sols = kernel(M.field, cols)
    out = []
    for s in sols:
        gen_imgs = [dict() for _ in cov.slots]
        for u, x in s.items():
            r, b = unknowns[u]
            vadd_inplace(gen_imgs[r], {b: x}, 1)
        out.append(hom_from_gen_images(M, N, gen_imgs))
    M._cache[key] = (N, out)
    return out


def hom_from_gen_images(M: Module, N: Module, gen_imgs: list[dict]) -> dict:
    """Extend images of the cover generators of M to a column map."""
    cov = M.cover()
    pimgs = [N.path_images_of(g, v) if g else {} for g, v in zip(gen_imgs, cov.slots)]
    cols = {}
    for k in range(M.dim):
        out: dict = {}
        for j, x in cov.section[k].items():
            r, p = cov.P.pbasis[j]
            w = pimgs[r].get(p)
            if w:
                vadd_inplace(out, w, x)
        if out:
            cols[k] = out
    return cols


def is_hom(M: Module, N: Module, f: dict) -> bool:
    for a in M.act:
        for k in range(M.dim):
            lhs = apply(f, M.act[a].get(k, {}))
            rhs = N.act_arrow(a, f.get(k, {}))
            if lhs != rhs:
                d = dict(lhs)
                vadd_inplace(d, rhs, -1)
                if d:
                    return False
    return True


def hom_dim(M: Module, N: Module) -> int:
    return len(hom_space(M, N))


def map_rank(field, f: dict, n_src: int) -> int:
    e = Echelon(field)
    for k in range(n_src):
        col = f.get(k)
        if col:
            e.add(col)
    return e.rank


def combine_maps(maps: list[dict], coeffs: list) -> dict:
    out: dict = {}
    for f, c in zip(maps, coeffs):
        if c == 0:
            continue
        for k, col in f.items():
            acc = out.setdefault(k, {})
            vadd_inplace(acc, col, c)
    return {k: v for k, v in out.items() if v}


def identity_map(M: Module) -> dict:
    return {k: M.unit(k) for k in range(M.dim)}


def _rand_coeff(field, rng):
    if field.characteristic == 0:
        return field(rng.randint(-10**6, 10**6))
    return field.random(rng)


def find_isomorphism(M: Module, N: Module, rng: Optional[random.Random] = None, tries: int = 4):
    """An explicit isomorphism M -> N, or None.

    A random combination of a Hom basis is invertible with high probability
    whenever M and N are isomorphic; an invertible map found this way is a
    certificate.  ``None`` means no isomorphism was found.
    """
    if M.dim_tuple() != N.dim_tuple():
        return None
    if M.dim == 0:
        return {}
    if M.layering_tuple() != N.layering_tuple():
        return None
    H = hom_space(M, N)
    if not H:
        return None
    rng = rng or random.Random(12345)
    for _ in range(tries):
        f = combine_maps(H, [_rand_coeff(M.field, rng) for _ in H])
        if map_rank(M.field, f, M.dim) == M.dim:
            return f
    return None


def is_isomorphic(M: Module, N: Module, rng=None) -> bool:
    return find_isomorphism(M, N, rng) is not None


def kernel_of_map(M: Module, N: Module, f: dict) -> tuple[Module, dict]:
    cols = [f.get(k, {}) for k in range(M.dim)]
    vecs = kernel(M.field, cols)
    e = Echelon(M.field)
    for v in vecs:
        e.add(v)
    return submodule_from_echelon(M, e, "ker")


def image_echelon(N: Module, f: dict) -> Echelon:
    e = Echelon(N.field)
    for col in f.values():
        e.add(col)
    return e


def cokernel_of_map(M: Module, N: Module, f: dict) -> tuple[Module, dict]:
    return quotient_by_echelon(N, image_echelon(N, f), "coker")


def trace_of_map(f: dict) -> object:
    t = 0
    for k, col in f.items():
        x = col.get(k)
        if x is not None:
            t = t + x
    return t


def endomorphism_radical_dim(M: Module) -> int:
    """dim rad End(M) in characteristic 0 via the trace form tr(xy)."""
    E = hom_space(M, M)
    cols = []
    for x in E:
        col = {}
        for j, y in enumerate(E):
            t = trace_of_map(compose(x, y))
            if t != 0:
                col[j] = t
        cols.append(col)
    return len(kernel(M.field, cols))


def is_indecomposable(M: Module, rng: Optional[random.Random] = None, samples: int = 6) -> bool:
    """End(M) local, i.e. End(M)/rad = K.

    Characteristic 0 uses the trace-form radical.  Over GF(p) we fall back to
    Fitting's lemma on random endomorphisms: a power x^dim that is neither zero
    nor invertible splits M, otherwise M is reported indecomposable.
    """
    if M.dim == 0:
        return False
    E = hom_space(M, M)
    if M.field.characteristic == 0:
        return len(E) - endomorphism_radical_dim(M) == 1
    rng = rng or random.Random(777)
    for _ in range(samples):
        x = combine_maps(E, [M.field.random(rng) for _ in E])
        y = x
        for _ in range(M.dim.bit_length() + 1):
            y = compose(y, y)
        r = map_rank(M.field, y, M.dim)
        if 0 < r < M.dim:
            return False
    return True


def _scalar_part(M: Module, f: dict):
    """The unique eigenvalue of f when End(M) is local."""
    F = M.field
    if F.characteristic == 0:
        return trace_of_map(f) / F(M.dim)
    # Krylov minimal polynomial on one basis vector, root by search
    w = M.unit(0)
    e = Echelon(F, track=True)
    k = 0
    while True:
        rel = e.add_or_relation(w, k)
        if rel is not None:
            break
        w = apply(f, w)
        k += 1
    coeffs = [rel.get(i, F.zero) for i in range(k + 1)]
    for lam in range(F.p):
        x = F(lam)
        acc = F.zero
        for c in reversed(coeffs):
            acc = acc * x + c
        if acc == 0:
            return x
    raise ModuleError("endomorphism has no eigenvalue in the prime field")


def endomorphism_radical(M: Module) -> list[dict]:
    """Basis of rad End(M) for M with local endomorphism ring."""
    E = hom_space(M, M)
    ident = identity_map(M)
    out = []
    e = Echelon(M.field)
    for f in E:
        g = combine_maps([f, ident], [M.field.one, -_scalar_part(M, f)])
        flat = _flatten(g, M.dim)
        if flat and e.add(flat):
            out.append(g)
    return out


def _flatten(f: dict, n: int) -> dict:
    out = {}
    for k, col in f.items():
        for j, x in col.items():
            out[k * n + j] = x
    return out
