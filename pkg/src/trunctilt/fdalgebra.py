"""Basic finite-dimensional algebras given by structure constants.

The algebra product is ``mul(x, y) = x*y``; quiver arrows i -> j count
``dim e_j (J/J^2) e_i`` and paths read in the after convention, so the path
``b*a`` evaluates to ``lift(b) * lift(a)``.  Modules are left modules.
"""

from __future__ import annotations

import json
import re
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .fields import field_from_spec
from .linalg import Echelon, apply, compose, kernel, vadd_inplace, vscale
from .quiver import QPath, Quiver


class FDAlgebraError(ValueError):
    pass


class FDAlgebra:
    def __init__(self, field, labels: list, table: dict, idempotents: list, vertices: list,
                 unit: Optional[dict] = None, name: str = ""):
        self.field = field
        self.labels = list(labels)
        self.n = len(self.labels)
        self.table = {k: dict(v) for k, v in table.items() if v}
        self.idempotents = [dict(e) for e in idempotents]
        self.vertices = list(vertices)
        self.vindex = {v: i for i, v in enumerate(self.vertices)}
        if unit is None:
            unit = {}
            for e in self.idempotents:
                vadd_inplace(unit, e)
        self.unit = unit
        self.name = name
        self._cache: dict = {}
        self._peirce()

    def __repr__(self):
        return f"FDAlgebra({self.name or '?'}, dim={self.n}, vertices={len(self.vertices)})"

    @property
    def dim(self) -> int:
        return self.n

    # ---------------------------------------------------------- products
    def mul_basis(self, i: int, j: int) -> dict:
        return self.table.get((i, j), {})

    def mul(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                w = self.table.get((i, j))
                if w:
                    vadd_inplace(out, w, a * b)
        return out

    def _peirce(self):
        """Record (left, right) vertex of each basis element when homogeneous."""
        self.block = []
        for b in range(self.n):
            unit_b = {b: self.field.one}
            lv = rv = None
            for i, e in enumerate(self.idempotents):
                if self.mul(e, unit_b) == unit_b:
                    lv = i
                if self.mul(unit_b, e) == unit_b:
                    rv = i
            self.block.append((lv, rv))
        self.homogeneous = all(lv is not None and rv is not None for lv, rv in self.block)

    def block_basis(self, j: int, i: int) -> list[int]:
        """Basis indices spanning e_j A e_i (requires a Peirce basis)."""
        return [b for b, (lv, rv) in enumerate(self.block) if lv == j and rv == i]

    def check(self, full: bool = True) -> None:
        F = self.field
        one = F.one
        s = {}
        for e in self.idempotents:
            vadd_inplace(s, e)
        if s != self.unit:
            raise FDAlgebraError("idempotents do not sum to the unit")
        for a, e in enumerate(self.idempotents):
            for b, f in enumerate(self.idempotents):
                p = self.mul(e, f)
                if p != (e if a == b else {}):
                    raise FDAlgebraError("idempotents are not orthogonal")
        for b in range(self.n):
            u = {b: one}
            if self.mul(self.unit, u) != u or self.mul(u, self.unit) != u:
                raise FDAlgebraError("unit law fails")
        if full:
            for i in range(self.n):
                for j in range(self.n):
                    ij = self.table.get((i, j))
                    for k in range(self.n):
                        lhs = self.mul(ij, {k: one}) if ij else {}
                        jk = self.table.get((j, k))
                        rhs = self.mul({i: one}, jk) if jk else {}
                        if lhs != rhs:
                            raise FDAlgebraError(f"associativity fails on ({i},{j},{k})")

    # ----------------------------------------------------------- radical
    def radical(self) -> Echelon:
        if "rad" in self._cache:
            return self._cache["rad"]
        if self.field.characteristic == 0:
            J = self._radical_trace()
        else:
            J = self._radical_peirce()
        self._verify_radical(J)
        self._cache["rad"] = J
        return J

    def _radical_trace(self) -> Echelon:
        """Kernel of the trace form (x, y) -> tr(L_{xy}), valid in characteristic 0."""
        tr = []
        for k in range(self.n):
            t = self.field.zero
            for b in range(self.n):
                x = self.table.get((k, b), {}).get(b)
                if x is not None:
                    t = t + x
            tr.append(t)
        cols = []
        for i in range(self.n):
            col = {}
            for j in range(self.n):
                w = self.table.get((i, j))
                if w:
                    t = sum((c * tr[k] for k, c in w.items()), self.field.zero)
                    if t != 0:
                        col[j] = t
            cols.append(col)
        J = Echelon(self.field)
        for v in kernel(self.field, cols):
            J.add(v)
        return J

    def _radical_peirce(self) -> Echelon:
        """Radical of a basic split algebra from its Peirce blocks.

        Off-diagonal blocks lie in J; in the local ring e_i A e_i an element
        x has scalar part read from x^(p^s), which equals lambda*e_i once p^s
        exceeds the nilpotency index.
        """
        if not self.homogeneous:
            raise FDAlgebraError("radical fallback needs a Peirce-homogeneous basis")
        F = self.field
        J = Echelon(F)
        for b, (lv, rv) in enumerate(self.block):
            if lv != rv:
                J.add({b: F.one})
        q = F.characteristic
        steps = 1
        while q ** steps < self.n + 1:
            steps += 1
        for i, e in enumerate(self.idempotents):
            k0, c0 = next(iter(e.items()))
            for b in self.block_basis(i, i):
                x = {b: F.one}
                y = x
                for _ in range(steps):
                    acc = y
                    for _ in range(q - 1):
                        acc = self.mul(acc, y)
                    y = acc
                lam = y.get(k0, F.zero) / c0
                if vscale(e, lam) != y:
                    raise FDAlgebraError("e_i A e_i is not local with residue field K")
                r = dict(x)
                vadd_inplace(r, e, -lam)
                if r:
                    J.add(r)
        return J

    def _verify_radical(self, J: Echelon) -> None:
        # two-sided ideal, nilpotent, semisimple quotient of dimension n_vertices
        for row in J.basis():
            for b in range(self.n):
                u = {b: self.field.one}
                if not J.contains(self.mul(u, row)) or not J.contains(self.mul(row, u)):
                    raise FDAlgebraError("radical candidate is not an ideal")
        if self.radical_powers_of(J)[-1].rank != 0:
            raise FDAlgebraError("radical candidate is not nilpotent")
        if self.n - J.rank != len(self.idempotents):
            raise FDAlgebraError("algebra is not basic with split simples")

    def radical_powers_of(self, J: Echelon) -> list[Echelon]:
        A = Echelon(self.field)
        for b in range(self.n):
            A.add({b: self.field.one})
        powers = [A, J]
        cur = J
        for _ in range(self.n + 1):
            if cur.rank == 0:
                break
            nxt = Echelon(self.field)
            for x in cur.basis():
                for y in J.basis():
                    p = self.mul(x, y)
                    if p:
                        nxt.add(p)
            if nxt.rank == cur.rank:
                break
            powers.append(nxt)
            cur = nxt
        return powers

    def radical_powers(self) -> list[Echelon]:
        """[A, J, J^2, ..., 0]."""
        if "pow" not in self._cache:
            self._cache["pow"] = self.radical_powers_of(self.radical())
        return self._cache["pow"]

    def loewy_length(self) -> int:
        """Nilpotency degree of J (smallest N with J^N = 0)."""
        return len(self.radical_powers()) - 1

    def block_of(self, j: int, E: Echelon, i: int) -> Echelon:
        """e_j S e_i for a two-sided ideal S."""
        out = Echelon(self.field)
        ej, ei = self.idempotents[j], self.idempotents[i]
        for row in E.basis():
            w = self.mul(self.mul(ej, row), ei)
            if w:
                out.add(w)
        return out

    # --------------------------------------------------- quiver & relations
    def gabriel_quiver(self, names: Optional[dict] = None) -> "QuiverWithRelations":
        pw = self.radical_powers()
        J = pw[1]
        J2 = pw[2] if len(pw) > 2 else Echelon(self.field)
        arrows, lifts = [], []
        counter = 0
        for i in range(len(self.vertices)):
            for j in range(len(self.vertices)):
                Bj = self.block_of(j, J, i)
                B2 = self.block_of(j, J2, i)
                e = B2.copy()
                found = []
                for row in Bj.basis():
                    r = e.reduce(row)
                    if r and e.add(r):
                        found.append(r)
                for k, r in enumerate(found):
                    counter += 1
                    key = (self.vertices[i], self.vertices[j], k)
                    nm = names.get(key) if names else None
                    arrows.append((nm or f"x{counter}", self.vertices[i], self.vertices[j]))
                    lifts.append(r)
        if not self._is_basic():
            raise FDAlgebraError("algebra is not basic")
        quiver = Quiver(self.vertices, arrows)
        return QuiverWithRelations(self, quiver, lifts)

    def _is_basic(self) -> bool:
        # projectives A e_i pairwise non-isomorphic: their tops are distinct simples
        return self.n - self.radical().rank == len(self.vertices)

    # --------------------------------------------------------- modules
    def projective(self, i) -> "FDModule":
        """Left projective A e_i (basis: basis elements in the column block i)."""
        iv = self.vindex[i] if i in self.vindex else i
        if not self.homogeneous:
            raise FDAlgebraError("projectives need a Peirce-homogeneous basis")
        idx = [b for b, (lv, rv) in enumerate(self.block) if rv == iv]
        pos = {b: t for t, b in enumerate(idx)}
        act = {}
        for x in range(self.n):
            cols = {}
            for t, b in enumerate(idx):
                w = self.table.get((x, b))
                if w:
                    cols[t] = {pos[k]: c for k, c in w.items()}
            act[x] = cols
        return FDModule(self, [self.vertices[self.block[b][0]] for b in idx], act,
                        name=f"P~{self.vertices[iv]}")

    def simple(self, i) -> "FDModule":
        """Top of A e_i (the idempotent must act as the identity)."""
        P = self.projective(i)
        S, _ = fd_quotient(P, P.radical_series()[1], f"S~{i}")
        return S

    def regular(self) -> "FDModule":
        return direct_sum_fd([self.projective(v) for v in self.vertices])

    def to_json(self) -> dict:
        F = self.field
        return {
            "field": F.name,
            "basis": self.labels,
            "vertices": [str(v) for v in self.vertices],
            "idempotents": [{str(k): F.to_str(c) for k, c in e.items()} for e in self.idempotents],
            "products": [[i, j, k, F.to_str(c)] for (i, j), w in sorted(self.table.items())
                         for k, c in sorted(w.items())],
        }

    @classmethod
    def from_json(cls, data: dict, field=None) -> "FDAlgebra":
        F = field or field_from_spec(data.get("field", "q"))
        labels = list(data["basis"])
        table: dict = {}
        for i, j, k, c in data.get("products", []):
            x = F(str(c))
            if x != 0:
                table.setdefault((int(i), int(j)), {})[int(k)] = x
        idems = []
        for e in data["idempotents"]:
            if isinstance(e, dict):
                idems.append({int(k): F(str(c)) for k, c in e.items()})
            else:
                idems.append({int(k): F.one for k in e})
        vertices = [_maybe_int(v) for v in data.get("vertices", range(1, len(idems) + 1))]
        alg = cls(F, labels, table, idems, vertices)
        if not alg.homogeneous:
            alg = alg.peirce_rebase()
        return alg

    def peirce_rebase(self) -> "FDAlgebra":
        """Equivalent algebra on a basis adapted to the Peirce decomposition."""
        F = self.field
        new = []
        labels = []
        for j, ej in enumerate(self.idempotents):
            for i, ei in enumerate(self.idempotents):
                e = Echelon(F)
                for b in range(self.n):
                    w = self.mul(self.mul(ej, {b: F.one}), ei)
                    if w and e.add(w):
                        new.append(w)
                        labels.append(f"{self.vertices[j]}<-{self.vertices[i]}#{len(labels)}")
        if len(new) != self.n:
            raise FDAlgebraError("idempotents do not give a Peirce decomposition")
        ech = Echelon(F, track=True)
        for t, w in enumerate(new):
            ech.add(w, t)
        table = {}
        for a, x in enumerate(new):
            for b, y in enumerate(new):
                p = self.mul(x, y)
                if p:
                    table[(a, b)] = ech.express(p)
        idems = [ech.express(e) for e in self.idempotents]
        return FDAlgebra(F, labels, table, idems, self.vertices, name=self.name)


def _maybe_int(v):
    try:
        return int(v)
    except (TypeError, ValueError):
        return v


# ---------------------------------------------------------------------------

@dataclass
class QuiverWithRelations:
    algebra: FDAlgebra
    quiver: Quiver
    lifts: list
    relations: list = field(default_factory=list)  # list of {QPath: coeff}
    N: int = 0

    def evaluate_paths(self, max_len: int) -> tuple[list, dict]:
        """Images in the algebra of all paths of length <= max_len."""
        A = self.algebra
        paths = self.quiver.paths(max_len=max_len)
        img = {}
        for p in paths:
            if not p.arrows:
                img[p] = dict(A.idempotents[A.vindex[p.start]])
            else:
                prev = img[_prefix(self.quiver, p)]
                img[p] = A.mul(self.lifts[p.arrows[-1]], prev) if prev else {}
        return paths, img

    def compute_relations(self) -> list:
        A = self.algebra
        N = A.loewy_length()
        self.N = N
        paths, img = self.evaluate_paths(N)
        pidx = {p: k for k, p in enumerate(paths)}
        K = kernel(A.field, [img[p] for p in paths])
        if len(paths) - len(K) != A.n:
            raise FDAlgebraError("arrow lifts do not generate the algebra")
        W = Echelon(A.field)
        for k in K:
            for w in _arrow_multiples(self.quiver, paths, pidx, k, N):
                W.add(w)
        Kech = Echelon(A.field)
        for k in K:
            Kech.add(k)
        gens = []
        e = W.copy()
        for row in Kech.basis():
            r = e.reduce(row)
            if r and e.add(r):
                gens.append(r)
        # fully reduce the generators against each other and normalise monic
        gens = _interreduce(A.field, gens)
        rels = []
        for g in gens:
            rels.append({paths[k]: c for k, c in g.items()})
        rels.sort(key=lambda r: _rel_key(self.quiver, r))
        self.relations = rels
        return rels

    def relation_strings(self) -> list[str]:
        from .algebra import format_combination

        F = self.algebra.field
        q = self.quiver
        out = []
        for r in self.relations:
            items = sorted(r.items(), key=lambda t: q.path_key(t[0]), reverse=True)
            out.append(format_combination(F, [(c, q.path_str(p)) for p, c in items]))
        return out

    def to_text(self) -> str:
        lines = [self.quiver.to_text().rstrip("\n")]
        lines += [f"relation: {s}" for s in self.relation_strings()]
        return "\n".join(lines) + "\n"


def _rel_key(q: Quiver, r: dict):
    lead = max(r, key=q.path_key)
    return q.path_key(lead)


def _prefix(q: Quiver, p: QPath) -> QPath:
    if len(p.arrows) == 1:
        return QPath(p.start, p.start, ())
    return QPath(p.start, q.arrows[p.arrows[-2]].target, p.arrows[:-1])


def _arrow_multiples(q: Quiver, paths, pidx, vec: dict, N: int):
    """a*vec and vec*a for every arrow a, dropping paths longer than N."""
    out = []
    for a in range(len(q.arrows)):
        left, right = {}, {}
        for k, c in vec.items():
            p = paths[k]
            if p.length + 1 > N:
                continue
            lp = q.extend(p, a)
            if lp is not None:
                left[pidx[lp]] = left.get(pidx[lp], 0) + c
            arr = q.arrows[a]
            if arr.target == p.start:
                rp = QPath(arr.source, p.end, (a,) + p.arrows)
                right[pidx[rp]] = right.get(pidx[rp], 0) + c
        for w in (left, right):
            w = {k: x for k, x in w.items() if x != 0}
            if w:
                out.append(w)
    return out


def _interreduce(F, vecs: list[dict]) -> list[dict]:
    e = Echelon(F)
    for v in vecs:
        e.add(v)
    rows = {}
    for p in sorted(e.rows):
        r = dict(e.rows[p])
        for q in sorted((c for c in r if c in rows and c != p), reverse=True):
            if q in r:
                vadd_inplace(r, rows[q], -r[q])
        rows[p] = r
    out = []
    for p in sorted(rows):
        r = rows[p]
        out.append(vscale(r, F.one / r[p]))
    return out


def ideal_closure(q: Quiver, paths, pidx, gens: Iterable[dict], N: int, field) -> Echelon:
    """Two-sided ideal generated by ``gens`` inside paths of length <= N (truncated)."""
    I = Echelon(field)
    queue = []
    for g in gens:
        # split by (start, end) so that the span is stable
        parts: dict = {}
        for k, c in g.items():
            p = paths[k]
            parts.setdefault((p.start, p.end), {})[k] = c
        for part in parts.values():
            if I.add(part):
                queue.append(part)
    while queue:
        v = queue.pop()
        for w in _arrow_multiples(q, paths, pidx, v, N):
            if I.add(w):
                queue.append(w)
    return I


def degree_dimensions(q: Quiver, paths, I: Echelon, N: int, field) -> list[int]:
    """dim of (paths of length >= d) + I modulo I, for d = 0..N."""
    out = []
    for d in range(N + 1):
        e = I.copy()
        for k, p in enumerate(paths):
            if p.length >= d:
                e.add({k: field.one})
        out.append(e.rank - I.rank)
    return out


def algebra_from_quiver_relations(q: Quiver, relations: list, field, max_len: int,
                                  name: str = "") -> FDAlgebra:
    """KQ/I where I is generated by ``relations`` and all paths of length max_len."""
    paths = q.paths(max_len=max_len)
    pidx = {p: k for k, p in enumerate(paths)}
    gens = [{pidx[p]: field(c) for p, c in r.items()} for r in relations]
    gens += [{k: field.one} for k, p in enumerate(paths) if p.length == max_len]
    I = ideal_closure(q, paths, pidx, gens, max_len, field)
    keep = [k for k in range(len(paths)) if k not in I.rows]
    pos = {k: t for t, k in enumerate(keep)}

    def residue(vec):
        return {pos[k]: x for k, x in I.reduce(vec).items()}

    table = {}
    for a, ka in enumerate(keep):
        for b, kb in enumerate(keep):
            r = q.concat(paths[ka], paths[kb])
            if r is None or r.length > max_len:
                continue
            w = residue({pidx[r]: field.one})
            if w:
                table[(a, b)] = w
    idems = [residue({pidx[q.trivial(v)]: field.one}) for v in q.vertices]
    labels = [q.path_str(paths[k]) for k in keep]
    alg = FDAlgebra(field, labels, table, idems, q.vertices, name=name)
    alg.path_basis = [paths[k] for k in keep]
    return alg


def is_truncated(q: Quiver, relations: list, field, max_len: int = 8):
    """Return t if KQ/I equals the truncated algebra KQ/(paths of length t), else None."""
    paths = q.paths(max_len=max_len)
    pidx = {p: k for k, p in enumerate(paths)}
    gens = [{pidx[p]: field(c) for p, c in r.items()} for r in relations]
    I = ideal_closure(q, paths, pidx, gens, max_len, field)
    for t in range(1, max_len + 1):
        mono = Echelon(field)
        for k, p in enumerate(paths):
            if p.length >= t:
                mono.add({k: field.one})
        if mono.rank == I.rank and all(mono.contains(r) for r in I.basis()):
            return t
    return None


# ---------------------------------------------------------------- modules

class FDModule:
    """Left module over an FDAlgebra with action matrices for each basis element.

    Every basis vector sits at one vertex (e_v m = m).
    """

    def __init__(self, alg: FDAlgebra, vertex_of: list, act: dict, name: str = ""):
        self.alg = alg
        self.field = alg.field
        self.vertex_of = list(vertex_of)
        self.act = {x: dict(act.get(x, {})) for x in range(alg.n)}
        self.name = name
        self._cache: dict = {}

    @property
    def dim(self) -> int:
        return len(self.vertex_of)

    def __repr__(self):
        return f"FDModule({self.name or '?'}, dim={self.dim})"

    def unit(self, k):
        return {k: self.field.one}

    def dim_vector(self) -> dict:
        c = Counter(self.vertex_of)
        return {v: c.get(v, 0) for v in self.alg.vertices}

    def dim_tuple(self):
        c = Counter(self.vertex_of)
        return tuple(c.get(v, 0) for v in self.alg.vertices)

    def basis_at(self, v):
        return [k for k, w in enumerate(self.vertex_of) if w == v]

    def act_element(self, x: dict, vec: dict) -> dict:
        out: dict = {}
        for b, c in x.items():
            w = apply(self.act[b], vec)
            if w:
                vadd_inplace(out, w, c)
        return out

    def homogeneous_parts(self, vec):
        parts: dict = {}
        for k, x in vec.items():
            parts.setdefault(self.vertex_of[k], {})[k] = x
        return [parts[v] for v in self.alg.vertices if v in parts]

    def _rad_gens(self):
        return [r for r in self.alg.radical().basis()]

    def radical_series(self) -> list[Echelon]:
        if "rad" not in self._cache:
            J = self._rad_gens()
            cur = Echelon(self.field)
            for k in range(self.dim):
                cur.add(self.unit(k))
            series = [cur]
            while cur.rank:
                nxt = Echelon(self.field)
                for v in cur.basis():
                    for r in J:
                        w = self.act_element(r, v)
                        if w:
                            nxt.add(w)
                series.append(nxt)
                cur = nxt
            self._cache["rad"] = series
        return self._cache["rad"]

    def radical_layering(self) -> list[dict]:
        s = self.radical_series()
        out = []
        for l in range(len(s) - 1):
            d = {}
            for v in self.alg.vertices:
                a = sum(1 for p in s[l].rows if self.vertex_of[p] == v)
                b = sum(1 for p in s[l + 1].rows if self.vertex_of[p] == v)
                d[v] = a - b
            out.append(d)
        return out

    def layering_tuple(self):
        return tuple(tuple(d[v] for v in self.alg.vertices) for d in self.radical_layering())

    def top_indices(self) -> list[int]:
        if "top" not in self._cache:
            s = self.radical_series()
            e = s[1].copy() if len(s) > 1 else Echelon(self.field)
            self._cache["top"] = [k for k in range(self.dim) if e.add(self.unit(k))]
        return self._cache["top"]

    def top_vector(self) -> dict:
        c = Counter(self.vertex_of[k] for k in self.top_indices())
        return {v: c.get(v, 0) for v in self.alg.vertices}

    def socle_basis(self) -> list[dict]:
        J = self._rad_gens()
        out = []
        for v in self.alg.vertices:
            idx = self.basis_at(v)
            cols = []
            for k in idx:
                col = {}
                for t, r in enumerate(J):
                    for j, x in self.act_element(r, self.unit(k)).items():
                        col[t * self.dim + j] = x
                cols.append(col)
            for rel in kernel(self.field, cols):
                out.append({idx[t]: x for t, x in rel.items()})
        return out

    def socle_vector(self) -> dict:
        c = Counter(self.vertex_of[next(iter(v))] for v in self.socle_basis())
        return {v: c.get(v, 0) for v in self.alg.vertices}

    def cover(self):
        """(P, images) with P = sum_r A e_{v_r} mapping onto M by b -> b*g_r."""
        if "cover" not in self._cache:
            top = self.top_indices()
            parts = [self.alg.projective(self.vertex_of[k]) for k in top]
            P = direct_sum_fd(parts) if parts else FDModule(self.alg, [], {}, "0")
            images = []
            for r, (k, Pk) in enumerate(zip(top, parts)):
                iv = self.alg.vindex[self.vertex_of[k]]
                idx = [b for b, (lv, rv) in enumerate(self.alg.block) if rv == iv]
                for b in idx:
                    images.append(apply(self.act[b], self.unit(k)))
            self._cache["cover"] = (P, images)
        return self._cache["cover"]

    def check(self) -> None:
        A = self.alg
        one = self.field.one
        for x in range(A.n):
            for y in range(A.n):
                xy = A.mul_basis(x, y)
                for k in range(self.dim):
                    lhs = self.act_element(xy, self.unit(k)) if xy else {}
                    rhs = apply(self.act[x], apply(self.act[y], self.unit(k)))
                    if lhs != rhs:
                        raise FDAlgebraError("module action is not associative")
        for k in range(self.dim):
            if self.act_element(A.unit, self.unit(k)) != self.unit(k):
                raise FDAlgebraError("module action is not unital")


def direct_sum_fd(mods: list[FDModule], name: str = "") -> FDModule:
    alg = mods[0].alg
    vertex_of = []
    act = {x: {} for x in range(alg.n)}
    for M in mods:
        off = len(vertex_of)
        vertex_of.extend(M.vertex_of)
        for x, cols in M.act.items():
            for k, col in cols.items():
                act[x][k + off] = {j + off: c for j, c in col.items()}
    return FDModule(alg, vertex_of, act, name)


def fd_submodule_echelon(M: FDModule, gens) -> Echelon:
    e = Echelon(M.field)
    queue = []
    for g in gens:
        for part in M.homogeneous_parts(g):
            if e.add(part):
                queue.append(part)
    A = M.alg
    while queue:
        v = queue.pop()
        for x in range(A.n):
            w = apply(M.act[x], v)
            if w and e.add(w):
                queue.append(w)
    return e


def fd_submodule(M: FDModule, e: Echelon, name: str = "") -> tuple[FDModule, dict]:
    piv = e.pivots()
    pos = {p: t for t, p in enumerate(piv)}
    act = {x: {} for x in range(M.alg.n)}
    for t, p in enumerate(piv):
        row = e.rows[p]
        for x in range(M.alg.n):
            w = apply(M.act[x], row)
            if w:
                co = e.coordinates(w)
                if co is None:
                    raise FDAlgebraError("subspace is not a submodule")
                act[x][t] = {pos[c]: y for c, y in co.items()}
    return FDModule(M.alg, [M.vertex_of[p] for p in piv], act, name), {t: dict(e.rows[p]) for t, p in enumerate(piv)}


def fd_quotient(M: FDModule, e: Echelon, name: str = "") -> tuple[FDModule, dict]:
    keep = [k for k in range(M.dim) if k not in e.rows]
    pos = {k: t for t, k in enumerate(keep)}

    def relabel(v):
        return {pos[k]: x for k, x in e.reduce(v).items()}

    act = {x: {} for x in range(M.alg.n)}
    for t, k in enumerate(keep):
        for x in range(M.alg.n):
            w = M.act[x].get(k)
            if w:
                r = relabel(w)
                if r:
                    act[x][t] = r
    proj = {k: relabel(M.unit(k)) for k in range(M.dim)}
    return FDModule(M.alg, [M.vertex_of[k] for k in keep], act, name), {k: v for k, v in proj.items() if v}


def fd_syzygy(M: FDModule) -> FDModule:
    P, images = M.cover()
    vecs = kernel(M.field, images, P.dim)
    e = Echelon(M.field)
    for v in vecs:
        e.add(v)
    Om, _ = fd_submodule(P, e, f"Omega({M.name})")
    return Om


def _generators(alg: FDAlgebra) -> list[dict]:
    """Idempotents are implicit in vertex labels; the radical basis generates the rest."""
    return alg.radical().basis()


def fd_hom_space(M: FDModule, N: FDModule) -> list[dict]:
    """Basis of vertex-preserving maps commuting with the radical action."""
    unknowns = []
    for k in range(M.dim):
        for j in N.basis_at(M.vertex_of[k]):
            unknowns.append((k, j))
    gens = _generators(M.alg)
    cols = []
    nd = N.dim
    for (k, j) in unknowns:
        col: dict = {}
        # f(r m_k) - r f(m_k): contribution of unknown (k, j)
        for t, r in enumerate(gens):
            base = t * M.dim * nd
            # term -r*f(m_k): f(m_k) has n_j with coefficient x_kj
            for jj, c in N.act_element(r, N.unit(j)).items():
                key = base + k * nd + jj
                col[key] = col.get(key, 0) - c
            # term f(r m_k): r m_k = sum_s c_s m_s, contributes where s = k
        cols.append(col)
    # add f(r m_s) contributions: for each t, s with (r m_s) having coefficient at k
    for t, r in enumerate(gens):
        base = t * M.dim * nd
        for s in range(M.dim):
            rm = M.act_element(r, M.unit(s))
            for k, c in rm.items():
                for u, (kk, jj) in enumerate(unknowns):
                    if kk == k:
                        key = base + s * nd + jj
                        cols[u][key] = cols[u].get(key, 0) + c
    cols = [{k: v for k, v in c.items() if v != 0} for c in cols]
    sols = kernel(M.field, cols)
    out = []
    for s in sols:
        f: dict = {}
        for u, x in s.items():
            k, j = unknowns[u]
            f.setdefault(k, {})[j] = x
        out.append(f)
    return out


def fd_find_isomorphism(M: FDModule, N: FDModule, rng=None, tries: int = 4):
    from .modules import combine_maps, map_rank, _rand_coeff

    if M.dim_tuple() != N.dim_tuple():
        return None
    if M.dim == 0:
        return {}
    if M.layering_tuple() != N.layering_tuple():
        return None
    H = fd_hom_space(M, N)
    if not H:
        return None
    rng = rng or random.Random(4242)
    for _ in range(tries):
        f = combine_maps(H, [_rand_coeff(M.field, rng) for _ in H])
        if map_rank(M.field, f, M.dim) == M.dim:
            return f
    return None


@dataclass
class FDPdim:
    value: int
    exceeds_bound: bool = False
    periodic: bool = False

    @property
    def finite(self):
        return not (self.exceeds_bound or self.periodic)

    def __str__(self):
        if self.periodic:
            return "inf (periodic syzygies)"
        if self.exceeds_bound:
            return f">{self.value} (bound exceeded)"
        return str(self.value)

    def to_json(self):
        if self.periodic:
            return None
        if self.exceeds_bound:
            return {"exceeds_bound": self.value}
        return self.value


def fd_pdim(M: FDModule, bound: Optional[int] = None) -> FDPdim:
    """Projective dimension by explicit minimal resolution.

    Infinite dimension is only certified when a syzygy repeats up to
    isomorphism; otherwise the search stops at ``bound`` (default dim A).
    """
    bound = M.alg.n if bound is None else bound
    if M.dim == 0:
        return FDPdim(0)
    seen = []
    X = M
    for k in range(bound + 1):
        Om = fd_syzygy(X)
        if Om.dim == 0:
            return FDPdim(k)
        for Y in seen:
            if fd_find_isomorphism(Y, Om) is not None:
                return FDPdim(k, periodic=True)
        seen.append(Om)
        X = Om
    return FDPdim(bound, exceeds_bound=True)


def is_projective_fd(M: FDModule) -> bool:
    return M.dim == 0 or fd_syzygy(M).dim == 0


def load_fdalgebra(text: str, field=None) -> FDAlgebra:
    return FDAlgebra.from_json(json.loads(text), field)


# ------------------------------------------------------------ relations I/O

_TERM = re.compile(r"\s*([+-]?)\s*([^+-]+)")


def parse_relation(q: Quiver, text: str, field) -> dict:
    """Parse ``e*b*a - s*r`` or ``2*x1 + 1/3*x2*x3`` into {QPath: coeff}."""
    out: dict = {}
    text = text.strip()
    if not text:
        raise FDAlgebraError("empty relation")
    pos = 0
    for m in _TERM.finditer(text):
        if m.start() != pos:
            raise FDAlgebraError(f"cannot parse relation {text!r}")
        pos = m.end()
        sign, body = m.group(1), m.group(2).strip()
        coeff = field.one
        factors = [f.strip() for f in body.split("*")]
        names = []
        for f in factors:
            if f in q.aindex or names:
                names.append(f)
            else:
                try:
                    coeff = coeff * field(f)
                except (ValueError, ZeroDivisionError):
                    names.append(f)
        if sign == "-":
            coeff = -coeff
        p = q.parse_path("*".join(names)) if names else None
        if p is None:
            raise FDAlgebraError(f"term {body!r} has no path")
        out[p] = out.get(p, field.zero) + coeff
    if pos != len(text):
        raise FDAlgebraError(f"cannot parse relation {text!r}")
    return {p: c for p, c in out.items() if c != 0}


def rename_arrows(rel: dict, src: Quiver, dst: Quiver, mapping: dict) -> dict:
    """Transport a relation along an arrow-name mapping src -> dst."""
    out = {}
    for p, c in rel.items():
        if p.arrows:
            out[dst.path([mapping[src.arrows[a].name] for a in p.arrows])] = c
        else:
            out[dst.trivial(p.start)] = c
    return out


def arrow_correspondence(a: Quiver, b: Quiver):
    """Name mapping a -> b when both quivers have the same arrows without multiplicity."""
    ka = Counter((x.source, x.target) for x in a.arrows)
    kb = Counter((x.source, x.target) for x in b.arrows)
    if ka != kb or any(n > 1 for n in ka.values()):
        return None
    by = {(x.source, x.target): x.name for x in b.arrows}
    return {x.name: by[(x.source, x.target)] for x in a.arrows}


def compare_ideals(q: Quiver, rels_a: list, rels_b: list, M: int, field) -> dict:
    """Two-sided containment and degreewise dimensions of two relation ideals.

    Both ideals are closed inside the span of paths of length <= M, with
    longer terms dropped.
    """
    paths = q.paths(max_len=M)
    pidx = {p: k for k, p in enumerate(paths)}

    def vec(r):
        return {pidx[p]: c for p, c in r.items()}

    Ia = ideal_closure(q, paths, pidx, [vec(r) for r in rels_a], M, field)
    Ib = ideal_closure(q, paths, pidx, [vec(r) for r in rels_b], M, field)
    a_in_b = [Ib.contains(vec(r)) for r in rels_a]
    b_in_a = [Ia.contains(vec(r)) for r in rels_b]
    da = degree_dimensions(q, paths, Ia, M, field)
    db = degree_dimensions(q, paths, Ib, M, field)
    return {"a_in_b": a_in_b, "b_in_a": b_in_a, "dims_a": da, "dims_b": db,
            "equal": all(a_in_b) and all(b_in_a) and da == db}
