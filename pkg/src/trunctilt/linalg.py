"""Exact sparse linear algebra over a field.

Vectors are ``dict[int, scalar]`` without stored zeros.  Linear maps are
stored column-wise: ``{source_index: vector}`` so that applying a map to a
sparse vector touches only the columns that occur.
"""

from __future__ import annotations

import heapq
from typing import Iterable


def vadd(u: dict, v: dict, c=1) -> dict:
    """Return ``u + c*v`` as a new vector."""
    w = dict(u)
    for k, x in v.items():
        y = w.get(k)
        y = c * x if y is None else y + c * x
        if y == 0:
            w.pop(k, None)
        else:
            w[k] = y
    return w


def vadd_inplace(u: dict, v: dict, c=1) -> None:
    for k, x in v.items():
        y = u.get(k)
        y = c * x if y is None else y + c * x
        if y == 0:
            u.pop(k, None)
        else:
            u[k] = y


def vscale(v: dict, c) -> dict:
    if c == 0:
        return {}
    return {k: c * x for k, x in v.items()}


def vshift(v: dict, offset: int) -> dict:
    return {k + offset: x for k, x in v.items()}


def apply(cols: dict, v: dict) -> dict:
    """Apply a column-stored linear map to a sparse vector."""
    out: dict = {}
    for k, x in v.items():
        col = cols.get(k)
        if col:
            vadd_inplace(out, col, x)
    return out


def compose(g: dict, f: dict) -> dict:
    """Column-stored composite ``g o f`` (first f, then g)."""
    out = {}
    for k, col in f.items():
        img = apply(g, col)
        if img:
            out[k] = img
    return out


def lincomb(vectors: Iterable[dict], coeffs: Iterable) -> dict:
    out: dict = {}
    for v, c in zip(vectors, coeffs):
        if c != 0:
            vadd_inplace(out, v, c)
    return out


class Echelon:
    """Incrementally built echelon basis of a subspace.

    Each stored row is normalised to 1 at its pivot, which is its *largest*
    column index.  Reducing a vector removes every pivot column from it, so
    the residue is expressed in non-pivot coordinates only; quotient bases
    therefore favour small column indices.  With ``track=True`` every row
    also records the combination of inserted vectors (by tag) producing it.
    """

    def __init__(self, field, track: bool = False):
        self.field = field
        self.rows: dict[int, dict] = {}
        self.track = track
        self.combos: dict[int, dict] = {}

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def copy(self) -> "Echelon":
        e = Echelon(self.field, self.track)
        e.rows = dict(self.rows)
        e.combos = dict(self.combos)
        return e

    def _reduce(self, v: dict, combo: dict | None, coords: dict | None = None):
        rows = self.rows
        v = dict(v)
        heap = [-c for c in v if c in rows]
        heapq.heapify(heap)
        while heap:
            c = -heapq.heappop(heap)
            x = v.get(c)
            if x is None:
                continue
            for k, y in rows[c].items():
                z = v.get(k)
                if z is None:
                    v[k] = -x * y
                    if k in rows and k != c:
                        heapq.heappush(heap, -k)
                else:
                    z = z - x * y
                    if z == 0:
                        del v[k]
                    else:
                        v[k] = z
            if combo is not None:
                vadd_inplace(combo, self.combos[c], -x)
            if coords is not None:
                coords[c] = x
        return v

    def reduce(self, v: dict) -> dict:
        return self._reduce(v, None)

    def contains(self, v: dict) -> bool:
        return not self._reduce(v, None)

    def add(self, v: dict, tag=None) -> bool:
        """Insert ``v``; return True if it was independent of the span."""
        combo = {tag: self.field.one} if self.track else None
        r = self._reduce(v, combo)
        if not r:
            return False
        p = max(r)
        inv = self.field.one / r[p]
        self.rows[p] = {k: x * inv for k, x in r.items()}
        if self.track:
            self.combos[p] = vscale(combo, inv)
        return True

    def add_or_relation(self, v: dict, tag):
        """Insert ``v``; if dependent, return the vanishing combination."""
        combo = {tag: self.field.one}
        r = self._reduce(v, combo)
        if not r:
            return combo
        p = max(r)
        inv = self.field.one / r[p]
        self.rows[p] = {k: x * inv for k, x in r.items()}
        self.combos[p] = vscale(combo, inv)
        return None

    def express(self, v: dict):
        """Coordinates of ``v`` as a combination of inserted tags, or None."""
        combo: dict = {}
        r = self._reduce(v, combo)
        if r:
            return None
        return vscale(combo, -self.field.one)

    def coordinates(self, v: dict):
        """``{pivot: c}`` with v = sum c*rows[pivot], or None if v is outside."""
        coords: dict = {}
        if self._reduce(v, None, coords):
            return None
        return coords

    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def basis(self) -> list[dict]:
        return [self.rows[p] for p in sorted(self.rows)]


def span_basis(field, vectors: Iterable[dict]) -> Echelon:
    e = Echelon(field)
    for v in vectors:
        e.add(v)
    return e


def rank(field, vectors: Iterable[dict]) -> int:
    return span_basis(field, vectors).rank


def kernel(field, columns: list[dict], ncols: int | None = None) -> list[dict]:
    """Kernel basis of the map sending basis vector j to ``columns[j]``."""
    n = len(columns) if ncols is None else ncols
    e = Echelon(field, track=True)
    out = []
    for j in range(n):
        rel = e.add_or_relation(columns[j] if j < len(columns) else {}, j)
        if rel is not None:
            out.append(rel)
    return out


def image_rank(field, columns: list[dict]) -> int:
    return rank(field, columns)


def solve(field, columns: list[dict], b: dict):
    """A particular solution x with sum x_j columns[j] = b, or None."""
    e = Echelon(field, track=True)
    for j, c in enumerate(columns):
        e.add(c, j)
    return e.express(b)


def reduced_basis(field, vectors: Iterable[dict]) -> list[dict]:
    """Fully reduced echelon basis (each pivot appears in exactly one row)."""
    e = span_basis(field, vectors)
    piv = sorted(e.rows)
    rows = {}
    for p in piv:
        r = dict(e.rows[p])
        # remove other pivots below p
        changed = True
        while changed:
            changed = False
            for q in sorted((c for c in r if c in rows or (c in e.rows and c != p)), reverse=True):
                if q == p or q not in r:
                    continue
                src = rows.get(q, e.rows[q])
                vadd_inplace(r, src, -r[q])
                changed = True
                break
        rows[p] = r
    return [rows[p] for p in piv]


def complement_indices(field, subspace: Echelon, candidates: Iterable[tuple[object, dict]]):
    """Greedily pick candidates independent modulo ``subspace`` (in order)."""
    e = subspace.copy()
    e.track = False
    chosen = []
    for key, v in candidates:
        if e.add(v):
            chosen.append(key)
    return chosen


def dense_rank(field, matrix: list[list]) -> int:
    vecs = [{j: x for j, x in enumerate(row) if x != 0} for row in matrix]
    return rank(field, vecs)


def is_invertible_map(field, cols: dict, n: int) -> bool:
    if len(cols) < n:
        return False
    return rank(field, [cols.get(j, {}) for j in range(n)]) == n
