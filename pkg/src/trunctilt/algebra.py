"""Truncated path algebras KQ/(paths of length L+1)."""

from __future__ import annotations

from .fields import QQ
from .quiver import QPath, Quiver


class AlgebraError(ValueError):
    pass


class TruncatedAlgebra:
    """Path algebra of ``quiver`` modulo all paths of length ``t = L+1``.

    Elements are sparse dicts over ``basis`` (canonically ordered paths of
    length at most L).  Products follow the after convention: ``p*q`` first
    traverses q.
    """

    def __init__(self, quiver: Quiver, t: int, field=QQ):
        if t < 1:
            raise AlgebraError(f"truncation must be at least 1, got {t}")
        self.quiver = quiver
        self.t = t
        self.L = t - 1
        self.field = field
        self.basis: list[QPath] = quiver.paths(min_len=0, max_len=self.L)
        self.index = {p: k for k, p in enumerate(self.basis)}
        self.classification = quiver.classification()
        self.precyclic = self.classification.precyclic
        self.nonprecyclic = frozenset(v for v in quiver.vertices if v not in self.precyclic)
        self.paths_from = {v: [p for p in self.basis if p.start == v] for v in quiver.vertices}
        self.paths_to = {v: [p for p in self.basis if p.end == v] for v in quiver.vertices}

    def __repr__(self):
        return f"TruncatedAlgebra(n={self.quiver.n}, t={self.t}, dim={self.dim})"

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def vertices(self):
        return self.quiver.vertices

    def is_precyclic(self, v) -> bool:
        return v in self.precyclic

    def path_product(self, p: QPath, q: QPath):
        """p*q as a basis path, or None when it vanishes."""
        if q.end != p.start or p.length + q.length > self.L:
            return None
        return QPath(q.start, p.end, q.arrows + p.arrows)

    def element(self, terms: dict) -> dict:
        """Build an element from ``{path: coeff}``."""
        out = {}
        for p, c in terms.items():
            c = self.field(c)
            if c != 0:
                out[self.index[p]] = c
        return out

    def multiply(self, a: dict, b: dict) -> dict:
        out: dict = {}
        for i, x in a.items():
            p = self.basis[i]
            for j, y in b.items():
                r = self.path_product(p, self.basis[j])
                if r is None:
                    continue
                k = self.index[r]
                z = out.get(k, 0) + x * y
                if z == 0:
                    out.pop(k, None)
                else:
                    out[k] = z
        return out

    def idempotent(self, vertices) -> dict:
        one = self.field.one
        return {self.index[self.quiver.trivial(v)]: one for v in vertices}

    def epsilon(self) -> dict:
        """The idempotent summing e_i over non-precyclic vertices."""
        return self.idempotent([v for v in self.vertices if v not in self.precyclic])

    def one_minus_epsilon(self) -> dict:
        return self.idempotent([v for v in self.vertices if v in self.precyclic])

    def unit(self) -> dict:
        return self.idempotent(self.vertices)

    def element_str(self, a: dict) -> str:
        return format_combination(self.field, [(c, self.quiver.path_str(self.basis[i]))
                                               for i, c in sorted(a.items())])


def format_combination(field, terms) -> str:
    """Render ``[(coeff, label), ...]`` as ``a - 2*b + 1/3*c``."""
    if not terms:
        return "0"
    parts = []
    for k, (c, lab) in enumerate(terms):
        s = field.to_str(c)
        neg = s.startswith("-")
        mag = s[1:] if neg else s
        body = lab if mag == "1" else f"{mag}*{lab}"
        if k == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


def build_algebra(quiver: Quiver, t: int, field=QQ) -> TruncatedAlgebra:
    return TruncatedAlgebra(quiver, t, field)
