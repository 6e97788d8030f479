"""Quivers, paths and the precyclic/postcyclic vertex classification."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional


class QuiverError(ValueError):
    pass


class DuplicateArrowName(QuiverError):
    pass


class UndeclaredVertex(QuiverError):
    pass


class ParseError(QuiverError):
    def __init__(self, msg, line=None, col=None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {col}" if col is not None else "") + ": "
        super().__init__(where + msg)


@dataclass(frozen=True)
class Arrow:
    name: str
    source: object
    target: object


@dataclass(frozen=True)
class QPath:
    """A path given by its start vertex and arrow indices in traversal order."""

    start: object
    end: object
    arrows: tuple = ()

    @property
    def length(self) -> int:
        return len(self.arrows)


class Quiver:
    def __init__(self, vertices: Iterable, arrows: Iterable[tuple] = ()):
        self.vertices = list(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertex id")
        self.vindex = {v: i for i, v in enumerate(self.vertices)}
        self.arrows: list[Arrow] = []
        self.aindex: dict[str, int] = {}
        for a in arrows:
            name, s, t = (a.name, a.source, a.target) if isinstance(a, Arrow) else a
            if name in self.aindex:
                raise DuplicateArrowName(f"duplicate arrow name {name!r}")
            for v in (s, t):
                if v not in self.vindex:
                    raise UndeclaredVertex(f"arrow {name!r} uses undeclared vertex {v!r}")
            self.aindex[name] = len(self.arrows)
            self.arrows.append(Arrow(name, s, t))
        self.out_arrows = {v: [] for v in self.vertices}
        self.in_arrows = {v: [] for v in self.vertices}
        for k, a in enumerate(self.arrows):
            self.out_arrows[a.source].append(k)
            self.in_arrows[a.target].append(k)
        self._cls = None

    def __repr__(self):
        return f"Quiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"

    def __eq__(self, other):
        return (isinstance(other, Quiver) and self.vertices == other.vertices
                and self.arrows == other.arrows)

    def __hash__(self):
        return hash((tuple(self.vertices), tuple(self.arrows)))

    @property
    def n(self) -> int:
        return len(self.vertices)

    def trivial(self, v) -> QPath:
        return QPath(v, v, ())

    def path(self, arrows: Iterable) -> QPath:
        """Path from arrow indices or names listed in traversal order."""
        idx = [self.aindex[a] if isinstance(a, str) else a for a in arrows]
        if not idx:
            raise QuiverError("use trivial() for length-zero paths")
        for a, b in zip(idx, idx[1:]):
            if self.arrows[a].target != self.arrows[b].source:
                raise QuiverError("arrows do not compose")
        return QPath(self.arrows[idx[0]].source, self.arrows[idx[-1]].target, tuple(idx))

    def extend(self, p: QPath, a: int) -> Optional[QPath]:
        """The path "a after p", or None if it does not compose."""
        if self.arrows[a].source != p.end:
            return None
        return QPath(p.start, self.arrows[a].target, p.arrows + (a,))

    def concat(self, p: QPath, q: QPath) -> Optional[QPath]:
        """p*q in the after convention: first q, then p."""
        if q.end != p.start:
            return None
        return QPath(q.start, p.end, q.arrows + p.arrows)

    def path_key(self, p: QPath):
        if p.arrows:
            return (len(p.arrows), p.arrows)
        return (0, (self.vindex[p.start],))

    def path_str(self, p: QPath) -> str:
        if not p.arrows:
            return f"e{p.start}"
        return "*".join(self.arrows[a].name for a in reversed(p.arrows))

    def parse_path(self, text: str) -> QPath:
        """Inverse of path_str: "b*a" means a then b; "e3" is a trivial path."""
        text = text.strip()
        m = re.fullmatch(r"e_?(\S+)", text)
        if m and text not in self.aindex:
            v = _coerce_vertex(m.group(1), self.vertices)
            if v in self.vindex:
                return self.trivial(v)
        names = [s.strip() for s in text.split("*")]
        for nm in names:
            if nm not in self.aindex:
                raise QuiverError(f"unknown arrow {nm!r}")
        return self.path(list(reversed(names)))

    def paths(self, start=None, end=None, min_len: int = 0, max_len: int = 0) -> list[QPath]:
        """All paths in the length window, in canonical order."""
        if min_len < 0 or max_len < min_len:
            raise QuiverError("need 0 <= min_len <= max_len")
        starts = self.vertices if start is None else [start]
        layer = [self.trivial(v) for v in starts]
        out = []
        for length in range(max_len + 1):
            if length >= min_len:
                out.extend(p for p in layer if end is None or p.end == end)
            if length == max_len:
                break
            nxt = []
            for p in layer:
                for a in self.out_arrows[p.end]:
                    nxt.append(QPath(p.start, self.arrows[a].target, p.arrows + (a,)))
            layer = nxt
            if not layer:
                break
        out.sort(key=self.path_key)
        return out

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, [(a.name, a.target, a.source) for a in self.arrows])

    def classification(self) -> "VertexClassification":
        if self._cls is None:
            self._cls = classify_vertices(self)
        return self._cls

    def to_dict(self) -> dict:
        return {"vertices": list(self.vertices),
                "arrows": [{"name": a.name, "source": a.source, "target": a.target}
                           for a in self.arrows]}

    def to_text(self, truncation: Optional[int] = None) -> str:
        lines = ["vertices: " + " ".join(str(v) for v in self.vertices)]
        for a in self.arrows:
            lines.append(f"arrow {a.name}: {a.source} -> {a.target}")
        if truncation is not None:
            lines.append(f"truncation: {truncation}")
        return "\n".join(lines) + "\n"


@dataclass
class VertexClassification:
    precyclic: frozenset
    postcyclic: frozenset
    cyclebound: frozenset
    sources: frozenset
    precyclic_sources: frozenset = field(default=frozenset())


def _reach(adj: dict, seeds: Iterable) -> set:
    seen = set(seeds)
    stack = list(seen)
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def classify_vertices(q: Quiver) -> VertexClassification:
    succ = {v: [q.arrows[a].target for a in q.out_arrows[v]] for v in q.vertices}
    pred = {v: [q.arrows[a].source for a in q.in_arrows[v]] for v in q.vertices}
    # v is on a cycle iff v is reachable from one of its successors
    cyclebound = set()
    for v in q.vertices:
        if v in _reach(succ, succ[v]):
            cyclebound.add(v)
    pre = _reach(pred, cyclebound)
    post = _reach(succ, cyclebound)
    sources = {v for v in q.vertices if not q.in_arrows[v]}
    return VertexClassification(frozenset(pre), frozenset(post), frozenset(cyclebound),
                                frozenset(sources), frozenset(pre & sources))


def has_precyclic_source(q: Quiver) -> bool:
    return bool(q.classification().precyclic_sources)


# ----------------------------------------------------------------- parsing

def _coerce_vertex(tok: str, known=None):
    tok = tok.strip()
    if known is not None:
        for v in known:
            if str(v) == tok:
                return v
    try:
        return int(tok)
    except ValueError:
        return tok


_ARROW_RE = re.compile(r"^arrow\s+(?P<name>[^:\s]+)\s*:\s*(?P<src>\S+)\s*->\s*(?P<tgt>\S+)\s*$")


def parse_quiver_text(text: str):
    """Parse the line format.

    Returns ``(quiver, truncation_or_None, extra)`` where ``extra`` maps any
    other recognised keys (``relation`` lines) to their raw values with line
    numbers attached.
    """
    vertices = None
    arrows = []
    truncation = None
    relations = []
    seen_names = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        col0 = len(line) - len(line.lstrip()) + 1
        s = line.strip()
        if s.startswith("vertices"):
            rest = s.split(":", 1)
            if len(rest) != 2:
                raise ParseError("expected 'vertices: <ids>'", ln, col0)
            toks = [t for t in re.split(r"[,\s]+", rest[1].strip().strip("[]")) if t]
            vertices = [_coerce_vertex(t) for t in toks]
        elif s.startswith("arrow"):
            m = _ARROW_RE.match(s)
            if not m:
                raise ParseError("expected 'arrow <name>: <src> -> <tgt>'", ln, col0)
            name = m.group("name")
            if name in seen_names:
                raise DuplicateArrowName(
                    f"line {ln}, column {col0 + m.start('name')}: duplicate arrow name {name!r}"
                    f" (first on line {seen_names[name]})")
            seen_names[name] = ln
            arrows.append((name, m.group("src"), m.group("tgt"), ln, col0 + m.start("src")))
        elif s.startswith("truncation"):
            rest = s.split(":", 1)
            try:
                truncation = int(rest[1])
            except (IndexError, ValueError):
                raise ParseError("expected 'truncation: <int>'", ln, col0) from None
        elif s.startswith("relation"):
            rest = s.split(":", 1)
            if len(rest) != 2:
                raise ParseError("expected 'relation: <expr>'", ln, col0)
            relations.append((rest[1].strip(), ln))
        else:
            raise ParseError(f"unrecognised line {s!r}", ln, col0)
    if vertices is None:
        raise ParseError("missing 'vertices:' line")
    resolved = []
    for name, s, t, ln, col in arrows:
        sv, tv = _coerce_vertex(s, vertices), _coerce_vertex(t, vertices)
        for v in (sv, tv):
            if v not in vertices:
                raise UndeclaredVertex(f"line {ln}, column {col}: arrow {name!r} uses undeclared vertex {v!r}")
        resolved.append((name, sv, tv))
    return Quiver(vertices, resolved), truncation, {"relations": relations}


def parse_quiver_structured(data: dict):
    if not isinstance(data, dict) or "vertices" not in data:
        raise ParseError("structured quiver needs a 'vertices' key")
    vertices = list(data["vertices"])
    arrows = []
    for a in data.get("arrows", []):
        if isinstance(a, dict):
            arrows.append((str(a["name"]), a["source"], a["target"]))
        else:
            arrows.append((str(a[0]), a[1], a[2]))
    rels = [(r, None) for r in data.get("relations", [])]
    return Quiver(vertices, arrows), data.get("truncation"), {"relations": rels}


def parse_quiver(text: str):
    """Parse either the line format or a JSON/YAML key-value tree."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno, exc.colno) from None
        return parse_quiver_structured(data)
    if re.search(r"^\s*arrows\s*:", text, re.M) or re.search(r"^\s*-\s", text, re.M):
        import yaml

        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            mark = getattr(exc, "problem_mark", None)
            raise ParseError(str(getattr(exc, "problem", exc)),
                             mark.line + 1 if mark else None,
                             mark.column + 1 if mark else None) from None
        return parse_quiver_structured(data)
    return parse_quiver_text(text)
