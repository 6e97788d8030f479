"""Module files: presentations (slots + relations) and representations (rep: blocks)."""

from __future__ import annotations

import json
import re

import yaml

from .algebra import TruncatedAlgebra, format_combination
from .modules import Module, ModuleError, Presentation, module_from_rep, presentation_of
from .quiver import ParseError, QuiverError, _coerce_vertex

_REL_TERM = re.compile(r"\s*([+-]?)\s*(?:([0-9]+(?:/[0-9]+)?)\s*\*\s*)?\(\s*([^@()]+?)\s*@\s*(\d+)\s*\)\s*")


def parse_module(alg: TruncatedAlgebra, text: str, name: str = "") -> Module:
    """Read a module file in any supported format."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            return module_from_structured(alg, json.loads(text), name)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if re.search(r"^\s*(slots|rep)\s*:", text, re.M) is None:
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            mark = getattr(exc, "problem_mark", None)
            raise ParseError(str(exc), mark.line + 1 if mark else 0, mark.column + 1 if mark else 0)
        if isinstance(data, dict):
            return module_from_structured(alg, data, name)
        raise ParseError("expected 'slots:' or 'rep:'", 1, 1)
    return parse_module_text(alg, text, name)


def _lines(text):
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            yield ln, raw, line


def parse_module_text(alg: TruncatedAlgebra, text: str, name: str = "") -> Module:
    q = alg.quiver
    slots = None
    rels = []
    rep = None
    for ln, raw, line in _lines(text):
        s = line.strip()
        col = len(raw) - len(raw.lstrip()) + 1
        key, sep, rest = s.partition(":")
        key = key.strip()
        if not sep:
            raise ParseError(f"expected 'key: value', got {s!r}", ln, col)
        if key == "slots":
            body = rest.strip().strip("[]")
            slots = [_vertex(q, tok, ln, col) for tok in re.split(r"[,\s]+", body) if tok]
        elif key == "relation":
            rels.append((rest, ln, col + len("relation:")))
        elif key == "rep":
            rep = {"dims": {}, "maps": {}}
        elif key.startswith("dim ") or key == "dim":
            if rep is None:
                raise ParseError("'dim' outside a rep: block", ln, col)
            v = _vertex(q, key[4:], ln, col)
            try:
                rep["dims"][v] = int(rest)
            except ValueError:
                raise ParseError(f"bad dimension {rest.strip()!r}", ln, col) from None
        elif key.startswith("map "):
            if rep is None:
                raise ParseError("'map' outside a rep: block", ln, col)
            nm = key[4:].strip()
            if nm not in q.aindex:
                raise ParseError(f"unknown arrow {nm!r}", ln, col)
            rep["maps"][nm] = _matrix(rest, ln, col)
        else:
            raise ParseError(f"unknown key {key!r}", ln, col)
    if rep is not None:
        if slots is not None:
            raise ParseError("a module file holds either slots or rep, not both", 1, 1)
        try:
            return module_from_rep(alg, rep["dims"], _fill(alg, rep), name)
        except ModuleError as exc:
            raise ParseError(str(exc), 1, 1) from None
    if slots is None:
        raise ParseError("missing 'slots:' line", 1, 1)
    parsed = [_relation(alg, slots, r, ln, c) for r, ln, c in rels]
    try:
        return Presentation(alg, slots, parsed).to_module(name)
    except ModuleError as exc:
        raise ParseError(str(exc), rels[0][1] if rels else 1, 1) from None


def _vertex(q, tok, ln, col):
    v = _coerce_vertex(tok.strip(), q.vertices)
    if v not in q.vindex:
        raise ParseError(f"undeclared vertex {tok.strip()!r}", ln, col)
    return v


def _matrix(text, ln, col):
    text = text.strip()
    if text.startswith("["):
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError:
            raise ParseError("bad matrix literal", ln, col) from None
        return [[str(x) for x in row] for row in data]
    if not text:
        return []
    return [[tok for tok in re.split(r"[,\s]+", row.strip()) if tok] for row in text.split(";")]


def _fill(alg, rep):
    # arrows whose source or target has dimension zero may be omitted
    maps = dict(rep["maps"])
    for arr in alg.quiver.arrows:
        if arr.name not in maps:
            ds, dt = rep["dims"].get(arr.source, 0), rep["dims"].get(arr.target, 0)
            if ds and dt:
                maps[arr.name] = [["0"] * ds for _ in range(dt)]
    return maps


def _relation(alg, slots, text, ln, col) -> dict:
    q = alg.quiver
    out = {}
    pos = 0
    text = text.rstrip()
    for m in _REL_TERM.finditer(text):
        if m.start() != pos:
            break
        pos = m.end()
        sign, coeff, path, slot = m.groups()
        c = alg.field(coeff or "1")
        if sign == "-":
            c = -c
        r = int(slot)
        if r >= len(slots):
            raise ParseError(f"slot {r} out of range", ln, col + m.start())
        try:
            p = q.parse_path(path)
        except QuiverError as exc:
            raise ParseError(str(exc), ln, col + m.start(3)) from None
        out[(r, p)] = out.get((r, p), alg.field.zero) + c
    if pos != len(text) or not text.strip():
        raise ParseError("cannot parse relation term", ln, col + pos)
    return {k: v for k, v in out.items() if v != 0}


def module_from_structured(alg: TruncatedAlgebra, data: dict, name: str = "") -> Module:
    q = alg.quiver
    if "rep" in data:
        rep = data["rep"]
        dims = {_coerce_vertex(str(k), q.vertices): int(v) for k, v in rep.get("dims", {}).items()}
        maps = {k: [[str(x) for x in row] for row in m] for k, m in rep.get("maps", {}).items()}
        return module_from_rep(alg, dims, _fill(alg, {"dims": dims, "maps": maps}), name)
    if "slots" in data:
        slots = [_coerce_vertex(str(v), q.vertices) for v in data["slots"]]
        rels = [_relation(alg, slots, str(r), 0, 0) for r in data.get("relations", [])]
        return Presentation(alg, slots, rels).to_module(name)
    raise ParseError("structured module needs 'slots' or 'rep'", 1, 1)


def module_to_text(M: Module, style: str = "presentation") -> str:
    if style == "presentation":
        return presentation_of(M).to_text() + "\n"
    rep = M.to_rep()
    F = M.field
    lines = ["rep:"]
    for v, d in rep["dims"].items():
        lines.append(f"  dim {v}: {d}")
    for nm, rows in rep["maps"].items():
        if rows and rows[0]:
            lines.append(f"  map {nm}: " + "; ".join(" ".join(F.to_str(x) for x in r) for r in rows))
    return "\n".join(lines) + "\n"


def module_to_structured(M: Module) -> dict:
    rep = M.to_rep()
    F = M.field
    return {"rep": {"dims": {str(v): d for v, d in rep["dims"].items()},
                    "maps": {nm: [[F.to_str(x) for x in r] for r in rows]
                             for nm, rows in rep["maps"].items() if rows and rows[0]}}}


def relation_text(field, q, rel: dict) -> str:
    items = sorted(rel.items(), key=lambda t: q.path_key(t[0]), reverse=True)
    return format_combination(field, [(c, q.path_str(p)) for p, c in items])
