"""Command-line front end.

Exit codes: 0 ok, 1 a checked invariant failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from collections import Counter

from .algebra import TruncatedAlgebra
from .fields import field_from_spec
from .quiver import ParseError, QuiverError, parse_quiver

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    pass


# ------------------------------------------------------------------ loading

def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def load_algebra(args) -> TruncatedAlgebra:
    text = _read(args.quiver)
    q, t, extra = parse_quiver(text)
    if extra["relations"]:
        # only accept relation lists that cut out a truncated path algebra
        from .fdalgebra import is_truncated, parse_relation

        rels = [parse_relation(q, r, args.field) for r, _ in extra["relations"]]
        if t is not None:
            rels += [{p: 1} for p in q.paths(min_len=int(t), max_len=int(t))]
        found = is_truncated(q, rels, args.field)
        if found is None:
            raise UsageError(f"{args.quiver}: the relations do not define a truncated path algebra "
                             "(use 'relations' for general bound quiver algebras)")
        if t is not None and found != int(t):
            raise UsageError(f"{args.quiver}: relations give truncation {found}, file says {t}")
        t = found
    t = args.truncation or t
    if t is None:
        raise UsageError(f"{args.quiver}: missing 'truncation:' line (or pass --truncation)")
    return TruncatedAlgebra(q, int(t), args.field)


def _vertex(alg, tok):
    for v in alg.vertices:
        if str(v) == str(tok):
            return v
    raise UsageError(f"unknown vertex {tok!r}")


def load_module(alg, args, required=True):
    from .formats import parse_module
    from .modules import build_A, injective_envelope_simple, projective, simple

    picks = [(k, getattr(args, k, None)) for k in ("module", "simple", "projective", "injective", "A", "B", "T")]
    picks = [(k, v) for k, v in picks if v is not None]
    if not picks:
        if required:
            raise UsageError("choose a module: --module FILE | --simple V | --projective V | "
                             "--injective V | --A V | --B V | --T V")
        return None
    if len(picks) > 1:
        raise UsageError("choose exactly one module option")
    kind, val = picks[0]
    if kind == "module":
        return parse_module(alg, _read(val), name=os.path.basename(val))
    v = _vertex(alg, val)
    if kind == "simple":
        return simple(alg, v)
    if kind == "projective":
        return projective(alg, v)
    if kind == "injective":
        return injective_envelope_simple(alg, v)
    if kind == "A":
        return build_A(alg, v)
    if kind == "B":
        from .tilting import build_B

        return build_B(alg, v)[0]
    from .tilting import strong_tilting

    return strong_tilting(alg, verify=False).summands[v]


# ------------------------------------------------------------------ output

class Out:
    def __init__(self, fmt):
        self.fmt = fmt
        self.lines: list[str] = []
        self.data: dict = {}
        self.dots: list[str] = []

    def line(self, s=""):
        self.lines.append(s)

    def put(self, key, value):
        self.data[key] = value

    def dot(self, s):
        self.dots.append(s)

    def emit(self, stream=None):
        stream = stream or sys.stdout
        if self.fmt == "json":
            stream.write(json.dumps(_jsonable(self.data), indent=2, sort_keys=True) + "\n")
        elif self.fmt == "dot":
            if not self.dots:
                stream.write("// no diagram for this command\n")
            for d in self.dots:
                stream.write(d + "\n")
        else:
            for s in self.lines:
                stream.write(s + "\n")


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, float) and x == float("inf"):
        return "inf"
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    if isinstance(x, float):
        return x
    return str(x)


def _vs(xs):
    xs = list(xs)
    return " ".join(str(v) for v in xs) if xs else "none"


def _layering_str(alg, M):
    out = []
    for d in M.radical_layering():
        out.append(",".join(str(v) for v in alg.vertices for _ in range(d[v])))
    return " / ".join(out) if out else "0"


# ------------------------------------------------------------------ commands

def cmd_classify(args, out):
    from .quiver import classify_vertices

    text = _read(args.quiver)
    q, _, _ = parse_quiver(text)
    c = classify_vertices(q)
    pre = [v for v in q.vertices if v in c.precyclic]
    non = [v for v in q.vertices if v not in c.precyclic]
    srcs = [v for v in q.vertices if v in c.precyclic_sources]
    out.line(f"precyclic: {_vs(pre)}; non-precyclic: {_vs(non)}; precyclic sources: {_vs(srcs)}")
    out.line(f"cyclebound: {_vs(v for v in q.vertices if v in c.cyclebound)}")
    out.line(f"postcyclic: {_vs(v for v in q.vertices if v in c.postcyclic)}")
    out.put("precyclic", pre)
    out.put("non_precyclic", non)
    out.put("precyclic_sources", srcs)
    out.put("cyclebound", [v for v in q.vertices if v in c.cyclebound])
    out.put("postcyclic", [v for v in q.vertices if v in c.postcyclic])
    out.put("sources", [v for v in q.vertices if v in c.sources])
    from .graphs import quiver_dot

    out.dot(quiver_dot(q, "Q"))


def cmd_algebra_info(args, out):
    from .homological import pdim
    from .modules import build_A, injective_envelope_simple, projective, simple

    alg = load_algebra(args)
    out.line(f"vertices: {_vs(alg.vertices)}   arrows: {len(alg.quiver.arrows)}")
    out.line(f"truncation t = {alg.L + 1} (L = {alg.L}), dim = {alg.dim}, field = {alg.field.name}")
    out.line(f"epsilon = sum of e_v for v in {{{_vs(alg.nonprecyclic)}}}")
    rows = []
    out.line("vertex  precyclic  dim P  dim E(S)  dim A  pdim S")
    for v in alg.vertices:
        r = {"vertex": v, "precyclic": v in alg.precyclic, "dim_P": projective(alg, v).dim,
             "dim_E": injective_envelope_simple(alg, v).dim, "dim_A": build_A(alg, v).dim,
             "pdim_S": str(pdim(simple(alg, v)))}
        rows.append(r)
        out.line(f"{v!s:>6}  {'yes' if r['precyclic'] else 'no':>9}  {r['dim_P']:>5}  {r['dim_E']:>8}"
                 f"  {r['dim_A']:>5}  {r['pdim_S']:>6}")
    out.put("dim", alg.dim)
    out.put("L", alg.L)
    out.put("vertices", rows)
    from .graphs import quiver_dot

    out.dot(quiver_dot(alg.quiver, "Q"))


def _module_summary(alg, M, out, prefix=""):
    from .homological import pdim

    out.line(f"{prefix}dim vector: " + " ".join(f"{v}:{n}" for v, n in M.dim_vector().items()))
    out.line(f"{prefix}radical layering: {_layering_str(alg, M)}")
    out.line(f"{prefix}top: " + " ".join(f"{v}:{n}" for v, n in M.top_vector().items() if n))
    out.line(f"{prefix}socle: " + " ".join(f"{v}:{n}" for v, n in M.socle_vector().items() if n))
    p = pdim(M)
    out.line(f"{prefix}pdim: {p}")
    return {"dim_vector": M.dim_vector(), "layering": M.layering_tuple(),
            "top": M.top_vector(), "socle": M.socle_vector(), "pdim": p.to_json()}


def cmd_module_info(args, out):
    from .formats import module_to_structured, module_to_text
    from .graphs import module_graph

    alg = load_algebra(args)
    M = load_module(alg, args)
    data = _module_summary(alg, M, out)
    out.line("presentation:")
    for s in module_to_text(M).rstrip().splitlines():
        out.line("  " + s)
    g = module_graph(M, M.name or "M")
    out.line(g.to_text())
    out.put("module", data)
    out.put("rep", module_to_structured(M)["rep"])
    out.put("graph", g.to_json())
    out.dot(g.to_dot())


def cmd_skeleton(args, out):
    from .graphs import module_graph
    from .homological import compute_skeleton

    alg = load_algebra(args)
    M = load_module(alg, args)
    rng = random.Random(args.seed) if args.shuffle else None
    sk = compute_skeleton(M, rng)
    q = alg.quiver
    for l, layer in enumerate(sk.layers):
        out.line(f"layer {l}: " + "  ".join(f"{q.path_str(p)}@{r}" for r, p in layer))
    out.line("critical: " + ("  ".join(f"{q.path_str(p)}@{r}" for r, p in sk.critical) or "none"))
    g = module_graph(M, M.name or "M", sk)
    out.put("layers", [[f"{q.path_str(p)}@{r}" for r, p in layer] for layer in sk.layers])
    out.put("critical", [f"{q.path_str(p)}@{r}" for r, p in sk.critical])
    out.put("graph", g.to_json())
    out.dot(g.to_dot())


def cmd_syzygy(args, out):
    from .homological import syzygy_explicit, syzygy_type, type_str, verify_syzygy_type

    alg = load_algebra(args)
    M = load_module(alg, args)
    steps = []
    X = M
    for k in range(1, args.steps + 1):
        if X.dim == 0:
            break
        t = syzygy_type(X)
        ok = verify_syzygy_type(X)
        Om, _, _ = syzygy_explicit(X)
        out.line(f"Omega^{k}: {type_str(t)}   (dim {Om.dim}; explicit kernel matches: {'yes' if ok else 'NO'})")
        steps.append({"k": k, "type": [[v, l, n] for (v, l), n in sorted(t.items(), key=str)],
                      "dim": Om.dim, "verified": ok})
        if not ok:
            out.put("steps", steps)
            raise CheckFailed(f"Omega^{k}: explicit kernel differs from the predicted interval sum")
        X = Om
    out.put("steps", steps)


def cmd_pdim(args, out):
    from .homological import pdim, pdim_by_resolution

    alg = load_algebra(args)
    M = load_module(alg, args)
    p = pdim(M)
    out.line(str(p))
    out.put("pdim", p.to_json())
    if p.witness is not None:
        out.put("witness", p.witness)
    if args.check:
        if p.finite:
            r = pdim_by_resolution(M)
            ok = r.value == p.value and not r.exceeds_bound
        else:
            from .homological import finite_pdim_test

            ok = not finite_pdim_test(M)[0]
        out.put("resolution_agrees", ok)
        if not ok:
            raise CheckFailed("structural pdim disagrees with the explicit resolution")


def cmd_approx(args, out):
    from .homological import finite_pdim_test, min_finpd_approx
    from .random_suite import is_right_minimal

    alg = load_algebra(args)
    M = load_module(alg, args)
    ap = min_finpd_approx(M)
    fin, r = finite_pdim_test(M)
    out.line(f"M: dim {M.dim}, finite pdim: {'yes' if fin else 'no'}")
    out.line(f"B(M): dim {ap.B.dim}, dim eps C = {ap.eps_C_dim}")
    data = _module_summary(alg, ap.B, out, prefix="B(M) ")
    minimal = is_right_minimal(ap)
    out.line(f"right minimal: {'yes' if minimal else 'NO'}")
    out.put("M_finite", fin)
    out.put("B", data)
    out.put("eps_C_dim", ap.eps_C_dim)
    out.put("right_minimal", minimal)
    from .graphs import module_graph

    out.dot(module_graph(ap.B, "B(M)").to_dot())
    if not minimal:
        raise CheckFailed("approximation is not right minimal")


def cmd_findim(args, out):
    from .homological import findim

    alg = load_algebra(args)
    val, table = findim(alg)
    out.line(f"l.findim = {val}")
    for (kind, v), p in table.items():
        out.line(f"  pdim {kind}_{v} = {p}")
    out.put("findim", val)
    out.put("table", {f"{k}_{v}": p.to_json() for (k, v), p in table.items()})


def _tilt(alg, verify=True):
    from .tilting import strong_tilting

    return strong_tilting(alg, verify=verify)


def _forest(st):
    from .graphs import module_graph

    return [module_graph(st.summands[v], f"T{v} ({st.kinds[v]}{v})") for v in st.vertices]


def cmd_tilt(args, out):
    alg = load_algebra(args)
    st = _tilt(alg)
    out.line("summand  kind  dim  layering")
    rows = []
    for v in st.vertices:
        M = st.summands[v]
        out.line(f"T{v!s:<7} {st.kinds[v]}{v!s:<4} {M.dim:>3}  {_layering_str(alg, M)}")
        rows.append({"vertex": v, "kind": st.kinds[v], "dim": M.dim, "layering": M.layering_tuple()})
    out.line(f"pdim T = {st.pdim}")
    forest = _forest(st)
    for g in forest:
        out.line(g.to_text())
    out.put("summands", rows)
    out.put("pdim", st.pdim.to_json())
    out.put("checks", st.checks)
    out.put("forest", [g.to_json() for g in forest])
    for g in forest:
        out.dot(g.to_dot())
    if args.figures:
        from .graphs import draw_graphs

        os.makedirs(args.figures, exist_ok=True)
        draw_graphs(forest, os.path.join(args.figures, "tilting_forest.png"), "T")


def cmd_verify_tilting(args, out):
    from .tilting import TiltingError, verify_tilting, verify_tilting_candidate

    alg = load_algebra(args)
    if args.summand:
        from .formats import parse_module

        cand = {}
        for k, path in enumerate(args.summand):
            cand[k] = parse_module(alg, _read(path), os.path.basename(path))
        rep = verify_tilting_candidate(alg, cand)
        for k, v in rep.items():
            out.line(f"{k}: {v}")
        out.put("report", rep)
        if not rep["ok"]:
            raise CheckFailed(rep["reason"])
        return
    st = _tilt(alg)
    try:
        rep = verify_tilting(st)
    except TiltingError as exc:
        raise CheckFailed(str(exc)) from None
    out.line(f"pdim T = {rep['pdim']}")
    out.line("Ext^k(T,T) dims for k = 1..pdim: " + (" ".join(map(str, rep["ext"])) or "none"))
    for k, term in enumerate(rep["coresolution"]):
        out.line(f"coresolution term {k}: " + " + ".join(f"T{v}^{n}" for v, n in sorted(term.items(), key=str)))
    out.line(f"coresolution length {rep['coresolution_length']} <= pdim T: ok")
    out.put("report", rep)


def cmd_strong_right(args, out):
    from .tilting import is_strong_right

    alg = load_algebra(args)
    st = _tilt(alg, verify=False)
    val, cert = is_strong_right(st)
    out.line("true" if val else "false")
    out.line("socle of T: " + " ".join(f"{v}:{n}" for v, n in cert["socle"].items()))
    out.line(f"no precyclic source: {'yes' if cert['no_precyclic_source'] else 'no'}")
    out.put("strong", val)
    out.put("certificate", cert)


def cmd_stratify(args, out):
    from .tilting import stratification_report

    alg = load_algebra(args)
    rep = stratification_report(alg)
    out.line("vertex  precyclic  dim Delta  U multiplicities (S_j: count / paths)")
    for r in rep["rows"]:
        mult = " ".join(f"{j}:{n}/{r['path_counts'][j]}" for j, n in r["U_multiplicities"].items())
        out.line(f"{r['vertex']!s:>6}  {'yes' if r['precyclic'] else 'no':>9}  {r['Delta_dim']:>9}  {mult}")
    out.put("rows", rep["rows"])
    out.put("preorder", rep["preorder"])
    bad = [r["vertex"] for r in rep["rows"] if r["agree"] is False]
    if bad:
        raise CheckFailed(f"U multiplicities differ from path counts at {bad}")


def _bundle(alg):
    from .endo import endomorphism_algebra

    return endomorphism_algebra(_tilt(alg))


def _names_from(q):
    """(source, target, 0) -> name for arrows that are alone between their endpoints."""
    c = Counter((a.source, a.target) for a in q.arrows)
    return {(a.source, a.target, 0): a.name for a in q.arrows if c[(a.source, a.target)] == 1}


def _emit_qwr(out, qwr, title, endo=True):
    from .graphs import quiver_dot

    q = qwr.quiver
    out.line(f"# quiver of {title}" + (" (arrow i -> j: irreducible maps T_i -> T_j)" if endo else ""))
    out.line(qwr.to_text().rstrip())
    out.put("quiver", [{"name": a.name, "source": a.source, "target": a.target} for a in q.arrows])
    out.put("relations", qwr.relation_strings())
    out.dot(quiver_dot(q, title))
    if endo:
        opp = q.opposite()
        out.line("# opposite quiver (quiver of the tilted algebra End(T)^op)")
        out.line(opp.to_text().rstrip())
        out.put("opposite", [{"name": a.name, "source": a.source, "target": a.target} for a in opp.arrows])
        out.dot(quiver_dot(opp, title + "^op"))


def _compare(out, qwr, path, field):
    from .fdalgebra import arrow_correspondence, compare_ideals, parse_relation, rename_arrows

    pq, _, extra = parse_quiver(_read(path))
    same = Counter((a.source, a.target) for a in qwr.quiver.arrows) == \
        Counter((a.source, a.target) for a in pq.arrows)
    out.line(f"quiver matches {os.path.basename(path)}: {'yes' if same else 'NO'}")
    res = {"quiver_equal": same}
    if same and extra["relations"]:
        m = arrow_correspondence(qwr.quiver, pq)
        if m is None:
            out.line("relation comparison skipped: multiple arrows make the naming ambiguous")
        else:
            theirs = [parse_relation(pq, r, field) for r, _ in extra["relations"]]
            mine = [rename_arrows(r, qwr.quiver, pq, m) for r in qwr.relations]
            cmp = compare_ideals(pq, mine, theirs, qwr.N + 1, field)
            for (r, _), ok in zip(extra["relations"], cmp["b_in_a"]):
                out.line(f"  {r}: {'in computed ideal' if ok else 'NOT in computed ideal'}")
            out.line(f"computed relations in given ideal: {sum(cmp['a_in_b'])}/{len(cmp['a_in_b'])}")
            out.line(f"degreewise dims computed: {cmp['dims_a']}")
            out.line(f"degreewise dims given:    {cmp['dims_b']}")
            out.line(f"ideals equal: {'yes' if cmp['equal'] else 'NO'}")
            res.update(cmp)
    out.put("comparison", res)
    if not same or not res.get("equal", True):
        raise CheckFailed("computed quiver/relations differ from " + path)


def cmd_endo(args, out):
    alg = load_algebra(args)
    b = _bundle(alg)
    if args.compare:
        qwr = b.E.gabriel_quiver(_names_from(parse_quiver(_read(args.compare))[0]))
        qwr.compute_relations()
    else:
        qwr = b.quiver()
    E = b.E
    out.line(f"dim End(T) = {E.dim}, Loewy length {E.loewy_length()}")
    out.line("dim Hom(T_i, T_j) (rows i, columns j): " + " ".join(map(str, b.vertices)))
    table = {}
    for i in b.vertices:
        row = [len(b.hom_basis[(i, j)]) for j in b.vertices]
        table[i] = row
        out.line(f"  {i!s:>3}: " + " ".join(f"{x:>2}" for x in row))
    _emit_qwr(out, qwr, "End(T)")
    out.put("dim", E.dim)
    out.put("loewy_length", E.loewy_length())
    out.put("hom_dims", table)
    if args.save_algebra:
        with open(args.save_algebra, "w", encoding="utf-8") as fh:
            json.dump(E.to_json(), fh, indent=1)
    if args.compare:
        _compare(out, qwr, args.compare, alg.field)


def cmd_relations(args, out):
    from .fdalgebra import FDAlgebra, algebra_from_quiver_relations, is_truncated, parse_relation

    text = _read(args.input)
    if text.lstrip().startswith("{") and '"products"' in text:
        A = FDAlgebra.from_json(json.loads(text), args.field)
        A.check(full=True)
        names = None
    else:
        q, t, extra = parse_quiver(text)
        rels = [parse_relation(q, r, args.field) for r, _ in extra["relations"]]
        if t is not None:
            rels += [{p: 1} for p in q.paths(min_len=int(t), max_len=int(t))]
        trunc = is_truncated(q, rels, args.field, args.max_len)
        out.line(f"truncated path algebra: {'yes, t = %d' % trunc if trunc else 'no'}")
        out.put("truncated", trunc)
        A = algebra_from_quiver_relations(q, rels, args.field, args.max_len)
        names = _names_from(q)
    qwr = A.gabriel_quiver(names)
    qwr.compute_relations()
    out.line(f"dim = {A.dim}, Loewy length {A.loewy_length()}, radical dims "
             + " ".join(str(e.rank) for e in A.radical_powers()))
    _emit_qwr(out, qwr, "A", endo=False)
    out.put("dim", A.dim)


def cmd_separation(args, out):
    from .endo import separation_table
    from .quiver import has_precyclic_source

    alg = load_algebra(args)
    b = _bundle(alg)
    strict = not has_precyclic_source(alg.quiver)
    rows = separation_table(b, strict=False)
    out.line("vertex  dim  U  U ~ predicted projective  quotient layering")
    for r in rows:
        lay = " / ".join(",".join(map(str, l)) for l in r["quotient_layering"]) or "0"
        k = " + ".join(f"P{j}^{n}" if n > 1 else f"P{j}" for j, n in r["k"].items()) or "0"
        out.line(f"{r['vertex']!s:>6}  {r['dim']:>3}  {r['U_dim']:>2}  {k:<12} "
                 f"{'yes' if r['U_projective_as_predicted'] else 'NO':<4}  {lay}")
    out.put("rows", rows)
    out.put("strict", strict)
    if strict and not all(r["U_projective_as_predicted"] and r["quotient_factors_non_precyclic"] for r in rows):
        raise CheckFailed("separation fails")
    if not strict:
        out.line("note: the quiver has a precyclic source; projectivity of U is reported, not asserted")


def cmd_dualize(args, out):
    from .endo import dualize_left, round_trip_ok
    from .graphs import fd_module_graph

    alg = load_algebra(args)
    M = load_module(alg, args)
    b = _bundle(alg)
    D, _ = dualize_left(b, M)
    out.line(f"Hom(M, T): dim {D.dim} as a right module over End(T)^op")
    out.line("dim vector: " + " ".join(f"{v}:{n}" for v, n in D.dim_vector().items()))
    lay = " / ".join(",".join(str(v) for v in b.vertices for _ in range(d[v])) for d in D.radical_layering())
    out.line(f"radical layering: {lay or '0'}")
    ok = round_trip_ok(b, M)
    out.line(f"evaluation M -> Hom(Hom(M,T),T) is an isomorphism: {'yes' if ok else 'NO'}")
    g = fd_module_graph(D, b.quiver(), "Hom(M,T)")
    out.line(g.to_text())
    out.put("dim_vector", D.dim_vector())
    out.put("layering", D.layering_tuple())
    out.put("round_trip", ok)
    out.dot(g.to_dot())
    if not ok:
        raise CheckFailed("round trip through Hom(-,T) is not an isomorphism")


def cmd_report(args, out):
    from .endo import check_projective_duals, tilted_report
    from .graphs import draw_graphs, draw_quivers, fd_module_graph
    from .homological import findim
    from .tilting import is_strong_right, stratification_report, verify_tilting

    alg = load_algebra(args)
    out.line("== algebra")
    c = alg.classification
    out.line(f"precyclic: {_vs(alg.precyclic)}; non-precyclic: {_vs(alg.nonprecyclic)}; "
             f"precyclic sources: {_vs(v for v in alg.vertices if v in c.precyclic_sources)}")
    out.line(f"dim = {alg.dim}, L = {alg.L}")
    fin, _ = findim(alg)
    out.line(f"l.findim = {fin}")
    out.line("== strong tilting module")
    st = _tilt(alg)
    forest = _forest(st)
    for v in st.vertices:
        out.line(f"T{v}: {st.kinds[v]}{v}, dim {st.summands[v].dim}, layering {_layering_str(alg, st.summands[v])}")
    for g in forest:
        out.line(g.to_text())
        out.dot(g.to_dot())
    ver = verify_tilting(st)
    out.line(f"verify: pdim T = {ver['pdim']}, Ext = {ver['ext']}, coresolution length {ver['coresolution_length']}")
    strong, _ = is_strong_right(st)
    out.line(f"strong on the right: {strong}")
    strat = stratification_report(alg)
    out.line("stratification: U multiplicities agree with path counts: "
             + ("yes" if all(r["agree"] is not False for r in strat["rows"]) else "NO"))
    out.line("== End(T)")
    b = _bundle(alg)
    rep = tilted_report(b)
    qwr = b.quiver()
    out.line(f"dim {rep['dim']}, Loewy length {rep['loewy_length']}, projective dims "
             + " ".join(f"{v}:{d}" for v, d in rep["projective_dims"].items()))
    _emit_qwr(out, qwr, "End(T)")
    proj_graphs = [fd_module_graph(b.projective(v), qwr, f"P~{v}") for v in b.vertices]
    for g in proj_graphs:
        out.line(g.to_text())
        out.dot(g.to_dot())
    out.line(f"pdim_Lambda T = {rep['pdim_T_left']}; pdim of T over End(T)^op = {rep['pdim_T_right']}; "
             f"l.findim = {rep['lfindim']}; max pdim S~_j (j non-precyclic) = {rep['max_pdim_simple']}")
    out.line(f"chain of equalities holds: {rep['chain_equal']}")
    out.line("separation:")
    for r in rep["separation"]:
        lay = " / ".join(",".join(map(str, l)) for l in r["quotient_layering"]) or "0"
        out.line(f"  P~{r['vertex']}: U dim {r['U_dim']} ~ {r['k']}: "
                 f"{'yes' if r['U_projective_as_predicted'] else 'no'}; quotient {lay}")
    duals = check_projective_duals(b)
    out.line("duality spot checks: " + " ".join(f"{k}:{'ok' if v else 'FAIL'}" for k, v in duals.items()))
    if "note" in rep:
        out.line("note: " + rep["note"])
    out.put("findim", fin)
    out.put("summands", {v: {"kind": st.kinds[v], "dim": st.summands[v].dim,
                             "layering": st.summands[v].layering_tuple()} for v in st.vertices})
    out.put("verify", ver)
    out.put("strong_right", strong)
    out.put("stratification", strat["rows"])
    out.put("endo", rep)
    out.put("duality", duals)
    if args.figures:
        os.makedirs(args.figures, exist_ok=True)
        draw_graphs(forest, os.path.join(args.figures, "tilting_forest.png"), "strong tilting module")
        draw_graphs(proj_graphs, os.path.join(args.figures, "endo_projectives.png"),
                    "projective left End(T)-modules")
        draw_quivers([("Q", alg.quiver), ("quiver of End(T)", qwr.quiver),
                      ("opposite (tilted algebra)", qwr.quiver.opposite())],
                     os.path.join(args.figures, "quivers.png"))
        _pdim_figure(alg, rep, os.path.join(args.figures, "pdims.png"))
        out.line(f"figures written to {args.figures}")
    if not duals or not all(duals.values()):
        raise CheckFailed("duality spot check failed")
    if not all(r["agree"] is not False for r in strat["rows"]):
        raise CheckFailed("stratification multiplicities differ")


def _pdim_figure(alg, rep, path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    labels = ["pdim T (left)", "pdim T (right)", "l.findim", "max pdim S~_j"]
    vals = [rep["pdim_T_left"], rep["pdim_T_right"], rep["lfindim"], rep["max_pdim_simple"]]
    nums = []
    for v in vals:
        try:
            nums.append(float(v))
        except (TypeError, ValueError):
            nums.append(0.0)
    fig, ax = plt.subplots(figsize=(5, 3))
    ax.bar(range(len(vals)), nums, color="0.6")
    ax.set_xticks(range(len(vals)))
    ax.set_xticklabels(labels, fontsize=7)
    ax.set_ylabel("value")
    ax.set_title("projective dimension chain", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def cmd_selftest(args, out):
    from .random_suite import (
        check_approximation,
        check_pdim_consistency,
        check_simple_approximations,
        check_simple_pdims,
        check_syzygy_oracle,
        module_suite,
        random_algebra,
        strongness_case,
    )
    from .tilting import TiltingError, strong_tilting, verify_tilting

    cases = module_suite(seed=args.seed, count=args.count)
    rng = random.Random(args.seed)
    res = {}
    res["syzygy"] = sum(1 for c in cases if all(check_syzygy_oracle(c.M).get(k) for k in ("iso", "stable")))
    res["pdim"] = sum(1 for c in cases if check_pdim_consistency(c.M)["agree"] and check_simple_pdims(c.alg))
    res["approximation"] = sum(1 for c in cases if all(check_approximation(c.M, rng).values())
                               and check_simple_approximations(c.alg))
    trng = random.Random(args.seed + 1)
    ok = 0
    for _ in range(args.algebras):
        try:
            verify_tilting(strong_tilting(random_algebra(trng)))
            ok += 1
        except TiltingError:
            pass
    res["tilting"] = ok
    srng = random.Random(args.seed + 2)
    res["strongness"] = sum(1 for _ in range(args.count // 2) if (lambda x: x[0] == x[1])(strongness_case(random_algebra(srng))))
    totals = {"syzygy": len(cases), "pdim": len(cases), "approximation": len(cases),
              "tilting": args.algebras, "strongness": args.count // 2}
    for k, n in res.items():
        out.line(f"{k:<14} {n}/{totals[k]} {'ok' if n == totals[k] else 'FAIL'}")
    out.put("passed", res)
    out.put("totals", totals)
    if any(res[k] != totals[k] for k in res):
        raise CheckFailed("self test failures")


# ------------------------------------------------------------------ parser

def _add_common(p, quiver=True):
    if quiver:
        p.add_argument("quiver", help="quiver file (line format, JSON or YAML)")
        p.add_argument("--truncation", type=int, help="override the file's truncation t = L+1")
    p.add_argument("--field", default="q", help="q (rationals, default) or zp:<p>")
    p.add_argument("--format", choices=("text", "json", "dot"), default="text")
    p.add_argument("--seed", type=int, default=0)


def _add_module(p):
    g = p.add_argument_group("module selection")
    g.add_argument("--module", metavar="FILE")
    for k in ("simple", "projective", "injective", "A", "B", "T"):
        g.add_argument(f"--{k}", metavar="V")


COMMANDS = {
    "classify": (cmd_classify, False, "precyclic/postcyclic classification of the vertices"),
    "algebra-info": (cmd_algebra_info, False, "dimensions and per-vertex data of the truncated algebra"),
    "module-info": (cmd_module_info, True, "layering, top, socle, pdim and graph of a module"),
    "skeleton": (cmd_skeleton, True, "canonical skeleton and critical paths"),
    "syzygy": (cmd_syzygy, True, "syzygy types with explicit verification"),
    "pdim": (cmd_pdim, True, "projective dimension"),
    "approx": (cmd_approx, True, "minimal approximation by finite-pdim modules"),
    "findim": (cmd_findim, False, "little finitistic dimension"),
    "tilt": (cmd_tilt, False, "the basic strong tilting module"),
    "verify-tilting": (cmd_verify_tilting, False, "check the tilting axioms"),
    "strong-right": (cmd_strong_right, False, "strongness on the right"),
    "stratify": (cmd_stratify, False, "pre-order, standard modules and multiplicities"),
    "endo": (cmd_endo, False, "quiver and relations of End(T)"),
    "relations": (cmd_relations, False, "quiver and relations of an algebra file"),
    "separation": (cmd_separation, False, "U-separation of the projectives over End(T)^op"),
    "dualize": (cmd_dualize, True, "Hom(-, T) and the round trip back"),
    "report": (cmd_report, False, "full pipeline report"),
    "selftest": (cmd_selftest, False, "seeded random property suites"),
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="trunctilt", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name, (_, needs_module, helptext) in COMMANDS.items():
        p = sub.add_parser(name, help=helptext)
        if name == "selftest":
            _add_common(p, quiver=False)
            p.add_argument("--count", type=int, default=100, help="random modules")
            p.add_argument("--algebras", type=int, default=10, help="random algebras for tilting checks")
            continue
        if name == "relations":
            p.add_argument("input", help="algebra JSON (structure constants) or quiver file with relation lines")
            _add_common(p, quiver=False)
            p.add_argument("--max-len", type=int, default=8, help="path length bound for quiver input")
            continue
        _add_common(p)
        if needs_module:
            _add_module(p)
        if name == "skeleton":
            p.add_argument("--shuffle", action="store_true", help="randomize candidate order (uses --seed)")
        if name == "syzygy":
            p.add_argument("--steps", type=int, default=1)
        if name == "pdim":
            p.add_argument("--check", action="store_true", help="cross-check with an explicit resolution")
        if name in ("tilt", "report"):
            p.add_argument("--figures", metavar="DIR", help="write PNG figures to DIR")
        if name == "verify-tilting":
            p.add_argument("--summand", action="append", metavar="FILE",
                           help="verify a candidate given by module files instead of T")
        if name == "endo":
            p.add_argument("--compare", metavar="FILE", help="quiver+relations file to compare with")
            p.add_argument("--save-algebra", metavar="FILE", help="write End(T) as structure constants (JSON)")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        args.field = field_from_spec(args.field)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    func = COMMANDS[args.command][0]
    out = Out(args.format)
    try:
        func(args, out)
    except (UsageError, ParseError, QuiverError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except CheckFailed as exc:
        out.emit()
        sys.stdout.flush()
        print(f"check failed: {exc}", file=sys.stderr)
        return FAILED
    except AssertionError as exc:
        out.emit()
        sys.stdout.flush()
        print(f"check failed: {exc}", file=sys.stderr)
        return FAILED
    except ValueError as exc:
        # semantic errors from the engines name the violated invariant
        print(f"error: {exc}", file=sys.stderr)
        return FAILED
    out.emit()
    return OK


if __name__ == "__main__":
    sys.exit(main())
