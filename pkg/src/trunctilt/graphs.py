"""Layered, labeled graphs of modules (text, DOT and PNG output)."""

from __future__ import annotations

from dataclasses import dataclass, field

from .linalg import Echelon


@dataclass
class LayeredGraph:
    title: str
    nodes: list  # (node_id, layer, vertex_label, description)
    edges: list  # (src, dst, arrow_name, coeff_str)
    pools: list = field(default_factory=list)  # (src, arrow_name, [dst, ...])

    def layer_sizes(self) -> list[int]:
        if not self.nodes:
            return []
        n = max(l for _, l, _, _ in self.nodes) + 1
        out = [0] * n
        for _, l, _, _ in self.nodes:
            out[l] += 1
        return out

    def layers(self) -> list[list]:
        out = [[] for _ in self.layer_sizes()]
        for nid, l, lab, _ in self.nodes:
            out[l].append((nid, lab))
        return out

    def is_tree(self) -> bool:
        """Underlying undirected graph is connected and acyclic (one edge per pair)."""
        if not self.nodes:
            return False
        pairs = {(min(a, b), max(a, b)) for a, b, _, _ in self.edges}
        if len(pairs) != len(self.edges) or len(self.edges) != len(self.nodes) - 1:
            return False
        adj = {nid: [] for nid, *_ in self.nodes}
        for a, b, _, _ in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        start = self.nodes[0][0]
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.nodes)

    def to_text(self) -> str:
        lines = [f"graph {self.title}"]
        for l, layer in enumerate(self.layers()):
            lines.append(f"  layer {l}: " + "  ".join(f"[{nid}]{lab}" for nid, lab in layer))
        for a, b, name, c in self.edges:
            coeff = "" if c == "1" else f" ({c})"
            lines.append(f"  {a} --{name}--> {b}{coeff}")
        for a, name, targets in self.pools:
            lines.append(f"  pool: {name}*[{a}] is a combination of " + ", ".join(map(str, targets)))
        return "\n".join(lines)

    def to_dot(self) -> str:
        lines = [f'digraph "{self.title}" {{', "  rankdir=TB;"]
        for l, layer in enumerate(self.layers()):
            ids = " ".join(f"n{nid};" for nid, _ in layer)
            lines.append(f"  {{ rank=same; {ids} }}")
        for nid, _, lab, desc in self.nodes:
            lines.append(f'  n{nid} [label="{lab}", tooltip="{desc}"];')
        for a, b, name, c in self.edges:
            lab = name if c == "1" else f"{name} ({c})"
            lines.append(f'  n{a} -> n{b} [label="{lab}"];')
        for a, name, targets in self.pools:
            lines.append(f"  subgraph cluster_pool_{a}_{name} {{ style=dotted; "
                         + " ".join(f"n{t};" for t in targets) + " }")
        lines.append("}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {"title": self.title,
                "nodes": [{"id": a, "layer": l, "vertex": str(v), "path": d} for a, l, v, d in self.nodes],
                "edges": [{"from": a, "to": b, "arrow": n, "coeff": c} for a, b, n, c in self.edges],
                "pools": [{"from": a, "arrow": n, "to": t} for a, n, t in self.pools],
                "tree": self.is_tree()}


def module_graph(M, title: str = "", sk=None) -> LayeredGraph:
    """Graph of M on the basis given by a skeleton (canonical by default).

    An arrow applied to a basis element is expanded in that basis; each
    nonzero coefficient gives an edge, and multi-term expansions are also
    recorded as dependence pools.
    """
    from .homological import compute_skeleton

    if M.dim == 0:
        return LayeredGraph(title or M.name, [], [])
    sk = sk or compute_skeleton(M)
    cov = M.cover()
    q = M.alg.quiver
    F = M.field
    img = {rp: cov.images[j] for j, rp in enumerate(cov.P.pbasis)}
    elems = []
    for l, layer in enumerate(sk.layers):
        for rp in layer:
            elems.append((l, rp))
    e = Echelon(F, track=True)
    for t, (_, rp) in enumerate(elems):
        if not e.add(img[rp], t):
            raise ValueError("skeleton images are dependent")
    nodes = [(t, l, str(rp[1].end), f"{q.path_str(rp[1])}@{rp[0]}") for t, (l, rp) in enumerate(elems)]
    edges, pools = [], []
    for t, (_, (r, p)) in enumerate(elems):
        for a in q.out_arrows[p.end]:
            w = M.act_arrow(a, img[(r, p)])
            if not w:
                continue
            co = e.express(w)
            targets = sorted(co)
            for u in targets:
                edges.append((t, u, q.arrows[a].name, F.to_str(co[u])))
            if len(targets) > 1:
                pools.append((t, q.arrows[a].name, targets))
    return LayeredGraph(title or M.name, nodes, edges, pools)


def draw_graphs(graphs: list[LayeredGraph], path: str, title: str = "") -> None:
    """Render a forest of layered graphs side by side to an image file."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    width = sum(max(g.layer_sizes() or [1]) for g in graphs) + len(graphs)
    depth = max((len(g.layer_sizes()) for g in graphs), default=1)
    fig, ax = plt.subplots(figsize=(max(4, 1.1 * width), max(3, 1.2 * depth + 1)))
    x0 = 0.0
    for g in graphs:
        span = max(g.layer_sizes() or [1])
        pos = {}
        for l, layer in enumerate(g.layers()):
            off = x0 + (span - len(layer)) / 2.0
            for k, (nid, _) in enumerate(layer):
                pos[nid] = (off + k, -l)
        for a, b, name, _ in g.edges:
            (xa, ya), (xb, yb) = pos[a], pos[b]
            ax.annotate("", xy=(xb, yb + 0.15), xytext=(xa, ya - 0.15),
                        arrowprops=dict(arrowstyle="->", lw=0.8))
            ax.text((xa + xb) / 2 + 0.08, (ya + yb) / 2, name, fontsize=7, color="dimgray")
        for nid, _, lab, _ in g.nodes:
            x, y = pos[nid]
            ax.text(x, y, lab, ha="center", va="center", fontsize=10,
                    bbox=dict(boxstyle="circle,pad=0.25", fc="white", ec="black", lw=0.6))
        ax.text(x0 + (span - 1) / 2.0, 0.8, g.title, ha="center", fontsize=9)
        x0 += span + 1
    ax.set_xlim(-1, max(x0, 1))
    ax.set_ylim(-depth, 1.4)
    ax.axis("off")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def fd_module_graph(M, qwr, title: str = "") -> LayeredGraph:
    """Layered graph of a module over a finite-dimensional algebra.

    Layer l+1 is chosen greedily among arrow-lift images of layer l,
    independent modulo the next radical power.
    """
    if M.dim == 0:
        return LayeredGraph(title or M.name, [], [])
    q = qwr.quiver
    F = M.field
    series = M.radical_series()
    layers = [[(M.unit(k), M.vertex_of[k], f"e{M.vertex_of[k]}") for k in M.top_indices()]]
    while True:
        l = len(layers) - 1
        if l + 1 >= len(series) - 1:
            break
        ech = series[l + 2].copy() if l + 2 < len(series) else Echelon(F)
        nxt = []
        for vec, v, desc in layers[l]:
            for a in q.out_arrows[v]:
                w = M.act_element(qwr.lifts[a], vec)
                if w and ech.add(w):
                    arr = q.arrows[a]
                    nxt.append((w, arr.target, f"{arr.name}*{desc}"))
        if not nxt:
            break
        layers.append(nxt)
    elems = [(l, x) for l, layer in enumerate(layers) for x in layer]
    e = Echelon(F, track=True)
    for t, (_, (vec, _, _)) in enumerate(elems):
        if not e.add(vec, t):
            raise ValueError("graph basis is dependent")
    nodes = [(t, l, str(v), desc.rsplit("*e", 1)[0] if "*" in desc else desc)
             for t, (l, (_, v, desc)) in enumerate(elems)]
    edges, pools = [], []
    for t, (_, (vec, v, _)) in enumerate(elems):
        for a in q.out_arrows[v]:
            w = M.act_element(qwr.lifts[a], vec)
            if not w:
                continue
            co = e.express(w)
            targets = sorted(co)
            for u in targets:
                edges.append((t, u, q.arrows[a].name, F.to_str(co[u])))
            if len(targets) > 1:
                pools.append((t, q.arrows[a].name, targets))
    return LayeredGraph(title or M.name, nodes, edges, pools)


def quiver_dot(q, title: str = "Q") -> str:
    lines = [f'digraph "{title}" {{']
    for v in q.vertices:
        lines.append(f'  v{v} [label="{v}"];')
    for a in q.arrows:
        lines.append(f'  v{a.source} -> v{a.target} [label="{a.name}"];')
    lines.append("}")
    return "\n".join(lines)


def draw_quivers(quivers: list, path: str) -> None:
    """Draw quivers on a circle layout, side by side."""
    import math

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.patches import FancyArrowPatch

    fig, axes = plt.subplots(1, len(quivers), figsize=(4.2 * len(quivers), 4.2))
    if len(quivers) == 1:
        axes = [axes]
    for ax, (title, q) in zip(axes, quivers):
        n = len(q.vertices)
        pos = {v: (math.cos(2 * math.pi * k / n + math.pi / 2), math.sin(2 * math.pi * k / n + math.pi / 2))
               for k, v in enumerate(q.vertices)}
        seen: dict = {}
        for a in q.arrows:
            key = (a.source, a.target)
            k = seen.get(key, 0)
            seen[key] = k + 1
            (x0, y0), (x1, y1) = pos[a.source], pos[a.target]
            if a.source == a.target:
                ax.add_patch(FancyArrowPatch((x0 - 0.05, y0 + 0.08), (x0 + 0.05, y0 + 0.08),
                                             connectionstyle="arc3,rad=-2.5", arrowstyle="->",
                                             mutation_scale=10, lw=0.8))
                ax.text(x0, y0 + 0.28 + 0.1 * k, a.name, fontsize=7, ha="center")
                continue
            rad = 0.15 + 0.18 * k
            ax.add_patch(FancyArrowPatch((x0, y0), (x1, y1), connectionstyle=f"arc3,rad={rad}",
                                         arrowstyle="->", mutation_scale=10, lw=0.8,
                                         shrinkA=10, shrinkB=10))
            mx, my = (x0 + x1) / 2, (y0 + y1) / 2
            dx, dy = y1 - y0, x0 - x1
            ax.text(mx + rad * dx * 0.6, my + rad * dy * 0.6, a.name, fontsize=7, color="dimgray")
        for v, (x, y) in pos.items():
            ax.text(x, y, str(v), ha="center", va="center", fontsize=10,
                    bbox=dict(boxstyle="circle,pad=0.3", fc="white", ec="black", lw=0.6))
        ax.set_xlim(-1.5, 1.5)
        ax.set_ylim(-1.5, 1.5)
        ax.set_aspect("equal")
        ax.axis("off")
        ax.set_title(title, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
