"""Graphviz rendering: dicriticals filled, arrows as arrowheads, both edge-end decorations as labels."""

from __future__ import annotations

from . import invariants as inv
from .tree import Kind, Tree, canonical_order


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(t: Tree, name: str = "newton_tree") -> str:
    # render the canonical representative so isomorphic inputs give identical text
    t = canonical_order(t)
    dic = inv.dicritical_set(t)
    N = inv.multiplicities(t)
    lines = [f"digraph {_quote(name)} {{", "  rankdir=BT;", '  node [fontname="Helvetica"];',
             '  edge [fontname="Helvetica", fontsize=10];']
    for n in sorted(t.nodes, key=lambda n: n.id):
        k = n.kind
        if k is Kind.ARROW0:
            attrs = 'shape=plaintext, label="(0)"'
        elif k is Kind.ARROW1:
            attrs = 'shape=plaintext, label="(1)"'
        else:
            label = "root" if k is Kind.ROOT else f"N={N[n.id]}"
            shape = "doublecircle" if k is Kind.ROOT else "circle"
            attrs = f"shape={shape}, label={_quote(label)}"
            if n.id in dic:
                attrs += ", style=filled, fillcolor=black, fontcolor=white"
        lines.append(f"  n{n.id} [{attrs}];")
    for e in t.edges:
        head = "normal" if t.kind(e.child).is_arrow else "none"
        lines.append(f"  n{e.parent} -> n{e.child} [arrowhead={head}, "
                     f"taillabel={_quote(str(e.q_parent))}, headlabel={_quote(str(e.q_child))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
