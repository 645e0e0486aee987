"""Numeric invariants of abstract Newton trees at infinity.

All arithmetic is on Python integers, so nothing can overflow; every
division that the theory promises to be exact is checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .tree import Edge, Kind, Tree, edge_det


class InvariantError(ValueError):
    """A contract violation: wrong kind of node, unmet hypothesis, inexact division."""


def _prod(values) -> int:
    return math.prod(values, start=1)


# -- local decorations ---------------------------------------------------

def q_at(t: Tree, e: Edge, v: int) -> int:
    """Decoration of ``e`` near ``v``."""
    if not e.touches(v):
        raise InvariantError(f"edge {e.parent}-{e.child} is not incident to {v}")
    return e.near(v)


def Q_at(t: Tree, e: Edge, v: int) -> int:
    """Product of the decorations near ``v`` on every other edge at ``v``."""
    if not e.touches(v):
        raise InvariantError(f"edge {e.parent}-{e.child} is not incident to {v}")
    return _prod(f.near(v) for f in t.incident(v) if f is not e)


# -- paths ---------------------------------------------------------------

@dataclass(frozen=True)
class PathView:
    endpoints: tuple[int, int]
    nodes: tuple[int, ...]
    edges: tuple[Edge, ...]
    # (edge, node of the path it touches) for every edge off the path
    incident_edges: tuple[tuple[Edge, int], ...]


def path_view(t: Tree, u: int, w: int) -> PathView:
    nodes, edges = t.path(u, w)
    on_path = {id(e) for e in edges}
    incident = tuple((f, x) for x in nodes for f in t.incident(x) if id(f) not in on_path)
    return PathView((u, w), tuple(nodes), tuple(edges), incident)


def is_linear(t: Tree, gamma: PathView) -> bool:
    u, w = gamma.endpoints
    if u == w or not (t.kind(u).is_vertex and t.kind(w).is_vertex):
        return False
    return all(t.valency(x) == 2 for x in gamma.nodes[1:-1])


def path_determinant(t: Tree, gamma: PathView) -> int:
    """``q(e,v) q(e',v') - Q(e,v) Q(e',v')`` for a linear path from ``v`` to ``v'``."""
    if not is_linear(t, gamma):
        raise InvariantError(f"path {gamma.nodes} is not a linear path between vertices")
    v, w = gamma.endpoints
    e, f = gamma.edges[0], gamma.edges[-1]
    return q_at(t, e, v) * q_at(t, f, w) - Q_at(t, e, v) * Q_at(t, f, w)


def edge_determinant(t: Tree, e: Edge) -> int:
    if not (t.kind(e.parent).is_vertex and t.kind(e.child).is_vertex):
        raise InvariantError(f"edge {e.parent}-{e.child} touches an arrow")
    return edge_det(t, e)


def linear_paths(t: Tree):
    """Yield every linear path between two distinct vertices, once per unordered pair."""
    verts = t.vertices()
    for i, u in enumerate(verts):
        for w in verts[i + 1:]:
            gamma = path_view(t, u, w)
            if is_linear(t, gamma):
                yield gamma


# -- path products and multiplicities -------------------------------------

def _check_source(t: Tree, v: int) -> None:
    if v not in t or t.kind(v) is Kind.ARROW1:
        raise InvariantError(f"node {v} must be a vertex or a (0)-arrow")


def x_factor(t: Tree, v: int, alpha: int) -> int:
    """Product of ``q(eps, gamma)`` over edges ``eps`` incident to the path from ``v`` to ``alpha``."""
    _check_source(t, v)
    if alpha not in t or t.kind(alpha) is not Kind.ARROW1:
        raise InvariantError(f"node {alpha} is not a (1)-arrow")
    return _prod(f.near(x) for f, x in path_view(t, v, alpha).incident_edges)


def x_hat(t: Tree, v: int, alpha: int) -> int:
    """As :func:`x_factor`, leaving out the edges that touch ``v`` itself."""
    _check_source(t, v)
    if alpha not in t or t.kind(alpha) is not Kind.ARROW1:
        raise InvariantError(f"node {alpha} is not a (1)-arrow")
    return _prod(f.near(x) for f, x in path_view(t, v, alpha).incident_edges if x != v)


def _path_products(t: Tree, v: int) -> dict[int, int]:
    # depth-first walk from v carrying the product of off-path decorations
    out = {}
    stack = [(v, None, 1)]
    while stack:
        u, e_in, acc = stack.pop()
        if u != v and t.kind(u) is Kind.ARROW1:
            out[u] = acc
            continue
        inc = t.incident(u)
        for e_out in inc:
            if e_out is e_in:
                continue
            f = acc
            for eps in inc:
                if eps is not e_in and eps is not e_out:
                    f *= eps.near(u)
            stack.append((e_out.other(u), e_out, f))
    return out


def multiplicities(t: Tree) -> dict[int, int]:
    """``N_v`` for every vertex and every (0)-arrow."""
    n = t.memo.get("N")
    if n is None:
        n = {x: sum(_path_products(t, x).values())
             for x in t.node_ids() if t.kind(x) is not Kind.ARROW1}
        t.memo["N"] = n
    return n


def vertex_multiplicity(t: Tree, v: int) -> int:
    _check_source(t, v)
    n = t.memo.get("N")
    if n is not None:
        return n[v]
    return sum(_path_products(t, v).values())


def tree_degree(t: Tree) -> int:
    return multiplicities(t)[t.root]


def points_at_infinity(t: Tree) -> int:
    return t.valency(t.root) - (1 if t.dead_ends(t.root) else 0)


def tree_multiplicity(t: Tree) -> int:
    """``M(T) = -sum N_v (valency(v) - 2)`` over vertices and (0)-arrows."""
    return -sum(n * (t.valency(x) - 2) for x, n in multiplicities(t).items())


# -- dicriticals ---------------------------------------------------------

def satisfies_star(t: Tree, v: int) -> bool:
    """Everything above ``v`` is an arrow."""
    return all(t.kind(e.child).is_arrow for e in t.children(v))


def dicritical_degree(t: Tree, v: int) -> int | None:
    """Number of (1)-arrow edges at ``v``; ``None`` when everything above ``v`` is not arrows."""
    if not satisfies_star(t, v):
        return None
    return sum(1 for e in t.children(v) if t.kind(e.child) is Kind.ARROW1)


def dicriticals(t: Tree) -> list[tuple[int, int | None]]:
    N = multiplicities(t)
    return [(v, dicritical_degree(t, v)) for v in t.vertices() if N[v] == 0]


def dicritical_set(t: Tree) -> set[int]:
    N = multiplicities(t)
    return {v for v in t.vertices() if N[v] == 0}


# -- tree classes ----------------------------------------------------------

def is_generic(t: Tree) -> bool:
    N = multiplicities(t)
    return all(N[v] >= 0 for v in t.vertices())


def is_complete(t: Tree) -> bool:
    if not is_generic(t):
        return False
    N = multiplicities(t)
    return all(N[t.parent_edge(a).parent] == 0 for a in t.arrows(Kind.ARROW1))


def minimal_completeness_failures(t: Tree) -> list[str]:
    """Names of the failed clauses of minimal completeness (empty when it holds)."""
    failed = []
    if not is_complete(t):
        failed.append("complete")
    N = multiplicities(t)
    for v in t.vertices():
        dead = t.dead_ends(v)
        if N[v] == 0 and not dead:
            failed.append("dicritical-dead-end")
        if any(e.q_parent == 1 for e in dead) and N[v] != 0:
            failed.append("unit-dead-end-at-dicritical")
        if v != t.root and t.valency(v) == 2:
            failed.append("no-valency-2")
    return sorted(set(failed))


def is_minimally_complete(t: Tree) -> bool:
    return not minimal_completeness_failures(t)


# -- the defect calculus -------------------------------------------------

@dataclass(frozen=True)
class DeltaBreakdown:
    r_v: int
    a_v: int
    N_v: int
    c_bar: int
    delta: int


def contribution(t: Tree, x: int) -> int:
    """``C(x) = -N_x (valency(x) - 2)``."""
    return -multiplicities(t)[x] * (t.valency(x) - 2)


def dead_end_factor(t: Tree, v: int) -> int:
    """``a_v``: the dead-end decoration near ``v``, or 1 without a dead end."""
    dead = t.dead_ends(v)
    return dead[0].q_parent if dead else 1


def r_value(t: Tree, v: int) -> int:
    return -1 + sum(1 for e in t.incident(v) if t.kind(e.other(v)).is_vertex)


def c_bar(t: Tree, v: int) -> int:
    return contribution(t, v) + sum(contribution(t, e.child) for e in t.dead_ends(v))


def _delta_parts(t: Tree, v: int) -> DeltaBreakdown:
    N = multiplicities(t)[v]
    r = r_value(t, v)
    a = dead_end_factor(t, v)
    cb = c_bar(t, v)
    defining = 1 - r - cb
    if a == 0 or N % a:
        raise InvariantError(f"dead-end decoration {a} does not divide N={N} at vertex {v}")
    # (r-1)(N-1) + N(1 - 1/a), with the division known to be exact
    closed = (r - 1) * (N - 1) + N - N // a
    if defining != closed:
        raise InvariantError(
            f"defect formulas disagree at vertex {v}: 1-r-Cbar={defining}, closed form={closed}")
    return DeltaBreakdown(r, a, N, cb, defining)


def _require_delta_hypotheses(t: Tree) -> None:
    if not is_minimally_complete(t):
        raise InvariantError("the defect is only defined on minimally complete trees")
    if points_at_infinity(t) < 2:
        raise InvariantError("the defect needs at least two points at infinity")


def delta(t: Tree, v: int) -> DeltaBreakdown:
    """Defect of a non-dicritical vertex, computed both ways and cross-checked."""
    _require_delta_hypotheses(t)
    if not t.kind(v).is_vertex:
        raise InvariantError(f"node {v} is not a vertex")
    if multiplicities(t)[v] == 0:
        raise InvariantError(f"vertex {v} is dicritical")
    return _delta_parts(t, v)


def non_dicriticals(t: Tree) -> list[int]:
    N = multiplicities(t)
    return [v for v in t.vertices() if N[v] != 0]


def delta_total(t: Tree) -> int:
    _require_delta_hypotheses(t)
    return sum(_delta_parts(t, v).delta for v in non_dicriticals(t))


# -- report ----------------------------------------------------------------

def report(t: Tree) -> dict:
    """JSON-ready summary of every invariant of a valid tree."""
    N = multiplicities(t)
    dic = dict(dicriticals(t))
    delta_ok = is_minimally_complete(t) and points_at_infinity(t) >= 2
    nodes = []
    for n in t.nodes:
        entry = {"id": n.id, "kind": n.kind.value, "valency": t.valency(n.id)}
        if n.id in N:
            entry["N"] = N[n.id]
        if n.kind.is_vertex:
            entry["a"] = dead_end_factor(t, n.id)
            entry["r"] = r_value(t, n.id)
            if n.id in dic:
                entry["dicritical"] = True
                entry["degree"] = dic[n.id]
            elif delta_ok:
                entry["delta"] = _delta_parts(t, n.id).delta
        nodes.append(entry)
    edges = []
    for e in t.edges:
        entry = {"parent": e.parent, "child": e.child, "q_parent": e.q_parent,
                 "q_child": e.q_child}
        if t.kind(e.child).is_vertex:
            entry["determinant"] = edge_det(t, e)
        edges.append(entry)
    out = {
        "degree": tree_degree(t),
        "M": tree_multiplicity(t),
        "points": points_at_infinity(t),
        "dicriticals": [{"id": v, "degree": d} for v, d in dicriticals(t)],
        "generic": is_generic(t),
        "complete": is_complete(t),
        "minimally_complete": is_minimally_complete(t),
        "nodes": nodes,
        "edges": edges,
    }
    if delta_ok:
        out["delta_total"] = delta_total(t)
    return out
