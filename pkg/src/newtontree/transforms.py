"""Equivalence moves and normalization to the minimally complete representative.

The two removal moves (dead end decorated by 1, vertex of valency 2) generate
the equivalence relation; :func:`insert_dicritical` and :func:`add_dead_end_1`
are the inverse-direction moves used by completion.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Union

from .invariants import (
    Q_at,
    dicritical_degree,
    is_complete,
    is_generic,
    is_minimally_complete,
    multiplicities,
)
from .tree import Edge, Kind, Node, Tree, canonical_order

__all__ = [
    "Move", "MoveError", "remove_dead_end_1", "contract_valency_2", "insert_dicritical",
    "add_dead_end_1", "normalize", "complete", "reduce", "apply_move", "legal_moves",
    "is_generic", "is_complete", "is_minimally_complete",
]


class MoveError(ValueError):
    """A move was requested at a site that does not meet its precondition."""


MOVE_KINDS = ("remove-dead-end-1", "contract-valency-2", "insert-dicritical", "add-dead-end-1")


@dataclass(frozen=True)
class Move:
    kind: str
    site: Union[int, Edge]

    def __post_init__(self):
        if self.kind not in MOVE_KINDS:
            raise MoveError(f"unknown move {self.kind!r}")


def _find_edge(t: Tree, e: Edge) -> Edge:
    # accept an equal edge from another tree value
    for f in t.edges:
        if f == e:
            return f
    raise MoveError(f"edge {e.parent}-{e.child} is not in the tree")


def _replace(t: Tree, drop_nodes=(), drop_edges=(), swap=None, add_nodes=(), add_edges=()) -> Tree:
    drop_nodes = set(drop_nodes)
    drop_edges = {id(e) for e in drop_edges}
    swap = swap or {}
    nodes = [n for n in t.nodes if n.id not in drop_nodes] + list(add_nodes)
    edges = []
    for e in t.edges:
        if id(e) in swap:
            edges.append(swap[id(e)])
        elif id(e) not in drop_edges:
            edges.append(e)
    edges.extend(add_edges)
    return Tree(nodes, edges)


def remove_dead_end_1(t: Tree, e: Edge) -> Tree:
    """Delete a dead end whose decoration near its vertex is 1, together with its arrow."""
    e = _find_edge(t, e)
    if t.kind(e.child) is not Kind.ARROW0:
        raise MoveError(f"edge {e.parent}-{e.child} is not a dead end")
    if e.q_parent != 1:
        raise MoveError(f"dead end {e.parent}-{e.child} is decorated by {e.q_parent}, not 1")
    return _replace(t, drop_nodes=[e.child], drop_edges=[e])


def contract_valency_2(t: Tree, v: int) -> Tree:
    """Remove a non-root vertex of valency 2, joining its neighbours by one edge.

    The new edge keeps the far-end decorations of the two edges it replaces.
    """
    if v not in t or not t.kind(v).is_vertex:
        raise MoveError(f"node {v} is not a vertex")
    if v == t.root:
        raise MoveError("the root cannot be removed")
    if t.valency(v) != 2:
        raise MoveError(f"vertex {v} has valency {t.valency(v)}, not 2")
    down = t.parent_edge(v)
    (up,) = t.children(v)
    joined = Edge(down.parent, up.child, down.q_parent, up.q_child)
    return _replace(t, drop_nodes=[v], drop_edges=[up], swap={id(down): joined})


def completion_decoration(t: Tree, e: Edge) -> int:
    """The decoration ``(Q - N_v) / q`` that makes an inserted vertex dicritical."""
    v = e.parent
    q = e.q_parent
    num = Q_at(t, e, v) - multiplicities(t)[v]
    if q == 0 or num % q:
        raise ArithmeticError(f"({num}) / {q} is not exact at edge {e.parent}-{e.child}")
    return num // q


def insert_dicritical(t: Tree, e: Edge) -> Tree:
    """Splice a new dicritical vertex into the edge from ``v`` (with ``N_v > 0``) to a (1)-arrow."""
    e = _find_edge(t, e)
    if t.kind(e.child) is not Kind.ARROW1:
        raise MoveError(f"edge {e.parent}-{e.child} does not end at a (1)-arrow")
    n_v = multiplicities(t)[e.parent]
    if n_v <= 0:
        raise MoveError(f"vertex {e.parent} has multiplicity {n_v} <= 0")
    q_new = completion_decoration(t, e)
    w = t.fresh_id()
    return _replace(
        t,
        swap={id(e): Edge(e.parent, w, e.q_parent, q_new)},
        add_nodes=[Node(w, Kind.VERTEX)],
        add_edges=[Edge(w, e.child, 1, 1)],
    )


def add_dead_end_1(t: Tree, v: int) -> Tree:
    """Attach a dead end decorated by 1 to a dicritical all of whose upper neighbours are arrows."""
    if v not in t or not t.kind(v).is_vertex:
        raise MoveError(f"node {v} is not a vertex")
    if multiplicities(t)[v] != 0:
        raise MoveError(f"vertex {v} is not dicritical")
    if dicritical_degree(t, v) is None:
        raise MoveError(f"dicritical {v} has a vertex above it")
    if t.dead_ends(v):
        raise MoveError(f"vertex {v} already has a dead end")
    a = t.fresh_id()
    return _replace(t, add_nodes=[Node(a, Kind.ARROW0)], add_edges=[Edge(v, a, 1, 1)])


# -- move enumeration ------------------------------------------------------

def legal_moves(t: Tree) -> list[Move]:
    """Every site where one of the four moves applies."""
    N = multiplicities(t)
    moves = []
    for e in t.edges:
        k = t.kind(e.child)
        if k is Kind.ARROW0 and e.q_parent == 1:
            moves.append(Move("remove-dead-end-1", e))
        elif k is Kind.ARROW1 and N[e.parent] > 0:
            moves.append(Move("insert-dicritical", e))
    for v in t.vertices():
        if v != t.root and t.valency(v) == 2:
            moves.append(Move("contract-valency-2", v))
        if N[v] == 0 and not t.dead_ends(v) and dicritical_degree(t, v) is not None:
            moves.append(Move("add-dead-end-1", v))
    return moves


def apply_move(t: Tree, move: Move) -> Tree:
    if move.kind == "remove-dead-end-1":
        return remove_dead_end_1(t, move.site)
    if move.kind == "contract-valency-2":
        return contract_valency_2(t, move.site)
    if move.kind == "insert-dicritical":
        return insert_dicritical(t, move.site)
    return add_dead_end_1(t, move.site)


def _removal_sites(t: Tree) -> list[Move]:
    return [m for m in legal_moves(t) if m.kind in ("remove-dead-end-1", "contract-valency-2")]


# -- normalization ---------------------------------------------------------

def reduce(t: Tree, rng: random.Random | None = None) -> Tree:
    """Apply removal moves until none is left.

    Without ``rng`` all unit dead ends go first, then all valency-2 vertices;
    with ``rng`` the removal moves are interleaved in random order.
    """
    if rng is None:
        for e in [e for e in t.edges if t.kind(e.child) is Kind.ARROW0 and e.q_parent == 1]:
            t = remove_dead_end_1(t, e)
        while True:
            sites = [v for v in t.vertices() if v != t.root and t.valency(v) == 2]
            if not sites:
                return t
            t = contract_valency_2(t, sites[0])
    while True:
        moves = _removal_sites(t)
        if not moves:
            return t
        t = apply_move(t, rng.choice(moves))


def complete(t: Tree) -> Tree:
    """Insert a dicritical on every (1)-arrow edge at a vertex of positive multiplicity."""
    if not is_generic(t):
        raise MoveError("completion needs a generic tree")
    N = multiplicities(t)
    for e in [e for e in t.edges if t.kind(e.child) is Kind.ARROW1 and N[e.parent] > 0]:
        t = insert_dicritical(t, e)
    return t


def _add_all_dead_ends(t: Tree) -> Tree:
    N = multiplicities(t)
    for v in [v for v in t.vertices() if N[v] == 0 and not t.dead_ends(v)]:
        t = add_dead_end_1(t, v)
    return t


def normalize(t: Tree, rng: random.Random | None = None) -> Tree:
    """The unique minimally complete tree equivalent to the generic tree ``t``."""
    if not is_generic(t):
        raise MoveError("normalize needs a generic tree (all multiplicities >= 0)")
    out = _add_all_dead_ends(complete(reduce(t, rng)))
    return canonical_order(out)
