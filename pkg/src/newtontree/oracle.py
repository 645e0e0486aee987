"""Bounded exhaustive enumeration and brute-force verification campaigns.

Three independent ways of producing the population of valid trees:

* :func:`enumerate_trees` composes trees bottom-up from multisets of
  canonical branches and prunes with the axioms as it goes;
* :func:`enumerate_naive` builds every decorated shape and filters with
  :func:`~newtontree.tree.validate` (only usable on tiny bounds);
* :func:`count_trees` counts the population with generating functions,
  without building anything.

:func:`enumerate_minimally_complete` is a separate generator for the
minimally complete trees with at least two points at infinity; it is what
makes the defect and classification checks feasible at the default bounds.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from collections import defaultdict
from dataclasses import dataclass, field
from math import comb, gcd
from typing import Callable, Iterable, Iterator

from . import classify as cl
from . import invariants as inv
from . import transforms as tf
from .tree import Edge, Kind, Node, Tree, parse, serialize, validate


@dataclass(frozen=True)
class EnumBounds:
    max_vertices: int = 6
    max_arrows: int = 6
    max_abs_decoration: int = 4

    def __post_init__(self):
        for name in ("max_vertices", "max_arrows", "max_abs_decoration"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")


# -- pruned generator --------------------------------------------------------
#
# A vertex subtree is a tuple (d, P, nv, na, branches): d is the decoration
# near the vertex on the edge to its parent, P the product of its upward
# decorations, nv/na its vertex and arrow counts, and branches a tuple of
# (c, child) with c the decoration near the vertex and child "a0", "a1" or a
# subtree.  With the parent's edge decorated (c, d_child) and the parent
# having downward decoration d and upward product P_par, the determinant is
#   c * d_child - d * (P_par / c) * P_child.

_D, _P, _NV, _NA, _BR = range(5)


def _multisets(cands, rv: int, ra: int):
    """Multisets of records using exactly ``rv`` vertices and at most ``ra`` arrows."""
    def rec(start, rv, ra, acc):
        if rv == 0:
            yield tuple(acc), sum(s[_NA] for s in acc)
            return
        for i in range(start, len(cands)):
            s = cands[i]
            if s[_NV] <= rv and s[_NA] <= ra:
                acc.append(s)
                yield from rec(i, rv - s[_NV], ra - s[_NA], acc)
                acc.pop()

    yield from rec(0, rv, ra, [])


def _arrow_fills(left: int, dead_allowed: bool):
    if left >= 0:
        yield ("a1",) * left
    if dead_allowed and left >= 1:
        yield ("a0",) + ("a1",) * (left - 1)


class _Generator:
    """Catalog of vertex subtrees; ``skeleton=True`` leaves every d undecided."""

    def __init__(self, bounds: EnumBounds, skeleton: bool = False):
        self.b = bounds
        self.B = bounds.max_abs_decoration
        self.skeleton = skeleton
        self.subs: dict[tuple[int, int], list[tuple]] = {}
        for nv in range(1, bounds.max_vertices):
            for na in range(1, bounds.max_arrows + 1):
                self.subs[(nv, na)] = list(self._vertices(nv, na))

    def _fits(self, rv: int, ra: int):
        for (nv, na), lst in self.subs.items():
            if nv <= rv and na <= ra:
                yield from lst

    def _unit_multisets(self, rv: int, ra: int, K: int | None):
        if rv == 0:
            yield (), 0
            return
        if K is None:
            cands = list(self._fits(rv, ra))
        else:
            cands = [s for s in self._fits(rv, ra) if s[_D] < K * s[_P]]
        yield from _multisets(cands, rv, ra)

    def _shape_ok(self, branches, at_root: bool) -> bool:
        kinds = [c if isinstance(c, str) else "v" for _, c in branches]
        if not any(k != "a0" for k in kinds):
            return False
        if not self.skeleton:
            return True
        # minimal completeness: (1)-arrows hang at dicriticals, which carry a
        # dead end; no valency-2 vertex off the root; two points at infinity
        if "a1" in kinds and "a0" not in kinds:
            return False
        if at_root:
            return sum(1 for k in kinds if k != "a0") >= 2
        return len(kinds) >= 2

    def _vertices(self, nv: int, na: int) -> Iterator[tuple]:
        B = self.B
        bigs: list = [None]
        for c in range(2, B + 1):
            bigs.append((c, "a1", 0, 1))
            bigs.append((c, "a0", 0, 1))
            for s in self._fits(nv - 1, na):
                bigs.append((c, s, s[_NV], s[_NA]))
        for big in bigs:
            if big is None:
                c, rv, ra = 1, nv - 1, na
            else:
                c, child, bv, ba = big
                rv, ra = nv - 1 - bv, na - ba
                if rv < 0 or ra < 0:
                    continue
            for d in ([None] if self.skeleton else range(-B, B + 1)):
                if d is not None:
                    if gcd(d, c) != 1:
                        continue
                    if big is not None and not isinstance(big[1], str):
                        if c * big[1][_D] - d * big[1][_P] >= 0:
                            continue
                K = None if d is None else d * c
                for units, used in self._unit_multisets(rv, ra, K):
                    for fill in _arrow_fills(ra - used, big is None):
                        branches = tuple((1, s) for s in units) + tuple((1, a) for a in fill)
                        if big is not None:
                            branches = ((c, big[1]),) + branches
                        if self._shape_ok(branches, at_root=False):
                            yield (d, c, nv, na, branches)

    def roots(self) -> Iterator[tuple]:
        b = self.b
        for nv in range(1, b.max_vertices + 1):
            for na in range(1, b.max_arrows + 1):
                for units, used in self._unit_multisets(nv - 1, na, None if self.skeleton else 1):
                    for fill in _arrow_fills(na - used, True):
                        branches = tuple((1, s) for s in units) + tuple((1, a) for a in fill)
                        if self._shape_ok(branches, at_root=True):
                            yield branches


def _build(root_branches, decs: dict | None = None) -> Tree:
    # decs maps a node id to its downward decoration when the record has none
    nodes = [Node(0, Kind.ROOT)]
    edges: list[Edge] = []

    def attach(parent: int, branches) -> None:
        for c, child in branches:
            nid = len(nodes)
            if child == "a1":
                nodes.append(Node(nid, Kind.ARROW1))
                edges.append(Edge(parent, nid, c, 1))
            elif child == "a0":
                nodes.append(Node(nid, Kind.ARROW0))
                edges.append(Edge(parent, nid, c, 1))
            else:
                nodes.append(Node(nid, Kind.VERTEX))
                d = child[_D] if child[_D] is not None else decs[nid]
                edges.append(Edge(parent, nid, c, d))
                attach(nid, child[_BR])

    attach(0, root_branches)
    return Tree(nodes, edges)


def enumerate_trees(bounds: EnumBounds = EnumBounds(), dedup: bool = True) -> Iterator[Tree]:
    """Every valid tree within ``bounds``, once per isomorphism class."""
    gen = _Generator(bounds)
    seen: set[str] | None = set() if dedup else None
    for branches in gen.roots():
        t = _build(branches)
        if seen is not None:
            s = serialize(t)
            if s in seen:
                continue
            seen.add(s)
        yield t


# -- minimally complete generator ----------------------------------------------
#
# Skeletons fix the shape and every upward decoration.  The downward
# decorations are then chosen from the root up, carrying N along:
#
#   A_v = sum over children i of (P_v / c_i) A_i,  A = 1 at (1)-arrows, 0 at dead ends
#   N_v = d_v A_v + P_v B_v,  B_v = (N_u - d_u (P_u / c) A_v) / c   for v above u
#
# A_v > 0 because every vertex has a (1)-arrow above it and upward decorations
# are positive.  A vertex carrying a (1)-arrow must be dicritical, so its d_v
# is forced; any other vertex ranges over d_v with N_v >= 0 (genericity), the
# edge determinant and coprimality.  The library predicates have the last word.

def _flatten(root_branches):
    """Preorder arrays (parent, c, kind, children) for a skeleton."""
    parent, cdec, kind, children = [None], [1], ["v"], [[]]

    def walk(u, branches):
        for c, child in branches:
            nid = len(kind)
            parent.append(u)
            cdec.append(c)
            kind.append(child if isinstance(child, str) else "v")
            children.append([])
            children[u].append(nid)
            if not isinstance(child, str):
                walk(nid, child[_BR])

    walk(0, root_branches)
    return parent, cdec, kind, children


def _assignments(root_branches, B: int) -> Iterator[dict]:
    parent, cdec, kind, children = _flatten(root_branches)
    n = len(kind)
    P = [math.prod(cdec[w] for w in children[v]) for v in range(n)]
    A = [0] * n
    for v in reversed(range(n)):
        if kind[v] == "a1":
            A[v] = 1
        elif kind[v] == "v":
            A[v] = sum(P[v] // cdec[w] * A[w] for w in children[v])
    has_a1 = [any(kind[w] == "a1" for w in children[v]) for v in range(n)]
    order = [v for v in range(1, n) if kind[v] == "v"]
    N = [0] * n
    d = [1] * n
    N[0] = A[0]
    if N[0] < 0 or (has_a1[0] and N[0] != 0):
        return

    def rec(i):
        if i == len(order):
            yield {v: d[v] for v in order}
            return
        v = order[i]
        u, c = parent[v], cdec[v]
        Qu = d[u] * P[u] // c
        outside = N[u] - Qu * A[v]
        if outside % c:
            return
        Bv = outside // c
        if has_a1[v]:
            num = -P[v] * Bv
            if num % A[v]:
                return
            choices = [num // A[v]]
        else:
            choices = range(-B, B + 1)
        for dv in choices:
            if abs(dv) > B:
                continue
            if any(gcd(dv, cdec[w]) != 1 for w in children[v]):
                continue
            if c * dv - Qu * P[v] >= 0:
                continue
            Nv = dv * A[v] + P[v] * Bv
            if Nv < 0:
                continue
            d[v], N[v] = dv, Nv
            yield from rec(i + 1)

    yield from rec(0)


def enumerate_minimally_complete(bounds: EnumBounds = EnumBounds()) -> Iterator[Tree]:
    """Minimally complete trees with at least two points at infinity within ``bounds``."""
    gen = _Generator(bounds, skeleton=True)
    B = bounds.max_abs_decoration
    seen: set[str] = set()
    for branches in gen.roots():
        for decs in _assignments(branches, B):
            t = _build(branches, decs)
            if not (validate(t).ok and inv.is_minimally_complete(t)
                    and inv.points_at_infinity(t) >= 2):
                continue
            s = serialize(t)
            if s not in seen:
                seen.add(s)
                yield t


# -- naive generator -----------------------------------------------------------

def _naive_shapes(max_v: int, max_a: int):
    """All rooted shapes (as nested tuples of child kinds) with a vertex root."""
    memo: dict = {}

    def vertex_shapes(mv: int, ma: int):
        # shapes of a vertex subtree using at most mv vertices and ma arrows
        if (mv, ma) in memo:
            return memo[(mv, ma)]
        out = []
        atoms = [("a0", 0, 1), ("a1", 0, 1)]
        for sv in range(1, mv):
            for sa in range(0, ma + 1):
                for sh, v_used, a_used in vertex_shapes(sv, sa):
                    if v_used == sv and a_used == sa:
                        atoms.append((sh, sv, sa))
        for k in range(0, mv + ma):
            for combo in itertools.combinations_with_replacement(range(len(atoms)), k):
                v_used = 1 + sum(atoms[i][1] for i in combo)
                a_used = sum(atoms[i][2] for i in combo)
                if v_used <= mv and a_used <= ma:
                    out.append((tuple(atoms[i][0] for i in combo), v_used, a_used))
        memo[(mv, ma)] = out
        return out

    return [sh for sh, _, a in vertex_shapes(max_v, max_a) if a >= 1]


def enumerate_naive(bounds: EnumBounds) -> list[Tree]:
    """Generate-then-filter: every decoration on every shape, kept if valid.

    Decorations near the root and near arrows are fixed to 1, as in the DSL.
    """
    B = bounds.max_abs_decoration
    values = range(-B, B + 1)
    found: dict[str, Tree] = {}
    for shape in _naive_shapes(bounds.max_vertices, bounds.max_arrows):
        nodes = [Node(0, Kind.ROOT)]
        slots = []  # (parent, child, child_kind, parent_is_root)

        def lay(parent: int, sh) -> None:
            for ch in sh:
                nid = len(nodes)
                if ch == "a0":
                    nodes.append(Node(nid, Kind.ARROW0))
                elif ch == "a1":
                    nodes.append(Node(nid, Kind.ARROW1))
                else:
                    nodes.append(Node(nid, Kind.VERTEX))
                slots.append((parent, nid, ch, parent == 0))
                if not isinstance(ch, str):
                    lay(nid, ch)

        lay(0, shape)
        free = []
        for parent, child, ch, at_root in slots:
            free.append([1] if at_root else values)
            free.append([1] if isinstance(ch, str) else values)
        for decs in itertools.product(*free):
            edges = [Edge(p, c, decs[2 * i], decs[2 * i + 1])
                     for i, (p, c, _, _) in enumerate(slots)]
            t = Tree(nodes, edges)
            if validate(t).ok:
                found.setdefault(serialize(t), t)
    return [found[k] for k in sorted(found)]


# -- counting ------------------------------------------------------------------

def count_trees(bounds: EnumBounds = EnumBounds()) -> int:
    """Number of valid trees within ``bounds``, by generating functions.

    Vertex subtrees are counted by (vertices, arrows, d, P), where d is the
    decoration near the subtree's vertex on its parent edge and P the product
    of its upward decorations; multisets of distinct subtrees are counted with
    ``(1 - x)^-m`` factors.
    """
    MV, MA, B = bounds.max_vertices, bounds.max_arrows, bounds.max_abs_decoration
    V: dict = defaultdict(lambda: defaultdict(int))

    def mul(p, q):
        r = defaultdict(int)
        for (a, b), x in p.items():
            for (c, d), y in q.items():
                if a + c <= MV and b + d <= MA:
                    r[(a + c, b + d)] += x * y
        return r

    def multisets(items):
        r = {(0, 0): 1}
        for (nv, na), m in items.items():
            if m:
                f, k = {}, 0
                while k * nv <= MV and k * na <= MA:
                    f[(k * nv, k * na)] = comb(m + k - 1, k)
                    k += 1
                r = mul(r, f)
        return r

    def units(K):
        items = defaultdict(int)
        for size, g in V.items():
            for (d, P), c in g.items():
                if d < K * P:
                    items[size] += c
        return items

    arrows1 = {(0, k): 1 for k in range(MA + 1)}
    for nv in range(1, MV):
        fresh = defaultdict(lambda: defaultdict(int))
        for d in range(-B, B + 1):
            for big in [None] + list(range(2, B + 1)):
                if big is not None and gcd(d, big) != 1:
                    continue
                P = big or 1
                g = mul(multisets(units(d * P)), arrows1)
                if big is None:
                    extra = {(0, 0): 1, (0, 1): 1}  # optional dead end decorated 1
                else:
                    extra = defaultdict(int)
                    extra[(0, 1)] += 2  # big (1)-arrow or big dead end
                    for size, gg in V.items():
                        for (d2, P2), c in gg.items():
                            if big * d2 - d * P2 < 0:
                                extra[size] += c
                g = mul(g, extra)
                for (a, b), c in g.items():
                    if a == nv - 1 and b >= 1:
                        fresh[(nv, b)][(d, P)] += c
        if nv == 1:
            # a lone dead end has no (1)-arrow above
            for d in range(-B, B + 1):
                fresh[(1, 1)][(d, 1)] -= 1
                for big in range(2, B + 1):
                    if gcd(d, big) == 1:
                        fresh[(1, 1)][(d, big)] -= 1
        V.update(fresh)
    g = mul(mul(multisets(units(1)), arrows1), {(0, 0): 1, (0, 1): 1})
    return sum(c for (a, b), c in g.items() if a < MV and b >= 1) - 1


# -- properties ----------------------------------------------------------------
#
# Each property takes a valid tree and returns True (holds), False (fails) or
# None (not applicable).  Properties only look at isomorphism-invariant data,
# so a counterexample replays from its DSL text.

PROPERTIES: dict[str, Callable[[Tree], bool | None]] = {}
SLOW_PROPERTIES: set[str] = set()


def prop(name: str, slow: bool = False):
    def register(fn):
        PROPERTIES[name] = fn
        if slow:
            SLOW_PROPERTIES.add(name)
        return fn
    return register


def _mc2(t: Tree) -> bool:
    return inv.is_minimally_complete(t) and inv.points_at_infinity(t) >= 2


@prop("roundtrip")
def _roundtrip(t):
    return parse(serialize(t)) == t and serialize(parse(serialize(t))) == serialize(t)


@prop("upward-scan")
def _upward_scan(t):
    for v in t.vertices():
        up = [e.q_parent for e in t.children(v)]
        if not up or sum(1 for q in up if q > 1) > 1:
            return False
    return True


@prop("degree-positive")
def _degree(t):
    return inv.tree_degree(t) >= 1


@prop("multiplicity-two-routes")
def _two_routes(t):
    N = inv.multiplicities(t)
    arrows = t.arrows(Kind.ARROW1)
    for x, n in N.items():
        if n != sum(inv.x_factor(t, x, a) for a in arrows):
            return False
        e_first = {a: t.path(x, a)[1][0] for a in arrows}
        for a in arrows:
            if inv.x_factor(t, x, a) != inv.Q_at(t, e_first[a], x) * inv.x_hat(t, x, a):
                return False
    return True


@prop("dead-end-identity")
def _dead_end(t):
    N = inv.multiplicities(t)
    return all(N[e.parent] == e.q_parent * N[e.child]
               for e in t.edges if t.kind(e.child) is Kind.ARROW0)


def _prop25_sums(t: Tree, v: int, w: int) -> tuple[int, int]:
    """Sums of x_hat over arrows reached through ``w`` from ``v`` and vice versa."""
    arrows = t.arrows(Kind.ARROW1)
    A_w = [a for a in arrows if w in t.path(v, a)[0]]
    A_v = [a for a in arrows if a not in A_w]
    return (sum(inv.x_hat(t, v, a) for a in A_w), sum(inv.x_hat(t, w, a) for a in A_v))


@prop("linear-path-identities")
def _prop25(t):
    N = inv.multiplicities(t)
    for g in inv.linear_paths(t):
        v, w = g.endpoints
        if t.is_above(v, w):
            v, w = w, v
            g = inv.path_view(t, v, w)
        e, f = g.edges[0], g.edges[-1]
        q, qp = e.near(v), f.near(w)
        Q, Qp = inv.Q_at(t, e, v), inv.Q_at(t, f, w)
        det = inv.path_determinant(t, g)
        s_w, s_v = _prop25_sums(t, v, w)
        if q * N[w] - Qp * N[v] != det * s_w:
            return False
        if qp * N[v] - Q * N[w] != det * s_v:
            return False
        if t.is_above(w, v):
            if not (q > 0 and Qp > 0 and det < 0 and q * N[w] - Qp * N[v] < 0):
                return False
    return True


def count_comparable_linear_paths(t: Tree) -> int:
    return sum(1 for g in inv.linear_paths(t)
               if t.is_above(g.endpoints[1], g.endpoints[0])
               or t.is_above(g.endpoints[0], g.endpoints[1]))


@prop("nonnegative-connected")
def _connected(t):
    N = inv.multiplicities(t)
    good = {v for v in t.vertices() if N[v] >= 0}
    if not good:
        return True
    start = next(iter(good))
    seen, stack = {start}, [start]
    while stack:
        u = stack.pop()
        for e in t.incident(u):
            w = e.other(u)
            if w in good and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == good


@prop("dicritical-unit-arrows")
def _dic_units(t):
    for v, deg in inv.dicriticals(t):
        if deg is None:
            continue
        if deg < 1:
            return False  # a dicritical of degree 0 has no (1)-arrow above it
        if any(e.q_parent != 1 for e in t.children(v) if t.kind(e.child) is Kind.ARROW1):
            return False
    return True


@prop("dicritical-path-determinant")
def _dic_path(t):
    N = inv.multiplicities(t)
    for w, s in inv.dicriticals(t):
        if s is None:
            continue
        for v in t.vertices():
            if v == w:
                continue
            g = inv.path_view(t, v, w)
            if inv.is_linear(t, g) and N[v] != -s * inv.path_determinant(t, g):
                return False
    return True


@prop("removal-moves-invariant")
def _moves(t):
    M, pts, N = inv.tree_multiplicity(t), inv.points_at_infinity(t), inv.multiplicities(t)
    for m in tf.legal_moves(t):
        if m.kind not in ("remove-dead-end-1", "contract-valency-2"):
            continue
        u = tf.apply_move(t, m)
        if not validate(u).ok:
            return False
        if inv.tree_multiplicity(u) != M or inv.points_at_infinity(u) != pts:
            return False
        Nu = inv.multiplicities(u)
        if any(Nu[x] != N[x] for x in Nu):
            return False
    return True


@prop("normal-form")
def _normal_form(t):
    if not inv.is_generic(t):
        return None
    n = tf.normalize(t)
    if not (validate(n).ok and inv.is_minimally_complete(n)):
        return False
    if tf.normalize(n) != n:
        return False
    if inv.tree_multiplicity(n) != inv.tree_multiplicity(t):
        return False
    if inv.points_at_infinity(n) != inv.points_at_infinity(t):
        return False
    rng = random.Random(serialize(t))
    return tf.normalize(t, rng) == n


def completion_scan(t: Tree, e: Edge, span: int = 50) -> list[int]:
    """Every q' in [-span, span] giving a valid tree whose new vertex is dicritical."""
    w = t.fresh_id()
    base_nodes = list(t.nodes) + [Node(w, Kind.VERTEX)]
    others = [f for f in t.edges if f is not e]
    hits = []
    for qn in range(-span, span + 1):
        u = Tree(base_nodes, others + [Edge(e.parent, w, e.q_parent, qn), Edge(w, e.child, 1, 1)])
        # same hit set as "valid and dicritical", just the cheap test first
        if inv.vertex_multiplicity(u, w) == 0 and validate(u).ok:
            hits.append(qn)
    return hits


def completion_edges(t: Tree) -> list[Edge]:
    N = inv.multiplicities(t)
    return [e for e in t.edges if t.kind(e.child) is Kind.ARROW1 and N[e.parent] > 0]


@prop("completion-unique", slow=True)
def _completion(t):
    edges = completion_edges(t)
    if not edges:
        return None
    for e in edges:
        if completion_scan(t, e) != [tf.completion_decoration(t, e)]:
            return False
    return True


@prop("defect-identity")
def _defect_identity(t):
    if not _mc2(t):
        return None
    s = len(inv.dicriticals(t))
    return inv.tree_multiplicity(t) + inv.delta_total(t) == 2 - s


@prop("defect-local")
def _defect_local(t):
    if not _mc2(t):
        return None
    N = inv.multiplicities(t)
    for v in inv.non_dicriticals(t):
        d = inv.delta(t, v)  # raises when the two formulas disagree
        if d.delta < 0 or d.r_v < 1:
            return False
        if v == t.root:
            if (d.delta == 0) != (t.valency(v) == 2):
                return False
        elif (d.delta == 0) != (N[v] == 1 and not t.dead_ends(v)):
            return False
    return True


def _equality_condition(t: Tree) -> bool:
    N = inv.multiplicities(t)
    dic = inv.dicritical_set(t)
    return (inv.points_at_infinity(t) == 2
            and all(e.parent in dic for e in t.edges if t.kind(e.child) is Kind.ARROW0)
            and all(N[v] == 1 for v in t.vertices() if v != t.root and v not in dic))


@prop("multiplicity-bound")
def _bound(t):
    if not _mc2(t):
        return None
    s = len(inv.dicriticals(t))
    M = inv.tree_multiplicity(t)
    return M <= 2 - s and (M == 2 - s) == _equality_condition(t)


@prop("classification")
def _classification(t):
    if not _mc2(t):
        return None
    rep = cl.check_max_multiplicity(t)
    if not rep.hypotheses_hold:
        return None
    return rep.shadow_class.tag != "Other"


@prop("companions")
def _companions(t):
    if not _mc2(t):
        return None
    dic = inv.dicritical_set(t)
    comps = {u: cl.companion(t, u) for u in dic}
    every = all(c in dic for c in comps.values())
    some = any(c in dic for c in comps.values())
    if every != some:
        return False
    degrees = [d for _, d in inv.dicriticals(t)]
    if math.gcd(*degrees) == 1:
        return some == (cl.match_shadow(cl.shadow(t)).tag == "Fig2")
    return True


@prop("unit-vertex-edges")
def _unit_edges(t):
    if not inv.is_minimally_complete(t):
        return None
    N = inv.multiplicities(t)
    for v in t.vertices():
        if N[v] != 1:
            continue
        for e in t.children(v):
            w = e.child
            if not t.kind(w).is_vertex:
                continue
            if N[w] != 0 or inv.dicritical_degree(t, w) != 1 or inv.edge_determinant(t, e) != -1:
                return False
    return True


# -- campaigns -----------------------------------------------------------------

@dataclass
class CampaignReport:
    trees_enumerated: int = 0
    minimally_complete: int = 0
    results: dict = field(default_factory=dict)  # property -> [passed, failed]
    counterexamples: list = field(default_factory=list)  # (property, DSL, detail)
    rejected: list = field(default_factory=list)  # (DSL, axioms) for invalid inputs
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def record(self, name: str, outcome: bool | None, t: Tree, detail: str = "") -> None:
        if outcome is None:
            return
        slot = self.results.setdefault(name, [0, 0])
        slot[0 if outcome else 1] += 1
        if not outcome:
            self.counterexamples.append((name, serialize(t), detail))

    def merge(self, other: "CampaignReport") -> "CampaignReport":
        out = CampaignReport(
            self.trees_enumerated + other.trees_enumerated,
            self.minimally_complete + other.minimally_complete,
            {},
            self.counterexamples + other.counterexamples,
            self.rejected + other.rejected,
            self.seconds + other.seconds,
        )
        for src in (self.results, other.results):
            for k, (p, f) in src.items():
                slot = out.results.setdefault(k, [0, 0])
                slot[0] += p
                slot[1] += f
        return out

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "trees_enumerated": self.trees_enumerated,
            "minimally_complete": self.minimally_complete,
            "results": {k: {"passed": p, "failed": f} for k, (p, f) in sorted(self.results.items())},
            "counterexamples": [{"property": n, "tree": s, "detail": d}
                                for n, s, d in self.counterexamples],
            "rejected": [{"tree": s, "axioms": a} for s, a in self.rejected],
            "seconds": round(self.seconds, 3),
        }


def check_tree(t: Tree, report: CampaignReport, properties: Iterable[str] | None = None) -> None:
    names = list(PROPERTIES) if properties is None else list(properties)
    vr = validate(t)
    if not vr.ok:
        report.rejected.append((serialize(t) if t.is_well_formed() else repr(t),
                                sorted(vr.axioms())))
        return
    report.trees_enumerated += 1
    if _mc2(t):
        report.minimally_complete += 1
    for name in names:
        try:
            outcome = PROPERTIES[name](t)
            detail = ""
        except (ArithmeticError, ValueError) as exc:
            outcome, detail = False, f"{type(exc).__name__}: {exc}"
        report.record(name, outcome, t, detail)


def replay(name: str, text: str) -> bool | None:
    """Re-run one property on a tree given as DSL text."""
    try:
        return PROPERTIES[name](parse(text))
    except (ArithmeticError, ValueError):
        return False


def run_campaign(bounds: EnumBounds = EnumBounds(), *, scope: str = "minimal",
                 trees: Iterable[Tree] | None = None, slow: bool = True,
                 properties: Iterable[str] | None = None) -> CampaignReport:
    """Check every registered property on a population of trees.

    ``scope="all"`` walks every valid tree within ``bounds``;
    ``scope="minimal"`` walks the minimally complete trees with at least two
    points at infinity.  ``trees`` overrides the population (invalid trees are
    reported and excluded).  ``slow=False`` skips the brute-force completion scan.
    """
    start = time.perf_counter()
    if trees is None:
        if scope == "all":
            trees = enumerate_trees(bounds)
        elif scope == "minimal":
            trees = enumerate_minimally_complete(bounds)
        else:
            raise ValueError(f"unknown scope {scope!r}")
    names = list(PROPERTIES) if properties is None else list(properties)
    if not slow:
        names = [n for n in names if n not in SLOW_PROPERTIES]
    report = CampaignReport()
    for t in trees:
        check_tree(t, report, names)
    report.seconds = time.perf_counter() - start
    return report


# -- random equivalence walks ----------------------------------------------------

@dataclass
class WalkResult:
    start: str
    moves: list
    ok: bool
    detail: str = ""


def equivalence_walk(t: Tree, rng: random.Random, steps: int = 6) -> WalkResult:
    """Apply random legal moves; multiplicity, points at infinity and the normal form must not move."""
    M, pts = inv.tree_multiplicity(t), inv.points_at_infinity(t)
    target = tf.normalize(t) if inv.is_generic(t) else None
    start = serialize(t)
    taken = []
    for _ in range(steps):
        moves = tf.legal_moves(t)
        if not moves:
            break
        m = rng.choice(moves)
        taken.append(m.kind)
        u = tf.apply_move(t, m)
        if not validate(u).ok:
            return WalkResult(start, taken, False, f"invalid tree after {m.kind}")
        if inv.tree_multiplicity(u) != M or inv.points_at_infinity(u) != pts:
            return WalkResult(start, taken, False, f"invariant changed after {m.kind}")
        if target is not None and tf.normalize(u) != target:
            return WalkResult(start, taken, False, f"normal form changed after {m.kind}")
        t = u
    return WalkResult(start, taken, True)
