"""Decorated rooted trees: data model, text DSL, axiom validation, canonical form.

A tree is built from :class:`Node` cells (the root, ordinary vertices and
arrows flagged ``(0)`` or ``(1)``) and :class:`Edge` objects that carry one
integer decoration at each extremity.  Trees are immutable values; every
transformation returns a new tree.

Equality of trees is isomorphism of rooted decorated trees: child order and
node ids are ignored.  :func:`canonical_order` picks the representative used
by :func:`serialize`.

The DSL::

    tree  := node
    node  := '(' 'v' child* ')'
    child := '(' INT INT node ')'     edge to a vertex: near parent, near child
           | '(' INT 'a1' ')'         edge to a (1)-arrow
           | '(' INT 'a0' ')'         dead end (edge to a (0)-arrow)
"""

from __future__ import annotations

import enum
import json
import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union


class Kind(str, enum.Enum):
    ROOT = "root-vertex"
    VERTEX = "vertex"
    ARROW0 = "arrow0"
    ARROW1 = "arrow1"

    @property
    def is_vertex(self) -> bool:
        return self in (Kind.ROOT, Kind.VERTEX)

    @property
    def is_arrow(self) -> bool:
        return self in (Kind.ARROW0, Kind.ARROW1)


# sort rank used by the canonical key: vertices, then dead ends, then (1)-arrows
_RANK = {Kind.VERTEX: 0, Kind.ROOT: 0, Kind.ARROW0: 1, Kind.ARROW1: 2}


@dataclass(frozen=True)
class Node:
    id: int
    kind: Kind


@dataclass(frozen=True)
class Edge:
    parent: int
    child: int
    q_parent: int
    q_child: int

    def near(self, v: int) -> int:
        """Decoration of this edge near ``v``."""
        if v == self.parent:
            return self.q_parent
        if v == self.child:
            return self.q_child
        raise ValueError(f"edge {self.parent}-{self.child} is not incident to node {v}")

    def other(self, v: int) -> int:
        if v == self.parent:
            return self.child
        if v == self.child:
            return self.parent
        raise ValueError(f"edge {self.parent}-{self.child} is not incident to node {v}")

    def touches(self, v: int) -> bool:
        return v == self.parent or v == self.child


class TreeError(ValueError):
    """Raised when nodes and edges cannot form a tree value at all."""


class DSLSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class Tree:
    """An immutable rooted tree with decorated edges.

    Children are kept in edge order, but ``==`` and ``hash`` only see the
    isomorphism class.
    """

    __slots__ = ("nodes", "edges", "root", "_kind", "_children", "_parent",
                 "_incident", "_key", "memo")

    def __init__(self, nodes: Iterable[Node], edges: Iterable[Edge]):
        self.nodes: tuple[Node, ...] = tuple(nodes)
        self.edges: tuple[Edge, ...] = tuple(edges)
        kind: dict[int, Kind] = {}
        for n in self.nodes:
            if n.id in kind:
                raise TreeError(f"duplicate node id {n.id}")
            kind[n.id] = Kind(n.kind)
        roots = [i for i, k in kind.items() if k is Kind.ROOT]
        if len(roots) != 1:
            raise TreeError(f"expected exactly one root vertex, found {len(roots)}")
        self.root: int = roots[0]
        children: dict[int, list[Edge]] = {i: [] for i in kind}
        parent: dict[int, list[Edge]] = {i: [] for i in kind}
        for e in self.edges:
            if e.parent not in kind or e.child not in kind:
                raise TreeError(f"edge {e.parent}-{e.child} references an unknown node")
            if e.parent == e.child:
                raise TreeError(f"loop edge at node {e.parent}")
            children[e.parent].append(e)
            parent[e.child].append(e)
        self._kind = kind
        self._children = {i: tuple(es) for i, es in children.items()}
        self._parent = {i: tuple(es) for i, es in parent.items()}
        self._incident = {i: self._parent[i] + self._children[i] for i in kind}
        self._key = None
        # scratch space for derived quantities (multiplicities etc.)
        self.memo: dict = {}

    # -- lookups ---------------------------------------------------------

    def kind(self, v: int) -> Kind:
        return self._kind[v]

    def __contains__(self, v: object) -> bool:
        return v in self._kind

    def node_ids(self) -> list[int]:
        return [n.id for n in self.nodes]

    def vertices(self) -> list[int]:
        return [n.id for n in self.nodes if n.kind.is_vertex]

    def arrows(self, kind: Kind | None = None) -> list[int]:
        if kind is None:
            return [n.id for n in self.nodes if n.kind.is_arrow]
        return [n.id for n in self.nodes if n.kind is kind]

    def children(self, v: int) -> tuple[Edge, ...]:
        """Upward edges at ``v``, in stored order."""
        return self._children[v]

    def parent_edge(self, v: int) -> Edge | None:
        es = self._parent[v]
        return es[0] if es else None

    def incident(self, v: int) -> tuple[Edge, ...]:
        return self._incident[v]

    def valency(self, v: int) -> int:
        return len(self._incident[v])

    def dead_ends(self, v: int) -> list[Edge]:
        return [e for e in self._children[v] if self._kind[e.child] is Kind.ARROW0]

    def edge_between(self, u: int, w: int) -> Edge:
        for e in self._incident[u]:
            if e.other(u) == w:
                return e
        raise KeyError(f"no edge between {u} and {w}")

    def ancestors(self, v: int) -> list[int]:
        """Nodes strictly below ``v`` in the tree order, nearest first."""
        out = []
        e = self.parent_edge(v)
        while e is not None:
            out.append(e.parent)
            e = self.parent_edge(e.parent)
        return out

    def is_above(self, x: int, v: int) -> bool:
        """``x > v`` in the partial order (``v`` lies on the path from the root to ``x``)."""
        return x != v and v in self.ancestors(x)

    def descendants(self, v: int) -> list[int]:
        out, stack = [], [e.child for e in self._children[v]]
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(e.child for e in self._children[u])
        return out

    def path(self, u: int, w: int) -> tuple[list[int], list[Edge]]:
        """Nodes and edges of the simple path from ``u`` to ``w``."""
        up = [u] + self.ancestors(u)
        wp = [w] + self.ancestors(w)
        common = set(up) & set(wp)
        meet = next(x for x in up if x in common)
        left = up[: up.index(meet) + 1]
        right = wp[: wp.index(meet)]
        nodes = left + right[::-1]
        edges = [self.edge_between(a, b) for a, b in zip(nodes, nodes[1:])]
        return nodes, edges

    def fresh_id(self) -> int:
        return max(self._kind) + 1

    # -- identity --------------------------------------------------------

    def is_well_formed(self) -> bool:
        """True when the edges form a tree rooted at the root vertex."""
        return not _structure_violations(self)

    @property
    def key(self):
        """Canonical isomorphism key (nested tuples)."""
        if self._key is None:
            if self.is_well_formed():
                self._key = _vertex_key(self, self.root)
            else:
                self._key = ("malformed", frozenset(self.nodes), frozenset(self.edges))
        return self._key

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tree):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        if self.is_well_formed():
            return f"Tree({serialize(self)!r})"
        return f"Tree(nodes={self.nodes!r}, edges={self.edges!r})"

    def __str__(self) -> str:
        return serialize(self)


NodeRef = int


# -- canonical form -----------------------------------------------------

def _branch_key(t: Tree, e: Edge):
    k = t.kind(e.child)
    sub = _vertex_key(t, e.child) if k.is_vertex else ()
    return (_RANK[k], -e.q_parent, e.q_child, sub)


def _vertex_key(t: Tree, v: int):
    return tuple(sorted(_branch_key(t, e) for e in t.children(v)))


def canonical_order(t: Tree) -> Tree:
    """Reorder children at every vertex by the canonical branch key."""
    edges: list[Edge] = []

    def visit(v: int) -> None:
        for e in sorted(t.children(v), key=lambda e: _branch_key(t, e)):
            edges.append(e)
            visit(e.child)

    visit(t.root)
    nodes = sorted(t.nodes, key=lambda n: n.id)
    return Tree(nodes, edges)


def isomorphic(a: Tree, b: Tree) -> bool:
    return a.key == b.key


# -- DSL -----------------------------------------------------------------

def serialize(t: Tree) -> str:
    """Canonical DSL text for ``t``."""
    def node(v: int) -> str:
        parts = ["v"]
        for e in sorted(t.children(v), key=lambda e: _branch_key(t, e)):
            k = t.kind(e.child)
            if k is Kind.ARROW1:
                parts.append(f"({e.q_parent} a1)")
            elif k is Kind.ARROW0:
                parts.append(f"({e.q_parent} a0)")
            else:
                parts.append(f"({e.q_parent} {e.q_child} {node(e.child)})")
        return "(" + " ".join(parts) + ")"

    return node(t.root)


_TOKEN = re.compile(r"\s*(?:(\()|(\))|([+-]?\d+)|(a0|a1|v)(?![\w-])|(\S))")


def _tokens(text: str) -> Iterator[tuple[str, str, int, int]]:
    line_starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def where(pos: int) -> tuple[int, int]:
        line = next(i for i in range(len(line_starts) - 1, -1, -1) if line_starts[i] <= pos)
        return line + 1, pos - line_starts[line] + 1

    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex)
        line, col = where(start)
        if m.group(1):
            yield "(", "(", line, col
        elif m.group(2):
            yield ")", ")", line, col
        elif m.group(3):
            yield "int", m.group(3), line, col
        elif m.group(4):
            yield m.group(4), m.group(4), line, col
        else:
            raise DSLSyntaxError(f"unexpected character {m.group(5)!r}", line, col)
        pos = m.end()
    line, col = where(len(text))
    yield "eof", "", line, col


class _Parser:
    def __init__(self, text: str):
        self.toks = list(_tokens(text))
        self.i = 0
        self.nodes: list[Node] = []
        self.edges: list[Edge] = []

    def peek(self):
        return self.toks[self.i]

    def take(self, kind: str):
        tok = self.toks[self.i]
        if tok[0] != kind:
            shown = tok[1] or "end of input"
            raise DSLSyntaxError(f"expected {kind!r}, got {shown!r}", tok[2], tok[3])
        self.i += 1
        return tok

    def new(self, kind: Kind) -> int:
        nid = len(self.nodes)
        self.nodes.append(Node(nid, kind))
        return nid

    def tree(self) -> Tree:
        self.node(Kind.ROOT)
        self.take("eof")
        return Tree(self.nodes, self.edges)

    def node(self, kind: Kind) -> int:
        self.take("(")
        self.take("v")
        v = self.new(kind)
        while self.peek()[0] == "(":
            self.child(v, kind is Kind.ROOT)
        self.take(")")
        return v

    def child(self, parent: int, at_root: bool) -> None:
        self.take("(")
        qp_tok = self.take("int")
        qp = int(qp_tok[1])
        if at_root and qp != 1:
            raise DSLSyntaxError("decoration near the root must be 1", qp_tok[2], qp_tok[3])
        nxt = self.peek()
        slot = len(self.edges)
        self.edges.append(None)  # keep preorder edge order
        if nxt[0] in ("a0", "a1"):
            self.i += 1
            child = self.new(Kind.ARROW1 if nxt[0] == "a1" else Kind.ARROW0)
            self.edges[slot] = Edge(parent, child, qp, 1)
        elif nxt[0] == "int":
            qc_tok = self.take("int")
            qc = int(qc_tok[1])
            if self.peek()[0] in ("a0", "a1"):
                if qc != 1:
                    raise DSLSyntaxError("decoration near an arrow must be 1", qc_tok[2], qc_tok[3])
                kind = self.take(self.peek()[0])[0]
                child = self.new(Kind.ARROW1 if kind == "a1" else Kind.ARROW0)
            else:
                child = self.node(Kind.VERTEX)
            self.edges[slot] = Edge(parent, child, qp, qc)
        else:
            shown = nxt[1] or "end of input"
            raise DSLSyntaxError(f"expected a decoration, 'a0' or 'a1', got {shown!r}",
                                 nxt[2], nxt[3])
        self.take(")")


def parse(text: str) -> Tree:
    """Parse DSL text into a tree.  No axiom checking is done here."""
    return _Parser(text).tree()


# -- JSON ----------------------------------------------------------------

def to_json(t: Tree) -> dict:
    return {
        "root": t.root,
        "nodes": [{"id": n.id, "kind": n.kind.value} for n in t.nodes],
        "edges": [
            {"parent": e.parent, "child": e.child, "q_parent": e.q_parent, "q_child": e.q_child}
            for e in t.edges
        ],
    }


def from_json(data: Union[dict, str]) -> Tree:
    if isinstance(data, str):
        data = json.loads(data)
    nodes = [Node(int(n["id"]), Kind(n["kind"])) for n in data["nodes"]]
    edges = [Edge(int(e["parent"]), int(e["child"]), int(e["q_parent"]), int(e["q_child"]))
             for e in data["edges"]]
    t = Tree(nodes, edges)
    if "root" in data and data["root"] != t.root:
        raise TreeError(f"root id {data['root']} does not name the root vertex")
    return t


# -- validation ----------------------------------------------------------

Site = Union[int, Edge, None]


@dataclass(frozen=True)
class Violation:
    axiom: str
    site: Site
    message: str

    def as_dict(self) -> dict:
        site = self.site
        if isinstance(site, Edge):
            site = {"parent": site.parent, "child": site.child}
        return {"axiom": self.axiom, "site": site, "message": self.message}


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def axioms(self) -> set[str]:
        return {v.axiom for v in self.violations}

    def as_dict(self) -> dict:
        return {"ok": self.ok, "violations": [v.as_dict() for v in self.violations]}

    def __bool__(self) -> bool:
        return self.ok


def coprime(a: int, b: int) -> bool:
    # gcd on absolute values with gcd(0, n) = |n|
    return math.gcd(a, b) == 1


def _structure_violations(t: Tree) -> list[Violation]:
    out = []
    if not t.vertices():
        out.append(Violation("nonempty", None, "no vertices"))
    if not t.arrows():
        out.append(Violation("nonempty", None, "no arrows"))
    if t._parent[t.root]:
        out.append(Violation("rooted", t.root, "the root has a parent edge"))
    for n in t.nodes:
        if n.id != t.root and len(t._parent[n.id]) != 1:
            out.append(Violation("rooted", n.id,
                                 f"node {n.id} has {len(t._parent[n.id])} parent edges"))
        if n.kind.is_arrow and t._children[n.id]:
            out.append(Violation("arrow-valency", n.id, f"arrow {n.id} has valency > 1"))
    seen, stack = {t.root}, [t.root]
    while stack:
        u = stack.pop()
        for e in t._children[u]:
            if e.child in seen:
                out.append(Violation("acyclic", e, f"node {e.child} is reached twice"))
                continue
            seen.add(e.child)
            stack.append(e.child)
    for n in t.nodes:
        if n.id not in seen:
            out.append(Violation("connected", n.id, f"node {n.id} is not connected to the root"))
    return out


def validate(t: Tree) -> ValidationReport:
    """Check every axiom of an abstract Newton tree at infinity.

    Structural problems (not a rooted tree, arrows with children) are
    reported alone, since the decoration axioms are meaningless then.
    """
    report = ValidationReport(_structure_violations(t))
    if report.violations:
        return report
    add = report.violations.append
    kind = t.kind

    for v in t.vertices():
        if v == t.root:
            if t.valency(v) < 1:
                add(Violation("vertex-valency", v, "the root has valency 0"))
        elif t.valency(v) < 2:
            add(Violation("vertex-valency", v, f"vertex {v} has valency {t.valency(v)} < 2"))

    for e in t.edges:
        if e.parent == t.root and e.q_parent != 1:
            add(Violation("root-decoration", e, f"decoration {e.q_parent} near the root"))
        if kind(e.child).is_arrow and e.q_child != 1:
            add(Violation("arrow-decoration", e, f"decoration {e.q_child} near an arrow"))

    has_arrow1: dict[int, bool] = {}

    def arrow_above(v: int) -> bool:
        if v not in has_arrow1:
            has_arrow1[v] = any(
                kind(e.child) is Kind.ARROW1 or (kind(e.child).is_vertex and arrow_above(e.child))
                for e in t.children(v))
        return has_arrow1[v]

    for v in t.vertices():
        if not arrow_above(v):
            add(Violation("arrow-above", v, f"no (1)-arrow above vertex {v}"))
        dead = t.dead_ends(v)
        if len(dead) > 1:
            add(Violation("single-dead-end", v, f"{len(dead)} dead ends at vertex {v}"))

        inc = t.incident(v)
        for i, e in enumerate(inc):
            for f in inc[:i]:
                a, b = f.near(v), e.near(v)
                if not coprime(a, b):
                    add(Violation("coprime", v,
                                  f"decorations {a} and {b} near vertex {v} are not coprime"))
        up = t.children(v)
        if not up:
            add(Violation("upward-edges", v, f"vertex {v} has no upward edge"))
            continue
        for e in up:
            if e.q_parent < 1:
                add(Violation("upward-positive", e,
                              f"upward decoration {e.q_parent} < 1 at vertex {v}"))
        if sum(1 for e in up if e.q_parent > 1) > 1:
            add(Violation("single-large-upward", v,
                          f"more than one upward decoration > 1 at vertex {v}"))
        top = max(e.q_parent for e in up)
        for e in dead:
            if e.q_parent != top:
                add(Violation("dead-end-leading", e, f"dead end at vertex {v} is not leading"))

    for e in t.edges:
        if kind(e.parent).is_vertex and kind(e.child).is_vertex:
            det = edge_det(t, e)
            if det >= 0:
                add(Violation("edge-determinant", e,
                              f"edge {e.parent}-{e.child} has determinant {det} >= 0"))
    return report


def edge_det(t: Tree, e: Edge) -> int:
    """Product of the decorations on ``e`` minus the product of those adjacent to it."""
    adj = 1
    for end in (e.parent, e.child):
        for f in t.incident(end):
            if f is not e:
                adj *= f.near(end)
    return e.q_parent * e.q_child - adj


def is_valid(t: Tree) -> bool:
    return validate(t).ok


def load(path: str) -> Tree:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())
