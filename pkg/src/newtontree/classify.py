"""Shadows, companions and the trees of maximal multiplicity.

A minimally complete tree with at least two points at infinity, dicritical
degrees of gcd 1 and multiplicity ``2 - d`` has one of three shadows:

* ``Fig2``: one dicritical on each side of the root;
* ``Fig3(r)``: a multiplicity-1 vertex carrying ``r >= 2`` dicriticals on
  one side, one dicritical on the other;
* ``Fig4(r)``: multiplicity-1 vertices on both sides, carrying ``r >= 2``
  and exactly 2 dicriticals.

The ``fig*_family`` generators build every tree with those shadows from
integer parameters, and re-validate what they build.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from . import invariants as inv
from .tree import Kind, Tree, parse, validate


class ClassifyError(ValueError):
    pass


class FamilyError(ValueError):
    pass


# -- shadows ---------------------------------------------------------------

@dataclass(frozen=True)
class Shadow:
    """Underlying rooted tree plus the multiplicity of every non-root vertex."""

    tree: Tree
    labels: dict = field(hash=False)

    def key(self):
        t = self.tree

        def node(v: int):
            k = t.kind(v)
            if k is Kind.ARROW0:
                return (1, 0, ())
            if k is Kind.ARROW1:
                return (2, 0, ())
            return (0, self.labels.get(v, 0), tuple(sorted(node(e.child) for e in t.children(v))))

        return ("root", node(t.root)[2])

    def __eq__(self, other):
        if not isinstance(other, Shadow):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


def shadow(t: Tree) -> Shadow:
    N = inv.multiplicities(t)
    return Shadow(t, {v: N[v] for v in t.vertices() if v != t.root})


# shadow-key templates

_A0 = (1, 0, ())
_A1 = (2, 0, ())


def _vertex(label: int, children) -> tuple:
    return (0, label, tuple(sorted(children)))


def _dicritical() -> tuple:
    return _vertex(0, [_A0, _A1])


def fig2_key():
    return ("root", tuple(sorted([_dicritical(), _dicritical()])))


def fig3_key(r: int):
    return ("root", tuple(sorted([_vertex(1, [_dicritical()] * r), _dicritical()])))


def fig4_key(r: int):
    side = _vertex(1, [_dicritical()] * r)
    pair = _vertex(1, [_dicritical()] * 2)
    return ("root", tuple(sorted([side, pair])))


@dataclass(frozen=True)
class ShadowClass:
    tag: str  # "Fig2" | "Fig3" | "Fig4" | "Other"
    r: int | None = None

    def __str__(self) -> str:
        return self.tag if self.r is None else f"{self.tag}({self.r})"


def match_shadow(s: Shadow) -> ShadowClass:
    key = s.key()
    if key == fig2_key():
        return ShadowClass("Fig2")
    for r in range(2, len(s.tree.nodes) + 1):
        if key == fig3_key(r):
            return ShadowClass("Fig3", r)
        if key == fig4_key(r):
            return ShadowClass("Fig4", r)
    return ShadowClass("Other")


def classify_shadow(t: Tree) -> ShadowClass:
    if not inv.is_minimally_complete(t):
        raise ClassifyError("classification needs a minimally complete tree")
    return match_shadow(shadow(t))


# -- companions ------------------------------------------------------------

def _require_mc2(t: Tree) -> None:
    if not inv.is_minimally_complete(t):
        raise ClassifyError("tree is not minimally complete")
    if inv.points_at_infinity(t) < 2:
        raise ClassifyError("tree has fewer than two points at infinity")


def companion(t: Tree, u: int) -> int:
    """The unique vertex of valency > 2 joined to the dicritical ``u`` by a linear path."""
    _require_mc2(t)
    if u not in t or not t.kind(u).is_vertex or inv.multiplicities(t)[u] != 0:
        raise ClassifyError(f"node {u} is not a dicritical")
    found = [v for v in t.vertices()
             if v != u and t.valency(v) > 2 and inv.is_linear(t, inv.path_view(t, u, v))]
    if len(found) != 1:
        raise ClassifyError(f"dicritical {u} has {len(found)} companion candidates")
    return found[0]


# -- maximal multiplicity ----------------------------------------------------

@dataclass
class MaxMultiplicityReport:
    s: int
    degrees: list
    gcd: int
    M: int
    points_at_infinity: int
    delta_total: int
    bound_holds: bool
    equality: bool
    identity_holds: bool
    hypotheses_hold: bool
    shadow_class: ShadowClass | None

    @property
    def ok(self) -> bool:
        if not (self.bound_holds and self.identity_holds):
            return False
        return not self.hypotheses_hold or self.shadow_class.tag != "Other"

    def as_dict(self) -> dict:
        return {
            "s": self.s,
            "degrees": self.degrees,
            "gcd": self.gcd,
            "M": self.M,
            "points_at_infinity": self.points_at_infinity,
            "delta_total": self.delta_total,
            "bound_holds": self.bound_holds,
            "equality": self.equality,
            "identity_holds": self.identity_holds,
            "hypotheses_hold": self.hypotheses_hold,
            "shadow_class": None if self.shadow_class is None else str(self.shadow_class),
            "ok": self.ok,
        }


def check_max_multiplicity(t: Tree) -> MaxMultiplicityReport:
    _require_mc2(t)
    dic = inv.dicriticals(t)
    degrees = [d for _, d in dic]
    if any(d is None for d in degrees):
        raise ClassifyError("a dicritical has a vertex above it")
    s = len(dic)
    g = math.gcd(*degrees) if degrees else 0
    M = inv.tree_multiplicity(t)
    dt = inv.delta_total(t)
    hyp = g == 1 and M == 2 - s
    return MaxMultiplicityReport(
        s=s,
        degrees=degrees,
        gcd=g,
        M=M,
        points_at_infinity=inv.points_at_infinity(t),
        delta_total=dt,
        bound_holds=M <= 2 - s,
        equality=M == 2 - s,
        identity_holds=M + dt == 2 - s,
        hypotheses_hold=hyp,
        shadow_class=classify_shadow(t) if hyp else None,
    )


# -- explicit families -------------------------------------------------------

@dataclass(frozen=True)
class FamilyParams:
    """Parameters of one of the three families.

    ``a_i`` holds ``(a1,)`` for figure 2 and ``(a1, ..., ar)`` for figures 3 and 4.
    """

    figure: int
    a_i: tuple[int, ...]
    a1_prime: int
    a: int = 1
    a_prime: int = 1

    def build(self) -> Tree:
        if self.figure == 2:
            if len(self.a_i) != 1:
                raise FamilyError("figure 2 takes exactly one a1")
            return fig2_family(self.a_i[0], self.a1_prime)
        if self.figure == 3:
            return fig3_family(self.a, self.a_i, self.a1_prime)
        if self.figure == 4:
            return fig4_family(self.a, self.a_i, self.a_prime, self.a1_prime)
        raise FamilyError(f"unknown figure {self.figure}")


def _positive(**values: int) -> None:
    for name, value in values.items():
        if not isinstance(value, int) or value < 1:
            raise FamilyError(f"{name} must be a positive integer, got {value!r}")


def _dic_text(a: int) -> str:
    return f"(v ({a} a0) (1 a1))"


def _checked(text: str, figure: str) -> Tree:
    t = parse(text)
    report = validate(t)
    if not report.ok:
        reasons = "; ".join(v.message for v in report.violations)
        raise FamilyError(f"{figure} parameters give an invalid tree: {reasons}")
    if not inv.is_minimally_complete(t):
        raise FamilyError(f"{figure} parameters give a tree that is not minimally complete: "
                          f"{inv.minimal_completeness_failures(t)}")
    return t


def fig2_family(a1: int, a1p: int) -> Tree:
    _positive(a1=a1, a1p=a1p)
    if math.gcd(a1, a1p) != 1:
        raise FamilyError(f"a1={a1} and a1'={a1p} are not coprime")
    q1, q1p = -a1p, -a1
    text = f"(v (1 {q1} {_dic_text(a1)}) (1 {q1p} {_dic_text(a1p)}))"
    return _checked(text, "figure 2")


def _side(a: int, q: int, qs: Sequence[int], a_list: Sequence[int]) -> str:
    parts = [f"({a} {qs[0]} {_dic_text(a_list[0])})"]
    parts += [f"(1 {qi} {_dic_text(ai)})" for qi, ai in zip(qs[1:], a_list[1:])]
    return f"(1 {q} (v {' '.join(parts)}))"


def fig3_family(a: int, a_list: Sequence[int], a1p: int) -> Tree:
    a_list = tuple(a_list)
    if len(a_list) < 2:
        raise FamilyError("figure 3 needs r >= 2 values a1..ar")
    _positive(a=a, a1p=a1p, **{f"a{i + 1}": x for i, x in enumerate(a_list)})
    a1 = a_list[0]
    n = sum(a_list[1:])
    m = a * n + a1
    if (a * a1p - 1) % m:
        raise FamilyError(f"a*a1' = {a * a1p} is not 1 modulo a*n + a1 = {m}")
    q = (1 - a * a1p) // m
    qs = [-q * n - a1p] + [q * a * ai - 1 for ai in a_list[1:]]
    q1p = -a * n - a1
    text = f"(v {_side(a, q, qs, a_list)} (1 {q1p} {_dic_text(a1p)}))"
    return _checked(text, "figure 3")


def fig4_family(a: int, a_list: Sequence[int], ap: int, a1p: int) -> Tree:
    a_list = tuple(a_list)
    if len(a_list) < 2:
        raise FamilyError("figure 4 needs r >= 2 values a1..ar")
    _positive(a=a, ap=ap, a1p=a1p, **{f"a{i + 1}": x for i, x in enumerate(a_list)})
    a1 = a_list[0]
    n = sum(a_list[1:])
    if a1p * (a * (1 - n) - a1) + a * ap != 1:
        raise FamilyError(f"a1'(a(1-n) - a1) + a a' = {a1p * (a * (1 - n) - a1) + a * ap}, not 1")
    a2p = 1
    q = -a1p
    qp = a * (1 - n) - a1
    qs = [-q * n - ap - a1p] + [-a * q * (n - ai) - q * a1 - a * (ap + a1p) for ai in a_list[1:]]
    q1p = -qp - (a * n + a1)
    q2p = -qp * a1p - ap * (a * n + a1)
    right = _side(ap, qp, [q1p, q2p], [a1p, a2p])
    text = f"(v {_side(a, q, qs, a_list)} {right})"
    return _checked(text, "figure 4")


def generate(params: FamilyParams) -> Tree:
    return params.build()
