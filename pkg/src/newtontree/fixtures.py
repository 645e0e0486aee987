"""Canonical example trees shared by the test suite and the CLI."""

from .tree import Tree, parse

# root with two (1)-arrows
T0_TEXT = "(v (1 a1) (1 a1))"

# two dicriticals, one on each side of the root (a1=2, a1'=3)
T2_TEXT = "(v (1 -3 (v (2 a0) (1 a1))) (1 -2 (v (3 a0) (1 a1))))"

# one multiplicity-1 vertex carrying r=2 dicriticals, plus one dicritical on the other side
T3_TEXT = ("(v (1 0 (v (1 -1 (v (1 a0) (1 a1))) (1 -1 (v (1 a0) (1 a1)))))"
           " (1 -2 (v (1 a0) (1 a1))))")

# two multiplicity-1 vertices, each carrying two dicriticals
T4_TEXT = ("(v (1 -1 (v (1 -2 (v (1 a0) (1 a1))) (1 -2 (v (1 a0) (1 a1)))))"
           " (1 -1 (v (2 -1 (v (1 a0) (1 a1))) (1 -3 (v (1 a0) (1 a1))))))")

TEXTS = {"T0": T0_TEXT, "T2": T2_TEXT, "T3": T3_TEXT, "T4": T4_TEXT}


def fixture(name: str) -> Tree:
    return parse(TEXTS[name])


def all_fixtures() -> dict[str, Tree]:
    return {name: parse(text) for name, text in TEXTS.items()}
