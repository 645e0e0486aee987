"""Abstract Newton trees at infinity: validation, invariants, moves, classification."""

from .classify import (
    FamilyError,
    FamilyParams,
    MaxMultiplicityReport,
    ShadowClass,
    check_max_multiplicity,
    classify_shadow,
    companion,
    fig2_family,
    fig3_family,
    fig4_family,
    generate,
    shadow,
)
from .dot import export_dot
from .invariants import (
    InvariantError,
    delta,
    delta_total,
    dicritical_degree,
    dicriticals,
    is_complete,
    is_generic,
    is_minimally_complete,
    multiplicities,
    points_at_infinity,
    tree_degree,
    tree_multiplicity,
    vertex_multiplicity,
    x_factor,
    x_hat,
)
from .oracle import EnumBounds, count_trees, enumerate_minimally_complete, enumerate_trees, run_campaign
from .transforms import Move, MoveError, complete, legal_moves, normalize
from .tree import (
    DSLSyntaxError,
    Edge,
    Kind,
    Node,
    Tree,
    TreeError,
    canonical_order,
    from_json,
    isomorphic,
    parse,
    serialize,
    to_json,
    validate,
)

__version__ = "0.1.0"
