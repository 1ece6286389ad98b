"""Exact computation with Coxeter groups: Tits representation, balls, walls and wall-orbit trees.

Also decides the commensurability side conditions for right-angled Artin
groups and 2-orbifold groups.
"""

__version__ = "0.1.0"

from .coxeter_core import (  # noqa: E402
    AFFINE,
    INDEFINITE,
    POSITIVE_DEFINITE,
    CoxeterSystem,
    InvariantViolation,
    ParseError,
    classify,
    components,
    dihedral,
    from_diagram,
    named_system,
    parse_system,
    right_angled_polygon,
    triangle,
)
from .davis import davis_ball, separating_walls, wall_inventory, wall_relation  # noqa: E402
from .elements import BudgetExceeded, ball, element, normal_form  # noqa: E402
from .orbifold import TwoOrbifold, euler_char, is_hyperbolic, orbifold_group_presentation  # noqa: E402
from .raag import DefiningGraph, decompose, dj_embedding, parse_graph  # noqa: E402
from .wall_trees import congruence_subgroup, run_trees, wall_orbits  # noqa: E402

__all__ = [
    "AFFINE", "INDEFINITE", "POSITIVE_DEFINITE", "BudgetExceeded", "CoxeterSystem", "DefiningGraph",
    "InvariantViolation", "ParseError", "TwoOrbifold", "ball", "classify", "components",
    "congruence_subgroup", "davis_ball", "decompose", "dihedral", "dj_embedding", "element",
    "euler_char", "from_diagram", "is_hyperbolic", "named_system", "normal_form",
    "orbifold_group_presentation", "parse_graph", "parse_system", "right_angled_polygon",
    "run_trees", "separating_walls", "triangle", "wall_inventory", "wall_orbits", "wall_relation",
]
