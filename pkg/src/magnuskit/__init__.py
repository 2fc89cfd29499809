"""Exact pre-Lie Magnus expansions on rooted trees, their free Lie images,
the classical midpoint tables and a numeric Magnus integrator."""

__version__ = "0.1.0"

from .exact import bernoulli, format_rational, parse_rational
from .freelie import (
    HSeries,
    LieElement,
    bracket,
    classical_magnus_midpoint,
    graded_dimension,
    lyndon_words,
    magnus_lie,
    phi,
)
from .gl import Forest, GLElement, gl_action, gl_product, log_star_component
from .magnus import (
    MagnusTermTable,
    TableExhaustedError,
    TermCounts,
    gamma,
    magnus_recursion,
    magnus_theorem4,
    term_counts,
)
from .prelie import PreLieElement, graft, graft_linear, psi_bar
from .trees import DOT, InvalidOrderError, PlanarTree, Tree, enumerate_e1, parse_planar, parse_tree

__all__ = [
    "__version__",
    "bernoulli",
    "format_rational",
    "parse_rational",
    "HSeries",
    "LieElement",
    "bracket",
    "classical_magnus_midpoint",
    "graded_dimension",
    "lyndon_words",
    "magnus_lie",
    "phi",
    "Forest",
    "GLElement",
    "gl_action",
    "gl_product",
    "log_star_component",
    "MagnusTermTable",
    "TableExhaustedError",
    "TermCounts",
    "gamma",
    "magnus_recursion",
    "magnus_theorem4",
    "term_counts",
    "PreLieElement",
    "graft",
    "graft_linear",
    "psi_bar",
    "DOT",
    "InvalidOrderError",
    "PlanarTree",
    "Tree",
    "enumerate_e1",
    "parse_planar",
    "parse_tree",
]
