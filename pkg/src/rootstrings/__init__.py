"""Exact root systems and Phi-strings, with closed-form cross-checks."""

from .closedform import (
    ClassicalFamily,
    ExceptionalFamily,
    RankOne,
    classical_string_formula,
    exceptional_string_fixture,
    pair_type,
    rank_one_string,
    string_cardinality,
)
from .errors import ConsistencyError, ConstructionError, DomainError, RootStringError
from .rootsys import (
    RootSystem,
    RootSystemType,
    alpha_string,
    build_root_system,
    cartan_integer,
    connected_components,
    connected_sum,
    dynkin_graph,
    level,
    simple_decomposition,
)
from .stringgraph import StringGraph, build_string_graph, emit_dot, graph_invariants
from .strings import (
    StringSet,
    Subsystem,
    classify_type,
    is_minimum_level,
    minimum_level_root,
    phi_string,
    product_string,
    span_subsystem,
)

__version__ = "0.1.0"
