"""Perfectly Transparent Equilibrium toolkit.

Model extensive-form games with imperfect information, build them from
decision points located in Minkowski spacetime, and compute the outcome
surviving iterated preemption-based elimination, with an independent
brute-force oracle for cross-checking.
"""

from .exact import format_exact, parse_exact
from .game import (
    Game,
    ValidationIssue,
    ValidationReport,
    action_toward,
    canonicalize,
    descendants,
    embed_normal_form,
    game_has_ties,
    has_perfect_recall,
    infoset_descendants,
    infoset_successors,
    is_canonical,
    successor,
    validate_game,
)
from .solver import (
    EMPTY,
    MULTIPLE_WITH_TIES,
    UNIQUE,
    NotCanonicalError,
    SolveResult,
    SolverState,
    maximin,
    preempted,
    reached_infosets,
    solve,
)
from .spacetime import (
    COLOCATED,
    SPACELIKE,
    TIMELIKE,
    DecisionPoint,
    History,
    Separation,
    SetupReport,
    SpacetimeSetup,
    build_game,
    causal_dag,
    enumerate_histories,
    interval_squared,
    matches,
    separation,
    spacelike_agent_check,
    successor_hat,
    total_order,
    triangle_rows,
    validate_setup,
    validate_triangle,
)
from .oracle import (
    GeneratorParams,
    naive_solve,
    normal_form_maximin,
    pareto_frontier,
    random_game,
    random_matrix,
    random_setup,
    search_empty_pte,
)
from .formats import (
    ParseError,
    export_dot,
    game_to_jsonable,
    parse_game,
    parse_setup,
    serialize_game,
    serialize_setup,
    setup_to_jsonable,
    trace_to_jsonable,
)

__version__ = "0.1.0"
