"""Inverse and F-inverse monoids realized inside group Cayley graphs.

Elements are pairs (closed subgraph, group element); relation-induced closure
operators are computed by iterated full P-expansions, and word problems for
presentations are semi-decided by growing saturation graphs.
"""

from .words import (
    Alphabet,
    FTerm,
    Letter,
    ParseError,
    Word,
    erase_m,
    free_reduce,
    invert_term,
    invert_word,
    parse_term,
    parse_word,
    print_term,
    print_word,
)
from .groups import (
    GroupElem,
    GroupOracle,
    OracleError,
    compose,
    eval_word,
    free_abelian_group,
    free_group,
    geodesic_word,
    group_elements,
    invert_elem,
    parse_cycles,
    permutation_group,
)
from .graphs import (
    Subgraph,
    components,
    contains,
    full_cayley_graph,
    is_connected,
    singleton,
    span_journey,
    span_path,
    to_dot,
    trace_journey,
    trace_path,
    translate,
    union,
    vertex_graph,
)
from .closure import (
    ClosureBudget,
    ClosureError,
    ClosureOperator,
    ClosureResult,
    ClosureStatus,
    ExpansionState,
    RelationSystem,
    close,
    expansion_trace,
    full_p_expansion,
    geodesic_hull,
    identity_all,
    identity_connected,
    is_closed,
    is_closed_under,
    label_image,
    occurrences,
    relation_closure,
    relation_system,
    tree_connect,
)
from .monoid import (
    E_UNITARY,
    Element,
    F_INVERSE,
    ModeError,
    MonoidContext,
    NotStabilizedError,
    canonical_morphism,
    elements_enumerate,
    eval_term_elem,
    eval_word_elem,
    fim_as_f_inverse_context,
    fim_context,
    free_f_inverse_context,
    generator_element,
    identity_element,
    inverse,
    is_idempotent,
    leq,
    margolis_meakin_context,
    max_m,
    meet_idempotent,
    multiply,
    sigma,
)
from .cli import (
    Presentation,
    PresentationError,
    Verdict,
    check_equal,
    check_geq,
    graph_export,
    parse_presentation,
)

__version__ = "0.1.0"
