"""Resource-aware lambda calculi over 0-based de Bruijn indices.

Three term languages share one toolkit:

- plain restricted terms, certified by sorted lists of their free indices
  (:mod:`nameless.lin`); a closed term is linear exactly when its list
  type is empty;
- terms with explicit substitutions and two rewrite engines — eight raw
  rules and their twelve-rule abbreviated form (:mod:`nameless.upsilon`);
- terms with explicit duplication (``dup``) and erasure (``era``) and the
  engine that pushes duplicators in and pulls erasers out
  (:mod:`nameless.resource`).

Translations connect them: ``read`` decorates a plain term with sharing,
``readback`` strips it, ``standardize`` canonicalizes, and the five-step
pipeline normalizes plain terms through the substitution calculus.  The
:mod:`nameless.harness` module machine-checks the algebra and preservation
properties; :mod:`nameless.cli` exposes everything as a command line.
"""

from .harness import (
    Failure,
    SuiteReport,
    count_plain_terms,
    enumerate_plain_terms,
    oracle_beta_normalize,
    run_all_suites,
    run_lemma_suite,
    run_pipeline_suite,
    run_preservation_suite,
    run_roundtrip_suite,
    write_reports,
)
from .lin import (
    ENUMERATION_CAP,
    AbsHeadMissing,
    enumerate_closed_linear,
    infer_lin,
    is_closed_linear_typed,
    is_lin,
)
from .ltypes import (
    AtLeast,
    DecrementZero,
    Derivation,
    GreaterThan,
    LessThan,
    LType,
    MergeConflict,
    RIndex,
    TypeFailure,
    Typing,
    decrement,
    filter_ltype,
    increment,
    index_text,
    is_ltype,
    ltype_text,
    merge,
)
from .resource import (
    BESTIARY,
    CHURCH_FIVE_ALT_R,
    CHURCH_FIVE_R,
    FALSE_R,
    FIX_R,
    IDENTITY_R,
    K_R,
    R_RULE_NAMES,
    S_R,
    TRUE_R,
    Dup,
    DupChildrenMissing,
    Era,
    NotWellFormed,
    RInd,
    RTerm,
    ZeroDepthRemains,
    beta_r,
    enumerate_representatives,
    free_r_indices,
    infer_r,
    is_linear_and_closed,
    match_r,
    normalize_dup_era,
    parse_r,
    print_r,
    read,
    readback,
    replace,
    standardize,
    step_r,
)
from .rewrite import (
    find_first_redex,
    iter_redexes,
    node_children,
    node_rebuild,
    normalize_with,
    step_at,
    subterm_at,
)
from .terms import (
    Abs,
    App,
    CapExceeded,
    FuelExhausted,
    Index,
    NoRedex,
    ParseError,
    PlainTerm,
    free_index_set,
    free_indices,
    is_closed_linear_structural,
    parse_plain,
    path_text,
    print_plain,
    term_size,
)
from .upsilon import (
    DEFAULT_FUEL,
    IN_RULE_NAMES,
    RAW_RULE_NAMES,
    SHIFT,
    Closure,
    ClosureRemains,
    Lift,
    LinearityLost,
    PreservationViolation,
    Slash,
    Sub,
    Upd,
    abbrev_form,
    check_preservation_step,
    from_raw,
    infer_upsilon,
    is_plain,
    match_in,
    match_raw,
    normalize_in,
    normalize_lin_pipeline,
    normalize_raw,
    parse_upsilon,
    print_upsilon,
    raw_form,
    step_in,
    step_raw,
    to_raw,
)

__version__ = "0.1.0"

__all__ = [
    # plain terms
    "Abs",
    "App",
    "Index",
    "PlainTerm",
    "parse_plain",
    "print_plain",
    "term_size",
    "free_indices",
    "free_index_set",
    "is_closed_linear_structural",
    "path_text",
    # list types
    "LType",
    "RIndex",
    "Typing",
    "Derivation",
    "merge",
    "decrement",
    "increment",
    "filter_ltype",
    "is_ltype",
    "LessThan",
    "GreaterThan",
    "AtLeast",
    "index_text",
    "ltype_text",
    # restricted typing
    "infer_lin",
    "is_lin",
    "is_closed_linear_typed",
    "enumerate_closed_linear",
    "ENUMERATION_CAP",
    # generic rewriting
    "node_children",
    "node_rebuild",
    "subterm_at",
    "find_first_redex",
    "iter_redexes",
    "step_at",
    "normalize_with",
    # explicit substitutions
    "Upd",
    "Sub",
    "Closure",
    "Slash",
    "Lift",
    "SHIFT",
    "RAW_RULE_NAMES",
    "IN_RULE_NAMES",
    "DEFAULT_FUEL",
    "match_raw",
    "match_in",
    "step_raw",
    "step_in",
    "raw_form",
    "abbrev_form",
    "to_raw",
    "from_raw",
    "is_plain",
    "infer_upsilon",
    "check_preservation_step",
    "normalize_raw",
    "normalize_in",
    "normalize_lin_pipeline",
    "parse_upsilon",
    "print_upsilon",
    # duplication and erasure
    "RInd",
    "Era",
    "Dup",
    "RTerm",
    "R_RULE_NAMES",
    "infer_r",
    "free_r_indices",
    "is_linear_and_closed",
    "match_r",
    "step_r",
    "normalize_dup_era",
    "read",
    "readback",
    "standardize",
    "beta_r",
    "replace",
    "enumerate_representatives",
    "parse_r",
    "print_r",
    "BESTIARY",
    "IDENTITY_R",
    "K_R",
    "TRUE_R",
    "FALSE_R",
    "S_R",
    "FIX_R",
    "CHURCH_FIVE_R",
    "CHURCH_FIVE_ALT_R",
    # failures
    "TypeFailure",
    "MergeConflict",
    "DecrementZero",
    "AbsHeadMissing",
    "ZeroDepthRemains",
    "DupChildrenMissing",
    "NotWellFormed",
    "ParseError",
    "NoRedex",
    "FuelExhausted",
    "CapExceeded",
    "ClosureRemains",
    "LinearityLost",
    "PreservationViolation",
    # machine checking
    "SuiteReport",
    "Failure",
    "oracle_beta_normalize",
    "enumerate_plain_terms",
    "count_plain_terms",
    "run_lemma_suite",
    "run_preservation_suite",
    "run_roundtrip_suite",
    "run_pipeline_suite",
    "run_all_suites",
    "write_reports",
]
