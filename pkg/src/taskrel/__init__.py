"""Finite relation engine for catalytic task possibility and coarse-graining.

The layers, bottom up:

- relcore: finite sets-and-relations category with tensor, dagger, and the
  copy/discard/match structure, plus attributes and conditioning.
- lawcheck: exhaustive verification of the equational laws over bounded
  enumerations, reported per law.
- substrate: substrates, processes, constructor candidates, the possibility
  check, witness composition, and bounded constructor search.
- coarse: antichains of attributes, coarse-grained tasks, support and
  singleton embeddings, and their law suite.
- dsl: a small text language for declaring all of the above, with a
  typechecker and evaluator.
- cli: deterministic JSON commands over .ct files.
"""

from .errors import (
    BoundaryMismatch,
    BudgetExceeded,
    CarrierMismatch,
    SplitMismatch,
    TaskrelError,
)
from .relcore import (
    Atom,
    Attribute,
    FinObject,
    Task,
    attribute,
    attribute_as_state,
    attribute_from_state,
    copy,
    discard,
    identity,
    match,
    obj,
    par_compose,
    postcondition,
    pre_post,
    precondition,
    seq_compose,
    swap,
    task,
    tensor,
    test_of,
    transpose,
    trivial_attribute,
)
from .lawcheck import (
    DEFAULT_BUDGET,
    EnumerationBudget,
    LawReport,
    enumerate_attributes,
    enumerate_relations,
    report_to_json,
    verify_all_laws,
    verify_smc_laws,
)
from .substrate import (
    ConstructorCandidate,
    Process,
    Substrate,
    SubstrateAtom,
    SubstrateTheory,
    enumerate_processes,
    induced_task,
    is_possible_with,
    make_process,
    search_constructor,
    sub,
    trivial_candidate,
    witness_par,
    witness_seq,
)
from .coarse import (
    Antichain,
    CoarseTask,
    all_antichains,
    antichain,
    coarse_grain,
    coarse_identity,
    coarse_par,
    coarse_seq,
    coarse_swap,
    singleton_embed_object,
    singleton_embed_task,
    support_embedding,
    verify_coarse_laws,
)
from .dsl import load, parse, parse_file, print_program, resolve

__version__ = "0.1.0"

__all__ = [
    "Antichain",
    "Atom",
    "Attribute",
    "BoundaryMismatch",
    "BudgetExceeded",
    "CarrierMismatch",
    "CoarseTask",
    "ConstructorCandidate",
    "DEFAULT_BUDGET",
    "EnumerationBudget",
    "FinObject",
    "LawReport",
    "Process",
    "SplitMismatch",
    "Substrate",
    "SubstrateAtom",
    "SubstrateTheory",
    "Task",
    "TaskrelError",
    "all_antichains",
    "antichain",
    "attribute",
    "attribute_as_state",
    "attribute_from_state",
    "coarse_grain",
    "coarse_identity",
    "coarse_par",
    "coarse_seq",
    "coarse_swap",
    "copy",
    "discard",
    "enumerate_attributes",
    "enumerate_processes",
    "enumerate_relations",
    "identity",
    "induced_task",
    "is_possible_with",
    "load",
    "make_process",
    "match",
    "obj",
    "par_compose",
    "parse",
    "parse_file",
    "postcondition",
    "pre_post",
    "precondition",
    "print_program",
    "report_to_json",
    "resolve",
    "search_constructor",
    "seq_compose",
    "singleton_embed_object",
    "singleton_embed_task",
    "sub",
    "support_embedding",
    "swap",
    "task",
    "tensor",
    "test_of",
    "transpose",
    "trivial_attribute",
    "trivial_candidate",
    "verify_all_laws",
    "verify_coarse_laws",
    "verify_smc_laws",
    "witness_par",
    "witness_seq",
]
