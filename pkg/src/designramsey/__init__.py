"""Partial (k, t, lambda)-designs as closure structures: embeddings, free
amalgamation, completion search and brute-force arrow checking."""

from .amalgamation import AmalgamProblem, check_class_axioms, free_amalgam, joint_embedding
from .enumeration import (
    complete_design,
    count_completions,
    divisibility_admissible,
    enumerate_partial_designs,
)
from .errors import (
    ArityError,
    BudgetExceeded,
    EmptyPattern,
    InconsistentStructure,
    InvalidDesign,
    InvalidInput,
    MalformedInput,
    NotClosed,
    ParameterError,
    SizeLimit,
)
from .morphisms import (
    canonical_form,
    check_embedding,
    closure_of,
    enumerate_copies,
    equivalence_iii_iii_prime,
    is_closed,
)
from .ramsey import ArrowInstance, arrow_check, find_mono_copy, orderings
from .structures import (
    ClosureStructure,
    OrderedDesign,
    OrderedStructure,
    PartialDesign,
    Params,
    decode,
    encode,
    is_complete_design,
    make_params,
    neighborhood,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "AmalgamProblem",
    "ArityError",
    "arrow_check",
    "ArrowInstance",
    "BudgetExceeded",
    "canonical_form",
    "check_class_axioms",
    "check_embedding",
    "closure_of",
    "ClosureStructure",
    "complete_design",
    "count_completions",
    "decode",
    "divisibility_admissible",
    "EmptyPattern",
    "encode",
    "enumerate_copies",
    "enumerate_partial_designs",
    "equivalence_iii_iii_prime",
    "find_mono_copy",
    "free_amalgam",
    "InconsistentStructure",
    "InvalidDesign",
    "InvalidInput",
    "is_closed",
    "is_complete_design",
    "joint_embedding",
    "make_params",
    "MalformedInput",
    "neighborhood",
    "NotClosed",
    "OrderedDesign",
    "OrderedStructure",
    "orderings",
    "ParameterError",
    "Params",
    "PartialDesign",
    "SizeLimit",
    "validate",
]
