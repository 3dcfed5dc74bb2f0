"""Paraconsistent reasoning for the description logic ALC.

Premises are signed 1 and the negated query 0; a query is entailed when every
tableau branch holds a conflict and some branch holds a conflict involving
the query side.  Inconsistent premises therefore no longer entail everything.

>>> from paralc import parse_ontology, parse_query, answer
>>> o = parse_ontology("abox: A(a) . not A(a) .")
>>> answer(o, parse_query("B(a)")).verdict
False
>>> answer(o, parse_query("B(a)"), mode="classical").verdict
True
"""

from .frontend import load_ontology, parse_concept, parse_ontology, parse_query
from .model import (
    ABox,
    And,
    Atomic,
    BOTTOM,
    Bottom,
    Concept,
    ConceptAssertion,
    Exists,
    Forall,
    Not,
    Ontology,
    Or,
    RoleAssertion,
    TBox,
    TOP,
    Top,
    closure,
    complement,
    internalize,
    nnf,
)
from .reasoner import (
    ReasoningResult,
    answer,
    classical_consistent,
    classical_entails,
    para_entails,
    para_subsumes,
)
from .signing import SignedConcept, characteristic, signed_nnf
from .tableau import Limits, ResourceLimitExceeded

__version__ = "0.1.0"

__all__ = [
    "load_ontology",
    "parse_concept",
    "parse_ontology",
    "parse_query",
    "ABox",
    "And",
    "Atomic",
    "BOTTOM",
    "Bottom",
    "Concept",
    "ConceptAssertion",
    "Exists",
    "Forall",
    "Not",
    "Ontology",
    "Or",
    "RoleAssertion",
    "TBox",
    "TOP",
    "Top",
    "closure",
    "complement",
    "internalize",
    "nnf",
    "ReasoningResult",
    "answer",
    "classical_consistent",
    "classical_entails",
    "para_entails",
    "para_subsumes",
    "SignedConcept",
    "characteristic",
    "signed_nnf",
    "Limits",
    "ResourceLimitExceeded",
]
