"""Reasoning tasks on top of the signed tableau.

Paraconsistent entailment ``K |-P C(a)``: the premises enter the tableau with
sign 1, ``~C(a)`` with sign 0, and the query holds iff the resulting forest
is closed (no open branch, and some branch with a strong or inner conflict).

The classical mode runs the same engine with every formula signed 1 and the
usual closure condition (every branch contains a clash).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Union

from .model import (
    Concept,
    ConceptAssertion,
    Ontology,
    complement,
    internalize,
    nnf,
)
from .signing import PREMISE, QUERY, SignedAssertion, SignedConcept, characteristic
from .tableau import (
    Classification,
    ForestVerdict,
    Limits,
    ResourceLimitExceeded,
    SearchStats,
    classify_branch,
    init_branch,
    forest_closed,
    iter_branches,
    parallel_branches,
    second_class_possible,
)

__all__ = [
    "Instance",
    "Subsumes",
    "Consistency",
    "Query",
    "ReasoningResult",
    "FRESH_PREFIX",
    "fresh_individual",
    "signed_input",
    "para_entails",
    "para_subsumes",
    "classical_consistency",
    "classical_consistent",
    "classical_entailment",
    "classical_entails",
    "classical_subsumes",
    "answer",
]

FRESH_PREFIX = "_fresh"


@dataclass(frozen=True)
class Instance:
    concept: Concept
    individual: str

    def __str__(self) -> str:
        return str(ConceptAssertion(self.concept, self.individual))


@dataclass(frozen=True)
class Subsumes:
    sub: Concept
    sup: Concept

    def __str__(self) -> str:
        return f"{self.sub} subsumedby {self.sup}"


@dataclass(frozen=True)
class Consistency:
    def __str__(self) -> str:
        return "consistent"


Query = Union[Instance, Subsumes, Consistency]


@dataclass
class ReasoningResult:
    """``verdict`` is the answer; ``trace`` holds the explored branches."""

    verdict: bool
    mode: str
    trace: ForestVerdict
    query: Optional[Query] = None

    def __bool__(self) -> bool:
        return self.verdict


def fresh_individual(o: Ontology) -> str:
    """First name from the reserved ``_fresh`` namespace not used in *o*."""
    used = o.abox.individuals
    i = 0
    while f"{FRESH_PREFIX}{i}" in used:
        i += 1
    return f"{FRESH_PREFIX}{i}"


def signed_input(o: Ontology, q: Optional[ConceptAssertion] = None) -> list[SignedAssertion]:
    """Premises signed by the characteristic function plus ``~C(a)`` with sign 0."""
    premises = list(o.abox)
    signed = []
    for a in premises:
        if isinstance(a, ConceptAssertion):
            a = ConceptAssertion(nnf(a.concept), a.individual)
        signed.append(SignedAssertion(a, characteristic(premises, a)))
    if q is not None:
        negated = ConceptAssertion(complement(q.concept), q.individual)
        signed.append(SignedAssertion(negated, QUERY))
    return signed


def _tbox_concept(o: Ontology) -> SignedConcept:
    return SignedConcept(internalize(o.tbox), PREMISE)


def _run(o, signed, mode, limits, rng, stop_on_open, jobs=1) -> ForestVerdict:
    root = init_branch(signed, _tbox_concept(o))
    if jobs > 1:
        if rng is not None:
            raise ValueError("a randomized rule order cannot be split across processes")
        classified = [(b, classify_branch(b)) for b in parallel_branches(root, limits or Limits(), jobs=jobs)]
        return ForestVerdict(forest_closed(classified, mode), classified, mode)
    classified = []
    stats = SearchStats()
    for b in iter_branches(root, limits or Limits(), mode=mode, rng=rng, stats=stats):
        bc = classify_branch(b)
        classified.append((b, bc))
        if stop_on_open and bc.kind is Classification.OPEN:
            return ForestVerdict(False, classified, mode, exhaustive=False)
    return ForestVerdict(forest_closed(classified, mode), classified, mode, exhaustive=stats.exhaustive)


def _first(branches, kind):
    for b in branches:
        bc = classify_branch(b)
        if bc.kind is kind:
            return b, bc
    return None


def _run_para_fast(o, signed, limits, rng) -> ForestVerdict:
    """Para closure decided by two targeted searches instead of the full forest.

    The forest is closed iff no branch is open and some branch is second-class
    closed.  An open branch is looked for with clash-settling (any conflict
    ends a branch, which cannot make it open again).  A second-class branch is
    looked for by iterative deepening on the number of nodes, dropping
    branches once no completion can still reach one; a hit within the budget
    is a genuine branch, and a pass that cut nothing off proves there is none.
    """
    limits = limits or Limits()
    root = init_branch(signed, _tbox_concept(o))
    hit = _first(iter_branches(root, limits, mode="classical", rng=rng), Classification.OPEN)
    if hit is not None:
        return ForestVerdict(False, [hit], "para", exhaustive=False)
    budget = len(root) + 1
    while True:
        cut = False

        def prune(b):
            nonlocal cut
            if not second_class_possible(b):
                return True
            if len(b) > budget:
                cut = True
                return True
            return False

        search = iter_branches(root, limits, mode="para", rng=rng, prune=prune)
        hit = _first(search, Classification.SECOND_CLASS_CLOSED)
        if hit is not None:
            return ForestVerdict(True, [hit], "para", exhaustive=False)
        if not cut:
            return ForestVerdict(False, [], "para", exhaustive=False)
        if budget >= limits.max_nodes:
            raise ResourceLimitExceeded(f"more than {limits.max_nodes} nodes in one branch")
        budget = min(2 * budget, limits.max_nodes)


def para_entails(
    o: Ontology,
    q: ConceptAssertion,
    *,
    limits: Optional[Limits] = None,
    rng: Optional[random.Random] = None,
    exhaustive: bool = False,
    jobs: int = 1,
) -> ReasoningResult:
    """Decide ``o |-P q``.

    By default the verdict comes from targeted searches and the trace holds
    only the deciding branch.  ``exhaustive=True`` expands the whole forest
    instead; the verdict is the same but the cost can grow sharply with a
    TBox.  ``jobs > 1`` spreads that expansion over worker processes.
    """
    signed = signed_input(o, q)
    if exhaustive:
        forest = _run(o, signed, "para", limits, rng, False, jobs)
    else:
        forest = _run_para_fast(o, signed, limits, rng)
    return ReasoningResult(forest.closed, "para", forest, Instance(q.concept, q.individual))


def para_subsumes(
    o: Ontology,
    sub: Concept,
    sup: Concept,
    *,
    limits: Optional[Limits] = None,
    rng: Optional[random.Random] = None,
    exhaustive: bool = False,
    jobs: int = 1,
) -> ReasoningResult:
    """Decide ``sub subsumedby sup`` via an instance check on a fresh individual."""
    i = fresh_individual(o)
    extended = Ontology(o.tbox, o.abox.with_assertions(ConceptAssertion(sub, i)))
    # the assertion sub(i) is a premise of the extended ontology, so it gets sign 1
    result = para_entails(extended, ConceptAssertion(sup, i), limits=limits, rng=rng, exhaustive=exhaustive, jobs=jobs)
    result.query = Subsumes(sub, sup)
    return result


def classical_consistency(
    o: Ontology, *, limits: Optional[Limits] = None, rng: Optional[random.Random] = None
) -> ReasoningResult:
    """Classical consistency; ``verdict`` is True iff some branch is clash-free."""
    forest = _run(o, signed_input(o), "classical", limits, rng, True)
    return ReasoningResult(not forest.closed, "classical", forest, Consistency())


def classical_consistent(o: Ontology, **kwargs) -> bool:
    return classical_consistency(o, **kwargs).verdict


def classical_entailment(
    o: Ontology,
    q: ConceptAssertion,
    *,
    limits: Optional[Limits] = None,
    rng: Optional[random.Random] = None,
) -> ReasoningResult:
    """``o |= q`` iff ``o`` plus ``~C(a)`` is classically inconsistent."""
    negated = ConceptAssertion(complement(q.concept), q.individual)
    extended = Ontology(o.tbox, o.abox.with_assertions(negated))
    forest = classical_consistency(extended, limits=limits, rng=rng).trace
    return ReasoningResult(forest.closed, "classical", forest, Instance(q.concept, q.individual))


def classical_entails(o: Ontology, q: ConceptAssertion, **kwargs) -> bool:
    return classical_entailment(o, q, **kwargs).verdict


def classical_subsumes(o: Ontology, sub: Concept, sup: Concept, **kwargs) -> ReasoningResult:
    i = fresh_individual(o)
    extended = Ontology(o.tbox, o.abox.with_assertions(ConceptAssertion(sub, i)))
    result = classical_entailment(extended, ConceptAssertion(sup, i), **kwargs)
    result.query = Subsumes(sub, sup)
    return result


def answer(o: Ontology, q: Query, mode: str = "para", **kwargs) -> ReasoningResult:
    """Dispatch a parsed query to the matching task."""
    if mode not in ("para", "classical"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "classical" or isinstance(q, Consistency):
        # the classical search stops at the first open branch
        kwargs.pop("exhaustive", None)
        kwargs.pop("jobs", None)
    if isinstance(q, Consistency):
        return classical_consistency(o, **kwargs)
    if isinstance(q, Subsumes):
        if mode == "para":
            return para_subsumes(o, q.sub, q.sup, **kwargs)
        return classical_subsumes(o, q.sub, q.sup, **kwargs)
    assertion = ConceptAssertion(q.concept, q.individual)
    if mode == "para":
        return para_entails(o, assertion, **kwargs)
    return classical_entailment(o, assertion, **kwargs)
