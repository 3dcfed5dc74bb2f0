"""Acceptance suite: one test per criterion, each reported as its own line.

Run alone with ``pytest tests/test_acceptance.py -v``.
"""

from __future__ import annotations

import random
import time
from collections import Counter
from pathlib import Path

import pytest

from generators import (
    ATOMS,
    random_concept,
    random_ontology,
    random_query,
    random_tbox_ontology,
)
from oracles import brute_force_consistent, exists_count, hand_branches, literal_strings
from paralc import (
    ABox,
    Atomic,
    ConceptAssertion,
    Not,
    Ontology,
    Or,
    ResourceLimitExceeded,
    SignedConcept,
    TBox,
    TOP,
    classical_consistent,
    classical_entails,
    load_ontology,
    nnf,
    para_entails,
    parse_query,
    signed_nnf,
)
from paralc.model import is_nnf
from paralc.reasoner import classical_consistency
from paralc.tableau import Classification, ConflictClass, blocking_status

ONTOLOGIES = Path(__file__).resolve().parent.parent / "ontologies"
EMPTY = Ontology(TBox(()), ABox.of([]))


def _assertion(text: str) -> ConceptAssertion:
    q = parse_query(text)
    return ConceptAssertion(q.concept, q.individual)


def _is_literal(sc: SignedConcept) -> bool:
    c = sc.concept
    return isinstance(c, Atomic) or (isinstance(c, Not) and isinstance(c.operand, Atomic))


def _root_literals(branch, individual: str) -> frozenset:
    node = next(x for x in branch.labels if x.individual == individual)
    return frozenset(str(sc) for sc in branch.labels[node] if _is_literal(sc))


def _variable_literals(branch) -> frozenset:
    return frozenset(
        frozenset(str(sc) for sc in lab if _is_literal(sc))
        for x, lab in branch.labels.items()
        if not x.is_root
    )


# 1 ----------------------------------------------------------------------


@pytest.mark.parametrize(
    "query, expected",
    [
        ("Haswing(tweety)", False),
        ("Fly(tweety)", True),
        ("not Fly(tweety)", True),
        ("(some HasFood . Fish)(tweety)", True),
    ],
)
def test_c01_example_verdicts(query, expected):
    o = load_ontology(ONTOLOGIES / "example1.onto")
    start = time.perf_counter()
    verdict = para_entails(o, _assertion(query)).verdict
    elapsed = time.perf_counter() - start
    assert verdict is expected
    assert elapsed < 1.0


# 2 ----------------------------------------------------------------------

_BASE = {"Penguin^1", "not Fly^1", "not Haswing^0"}
_FISH = frozenset({frozenset({"Fish^1"})})
_NONE = frozenset()
# tweety's literals and the variable-node literals of each listed branch,
# with the evident typos of the listing corrected
LISTED_BRANCHES = [
    (_BASE | {"not Penguin^1", "not Bird^1"}, _NONE),
    (_BASE | {"not Penguin^1", "not Bird^1"}, _FISH),
    (_BASE | {"not Penguin^1", "Fly^1", "not Bird^1"}, _NONE),
    (_BASE | {"not Penguin^1", "Fly^1"}, _FISH),
    (_BASE | {"Bird^1", "not Bird^1"}, _NONE),
    (_BASE | {"Bird^1", "not Bird^1"}, _FISH),
    (_BASE | {"Bird^1", "Fly^1", "not Bird^1"}, _NONE),
    (_BASE | {"Bird^1", "Fly^1"}, _FISH),
]


def test_c02_branch_structure():
    o = load_ontology(ONTOLOGIES / "example1.onto")
    forest = para_entails(o, _assertion("Haswing(tweety)"), exhaustive=True).trace
    assert len(forest.branches) == 8
    got = Counter((_root_literals(b, "tweety"), _variable_literals(b)) for b, _ in forest.branches)
    want = Counter((frozenset(t), v) for t, v in LISTED_BRANCHES)
    assert got == want
    for b, bc in forest.branches:
        assert bc.kind is Classification.FIRST_CLASS_CLOSED
        assert bc.evidence and all(k.klass is ConflictClass.REAL for k in bc.evidence)


# 3 ----------------------------------------------------------------------


def test_c03_agrees_with_classical_on_consistent_input():
    rng = random.Random(3)
    start = time.perf_counter()
    ontologies = cases = mismatches = 0
    while ontologies < 500:
        o = random_ontology(rng, n_atoms=4, n_roles=2, n_individuals=3, max_assertions=6, depth=2)
        if not classical_consistent(o):
            continue
        ontologies += 1
        for _ in range(5):
            q = random_query(rng, o)
            cases += 1
            mismatches += para_entails(o, q).verdict != classical_entails(o, q)
    elapsed = time.perf_counter() - start
    assert (ontologies, mismatches) == (500, 0)
    assert cases >= 2500
    assert elapsed < 60


# 4 ----------------------------------------------------------------------


def test_c04_no_explosion():
    rng = random.Random(4)
    names = [f"P{i}" for i in range(20)]
    start = time.perf_counter()
    for _ in range(100):
        a, d = rng.sample(names, 2)
        o = Ontology(TBox(()), ABox.of([ConceptAssertion(Atomic(a), "a"), ConceptAssertion(Not(Atomic(a)), "a")]))
        q = ConceptAssertion(Atomic(d), "a")
        assert not para_entails(o, q).verdict
        assert classical_entails(o, q)
    assert time.perf_counter() - start < 5


# 5 ----------------------------------------------------------------------


def test_c05_tautologies_from_nothing():
    assert para_entails(EMPTY, ConceptAssertion(TOP, "a")).verdict
    assert para_entails(EMPTY, ConceptAssertion(Or(Atomic("A"), Not(Atomic("A"))), "a")).verdict


# 6 ----------------------------------------------------------------------


def _schemas(p, q):
    A, B = Atomic(p), Atomic(q)
    return {
        "MP": ([A, Or(Not(A), B)], B),
        "MT": ([Not(B), Or(Not(A), B)], Not(A)),
        "DS": ([Or(A, B), Not(A)], B),
    }


@pytest.mark.parametrize("schema", ["MP", "MT", "DS"])
def test_c06_basic_rules_against_hand_enumeration(schema):
    rng = random.Random(sum(map(ord, schema)))
    names = [f"Q{i}" for i in range(30)]
    for _ in range(50):
        premises, goal = _schemas(*rng.sample(names, 2))[schema]
        o = Ontology(TBox(()), ABox.of([ConceptAssertion(c, "a") for c in premises]))
        result = para_entails(o, ConceptAssertion(goal, "a"), exhaustive=True)
        hand = hand_branches([(c, 1) for c in premises] + [(Not(goal), 0)])
        assert result.verdict and hand.para_closed
        engine = Counter(_root_literals(b, "a") for b, _ in result.trace.branches)
        oracle = Counter(literal_strings(lits) for lits, _ in hand.branches)
        assert engine == oracle
        kinds = Counter(bc.kind.value for _, bc in result.trace.branches)
        assert kinds == Counter(k for _, k in hand.branches)


# 7 ----------------------------------------------------------------------


def test_c07_signed_nnf():
    rng = random.Random(7)
    for _ in range(1000):
        c = random_concept(rng, depth=3, size=5, constants=True)
        n = nnf(c)
        assert is_nnf(n) and nnf(n) == n
        for sign in (0, 1):
            out = signed_nnf(SignedConcept(c, sign))
            assert out.sign == sign and out.concept == n


# 8 ----------------------------------------------------------------------


def test_c08_termination_and_blocking():
    start = time.perf_counter()
    o = load_ontology(ONTOLOGIES / "cyclic.onto")
    # a query that is not entailed keeps every branch running until blocked
    forest = para_entails(o, _assertion("B(a)"), exhaustive=True).trace
    kinds = {s.kind for b, _ in forest.branches for s in blocking_status(b).values()}
    assert "direct" in kinds
    assert not forest.closed
    witness = classical_consistency(o).trace.branches
    assert any(s.kind == "direct" for b, _ in witness for s in blocking_status(b).values())

    rng = random.Random(8)
    limit_errors = 0
    for _ in range(1000):
        o = random_tbox_ontology(rng)
        q = random_query(rng, o, depth=1, size=2)
        try:
            classical_consistent(o)
            para_entails(o, q)
        except ResourceLimitExceeded:
            limit_errors += 1
    assert limit_errors == 0
    assert time.perf_counter() - start < 120


# 9 ----------------------------------------------------------------------


def _small_case(rng):
    """Ontology in the enumerable fragment, with a domain that is large enough."""
    from paralc.model import quantifier_depth

    while True:
        o = random_ontology(rng, n_atoms=3, n_roles=2, n_individuals=2, max_assertions=4, depth=1, size=3)
        if rng.random() < 0.3:
            atoms = ATOMS[:3]
            inclusion = (random_concept(rng, atoms, (), 0, 2), random_concept(rng, atoms, (), 0, 2))
            o = Ontology(TBox((inclusion,)), o.abox)
        concepts = [a.concept for a in o.abox.concept_assertions]
        assert all(quantifier_depth(c) <= 1 for c in concepts)
        size = len(o.abox.individuals) + sum(exists_count(c) for c in concepts)
        if size <= 3:
            return o, max(size, 1)


def test_c09_classical_matches_model_enumeration():
    rng = random.Random(9)
    outcomes = Counter()
    for _ in range(1000):
        o, size = _small_case(rng)
        expected = brute_force_consistent(o, size)
        assert classical_consistent(o) == expected, str(o)
        outcomes[expected] += 1
    # both outcomes must be represented for the check to mean anything
    assert min(outcomes.values()) >= 100


# 10 ---------------------------------------------------------------------


def test_c10_rule_order_independence():
    rng = random.Random(10)
    for _ in range(100):
        o = random_ontology(rng, depth=2)
        q = random_query(rng, o)
        reference = para_entails(o, q, exhaustive=True).verdict
        for seed in range(5):
            assert para_entails(o, q, exhaustive=True, rng=random.Random(seed)).verdict == reference
            assert para_entails(o, q, rng=random.Random(seed)).verdict == reference
