import random

import pytest

from generators import random_ontology, random_query, random_tbox_ontology
from paralc import Atomic, BOTTOM, Limits, Not, ResourceLimitExceeded, SignedConcept, classical_consistent, load_ontology, parse_concept
from paralc.reasoner import _tbox_concept, signed_input
from paralc.signing import SignedAssertion
from paralc.model import ConceptAssertion, RoleAssertion
from paralc.tableau import (
    Classification,
    ConflictClass,
    NodeId,
    RuleNotApplicable,
    SearchStats,
    apply_and,
    apply_exists,
    apply_forall,
    apply_or,
    blocking_status,
    classify_branch,
    conflicts,
    init_branch,
    is_complete,
    iter_branches,
    second_class_possible,
)

from pathlib import Path

ONTOLOGIES = Path(__file__).resolve().parent.parent / "ontologies"
A = Atomic("A")
a = NodeId.root("a")


def sc(text, sign=1):
    return SignedConcept(parse_concept(text), sign)


def branch(*entries, roles=()):
    signed = [SignedAssertion(ConceptAssertion(s.concept, "a"), s.sign) for s in entries]
    signed += [SignedAssertion(RoleAssertion(r, "a", t), 1) for r, t in roles]
    return init_branch(signed)


@pytest.mark.parametrize(
    "s1, s2, klass",
    [(1, 1, ConflictClass.REAL), (1, 0, ConflictClass.STRONG), (0, 1, ConflictClass.STRONG), (0, 0, ConflictClass.INNER)],
)
def test_conflict_classes(s1, s2, klass):
    (k,) = conflicts([SignedConcept(A, s1), SignedConcept(Not(A), s2)])
    assert k.klass is klass


def test_bottom_counts_double():
    assert conflicts([SignedConcept(BOTTOM, 1)])[0].klass is ConflictClass.REAL
    assert conflicts([SignedConcept(BOTTOM, 0)])[0].klass is ConflictClass.INNER


def test_classification():
    assert classify_branch(branch(sc("A"), sc("B", 0))).kind is Classification.OPEN
    assert classify_branch(branch(sc("A"), sc("not A"))).kind is Classification.FIRST_CLASS_CLOSED
    mixed = branch(sc("A"), sc("not A"), sc("B"), sc("not B", 0))
    assert classify_branch(mixed).kind is Classification.SECOND_CLASS_CLOSED


def test_rules_keep_signs():
    b = branch(sc("A and B", 0))
    out = apply_and(b, a, sc("A and B", 0))
    assert {sc("A", 0), sc("B", 0)} <= out.labels[a].keys()
    left, right = apply_or(branch(sc("A or B", 0)), a, sc("A or B", 0))
    assert sc("A", 0) in left.labels[a] and sc("B", 0) in right.labels[a]
    with pytest.raises(RuleNotApplicable):
        apply_and(b, a, sc("A or B", 0))


def test_exists_edge_sign_and_forall_minimum():
    b = branch(sc("some R . A", 0), sc("all R . B"))
    b = apply_exists(b, a, sc("some R . A", 0))
    (y,) = [x for x in b.labels if not x.is_root]
    assert b.edges[(a, y)].sign == 0
    b = apply_forall(b, a, sc("all R . B"))
    # the premise is pushed with the weaker sign of the edge
    assert sc("B", 0) in b.labels[y]
    assert sc("B", 1) not in b.labels[y]


def test_forall_on_assertion_edge():
    b = branch(sc("all R . B", 0), roles=[("R", "b")])
    b = apply_forall(b, a, sc("all R . B", 0))
    assert sc("B", 0) in b.labels[NodeId.root("b")]


def test_cyclic_tbox_is_blocked():
    o = load_ontology(ONTOLOGIES / "cyclic.onto")
    root = init_branch(signed_input(o), _tbox_concept(o))
    opened = [b for b in iter_branches(root) if classify_branch(b).kind is Classification.OPEN]
    assert opened
    b = opened[0]
    assert is_complete(b)
    status = blocking_status(b)
    direct = [(x, s) for x, s in status.items() if s.kind == "direct"]
    assert direct
    for x, s in direct:
        assert s.by in set(b.ancestors(x))
    assert all(not status[x].is_blocked for x in b.labels if x.is_root)


def test_node_limit():
    o = load_ontology(ONTOLOGIES / "cyclic.onto")
    root = init_branch(signed_input(o), _tbox_concept(o))
    with pytest.raises(ResourceLimitExceeded):
        list(iter_branches(root, Limits(max_nodes=2)))


def _plain_consistent(o):
    # every entry signed 1 and no shortcuts: the full forest, open iff consistent
    root = init_branch(signed_input(o), _tbox_concept(o))
    forest = iter_branches(root, Limits(max_nodes=30, max_branches=500), mode="para")
    return any(classify_branch(b).kind is Classification.OPEN for b in forest)


def test_classical_shortcuts_match_plain_search():
    rng = random.Random(21)
    checked = 0
    stats_seen = SearchStats()
    for i in range(300):
        o = random_tbox_ontology(rng) if i % 2 else random_ontology(rng)
        try:
            expected = _plain_consistent(o)
        except ResourceLimitExceeded:
            continue
        root = init_branch(signed_input(o), _tbox_concept(o))
        stats = SearchStats()
        got = any(
            classify_branch(b).kind is Classification.OPEN
            for b in iter_branches(root, mode="classical", stats=stats)
        )
        assert got == expected == classical_consistent(o), str(o)
        stats_seen.propagated += stats.propagated
        checked += 1
    assert checked >= 250
    # the shortcuts were actually exercised
    assert stats_seen.propagated


def test_second_class_possible_never_prunes_a_hit():
    rng = random.Random(22)
    hits = 0
    for i in range(120):
        o = random_tbox_ontology(rng) if i % 2 else random_ontology(rng)
        q = random_query(rng, o, depth=1, size=2)
        root = init_branch(signed_input(o, q), _tbox_concept(o))
        try:
            full = list(iter_branches(root, Limits(max_nodes=30, max_branches=500)))
        except ResourceLimitExceeded:
            continue
        has = any(classify_branch(b).kind is Classification.SECOND_CLASS_CLOSED for b in full)
        pruned = iter_branches(root, prune=lambda b: not second_class_possible(b))
        found = any(classify_branch(b).kind is Classification.SECOND_CLASS_CLOSED for b in pruned)
        assert found == has, (str(o), str(q))
        if has:
            assert second_class_possible(root)
            hits += 1
    assert hits >= 15


def test_parallel_matches_sequential():
    from paralc.tableau import parallel_branches

    rng = random.Random(23)
    for _ in range(30):
        o = random_ontology(rng, depth=2)
        q = random_query(rng, o)
        root = init_branch(signed_input(o, q), _tbox_concept(o))
        seq = [repr(b) for b in iter_branches(root)]
        assert [repr(b) for b in parallel_branches(root, jobs=2)] == seq
