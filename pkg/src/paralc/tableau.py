"""Signed ALC tableau.

A :class:`Branch` is one nondeterministic expansion of the whole completion
graph: root nodes for the named individuals, variable nodes hanging below
them, and labels made of :class:`~paralc.signing.SignedConcept` entries.

Expansion proceeds in *rounds*.  At the start of a round every rule instance
applicable to the current state is collected; the round then applies all of
them.  A ``or``-rule collected in the round always splits, even if another
action of the same round has meanwhile added one of its disjuncts.  This
makes the set of branches (and hence the verdict) independent of the order
in which the actions of a round are carried out.

Signs travel with the rules: conjuncts, disjuncts and ``some``-fillers keep
the sign of their parent.  An edge created by a ``some`` concept gets that
concept's sign; ABox role assertions give edges of sign 1.  A ``all``
concept of sign ``s`` pushes its filler across an edge of sign ``e`` with
sign ``min(s, e)``, so anything that depends on the query keeps sign 0.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, NamedTuple, Optional

from .model import (
    TOP,
    And,
    Atomic,
    Bottom,
    Concept,
    ConceptAssertion,
    Exists,
    Forall,
    Not,
    Or,
    RoleAssertion,
    is_nnf,
)
from .signing import PREMISE, SignedAssertion, SignedConcept

__all__ = [
    "NodeId",
    "Edge",
    "Provenance",
    "Branch",
    "Blocking",
    "UNBLOCKED",
    "INDIRECTLY_BLOCKED",
    "ConflictClass",
    "Conflict",
    "Classification",
    "BranchClass",
    "ForestVerdict",
    "Limits",
    "TableauError",
    "RuleNotApplicable",
    "BranchNotComplete",
    "ResourceLimitExceeded",
    "init_branch",
    "blocking_status",
    "blocked",
    "apply_and",
    "apply_or",
    "apply_exists",
    "apply_forall",
    "applicable_rules",
    "is_complete",
    "conflicts",
    "branch_conflicts",
    "classify_branch",
    "iter_branches",
    "parallel_branches",
    "SearchStats",
    "second_class_possible",
    "expand",
    "forest_verdict",
    "forest_closed",
]


class TableauError(Exception):
    pass


class RuleNotApplicable(TableauError):
    pass


class BranchNotComplete(TableauError):
    pass


class ResourceLimitExceeded(TableauError):
    pass


@dataclass(frozen=True)
class NodeId:
    """Root node of a named individual, or the ``index``-th variable node."""

    individual: Optional[str] = None
    index: int = 0

    @classmethod
    def root(cls, individual: str) -> "NodeId":
        return cls(individual=individual)

    @classmethod
    def variable(cls, index: int) -> "NodeId":
        return cls(index=index)

    @property
    def is_root(self) -> bool:
        return self.individual is not None

    def __str__(self) -> str:
        # the leading underscore keeps variable names apart from individuals
        return self.individual if self.individual is not None else f"_x{self.index}"


@dataclass(frozen=True)
class Edge:
    source: NodeId
    target: NodeId
    roles: frozenset[str]
    sign: int = PREMISE


class Provenance(NamedTuple):
    """Where a label entry came from: ``input``, ``tbox`` or a rule name."""

    rule: str
    node: Optional[NodeId] = None
    concept: Optional[SignedConcept] = None


class Branch:
    """Mutable completion graph for one branch.

    Labels are insertion-ordered dicts used as ordered sets, so iteration and
    the resulting traces are reproducible.
    """

    def __init__(self, tbox_concept: Optional[SignedConcept] = None):
        self.labels: dict[NodeId, dict[SignedConcept, None]] = {}
        self.edges: dict[tuple[NodeId, NodeId], Edge] = {}
        self.successors: dict[NodeId, list[NodeId]] = {}
        self.parent: dict[NodeId, NodeId] = {}
        self.provenance: dict[tuple[NodeId, SignedConcept], Provenance] = {}
        self.tbox_concept = tbox_concept
        self.next_index = 1
        # set once expansion stopped early on a decisive conflict
        self.settled = False
        self.complete = False
        # running counts of first- and second-class conflicts
        self.first_class = 0
        self.second_class = 0

    # -- construction -----------------------------------------------------

    def copy(self) -> "Branch":
        b = Branch.__new__(Branch)
        b.labels = {x: dict(lab) for x, lab in self.labels.items()}
        b.edges = dict(self.edges)
        b.successors = {x: list(ys) for x, ys in self.successors.items()}
        b.parent = dict(self.parent)
        b.provenance = dict(self.provenance)
        b.tbox_concept = self.tbox_concept
        b.next_index = self.next_index
        b.settled = self.settled
        b.complete = self.complete
        b.first_class = self.first_class
        b.second_class = self.second_class
        return b

    def add_node(self, x: NodeId) -> None:
        if x not in self.labels:
            self.labels[x] = {}
            self.successors[x] = []

    def add(self, x: NodeId, sc: SignedConcept, source: Provenance = Provenance("input")) -> bool:
        """Add *sc* to ``L(x)``; return whether the label changed."""
        label = self.labels[x]
        if sc in label:
            return False
        label[sc] = None
        self.provenance[(x, sc)] = source
        self._count_conflicts(label, sc)
        return True

    def _count_conflicts(self, label, sc: SignedConcept) -> None:
        c = sc.concept
        if isinstance(c, Atomic):
            other = Not(c)
        elif isinstance(c, Not) and isinstance(c.operand, Atomic):
            other = c.operand
        elif isinstance(c, Bottom):
            self._tally(2 * sc.sign)
            return
        else:
            return
        for s in (0, 1):
            if SignedConcept(other, s) in label:
                self._tally(sc.sign + s)

    def _tally(self, sign_sum: int) -> None:
        if sign_sum == 2:
            self.first_class += 1
        else:
            self.second_class += 1

    def add_edge(self, source: NodeId, target: NodeId, role: str, sign: int = PREMISE) -> None:
        key = (source, target)
        old = self.edges.get(key)
        if old is None:
            self.edges[key] = Edge(source, target, frozenset({role}), sign)
            self.successors[source].append(target)
        else:
            self.edges[key] = Edge(source, target, old.roles | {role}, max(old.sign, sign))

    def new_variable(self, parent: NodeId, role: str, sign: int, source: Provenance) -> NodeId:
        y = NodeId.variable(self.next_index)
        self.next_index += 1
        self.add_node(y)
        self.parent[y] = parent
        self.add_edge(parent, y, role, sign)
        if self.tbox_concept is not None:
            self.add(y, self.tbox_concept, Provenance("tbox", source.node, source.concept))
        return y

    # -- queries ----------------------------------------------------------

    @property
    def nodes(self) -> list[NodeId]:
        """Nodes in creation order (roots first)."""
        return list(self.labels)

    def label(self, x: NodeId) -> frozenset[SignedConcept]:
        return frozenset(self.labels[x])

    def role_successors(self, x: NodeId, role: str) -> Iterator[tuple[NodeId, Edge]]:
        for y in self.successors[x]:
            e = self.edges[(x, y)]
            if role in e.roles:
                yield y, e

    def ancestors(self, x: NodeId) -> Iterator[NodeId]:
        while x in self.parent:
            x = self.parent[x]
            yield x

    def __len__(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        parts = []
        for x, lab in self.labels.items():
            parts.append(f"{x}: {{{', '.join(map(str, lab))}}}")
        return f"Branch({'; '.join(parts)})"


# ---------------------------------------------------------------------------
# initialisation


def init_branch(
    signed_abox: Iterable[SignedAssertion],
    tbox_concept: SignedConcept = SignedConcept(TOP, PREMISE),
) -> Branch:
    """Build the initial completion graph.

    One root per individual, labelled with the signed concepts asserted of it
    (plus *tbox_concept* unless it is ``top``), and one edge per related pair
    of individuals.  Roots are created in name order.
    """
    if tbox_concept.sign != PREMISE:
        raise ValueError("the internalized TBox concept must carry sign 1")
    if not is_nnf(tbox_concept.concept):
        raise ValueError("the internalized TBox concept must be in NNF")
    items = sorted(signed_abox, key=lambda sa: (isinstance(sa.assertion, RoleAssertion), str(sa)))
    tbox = None if tbox_concept.concept == TOP else tbox_concept
    b = Branch(tbox)

    individuals: set[str] = set()
    for sa in items:
        a = sa.assertion
        if isinstance(a, ConceptAssertion):
            if not is_nnf(a.concept):
                raise ValueError(f"assertion {a} is not in NNF")
            individuals.add(a.individual)
        else:
            individuals.update((a.subject, a.object))
    for name in sorted(individuals):
        x = NodeId.root(name)
        b.add_node(x)
        if tbox is not None:
            b.add(x, tbox, Provenance("tbox"))

    for sa in items:
        a = sa.assertion
        if isinstance(a, ConceptAssertion):
            b.add(NodeId.root(a.individual), SignedConcept(a.concept, sa.sign))
        else:
            b.add_edge(NodeId.root(a.subject), NodeId.root(a.object), a.role, PREMISE)
    return b


# ---------------------------------------------------------------------------
# blocking


@dataclass(frozen=True)
class Blocking:
    kind: str  # "unblocked" | "direct" | "indirect"
    by: Optional[NodeId] = None

    @property
    def is_blocked(self) -> bool:
        return self.kind != "unblocked"


UNBLOCKED = Blocking("unblocked")
INDIRECTLY_BLOCKED = Blocking("indirect")


def blocking_status(b: Branch) -> dict[NodeId, Blocking]:
    """Pairwise blocking status of every node.

    A variable node ``x`` with parent ``x'`` is directly blocked by a variable
    ancestor ``y`` with parent ``y'`` when ``L(x) = L(y)``, ``L(x') = L(y')``
    (as signed sets) and the edges ``x' -> x`` and ``y' -> y`` carry the same
    roles and sign, provided no ancestor of ``x`` is blocked.  Descendants of
    a blocked node are indirectly blocked.  Roots are never blocked.
    """
    status: dict[NodeId, Blocking] = {}
    for x in b.labels:  # parents are always created before their children
        if x.is_root:
            status[x] = UNBLOCKED
            continue
        px = b.parent[x]
        if status[px].is_blocked:
            status[x] = INDIRECTLY_BLOCKED
            continue
        status[x] = _direct_blocker(b, x, px)
    return status


def _direct_blocker(b: Branch, x: NodeId, px: NodeId) -> Blocking:
    lx, lpx = b.labels[x].keys(), b.labels[px].keys()
    ex = b.edges[(px, x)]
    for y in b.ancestors(x):
        if y.is_root:
            break
        py = b.parent[y]
        ey = b.edges[(py, y)]
        if (
            b.labels[y].keys() == lx
            and b.labels[py].keys() == lpx
            and ey.roles == ex.roles
            and ey.sign == ex.sign
        ):
            return Blocking("direct", y)
    return UNBLOCKED


def blocked(b: Branch, x: NodeId) -> Blocking:
    return blocking_status(b)[x]


# ---------------------------------------------------------------------------
# rules


class Action(NamedTuple):
    rule: str
    node: NodeId
    concept: SignedConcept
    targets: tuple[NodeId, ...] = ()


_RULE_ORDER = ("and", "or", "forall", "exists")


def _forall_targets(b: Branch, x: NodeId, sc: SignedConcept) -> tuple[NodeId, ...]:
    c = sc.concept
    return tuple(
        y
        for y, e in b.role_successors(x, c.role)
        if SignedConcept(c.filler, min(sc.sign, e.sign)) not in b.labels[y]
    )


def _exists_satisfied(b: Branch, x: NodeId, sc: SignedConcept) -> bool:
    c = sc.concept
    want = SignedConcept(c.filler, sc.sign)
    return any(e.sign >= sc.sign and want in b.labels[y] for y, e in b.role_successors(x, c.role))


def _action_for(b: Branch, x: NodeId, sc: SignedConcept, status: Blocking) -> Optional[Action]:
    c, s = sc.concept, sc.sign
    label = b.labels[x]
    if isinstance(c, And):
        if status.kind != "indirect" and not (
            SignedConcept(c.left, s) in label and SignedConcept(c.right, s) in label
        ):
            return Action("and", x, sc)
    elif isinstance(c, Or):
        if status.kind != "indirect" and not (
            SignedConcept(c.left, s) in label or SignedConcept(c.right, s) in label
        ):
            return Action("or", x, sc)
    elif isinstance(c, Forall):
        if status.kind != "indirect":
            targets = _forall_targets(b, x, sc)
            if targets:
                return Action("forall", x, sc, targets)
    elif isinstance(c, Exists):
        if not status.is_blocked and not _exists_satisfied(b, x, sc):
            return Action("exists", x, sc)
    return None


def applicable_rules(b: Branch, rng: Optional[random.Random] = None) -> list[Action]:
    """Every rule instance applicable to the current state of *b*.

    Deterministic order: nodes in creation order, and within a node the
    ``and``, ``or``, ``all``, ``some`` rules in that order.  With *rng* the
    order is shuffled instead.
    """
    status = blocking_status(b)
    actions = []
    for x in b.labels:
        for sc in b.labels[x]:
            act = _action_for(b, x, sc, status[x])
            if act is not None:
                actions.append(act)
    if rng is None:
        rank = {r: i for i, r in enumerate(_RULE_ORDER)}
        nodes = {x: i for i, x in enumerate(b.labels)}
        actions.sort(key=lambda a: (nodes[a.node], rank[a.rule]))
    else:
        rng.shuffle(actions)
    return actions


def is_complete(b: Branch) -> bool:
    return not applicable_rules(b)


def _require(b: Branch, x: NodeId, sc: SignedConcept, rule: str) -> Action:
    if x not in b.labels or sc not in b.labels[x]:
        raise RuleNotApplicable(f"{sc} is not in L({x})")
    act = _action_for(b, x, sc, blocking_status(b)[x])
    if act is None or act.rule != rule:
        raise RuleNotApplicable(f"{rule}-rule not applicable to {sc} at {x}")
    return act


def _do_and(b: Branch, act: Action) -> None:
    c, s = act.concept.concept, act.concept.sign
    src = Provenance("and", act.node, act.concept)
    b.add(act.node, SignedConcept(c.left, s), src)
    b.add(act.node, SignedConcept(c.right, s), src)


def _do_or(b: Branch, act: Action, pick_right: bool, eager: bool = False) -> None:
    c, s = act.concept.concept, act.concept.sign
    disjunct = SignedConcept(c.right if pick_right else c.left, s)
    b.add(act.node, disjunct, Provenance("or", act.node, act.concept))
    if eager:
        _split_conjuncts(b, act.node, disjunct)


def _split_conjuncts(b: Branch, x: NodeId, sc: SignedConcept) -> None:
    # the ``and`` rule applied at once, so a clashing disjunct shows up now
    stack = [sc]
    while stack:
        top = stack.pop()
        if isinstance(top.concept, And):
            for part in (top.concept.left, top.concept.right):
                child = SignedConcept(part, top.sign)
                if b.add(x, child, Provenance("and", x, top)):
                    stack.append(child)


def _do_forall(b: Branch, act: Action, eager: bool = False) -> None:
    c, s = act.concept.concept, act.concept.sign
    src = Provenance("forall", act.node, act.concept)
    for y in act.targets:
        e = b.edges[(act.node, y)]
        pushed = SignedConcept(c.filler, min(s, e.sign))
        b.add(y, pushed, src)
        if eager:
            _split_conjuncts(b, y, pushed)


def _do_exists(b: Branch, act: Action, eager: bool = False) -> NodeId:
    c, s = act.concept.concept, act.concept.sign
    src = Provenance("exists", act.node, act.concept)
    y = b.new_variable(act.node, c.role, s, src)
    filler = SignedConcept(c.filler, s)
    b.add(y, filler, src)
    if eager:
        _split_conjuncts(b, y, filler)
        if b.tbox_concept is not None:
            _split_conjuncts(b, y, b.tbox_concept)
    return y


def apply_and(b: Branch, x: NodeId, sc: SignedConcept) -> Branch:
    """``and``-rule: add both conjuncts with the sign of *sc*. Returns a new branch."""
    act = _require(b, x, sc, "and")
    out = b.copy()
    _do_and(out, act)
    return out


def apply_or(b: Branch, x: NodeId, sc: SignedConcept) -> tuple[Branch, Branch]:
    """``or``-rule: one new branch per disjunct, each with the sign of *sc*."""
    act = _require(b, x, sc, "or")
    left, right = b.copy(), b.copy()
    _do_or(left, act, pick_right=False)
    _do_or(right, act, pick_right=True)
    return left, right


def apply_exists(b: Branch, x: NodeId, sc: SignedConcept) -> Branch:
    act = _require(b, x, sc, "exists")
    out = b.copy()
    _do_exists(out, act)
    return out


def apply_forall(b: Branch, x: NodeId, sc: SignedConcept) -> Branch:
    act = _require(b, x, sc, "forall")
    out = b.copy()
    _do_forall(out, act)
    return out


# ---------------------------------------------------------------------------
# conflicts and classification


class ConflictClass(enum.Enum):
    REAL = "real"
    STRONG = "strong"
    INNER = "inner"

    @classmethod
    def of(cls, sign_sum: int) -> "ConflictClass":
        return {2: cls.REAL, 1: cls.STRONG, 0: cls.INNER}[sign_sum]

    @property
    def second_class(self) -> bool:
        return self is not ConflictClass.REAL


@dataclass(frozen=True)
class Conflict:
    """A complementary pair ``A^s1, not A^s2`` in one label.

    ``atom`` is ``None`` for a ``bot^s`` entry, which counts as a pair of
    sign ``s`` on both sides.
    """

    node: Optional[NodeId]
    atom: Optional[str]
    positive_sign: int
    negative_sign: int

    @property
    def klass(self) -> ConflictClass:
        return ConflictClass.of(self.positive_sign + self.negative_sign)

    def __str__(self) -> str:
        atom = self.atom if self.atom is not None else "bot"
        return f"{self.klass.value}{{{atom}^{self.positive_sign}, not {atom}^{self.negative_sign}}}@{self.node}"


def conflicts(label: Iterable[SignedConcept], node: Optional[NodeId] = None) -> list[Conflict]:
    """All conflicts within one node label, classified by their sign sum."""
    positive: dict[str, set[int]] = {}
    negative: dict[str, set[int]] = {}
    found = []
    for sc in label:
        c = sc.concept
        if isinstance(c, Atomic):
            positive.setdefault(c.name, set()).add(sc.sign)
        elif isinstance(c, Not) and isinstance(c.operand, Atomic):
            negative.setdefault(c.operand.name, set()).add(sc.sign)
        elif isinstance(c, Bottom):
            found.append(Conflict(node, None, sc.sign, sc.sign))
    for name in sorted(positive.keys() & negative.keys()):
        for s1 in sorted(positive[name], reverse=True):
            for s2 in sorted(negative[name], reverse=True):
                found.append(Conflict(node, name, s1, s2))
    return found


def branch_conflicts(b: Branch) -> list[Conflict]:
    return [k for x, lab in b.labels.items() for k in conflicts(lab, x)]


class Classification(enum.Enum):
    OPEN = "open"
    FIRST_CLASS_CLOSED = "first-class-closed"
    SECOND_CLASS_CLOSED = "second-class-closed"


@dataclass(frozen=True)
class BranchClass:
    kind: Classification
    evidence: tuple[Conflict, ...] = ()

    @classmethod
    def from_conflicts(cls, found: Iterable[Conflict]) -> "BranchClass":
        found = tuple(found)
        if any(k.klass.second_class for k in found):
            return cls(Classification.SECOND_CLASS_CLOSED, found)
        if found:
            return cls(Classification.FIRST_CLASS_CLOSED, found)
        return cls(Classification.OPEN, ())

    @property
    def is_open(self) -> bool:
        return self.kind is Classification.OPEN


def classify_branch(b: Branch) -> BranchClass:
    if not (b.complete or b.settled or is_complete(b)):
        raise BranchNotComplete("branch still has applicable rules")
    return BranchClass.from_conflicts(branch_conflicts(b))


# ---------------------------------------------------------------------------
# search


@dataclass(frozen=True)
class Limits:
    max_nodes: int = 100_000  # per branch
    max_branches: int = 10_000  # complete branches per run


def _settles_para(b: Branch) -> bool:
    return b.second_class > 0


def _settles_classical(b: Branch) -> bool:
    return b.first_class + b.second_class > 0


_SETTLE = {"para": _settles_para, "classical": _settles_classical}


@dataclass
class SearchStats:
    """Counters filled in by :func:`iter_branches`."""

    branches: int = 0
    # disjunctions resolved without a split because one side was refuted
    propagated: int = 0

    @property
    def exhaustive(self) -> bool:
        return not self.propagated


def iter_branches(
    initial: Branch,
    limits: Limits = Limits(),
    *,
    mode: str = "para",
    rng: Optional[random.Random] = None,
    prune: Optional[Callable[[Branch], bool]] = None,
    stats: Optional[SearchStats] = None,
) -> Iterator[Branch]:
    """Yield the complete branches reachable from *initial*, depth first.

    A branch is finished early (``settled``) as soon as its classification
    can no longer change: in ``para`` mode when it holds a second-class
    conflict, in ``classical`` mode when it holds any conflict.  Labels only
    grow, so every completion of a settled branch has the same class.

    In ``classical`` mode only the existence of an open branch matters, so
    the order of rule applications is free and the search uses the usual
    strategy: non-branching rules first, then the ``some``-rule, then one
    disjunction at a time.
    Conjuncts are split as soon as they arrive, a disjunction with one
    refuted side takes the other without splitting, and disjuncts with fewer
    existentials are tried first.  Para mode keeps the round structure and
    visits the whole forest.

    *prune*, if given, is consulted at the start of every round; branches for
    which it returns true are dropped silently.
    """
    search = _Search(limits, mode, rng, prune, stats)
    yield from search.branches([(initial.copy(), [], 0)])


# a pending piece of the search: branch, actions of the current round, next
# action index
_Entry = tuple[Branch, list[Action], int]


class _Search:
    def __init__(self, limits, mode, rng, prune, stats):
        self.limits = limits
        self.settles = _SETTLE[mode]
        self.classical = mode == "classical"
        self.rng = rng
        self.prune = prune
        self.stats = stats if stats is not None else SearchStats()

    def branches(self, stack: list[_Entry]) -> Iterator[Branch]:
        while stack:
            b, actions, i = stack.pop()
            if self.advance(b, actions, i, stack.append) == "dropped":
                continue
            self.stats.branches += 1
            if self.stats.branches > self.limits.max_branches:
                raise ResourceLimitExceeded(f"more than {self.limits.max_branches} complete branches")
            yield b

    def advance(self, b: Branch, actions: list[Action], i: int, push, stop_at_split: bool = False):
        """Expand *b* in place until it finishes; alternatives go to *push*.

        Returns ``"done"`` or ``"dropped"``, or with *stop_at_split* the
        ``(actions, i)`` needed to resume right after the first split.
        """
        classical, rng = self.classical, self.rng
        while True:
            if self.settles(b):
                b.settled = True
                return "done"
            if i == len(actions):
                if self.prune is not None and self.prune(b):
                    return "dropped"
                actions, i = applicable_rules(b, rng), 0
                if not actions:
                    b.complete = True
                    return "done"
                if classical:
                    actions = _deterministic_first(b, actions)
            act = actions[i]
            i += 1
            if act.rule == "or" and classical and _propagate(b, act):
                self.stats.propagated += 1
            elif act.rule == "or":
                if rng is not None:
                    right_first = rng.random() < 0.5
                else:
                    right_first = classical and _generating(act.concept.concept.right) < _generating(
                        act.concept.concept.left
                    )
                other = b.copy()
                _do_or(b, act, pick_right=right_first, eager=classical)
                _do_or(other, act, pick_right=not right_first, eager=classical)
                push((other, actions, i))
                if stop_at_split:
                    return actions, i
            elif act.rule == "and":
                _do_and(b, act)
            elif act.rule == "forall":
                _do_forall(b, act, classical)
            else:
                _do_exists(b, act, classical)
                if len(b) > self.limits.max_nodes:
                    raise ResourceLimitExceeded(f"more than {self.limits.max_nodes} nodes in one branch")


def _explore(entry: _Entry, limits: Limits) -> list[Branch]:
    return list(_Search(limits, "para", None, None, None).branches([entry]))


def parallel_branches(initial: Branch, limits: Limits = Limits(), *, jobs: int = 2) -> list[Branch]:
    """The complete ``para`` branches of *initial*, explored by *jobs* processes.

    The forest is first split into independent pieces, kept in depth-first
    order, so the result equals ``list(iter_branches(initial, limits))``.
    Branches do not share state and the closure verdict only needs "all
    closed" and "some second-class", so the pieces can run anywhere.
    """
    from concurrent.futures import ProcessPoolExecutor

    search = _Search(limits, "para", None, None, None)
    # items are ("done", branch) or ("todo", entry)
    frontier: list[tuple[str, object]] = [("todo", (initial.copy(), [], 0))]
    while sum(kind == "todo" for kind, _ in frontier) < 2 * jobs:
        k = next((n for n, (kind, _) in enumerate(frontier) if kind == "todo"), None)
        if k is None:
            break
        b, actions, i = frontier[k][1]
        pushed: list[_Entry] = []
        out = search.advance(b, actions, i, pushed.append, stop_at_split=True)
        if out == "done":
            frontier[k] = ("done", b)
        else:
            actions, i = out
            # the continuation comes first, as in the sequential search
            frontier[k : k + 1] = [("todo", (b, actions, i)), ("todo", pushed[0])]
    todo = [item for kind, item in frontier if kind == "todo"]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = iter(list(pool.map(_explore, todo, [limits] * len(todo))))
    out: list[Branch] = []
    for kind, item in frontier:
        out.extend([item] if kind == "done" else next(results))
    if len(out) > limits.max_branches:
        raise ResourceLimitExceeded(f"more than {limits.max_branches} complete branches")
    return out


def _deterministic_first(b: Branch, actions: list[Action]) -> list[Action]:
    """The actions to run now: non-generating ones, else ``some``, else one ``or``.

    A disjunction with a refuted side does not branch and counts as plain.
    """
    plain = [a for a in actions if a.rule in ("and", "forall") or (a.rule == "or" and _one_side_refuted(b, a))]
    return plain or [a for a in actions if a.rule == "exists"] or actions[:1]


def _one_side_refuted(b: Branch, act: Action) -> bool:
    label, c = b.labels[act.node], act.concept.concept
    return _refuted(label, c.left) or _refuted(label, c.right)


def _refuted(label, c: Concept) -> bool:
    """Whether *label* already contradicts some conjunct of *c*."""
    if isinstance(c, And):
        return _refuted(label, c.left) or _refuted(label, c.right)
    if isinstance(c, Bottom):
        return True
    if isinstance(c, Atomic):
        other: Concept = Not(c)
    elif isinstance(c, Not) and isinstance(c.operand, Atomic):
        other = c.operand
    else:
        return False
    return SignedConcept(other, 1) in label or SignedConcept(other, 0) in label


def _propagate(b: Branch, act: Action) -> bool:
    """Take the only live disjunct without splitting, when one side is refuted.

    Used in classical mode only, where the refuted side would just yield a
    closed branch.
    """
    c = act.concept.concept
    label = b.labels[act.node]
    for dead, live in ((c.left, c.right), (c.right, c.left)):
        if _refuted(label, dead):
            sc = SignedConcept(live, act.concept.sign)
            b.add(act.node, sc, Provenance("or", act.node, act.concept))
            _split_conjuncts(b, act.node, sc)
            return True
    return False


def _generating(c: Concept) -> int:
    """Existentials in *c* outside quantifier scope; fewer means a smaller model."""
    if isinstance(c, (And, Or)):
        return _generating(c.left) + _generating(c.right)
    return int(isinstance(c, Exists))


def second_class_possible(b: Branch) -> bool:
    """Whether some completion of *b* could still hold a second-class conflict.

    Over-approximates every future label.  Each existing node collects the
    parts of its entries and whatever ``all``-concepts push across existing
    edges.  Future successors are merged into summary nodes, one for each
    ``some``-entry of an existing node and one for each ``some``-entry met
    deeper down.  A summary receives the TBox concept, the filler and the
    matching ``all``-fillers, the latter with sign ``min`` of the two signs as
    the rules would give.

    Every potential entry remembers which ``or``-choices derive it, so two
    sides of one disjunction are never counted as present together.  Choices
    made inside a summary stay local to it, since a summary stands for many
    nodes.  False means no completion can reach a strong or inner conflict.
    """
    return _Potential(b).second_class()


_FREE = frozenset()
_MAX_DERIVATIONS = 8


class _Potential:
    """Fixpoint behind :func:`second_class_possible`.

    Sets are keyed ``("node", x)`` or ``("sum", owner, e)`` where *e* is the
    signed ``some``-concept creating the successor and *owner* the existing
    node holding it, or ``None`` below future nodes.  Each entry maps to a set
    of derivations; a derivation is a frozenset of ``((set key, or-entry),
    side)`` choices.
    """

    def __init__(self, b: Branch):
        self.b = b
        self.sets: dict[tuple, dict[SignedConcept, set[frozenset]]] = {}
        self.by_owner: dict[tuple, list[tuple]] = {}
        for x, lab in b.labels.items():
            self.sets[("node", x)] = {sc: {_FREE} for sc in lab}
        changed = True
        while changed:
            changed = self._round()

    def _add(self, key, sc: SignedConcept, derivations) -> bool:
        derivations = set(derivations)
        if not derivations:
            return False
        entries = self.sets[key]
        old = entries.get(sc)
        if old is None:
            entries[sc] = {_FREE} if _FREE in derivations else derivations
            return True
        if _FREE in old:
            return False
        merged = old | derivations
        if _FREE in merged or len(merged) > _MAX_DERIVATIONS:
            merged = {_FREE}
        if merged == old:
            return False
        entries[sc] = merged
        return True

    def _summary(self, owner, ex: SignedConcept) -> tuple[tuple, bool]:
        key = ("sum", owner, ex)
        if key in self.sets:
            return key, False
        self.sets[key] = {}
        if self.b.tbox_concept is not None:
            self.sets[key][self.b.tbox_concept] = {_FREE}
        self.by_owner.setdefault((owner, ex.concept.role), []).append(key)
        return key, True

    @staticmethod
    def _outward(derivations) -> set[frozenset]:
        # only choices at existing nodes survive a move into a summary
        return {frozenset(c for c in d if c[0][0][0] == "node") for d in derivations}

    def _round(self) -> bool:
        changed = False
        for key in list(self.sets):
            node = key[1] if key[0] == "node" else None
            label = self.b.labels[node] if node is not None else {}
            for sc, derivations in list(self.sets[key].items()):
                c = sc.concept
                if isinstance(c, And):
                    for part in (c.left, c.right):
                        changed |= self._add(key, SignedConcept(part, sc.sign), derivations)
                elif isinstance(c, Or):
                    # an ``or`` already settled in the actual label never fires again
                    if sc in label and (
                        SignedConcept(c.left, sc.sign) in label or SignedConcept(c.right, sc.sign) in label
                    ):
                        continue
                    choice = (key, sc)
                    for side, part in ((0, c.left), (1, c.right)):
                        picked = {d | {(choice, side)} for d in derivations if (choice, 1 - side) not in d}
                        changed |= self._add(key, SignedConcept(part, sc.sign), picked)
                elif isinstance(c, Exists):
                    target, created = self._summary(node, sc)
                    changed |= created
                    filler = SignedConcept(c.filler, sc.sign)
                    changed |= self._add(target, filler, self._outward(derivations))
                elif isinstance(c, Forall):
                    if node is not None:
                        for y, e in self.b.role_successors(node, c.role):
                            pushed = SignedConcept(c.filler, min(sc.sign, e.sign))
                            changed |= self._add(("node", y), pushed, derivations)
                    for target in self.by_owner.get((node, c.role), ()):
                        pushed = SignedConcept(c.filler, min(sc.sign, target[2].sign))
                        changed |= self._add(target, pushed, self._outward(derivations))
        return changed

    def second_class(self) -> bool:
        for entries in self.sets.values():
            for sc, derivations in entries.items():
                c = sc.concept
                if isinstance(c, Bottom) and sc.sign == 0:
                    return True
                if not isinstance(c, Atomic):
                    continue
                for t in range(2 - sc.sign):
                    other = entries.get(SignedConcept(Not(c), t))
                    if other and _compatible(derivations, other):
                        return True
        return False


def _compatible(first, second) -> bool:
    for d1 in first:
        picked = dict(d1)
        for d2 in second:
            if all(picked.get(choice, side) == side for choice, side in d2):
                return True
    return False


def expand(
    initial: Branch,
    limits: Limits = Limits(),
    *,
    mode: str = "para",
    rng: Optional[random.Random] = None,
) -> list[Branch]:
    return list(iter_branches(initial, limits, mode=mode, rng=rng))


@dataclass
class ForestVerdict:
    """Outcome of a run: ``closed`` plus every branch with its class.

    ``para``: closed iff no branch is open and some branch is second-class
    closed.  ``classical``: closed iff no branch is open.
    """

    closed: bool
    branches: list[tuple[Branch, BranchClass]] = field(default_factory=list)
    mode: str = "para"
    # False when the search stopped once the verdict was known; ``branches``
    # then holds only the branches that decided it
    exhaustive: bool = True


def forest_verdict(branches: Iterable[Branch], mode: str = "para") -> ForestVerdict:
    if mode not in _SETTLE:
        raise ValueError(f"unknown mode {mode!r}")
    classified = [(b, classify_branch(b)) for b in branches]
    return ForestVerdict(forest_closed(classified, mode), classified, mode)


def forest_closed(classified: list[tuple[Branch, BranchClass]], mode: str) -> bool:
    kinds = [bc.kind for _, bc in classified]
    if any(k is Classification.OPEN for k in kinds):
        return False
    if mode == "classical":
        return True
    return Classification.SECOND_CLASS_CLOSED in kinds
