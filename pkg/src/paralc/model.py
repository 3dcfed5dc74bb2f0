"""ALC concept terms, assertions and ontologies.

Concepts are immutable, hashable trees built from::

    Top, Bottom, Atomic(name), Not(c), And(c, d), Or(c, d),
    Exists(role, c), Forall(role, c)

Equality is structural; ``And(A, B)`` and ``And(B, A)`` are different terms.
The string form of every object uses the surface syntax accepted by
:mod:`paralc.frontend.parser`, so ``parse(str(x)) == x``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

__all__ = [
    "IDENTIFIER",
    "KEYWORDS",
    "Concept",
    "Top",
    "Bottom",
    "Atomic",
    "Not",
    "And",
    "Or",
    "Exists",
    "Forall",
    "TOP",
    "BOTTOM",
    "ConceptAssertion",
    "RoleAssertion",
    "Assertion",
    "TBox",
    "ABox",
    "Ontology",
    "check_name",
    "nnf",
    "complement",
    "is_nnf",
    "subconcepts",
    "subterms",
    "closure",
    "closure_abox",
    "internalize",
    "conjoin",
    "atoms",
    "roles",
    "quantifier_depth",
]

IDENTIFIER = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")

KEYWORDS = frozenset(
    {
        "tbox",
        "abox",
        "subclassof",
        "subsumedby",
        "consistent",
        "and",
        "or",
        "not",
        "some",
        "all",
        "top",
        "bot",
    }
)


def check_name(name: str) -> str:
    """Return *name* if it is a legal concept/role/individual identifier."""
    if not isinstance(name, str) or not IDENTIFIER.match(name):
        raise ValueError(f"illegal identifier {name!r}")
    if name in KEYWORDS:
        raise ValueError(f"{name!r} is a reserved keyword")
    return name


# precedence levels for printing: or < and < unary
_OR, _AND, _UNARY = 1, 2, 3


class Concept:
    """Base class of all concept terms."""

    __slots__ = ()
    _prec = _UNARY

    def __str__(self) -> str:
        return _render(self)

    def __and__(self, other: "Concept") -> "And":
        return And(self, other)

    def __or__(self, other: "Concept") -> "Or":
        return Or(self, other)

    def __invert__(self) -> "Not":
        return Not(self)


@dataclass(frozen=True, repr=False)
class Top(Concept):
    def __repr__(self) -> str:
        return "TOP"


@dataclass(frozen=True, repr=False)
class Bottom(Concept):
    def __repr__(self) -> str:
        return "BOTTOM"


TOP = Top()
BOTTOM = Bottom()


@dataclass(frozen=True)
class Atomic(Concept):
    name: str

    def __repr__(self) -> str:
        return f"Atomic({self.name!r})"


@dataclass(frozen=True)
class Not(Concept):
    operand: Concept


@dataclass(frozen=True)
class And(Concept):
    left: Concept
    right: Concept

    _prec = _AND


@dataclass(frozen=True)
class Or(Concept):
    left: Concept
    right: Concept

    _prec = _OR


@dataclass(frozen=True)
class Exists(Concept):
    role: str
    filler: Concept


@dataclass(frozen=True)
class Forall(Concept):
    role: str
    filler: Concept


def _wrap(c: Concept, min_prec: int) -> str:
    text = _render(c)
    return f"({text})" if c._prec < min_prec else text


def _render(c: Concept) -> str:
    if isinstance(c, Atomic):
        return c.name
    if isinstance(c, Top):
        return "top"
    if isinstance(c, Bottom):
        return "bot"
    if isinstance(c, Not):
        return "not " + _wrap(c.operand, _UNARY)
    if isinstance(c, Exists):
        return f"some {c.role} . " + _wrap(c.filler, _UNARY)
    if isinstance(c, Forall):
        return f"all {c.role} . " + _wrap(c.filler, _UNARY)
    # binary connectives associate to the left in the grammar, so a right
    # operand of the same connective needs parentheses
    if isinstance(c, And):
        return f"{_wrap(c.left, _AND)} and {_wrap(c.right, _AND + 1)}"
    if isinstance(c, Or):
        return f"{_wrap(c.left, _OR)} or {_wrap(c.right, _OR + 1)}"
    raise TypeError(f"not a concept: {c!r}")


@dataclass(frozen=True)
class ConceptAssertion:
    """``concept(individual)``."""

    concept: Concept
    individual: str

    def __str__(self) -> str:
        if isinstance(self.concept, (Atomic, Top, Bottom)):
            return f"{self.concept}({self.individual})"
        return f"({self.concept})({self.individual})"


@dataclass(frozen=True)
class RoleAssertion:
    """``role(subject, object)``."""

    role: str
    subject: str
    object: str

    def __str__(self) -> str:
        return f"{self.role}({self.subject}, {self.object})"


Assertion = Union[ConceptAssertion, RoleAssertion]


@dataclass(frozen=True)
class TBox:
    """Ordered list of ``(sub, sup)`` inclusions."""

    inclusions: tuple[tuple[Concept, Concept], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "inclusions", tuple((c, d) for c, d in self.inclusions))

    def __len__(self) -> int:
        return len(self.inclusions)

    def __iter__(self) -> Iterator[tuple[Concept, Concept]]:
        return iter(self.inclusions)


@dataclass(frozen=True)
class ABox:
    concept_assertions: frozenset[ConceptAssertion] = frozenset()
    role_assertions: frozenset[RoleAssertion] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "concept_assertions", frozenset(self.concept_assertions))
        object.__setattr__(self, "role_assertions", frozenset(self.role_assertions))

    @classmethod
    def of(cls, assertions: Iterable[Assertion]) -> "ABox":
        assertions = list(assertions)
        return cls(
            frozenset(a for a in assertions if isinstance(a, ConceptAssertion)),
            frozenset(a for a in assertions if isinstance(a, RoleAssertion)),
        )

    def __iter__(self) -> Iterator[Assertion]:
        yield from self.concept_assertions
        yield from self.role_assertions

    def __len__(self) -> int:
        return len(self.concept_assertions) + len(self.role_assertions)

    @property
    def individuals(self) -> frozenset[str]:
        """U_A: every individual name occurring in the ABox."""
        names = {a.individual for a in self.concept_assertions}
        for r in self.role_assertions:
            names.update((r.subject, r.object))
        return frozenset(names)

    @property
    def roles(self) -> frozenset[str]:
        """R_A: every role name occurring in the ABox, including inside concepts."""
        names = {r.role for r in self.role_assertions}
        for a in self.concept_assertions:
            names |= roles(a.concept)
        return frozenset(names)

    def with_assertions(self, *extra: Assertion) -> "ABox":
        return ABox.of([*self, *extra])


@dataclass(frozen=True)
class Ontology:
    tbox: TBox = field(default_factory=TBox)
    abox: ABox = field(default_factory=ABox)

    def __str__(self) -> str:
        lines = []
        if self.tbox.inclusions:
            lines.append("tbox:")
            lines += [f"  {c} subclassof {d} ." for c, d in self.tbox]
        lines.append("abox:")
        body = sorted(self.abox.concept_assertions, key=str) + sorted(self.abox.role_assertions, key=str)
        lines += [f"  {a} ." for a in body]
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# rewriting


def nnf(c: Concept) -> Concept:
    """Push negation inward until it only sits on atomic concepts.

    ``not top`` becomes ``bot`` and ``not bot`` becomes ``top``.
    """
    if isinstance(c, (Atomic, Top, Bottom)):
        return c
    if isinstance(c, And):
        return And(nnf(c.left), nnf(c.right))
    if isinstance(c, Or):
        return Or(nnf(c.left), nnf(c.right))
    if isinstance(c, Exists):
        return Exists(c.role, nnf(c.filler))
    if isinstance(c, Forall):
        return Forall(c.role, nnf(c.filler))
    if isinstance(c, Not):
        return _negated_nnf(c.operand)
    raise TypeError(f"not a concept: {c!r}")


def _negated_nnf(c: Concept) -> Concept:
    # nnf(Not(c))
    if isinstance(c, Atomic):
        return Not(c)
    if isinstance(c, Top):
        return BOTTOM
    if isinstance(c, Bottom):
        return TOP
    if isinstance(c, Not):
        return nnf(c.operand)
    if isinstance(c, And):
        return Or(_negated_nnf(c.left), _negated_nnf(c.right))
    if isinstance(c, Or):
        return And(_negated_nnf(c.left), _negated_nnf(c.right))
    if isinstance(c, Exists):
        return Forall(c.role, _negated_nnf(c.filler))
    if isinstance(c, Forall):
        return Exists(c.role, _negated_nnf(c.filler))
    raise TypeError(f"not a concept: {c!r}")


def complement(c: Concept) -> Concept:
    """``~c``: the negation normal form of ``not c``."""
    return _negated_nnf(c)


def is_nnf(c: Concept) -> bool:
    if isinstance(c, Not):
        return isinstance(c.operand, Atomic)
    return all(is_nnf(d) for d in subconcepts(c))


def subconcepts(c: Concept) -> tuple[Concept, ...]:
    """Direct subconcepts of *c*."""
    if isinstance(c, (And, Or)):
        return (c.left, c.right)
    if isinstance(c, (Exists, Forall)):
        return (c.filler,)
    if isinstance(c, Not):
        return (c.operand,)
    return ()


def subterms(c: Concept) -> set[Concept]:
    """All distinct subterms of *c*, including *c* itself."""
    seen: set[Concept] = set()
    stack = [c]
    while stack:
        d = stack.pop()
        if d not in seen:
            seen.add(d)
            stack.extend(subconcepts(d))
    return seen


def closure(c: Concept) -> set[Concept]:
    """Smallest set containing *c* closed under subconcepts and :func:`complement`.

    *c* must be in NNF; then the complement of an NNF concept is again NNF and
    ``~~d == d``, which keeps the set finite.
    """
    if not is_nnf(c):
        raise ValueError(f"closure expects a concept in NNF, got {c}")
    result: set[Concept] = set()
    stack = [c]
    while stack:
        d = stack.pop()
        if d in result:
            continue
        result.add(d)
        stack.extend(subconcepts(d))
        stack.append(complement(d))
    return result


def closure_abox(abox: ABox) -> set[Concept]:
    """Union of :func:`closure` over the NNF of every asserted concept."""
    result: set[Concept] = set()
    for a in abox.concept_assertions:
        result |= closure(nnf(a.concept))
    return result


def conjoin(concepts: Iterable[Concept]) -> Concept:
    """Left-associated conjunction; ``top`` for an empty sequence."""
    result: Concept | None = None
    for c in concepts:
        result = c if result is None else And(result, c)
    return TOP if result is None else result


def internalize(tbox: TBox) -> Concept:
    """Compile a TBox into the single concept ``(~C1 or D1) and (~C2 or D2) ...``."""
    return nnf(conjoin(Or(complement(c), d) for c, d in tbox))


# ---------------------------------------------------------------------------
# signature helpers


def atoms(c: Concept) -> frozenset[str]:
    return frozenset(d.name for d in subterms(c) if isinstance(d, Atomic))


def roles(c: Concept) -> frozenset[str]:
    return frozenset(d.role for d in subterms(c) if isinstance(d, (Exists, Forall)))


def quantifier_depth(c: Concept) -> int:
    if isinstance(c, (Exists, Forall)):
        return 1 + quantifier_depth(c.filler)
    return max((quantifier_depth(d) for d in subconcepts(c)), default=0)
