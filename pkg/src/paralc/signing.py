"""Premise/query signs.

Every formula entering the tableau carries a sign: ``1`` when it belongs to
the premise set, ``0`` otherwise (in practice: the negated query).  Signs are
carried unchanged through NNF rewriting and through the expansion rules.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Collection

from .model import Assertion, Concept, ConceptAssertion, RoleAssertion, nnf

__all__ = [
    "PREMISE",
    "QUERY",
    "SignedConcept",
    "SignedAssertion",
    "normalize_assertion",
    "characteristic",
    "signed_nnf",
]

PREMISE = 1
QUERY = 0


def _check_sign(sign: int) -> None:
    if sign not in (0, 1):
        raise ValueError(f"sign must be 0 or 1, got {sign!r}")


@dataclass(frozen=True)
class SignedConcept:
    """A concept together with its sign; ``(C, 0)`` and ``(C, 1)`` are distinct."""

    concept: Concept
    sign: int

    def __post_init__(self):
        _check_sign(self.sign)

    def __str__(self) -> str:
        return f"{self.concept}^{self.sign}"


@dataclass(frozen=True)
class SignedAssertion:
    assertion: Assertion
    sign: int

    def __post_init__(self):
        _check_sign(self.sign)
        if isinstance(self.assertion, RoleAssertion) and self.sign != PREMISE:
            raise ValueError("role assertions always carry sign 1")

    def __str__(self) -> str:
        return f"{self.assertion}^{self.sign}"


def normalize_assertion(a: Assertion) -> Assertion:
    if isinstance(a, ConceptAssertion):
        return ConceptAssertion(nnf(a.concept), a.individual)
    return a


def characteristic(premises: Collection[Assertion], a: Assertion) -> int:
    """Sign of *a* relative to *premises*: 1 if it is one of them, else 0.

    Concept assertions are compared after NNF, so ``not (A or B)(x)`` is
    recognised as the premise ``(not A and not B)(x)``.
    """
    normalized = {normalize_assertion(p) for p in premises}
    return PREMISE if normalize_assertion(a) in normalized else QUERY


def signed_nnf(sc: SignedConcept) -> SignedConcept:
    return SignedConcept(nnf(sc.concept), sc.sign)
