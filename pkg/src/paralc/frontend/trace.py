"""JSON proof traces.

Layout::

    {
      "mode": "para" | "classical",
      "query": "Fly(tweety)",
      "verdict": true,
      "closed": true,
      "exhaustive": true,
      "branches": [
        {
          "id": 1,
          "classification": "open" | "first-class-closed" | "second-class-closed",
          "settled": false,
          "nodes": [{"id": "tweety", "root": true, "parent": null,
                     "blocked": "unblocked" | "direct" | "indirect", "blocked_by": null,
                     "label": [{"concept": "not Fly", "sign": 1}, ...]}],
          "edges": [{"from": "tweety", "to": "_x1", "roles": ["HasFood"], "sign": 1}],
          "conflicts": [{"node": "tweety", "atom": "Fly", "signs": [1, 0], "class": "strong"}]
        }
      ]
    }

Concepts are written in the surface syntax, so a trace can be re-checked
without access to the engine: :func:`recompute_closed` re-derives every
conflict and the closure verdict from the labels alone.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Union

from ..reasoner import ReasoningResult
from ..signing import SignedConcept
from ..tableau import (
    Branch,
    BranchClass,
    Classification,
    blocking_status,
    conflicts,
    forest_closed,
)
from .parser import parse_concept

__all__ = ["emit_trace", "dumps", "write_trace", "recompute_closed", "is_faithful"]

TraceDocument = dict


def _branch_doc(index: int, b: Branch, bc: BranchClass) -> dict[str, Any]:
    status = blocking_status(b)
    nodes = []
    for x, label in b.labels.items():
        parent = b.parent.get(x)
        nodes.append(
            {
                "id": str(x),
                "root": x.is_root,
                "parent": None if parent is None else str(parent),
                "blocked": status[x].kind,
                "blocked_by": None if status[x].by is None else str(status[x].by),
                "label": [{"concept": str(sc.concept), "sign": sc.sign} for sc in label],
            }
        )
    edges = [
        {"from": str(e.source), "to": str(e.target), "roles": sorted(e.roles), "sign": e.sign}
        for e in b.edges.values()
    ]
    found = [
        {
            "node": str(k.node),
            "atom": "bot" if k.atom is None else k.atom,
            "signs": [k.positive_sign, k.negative_sign],
            "class": k.klass.value,
        }
        for k in bc.evidence
    ]
    return {
        "id": index,
        "classification": bc.kind.value,
        "settled": b.settled,
        "nodes": nodes,
        "edges": edges,
        "conflicts": found,
    }


def emit_trace(r: ReasoningResult) -> TraceDocument:
    forest = r.trace
    return {
        "mode": r.mode,
        "query": None if r.query is None else str(r.query),
        "verdict": r.verdict,
        "closed": forest.closed,
        "exhaustive": forest.exhaustive,
        "branches": [_branch_doc(i, b, bc) for i, (b, bc) in enumerate(forest.branches, 1)],
    }


def dumps(doc: TraceDocument) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False)


def write_trace(r: ReasoningResult, path: Union[str, Path]) -> TraceDocument:
    doc = emit_trace(r)
    Path(path).write_text(dumps(doc) + "\n", encoding="utf-8")
    return doc


def _reclassify(branch: dict[str, Any]) -> BranchClass:
    found = []
    for node in branch["nodes"]:
        label = [SignedConcept(parse_concept(e["concept"]), e["sign"]) for e in node["label"]]
        found += conflicts(label, node["id"])
    return BranchClass.from_conflicts(found)


def recompute_closed(doc: TraceDocument) -> bool:
    """Closure verdict re-derived from the serialized labels.

    Only meaningful for exhaustive traces; a partial one raises ``ValueError``.
    """
    if not doc.get("exhaustive", True):
        raise ValueError("trace is partial; closure cannot be recomputed")
    classified = [(None, _reclassify(br)) for br in doc["branches"]]
    return forest_closed(classified, doc["mode"])


def is_faithful(doc: TraceDocument) -> bool:
    """True when stored classifications and ``closed`` match a recomputation."""
    for br in doc["branches"]:
        bc = _reclassify(br)
        if bc.kind is not Classification(br["classification"]):
            return False
        stored = sorted((c["node"], c["atom"], tuple(c["signs"]), c["class"]) for c in br["conflicts"])
        fresh = sorted(
            (k.node, "bot" if k.atom is None else k.atom, (k.positive_sign, k.negative_sign), k.klass.value)
            for k in bc.evidence
        )
        if stored != fresh:
            return False
    if not doc.get("exhaustive", True):
        return True
    return recompute_closed(doc) == doc["closed"]
