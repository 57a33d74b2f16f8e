"""Weighted AND-OR requirement trees (RRTs): parse, validate, serialize.

A tree leaf holds a simple requirement on a single QoS property or a
single offer kind; internal nodes combine two or more children with AND
or OR. Every edge carries a preference weight in (0, 1], and the weights
of any node's children must sum to exactly 1, so the products of edge
weights along root-to-leaf paths form a preference distribution over the
leaves.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Iterable, Union

from .offers import OfferKind
from .qos import QosProperty, property_index

WEIGHT_SUM_TOLERANCE = 1e-9


class RrtError(ValueError):
    """Base class for tree document errors."""


class RrtSyntaxError(RrtError):
    """Malformed tree document (bad JSON, wrong shapes, unknown fields)."""


class UnknownKindError(RrtError):
    """Unrecognized operator, property, or offer-kind token."""


class RrtOp(enum.Enum):
    AND = "AND"
    OR = "OR"


@dataclass(frozen=True)
class QualityRequirement:
    """Leaf requirement on a single QoS property (by name or alias)."""

    property: str


@dataclass(frozen=True)
class OfferRequirement:
    """Leaf requirement on a single offer kind."""

    offer_kind: OfferKind


SimpleRequirement = Union[QualityRequirement, OfferRequirement]


@dataclass(frozen=True)
class RrtLeaf:
    requirement: SimpleRequirement


@dataclass(frozen=True)
class RrtEdge:
    weight: float
    child: "RrtNode"


@dataclass(frozen=True)
class RrtInternal:
    op: RrtOp
    children: tuple[RrtEdge, ...]


RrtNode = Union[RrtLeaf, RrtInternal]


def parse_rrt(text: str, properties: Iterable[QosProperty] | None = None) -> RrtNode:
    """Parse a JSON tree document into an RrtNode.

    Enforces structure and token membership only; weight-sum and arity
    rules are left to ``validate_rrt`` so that invalid-but-parseable
    documents can be diagnosed with violation lists.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RrtSyntaxError(f"invalid JSON: {exc}") from None
    return _parse_node(data, property_index(properties))


def _parse_node(data: object, index: dict[str, QosProperty]) -> RrtNode:
    if not isinstance(data, dict):
        raise RrtSyntaxError("tree node must be a JSON object")
    if "leaf" in data:
        if set(data) != {"leaf"}:
            extra = sorted(set(data) - {"leaf"})
            raise RrtSyntaxError(f"unknown field on leaf node: {extra[0]}")
        return _parse_leaf(data["leaf"], index)
    if "op" in data:
        unknown = sorted(set(data) - {"op", "children"})
        if unknown:
            raise RrtSyntaxError(f"unknown field on internal node: {unknown[0]}")
        try:
            op = RrtOp(data["op"])
        except ValueError:
            raise UnknownKindError(f"unknown operator: {data.get('op')!r}") from None
        children = data.get("children")
        if not isinstance(children, list):
            raise RrtSyntaxError("internal node requires a children list")
        return RrtInternal(op=op, children=tuple(_parse_edge(c, index) for c in children))
    raise RrtSyntaxError("tree node must have either 'leaf' or 'op'")


def _parse_edge(data: object, index: dict[str, QosProperty]) -> RrtEdge:
    if not isinstance(data, dict):
        raise RrtSyntaxError("child entry must be a JSON object")
    unknown = sorted(set(data) - {"weight", "node"})
    if unknown:
        raise RrtSyntaxError(f"unknown field on child entry: {unknown[0]}")
    if "weight" not in data or "node" not in data:
        raise RrtSyntaxError("child entry requires 'weight' and 'node'")
    weight = data["weight"]
    if not isinstance(weight, (int, float)) or isinstance(weight, bool):
        raise RrtSyntaxError("edge weight must be a number")
    return RrtEdge(weight=float(weight), child=_parse_node(data["node"], index))


def _parse_leaf(data: object, index: dict[str, QosProperty]) -> RrtLeaf:
    if not isinstance(data, dict):
        raise RrtSyntaxError("leaf must be a JSON object")
    kind = data.get("kind")
    if kind == "quality":
        unknown = sorted(set(data) - {"kind", "property"})
        if unknown:
            raise RrtSyntaxError(f"unknown field on quality leaf: {unknown[0]}")
        name = data.get("property")
        if not isinstance(name, str):
            raise RrtSyntaxError("quality leaf requires a 'property' string")
        if name.casefold() not in index:
            raise UnknownKindError(f"unknown QoS property: {name!r}")
        return RrtLeaf(QualityRequirement(property=name))
    if kind == "offer":
        unknown = sorted(set(data) - {"kind", "offer"})
        if unknown:
            raise RrtSyntaxError(f"unknown field on offer leaf: {unknown[0]}")
        token = data.get("offer")
        try:
            offer_kind = OfferKind(token)
        except ValueError:
            raise UnknownKindError(f"unknown offer kind: {token!r}") from None
        return RrtLeaf(OfferRequirement(offer_kind=offer_kind))
    raise UnknownKindError(f"unknown leaf kind: {kind!r}")


def validate_rrt(tree: RrtNode, properties: Iterable[QosProperty] | None = None) -> list[str]:
    """Structural rule check; empty result means the tree is valid.

    Rules: internal nodes have at least two children, sibling weights sum
    to 1 within 1e-9, every weight lies in (0, 1], and every leaf
    requirement resolves against the property registry / offer kinds.
    """
    index = property_index(properties)
    violations: list[str] = []
    _validate_node(tree, "0", index, violations)
    return violations


def _validate_node(node: RrtNode, path: str, index, violations: list[str]) -> None:
    if isinstance(node, RrtLeaf):
        req = node.requirement
        if isinstance(req, QualityRequirement):
            if req.property.casefold() not in index:
                violations.append(f"node {path}: unknown QoS property: {req.property}")
        elif not isinstance(req.offer_kind, OfferKind):
            violations.append(f"node {path}: unknown offer kind: {req.offer_kind!r}")
        return
    arity_ok = len(node.children) >= 2
    if not arity_ok:
        violations.append(f"node {path}: internal node arity < 2")
    total = 0.0
    for i, edge in enumerate(node.children):
        if not 0.0 < edge.weight <= 1.0:
            violations.append(f"node {path}.{i}: edge weight {edge.weight} not in (0, 1]")
        total += edge.weight
    # The sum rule only makes sense on structurally valid sibling sets.
    if arity_ok and abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
        violations.append(f"node {path}: sibling weights sum {total:.9f} != 1")
    for i, edge in enumerate(node.children):
        _validate_node(edge.child, f"{path}.{i}", index, violations)


def serialize_rrt(tree: RrtNode) -> str:
    """Deterministic one-line JSON form; parse_rrt round-trips it.

    Weights are quantized to 9 decimal digits, matching the weight-sum
    tolerance; trees authored with up-to-9-decimal weights round-trip
    exactly.
    """
    return json.dumps(_node_doc(tree), separators=(",", ":"))


def _node_doc(node: RrtNode) -> dict:
    if isinstance(node, RrtLeaf):
        req = node.requirement
        if isinstance(req, QualityRequirement):
            return {"leaf": {"kind": "quality", "property": req.property}}
        return {"leaf": {"kind": "offer", "offer": req.offer_kind.value}}
    return {
        "op": node.op.value,
        "children": [
            {"weight": round(edge.weight, 9), "node": _node_doc(edge.child)}
            for edge in node.children
        ],
    }


def leaves(tree: RrtNode) -> list[tuple[RrtLeaf, float]]:
    """Depth-first left-to-right leaves with their root-to-leaf weight products."""
    out: list[tuple[RrtLeaf, float]] = []
    _collect_leaves(tree, 1.0, out)
    return out


def _collect_leaves(node: RrtNode, product: float, out: list) -> None:
    if isinstance(node, RrtLeaf):
        out.append((node, product))
        return
    for edge in node.children:
        _collect_leaves(edge.child, product * edge.weight, out)
