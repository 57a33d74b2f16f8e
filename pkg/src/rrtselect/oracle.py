"""Reference evaluator: a literal, brute-force restatement of selection.

This module exists to check ``engine.evaluate`` and deliberately shares
none of its scoring code: offer profits, alias resolution, min-max
scaling and the AND/OR table algebra are all restated inline, node by
node, with no caching. Keep it slow and obvious; any shortcut defeats
its purpose as an oracle.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .engine import NoFeasibleServiceError, SelectionReport
from .offers import Offer, OfferKind
from .qos import Direction, QosProperty, ServiceDescriptor, builtin_properties
from .rrt import QualityRequirement, RrtLeaf, RrtNode, RrtOp


def reference_evaluate(
    tree: RrtNode,
    candidates: Sequence[ServiceDescriptor],
    task: str,
    properties: Iterable[QosProperty] | None = None,
    root_weight: float = 1.0,
) -> SelectionReport:
    """Same contract as engine.evaluate, computed by literal recursion."""
    props = builtin_properties() if properties is None else list(properties)
    name_map: dict[str, QosProperty] = {}
    for prop in props:
        name_map[prop.name.casefold()] = prop
        for alias in prop.aliases:
            name_map[alias.casefold()] = prop

    def lookup(service: ServiceDescriptor, name: str) -> float | None:
        target = name_map.get(name.casefold())
        if target is None:
            return None
        for key, value in service.qos.items():
            if name_map.get(key.casefold()) is target:
                return float(value)
        return None

    def offer_profit(offer: Offer, payable: float) -> float:
        if offer.kind is OfferKind.CO:
            return offer.price / payable
        if offer.kind is OfferKind.DO:
            return offer.percentage * payable / 100.0
        if offer.kind is OfferKind.AO:
            quantity = 1 if offer.quantity is None else offer.quantity
            return payable / (quantity * offer.price)
        if offer.kind is OfferKind.SO:
            return offer.price / payable
        if offer.kind is OfferKind.LCO:
            return offer.price / payable
        if offer.kind is OfferKind.CSO:
            gift = payable if offer.price is None else offer.price
            return gift / (offer.frequency * payable)
        return offer.percentage * payable / (offer.frequency * 100.0)

    trace: dict[str, dict[str, float]] = {}

    def node_table(node: RrtNode, weight: float, path: str) -> dict[str, float]:
        if isinstance(node, RrtLeaf):
            requirement = node.requirement
            raw: dict[str, float] = {}
            if isinstance(requirement, QualityRequirement):
                for service in candidates:
                    value = lookup(service, requirement.property)
                    if value is not None:
                        raw[service.id] = value
                prop = name_map.get(requirement.property.casefold())
                lower_better = prop is not None and prop.direction is Direction.LOWER_BETTER
            else:
                for service in candidates:
                    payable = lookup(service, "price")
                    profits = [
                        offer_profit(offer, payable)
                        for offer in service.offers
                        if offer.kind is requirement.offer_kind
                    ]
                    if profits:
                        raw[service.id] = max(profits)
                lower_better = False
            if not raw:
                table: dict[str, float] = {}
            else:
                mn = min(raw.values())
                mx = max(raw.values())
                table = {}
                for sid, value in raw.items():
                    if mx == mn:
                        normalized = 1.0
                    elif lower_better:
                        normalized = (mx - value) / (mx - mn)
                    else:
                        normalized = (value - mn) / (mx - mn)
                    table[sid] = weight * normalized
        else:
            child_tables = [
                node_table(edge.child, edge.weight, f"{path}.{i}")
                for i, edge in enumerate(node.children)
            ]
            table = {}
            if node.op is RrtOp.AND:
                for sid in child_tables[0]:
                    if all(sid in other for other in child_tables[1:]):
                        table[sid] = weight * sum(child[sid] for child in child_tables)
            else:
                for child in child_tables:
                    for sid, score in child.items():
                        if sid not in table or weight * score > table[sid]:
                            table[sid] = weight * score
        trace[path] = table
        return table

    root_table = node_table(tree, root_weight, "0")
    if not root_table:
        raise NoFeasibleServiceError(task=task, node="0")
    ranked = tuple(sorted(root_table.items(), key=lambda kv: (-kv[1], kv[0])))
    return SelectionReport(task=task, ranked=ranked, best=ranked[0][0], trace=trace)
