"""Bottom-up tree evaluation: scaling, ranking, filtering, best choice.

Evaluation walks the requirement tree from the leaves up. At each leaf
the eligible candidates' raw values (QoS value, or best offer profit of
the leaf's kind) are min-max normalized across candidates and multiplied
by the leaf's incoming edge weight. Internal nodes filter and rank:
AND keeps only services present in every child and scores them with
weight * sum of child scores; OR keeps the distinct union and scores
with weight * best child score. The root table (notional weight 1.0)
sorted by descending score gives the ranking; the first entry is the
best choice.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import __version__
from .offers import _raw_profit
from .qos import Direction, QosProperty, ServiceDescriptor, property_index
from .rrt import (
    QualityRequirement,
    RrtLeaf,
    RrtNode,
    RrtOp,
    SimpleRequirement,
)


class EmptyLeafError(ValueError):
    """scale_leaf was invoked with no values; callers must skip empty leaves."""


class NoFeasibleServiceError(Exception):
    """No service survives filtering: the root score table is empty."""

    def __init__(self, task: str, node: str = "0"):
        super().__init__(f"no feasible service for task {task!r}: node {node} has an empty score table")
        self.task = task
        self.node = node


@dataclass(frozen=True)
class SelectionReport:
    """Result of one evaluation: ranking, best choice, per-node score trace."""

    task: str
    ranked: tuple[tuple[str, float], ...]
    best: str
    trace: Mapping[str, dict[str, float]]
    engine_version: str = __version__


class ScoreTrace(Mapping):
    """Per-node score tables keyed by node path, materialized on access.

    Evaluation produces packed score arrays; turning every node's table
    into a dict up front would dominate evaluation time on large
    instances, so tables are built lazily and cached. Behaves like a
    plain dict of dicts, including equality.
    """

    def __init__(self, ids: list[str], id_arr: np.ndarray, packed: dict[str, tuple]):
        self._ids = ids
        self._id_arr = id_arr
        self._packed = packed
        self._tables: dict[str, dict[str, float]] = {}

    def __getitem__(self, path: str) -> dict[str, float]:
        table = self._tables.get(path)
        if table is None:
            mask, scores, full = self._packed[path]
            if full:
                table = dict(zip(self._ids, scores.tolist()))
            else:
                selected = np.flatnonzero(mask)
                table = dict(zip(self._id_arr[selected].tolist(), scores[selected].tolist()))
            self._tables[path] = table
        return table

    def __iter__(self):
        return iter(self._packed)

    def __len__(self) -> int:
        return len(self._packed)

    def __eq__(self, other) -> bool:
        if isinstance(other, (dict, Mapping)):
            return dict(self.items()) == dict(other.items())
        return NotImplemented

    def __repr__(self) -> str:
        return f"ScoreTrace({len(self._packed)} nodes)"


def eligible_candidates(
    requirement: SimpleRequirement,
    candidates: Sequence[ServiceDescriptor],
    properties: Iterable[QosProperty] | None = None,
) -> list[tuple[str, float]]:
    """Services matching a leaf, paired with their raw value at that leaf.

    Quality leaves pair each service with its declared property value;
    offer leaves pair each service advertising the kind with its best
    (maximum) profit over matching offers. Services lacking the property
    or offer kind are excluded, not zero-scored, so AND filtering can
    eliminate them.
    """
    index = property_index(properties)
    out: list[tuple[str, float]] = []
    if isinstance(requirement, QualityRequirement):
        target = index.get(requirement.property.casefold())
        if target is None:
            return out
        for service in candidates:
            value = _lookup(service, target, index)
            if value is not None:
                out.append((service.id, value))
        return out
    price_prop = index.get("price")
    if price_prop is None:
        return out
    wanted = requirement.offer_kind
    for service in candidates:
        best: float | None = None
        price: float | None = None
        for offer in service.offers:
            if offer.kind is not wanted:
                continue
            if price is None:
                price = _lookup(service, price_prop, index)
            value = _raw_profit(offer, price)
            if best is None or value > best:
                best = value
        if best is not None:
            out.append((service.id, best))
    return out


def _lookup(service: ServiceDescriptor, target: QosProperty, index: Mapping[str, QosProperty]) -> float | None:
    """Property value with alias resolution against a prebuilt index."""
    value = service.qos.get(target.name)
    if value is not None:
        return float(value)
    for key, stored in service.qos.items():
        if index.get(key.casefold()) is target:
            return float(stored)
    return None


def scale_leaf(
    requirement: SimpleRequirement,
    values: Sequence[tuple[str, float]],
    properties: Iterable[QosProperty] | None = None,
) -> dict[str, float]:
    """Min-max normalize raw leaf values into [0, 1].

    Lower-is-better properties are flipped so that 1.0 always means best.
    Offer profits are always higher-is-better. When all candidates tie
    (max == min) every service gets 1.0: equal candidates are not
    penalized at that criterion.
    """
    if not values:
        raise EmptyLeafError("cannot scale an empty leaf")
    lower_better = False
    if isinstance(requirement, QualityRequirement):
        prop = property_index(properties).get(requirement.property.casefold())
        lower_better = prop is not None and prop.direction is Direction.LOWER_BETTER
    raw = [v for _, v in values]
    mn, mx = min(raw), max(raw)
    if mx == mn:
        return {sid: 1.0 for sid, _ in values}
    if lower_better:
        return {sid: (mx - v) / (mx - mn) for sid, v in values}
    return {sid: (v - mn) / (mx - mn) for sid, v in values}


def rank_leaf(normalized: Mapping[str, float], edge_weight: float) -> dict[str, float]:
    """Leaf ranking: normalized value times the leaf's incoming edge weight."""
    return {sid: edge_weight * value for sid, value in normalized.items()}


def combine_and(child_tables: Sequence[Mapping[str, float]], edge_weight: float) -> dict[str, float]:
    """AND node: keep services present in every child; weight * sum of scores."""
    if len(child_tables) < 2:
        raise ValueError("combine_and requires at least 2 child tables")
    common = set(child_tables[0])
    for table in child_tables[1:]:
        common &= set(table)
    return {sid: edge_weight * sum(table[sid] for table in child_tables) for sid in common}


def combine_or(child_tables: Sequence[Mapping[str, float]], edge_weight: float) -> dict[str, float]:
    """OR node: distinct union of services; weight * best child score."""
    if len(child_tables) < 2:
        raise ValueError("combine_or requires at least 2 child tables")
    best: dict[str, float] = {}
    for table in child_tables:
        for sid, score in table.items():
            if sid not in best or score > best[sid]:
                best[sid] = score
    return {sid: edge_weight * score for sid, score in best.items()}


def evaluate(
    tree: RrtNode,
    candidates: Sequence[ServiceDescriptor],
    task: str,
    properties: Iterable[QosProperty] | None = None,
    root_weight: float = 1.0,
) -> SelectionReport:
    """Evaluate a validated tree over validated candidates for one task.

    Returns the ranked root table (descending score, ties broken by
    service id ascending) plus the full per-node trace keyed by node path
    ("0" for the root, "0.1.0" for root -> child 1 -> child 0).
    ``root_weight`` scales every root score without affecting the order.

    Raises NoFeasibleServiceError when the root table is empty.

    The recursion is vectorized over the candidate axis for speed; per
    entry it performs exactly the scale/rank/combine arithmetic of the
    public table operations, so results match the element-by-element
    definition bit for bit (scores are non-negative, so absent services
    can ride along as masked zeros).
    """
    props = None if properties is None else list(properties)
    ids = [service.id for service in candidates]
    id_arr = np.array(ids, dtype=object)
    position = {sid: i for i, sid in enumerate(ids)}
    size = len(ids)
    packed: dict[str, tuple[np.ndarray, np.ndarray, bool]] = {}
    # Leaf tables depend only on the requirement, so normalized values are
    # shared across leaves that repeat a requirement. Score arrays keep
    # zeros at ineligible positions; the mask tells them apart from true
    # zero scores, and full=True short-circuits all mask bookkeeping.
    norm_cache: dict[SimpleRequirement, tuple[np.ndarray, np.ndarray, bool]] = {}

    def leaf_arrays(requirement: SimpleRequirement) -> tuple[np.ndarray, np.ndarray, bool]:
        cached = norm_cache.get(requirement)
        if cached is None:
            mask = np.zeros(size, dtype=bool)
            norm = np.zeros(size, dtype=float)
            values = eligible_candidates(requirement, candidates, props)
            if values:
                for sid, value in scale_leaf(requirement, values, props).items():
                    i = position[sid]
                    mask[i] = True
                    norm[i] = value
            cached = (mask, norm, len(values) == size)
            norm_cache[requirement] = cached
        return cached

    def eval_node(node: RrtNode, weight: float, path: str) -> tuple[np.ndarray, np.ndarray, bool]:
        if isinstance(node, RrtLeaf):
            mask, norm, full = leaf_arrays(node.requirement)
            scores = norm * weight
        else:
            parts = [
                eval_node(edge.child, edge.weight, f"{path}.{i}")
                for i, edge in enumerate(node.children)
            ]
            mask, scores, full = parts[0]
            if node.op is RrtOp.AND:
                total = scores
                for child_mask, child_scores, child_full in parts[1:]:
                    total = total + child_scores
                    if not child_full:
                        mask = mask & child_mask
                    full = full and child_full
                scores = total * weight
            else:
                best = scores
                for child_mask, child_scores, child_full in parts[1:]:
                    best = np.maximum(best, child_scores)
                    if not full:
                        if child_full:
                            mask, full = child_mask, True
                        else:
                            mask = mask | child_mask
                scores = best * weight
            if not full:
                # Zero out entries excluded by intersection so array zeros
                # stay synonymous with "absent or scored zero".
                scores = np.where(mask, scores, 0.0)
        packed[path] = (mask, scores, full)
        return mask, scores, full

    eval_node(tree, root_weight, "0")
    trace = ScoreTrace(ids, id_arr, packed)
    root_table = trace["0"]
    if not root_table:
        raise NoFeasibleServiceError(task=task, node="0")
    ranked = tuple(sorted(root_table.items(), key=lambda kv: (-kv[1], kv[0])))
    return SelectionReport(task=task, ranked=ranked, best=ranked[0][0], trace=trace)


def report_to_json(report: SelectionReport) -> str:
    """Render a report as canonical JSON with scores at 9 decimal digits.

    The document is built by hand so that the CLI and HTTP paths emit
    byte-identical output: scores as fixed 9-decimal numbers, trace node
    paths sorted, service ids sorted within each node table.
    """
    parts = ['{"task":', json.dumps(report.task), ',"best":', json.dumps(report.best), ',"ranked":[']
    parts.append(",".join(
        f'{{"service":{json.dumps(sid)},"score":{score:.9f}}}' for sid, score in report.ranked
    ))
    parts.append('],"trace":{')
    node_parts = []
    for path in sorted(report.trace):
        table = report.trace[path]
        entries = ",".join(f"{json.dumps(sid)}:{table[sid]:.9f}" for sid in sorted(table))
        node_parts.append(f"{json.dumps(path)}:{{{entries}}}")
    parts.append(",".join(node_parts))
    parts.append('},"engine_version":')
    parts.append(json.dumps(report.engine_version))
    parts.append("}")
    return "".join(parts)
