"""QoS properties and candidate service descriptors.

A QoS property carries an optimization direction (is a lower or a higher
value better) so that leaf requirements never need to restate it. The
built-in registry covers the five properties the engine knows about;
``price`` is mandatory on every service because it doubles as the
payable amount in offer profit scoring.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .offers import Offer, offer_from_json, offer_to_json, validate_offer


class Direction(enum.Enum):
    LOWER_BETTER = "lower_better"
    HIGHER_BETTER = "higher_better"


@dataclass(frozen=True)
class QosProperty:
    """A registered quality dimension with its optimization direction."""

    name: str
    direction: Direction
    units: str
    aliases: tuple[str, ...] = ()


_BUILTIN = (
    QosProperty("price", Direction.LOWER_BETTER, "currency"),
    QosProperty("response_time", Direction.LOWER_BETTER, "ms"),
    QosProperty("reputation", Direction.HIGHER_BETTER, "score 0-5", aliases=("popularity", "po")),
    QosProperty("reliability", Direction.HIGHER_BETTER, "ratio 0-1"),
    QosProperty("availability", Direction.HIGHER_BETTER, "ratio 0-1"),
)


def builtin_properties() -> list[QosProperty]:
    """The default property registry, in stable order (price first)."""
    return list(_BUILTIN)


def property_index(properties: Iterable[QosProperty] | None = None) -> dict[str, QosProperty]:
    """Lookup table from every property name and alias (casefolded) to its property."""
    index: dict[str, QosProperty] = {}
    for prop in _BUILTIN if properties is None else properties:
        index[prop.name.casefold()] = prop
        for alias in prop.aliases:
            index[alias.casefold()] = prop
    return index


def resolve_property(name: str, properties: Iterable[QosProperty] | None = None) -> QosProperty | None:
    """Resolve a property name or alias to its registered property, if any."""
    if not isinstance(name, str):
        return None
    return property_index(properties).get(name.casefold())


@dataclass(frozen=True)
class ServiceDescriptor:
    """A candidate service: identity, task keywords, QoS values, offers."""

    id: str
    name: str
    task_keywords: frozenset[str]
    qos: Mapping[str, float]
    offers: tuple[Offer, ...] = ()


def validate_descriptor(
    descriptor: ServiceDescriptor,
    properties: Iterable[QosProperty] | None = None,
) -> list[str]:
    """Check a descriptor against the catalog invariants.

    Empty result means valid. Checks: non-empty id and keywords, a
    positive mandatory ``price``, every QoS key registered (aliases
    allowed, duplicates via alias rejected), finite values, and every
    offer individually valid.
    """
    index = property_index(properties)
    violations: list[str] = []
    if not descriptor.id:
        violations.append("id must be non-empty")
    if not descriptor.task_keywords:
        violations.append("task_keywords must be non-empty")

    seen: dict[str, str] = {}
    for key, value in descriptor.qos.items():
        prop = index.get(key.casefold()) if isinstance(key, str) else None
        if prop is None:
            violations.append(f"unknown QoS property: {key}")
            continue
        if prop.name in seen:
            violations.append(f"duplicate QoS property: {key} and {seen[prop.name]} both map to {prop.name}")
            continue
        seen[prop.name] = key
        if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
            violations.append(f"QoS value for {key} must be a finite number")

    price = qos_value(descriptor, "price", properties)
    if price is None:
        violations.append("price is mandatory")
    elif not math.isfinite(price) or price <= 0:
        violations.append("price must be > 0")

    for i, offer in enumerate(descriptor.offers):
        for violation in validate_offer(offer):
            violations.append(f"offers[{i}]: {violation}")
    return violations


def qos_value(
    descriptor: ServiceDescriptor,
    name: str,
    properties: Iterable[QosProperty] | None = None,
) -> float | None:
    """Stored value for a property (aliases resolve), or None when unset.

    Absence is meaningful: the selection engine excludes a service from a
    quality leaf when the property is not declared.
    """
    index = property_index(properties)
    target = index.get(name.casefold()) if isinstance(name, str) else None
    if target is None:
        return None
    for key, value in descriptor.qos.items():
        if isinstance(key, str) and index.get(key.casefold()) is target:
            return float(value)
    return None


def descriptor_from_json(data: object) -> ServiceDescriptor:
    """Build a ServiceDescriptor from its JSON form; unknown fields rejected."""
    if not isinstance(data, dict):
        raise ValueError("service descriptor must be a JSON object")
    known = {"id", "name", "task_keywords", "qos", "offers"}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ValueError(f"unknown descriptor field: {unknown[0]}")
    for required in ("id", "name", "task_keywords", "qos"):
        if required not in data:
            raise ValueError(f"descriptor field {required} is missing")
    if not isinstance(data["id"], str) or not isinstance(data["name"], str):
        raise ValueError("descriptor id and name must be strings")
    keywords = data["task_keywords"]
    if not isinstance(keywords, list) or not all(isinstance(k, str) for k in keywords):
        raise ValueError("task_keywords must be a list of strings")
    qos = data["qos"]
    if not isinstance(qos, dict):
        raise ValueError("qos must be an object of property values")
    for key, value in qos.items():
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ValueError(f"QoS value for {key} must be a number")
    offers_data = data.get("offers", [])
    if not isinstance(offers_data, list):
        raise ValueError("offers must be a list")
    offers = tuple(offer_from_json(o) for o in offers_data)
    return ServiceDescriptor(
        id=data["id"],
        name=data["name"],
        task_keywords=frozenset(k.casefold() for k in keywords),
        qos={k: float(v) for k, v in qos.items()},
        offers=offers,
    )


def descriptor_to_json(descriptor: ServiceDescriptor) -> dict:
    """JSON form of a descriptor (keywords and QoS keys sorted for determinism)."""
    return {
        "id": descriptor.id,
        "name": descriptor.name,
        "task_keywords": sorted(descriptor.task_keywords),
        "qos": {k: descriptor.qos[k] for k in sorted(descriptor.qos)},
        "offers": [offer_to_json(o) for o in descriptor.offers],
    }
