"""Service-offer model: the seven offer kinds and their profit scores.

An offer is a provider incentive attached to a service (cash back, a
percentage discount, a gift article, a free service, a lucky coupon, or
the conditional variants of the service/discount offers). Each kind
carries its own parameter set; ``profit`` turns an offer plus the
service's payable price into a single non-negative score used by the
selection engine to compare offers of the same kind across candidates.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass


class OfferKind(enum.Enum):
    """The seven advertised offer kinds."""

    CO = "CO"    # cash offer
    DO = "DO"    # discount offer (percentage)
    AO = "AO"    # article offer (gift item)
    SO = "SO"    # service-offer (free service)
    LCO = "LCO"  # lucky coupon offer
    CSO = "CSO"  # conditional service-offer
    CDO = "CDO"  # conditional discount offer


@dataclass(frozen=True)
class Offer:
    """One advertised offer. Only the fields applicable to ``kind`` may be set.

    Field meaning depends on the kind: ``price`` is the cash amount (CO),
    item value (AO), free-service value (SO), coupon value (LCO) or gift
    value (CSO, optional); ``percentage`` is the discount (DO, CDO);
    ``period_hours`` is the coupon validity window (LCO, metadata only);
    ``frequency`` is the required number of paid executions (CSO, CDO);
    ``quantity`` is the number of gift items (AO, defaults to 1).
    """

    kind: OfferKind
    price: float | None = None
    percentage: float | None = None
    period_hours: float | None = None
    frequency: int | None = None
    quantity: int | None = None


class InvalidOfferError(ValueError):
    """Raised when ``profit`` is asked to score an offer that fails validation."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = violations


# Per-kind field applicability. Required fields must be present, optional
# ones may be; any other field present is a violation.
_REQUIRED: dict[OfferKind, frozenset[str]] = {
    OfferKind.CO: frozenset({"price"}),
    OfferKind.DO: frozenset({"percentage"}),
    OfferKind.AO: frozenset({"price"}),
    OfferKind.SO: frozenset({"price"}),
    OfferKind.LCO: frozenset({"price", "period_hours"}),
    OfferKind.CSO: frozenset({"frequency"}),
    OfferKind.CDO: frozenset({"frequency", "percentage"}),
}

_OPTIONAL: dict[OfferKind, frozenset[str]] = {
    OfferKind.AO: frozenset({"quantity"}),
    OfferKind.CSO: frozenset({"price"}),
}

_PARAM_FIELDS = ("price", "percentage", "period_hours", "frequency", "quantity")


def validate_offer(offer: Offer) -> list[str]:
    """Check an offer against the per-kind parameter rules.

    Returns a list of violation messages, one per broken rule; an empty
    list means the offer is valid. Violations are data, not exceptions.
    """
    violations: list[str] = []
    if not isinstance(offer.kind, OfferKind):
        return [f"unknown offer kind: {offer.kind!r}"]

    required = _REQUIRED[offer.kind]
    optional = _OPTIONAL.get(offer.kind, frozenset())
    for field in _PARAM_FIELDS:
        value = getattr(offer, field)
        if value is None:
            if field in required:
                violations.append(f"{field} is required for {offer.kind.value}")
            continue
        if field not in required and field not in optional:
            violations.append(f"{field} does not apply to {offer.kind.value}")
            continue
        violations.extend(_check_range(field, value))
    return violations


def _check_range(field: str, value) -> list[str]:
    if field == "price":
        if not _is_finite_number(value) or value <= 0:
            return ["price must be > 0"]
    elif field == "percentage":
        if not _is_finite_number(value) or not 0 < value <= 100:
            return ["percentage must be in (0, 100]"]
    elif field == "period_hours":
        if not _is_finite_number(value) or value <= 0:
            return ["period_hours must be > 0"]
    elif field == "frequency":
        if not _is_int(value) or value <= 1:
            return ["frequency must be > 1"]
    elif field == "quantity":
        if not _is_int(value) or value < 1:
            return ["quantity must be >= 1"]
    return []


def _is_finite_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def profit(offer: Offer, offer_price: float) -> float:
    """Score an offer against the service's payable price.

    ``offer_price`` is the price the requester pays for the service that
    advertises the offer. Each kind has its own rule:

    * CO, SO, LCO: cash/service/coupon value divided by the payable price.
    * DO: percentage of the payable price, as a currency amount.
    * AO: payable price divided by the total gift value (quantity x item value).
    * CSO: gift-service value divided by (frequency x payable price); the
      gift value defaults to the payable price itself (one free execution
      of the same service), giving 1/frequency.
    * CDO: the DO amount spread over the required frequency.

    Scores of different kinds are not on a common scale; the selection
    engine only ever compares profits of one kind across candidates.
    """
    violations = validate_offer(offer)
    if not _is_finite_number(offer_price) or offer_price <= 0:
        violations.append("offer_price must be > 0")
    if violations:
        raise InvalidOfferError(violations)
    return _raw_profit(offer, offer_price)


def _raw_profit(offer: Offer, offer_price: float) -> float:
    """Profit formula dispatch without validation; inputs must be valid."""
    kind = offer.kind
    if kind in (OfferKind.CO, OfferKind.SO, OfferKind.LCO):
        return offer.price / offer_price
    if kind is OfferKind.DO:
        return offer.percentage * offer_price / 100.0
    if kind is OfferKind.AO:
        quantity = 1 if offer.quantity is None else offer.quantity
        return offer_price / (quantity * offer.price)
    if kind is OfferKind.CSO:
        gift_value = offer_price if offer.price is None else offer.price
        return gift_value / (offer.frequency * offer_price)
    # CDO
    return offer.percentage * offer_price / (offer.frequency * 100.0)


def offer_from_json(data: object) -> Offer:
    """Build an Offer from its JSON object form; unknown fields are rejected.

    Raises ValueError on structural problems (wrong types, unknown kind or
    field names). Range rules are left to ``validate_offer``.
    """
    if not isinstance(data, dict):
        raise ValueError("offer must be a JSON object")
    known = {"kind", "price", "percentage", "period_hours", "frequency", "quantity"}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ValueError(f"unknown offer field: {unknown[0]}")
    if "kind" not in data:
        raise ValueError("offer kind is missing")
    try:
        kind = OfferKind(data["kind"])
    except ValueError:
        raise ValueError(f"unknown offer kind: {data['kind']!r}") from None

    def number(field: str) -> float | None:
        value = data.get(field)
        if value is None:
            return None
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ValueError(f"offer field {field} must be a number")
        return float(value)

    def integer(field: str) -> int | None:
        value = data.get(field)
        if value is None:
            return None
        if not isinstance(value, int) or isinstance(value, bool):
            raise ValueError(f"offer field {field} must be an integer")
        return value

    return Offer(
        kind=kind,
        price=number("price"),
        percentage=number("percentage"),
        period_hours=number("period_hours"),
        frequency=integer("frequency"),
        quantity=integer("quantity"),
    )


def offer_to_json(offer: Offer) -> dict:
    """JSON object form of an offer; absent fields are omitted."""
    doc: dict = {"kind": offer.kind.value}
    if offer.price is not None:
        doc["price"] = offer.price
    if offer.percentage is not None:
        doc["percentage"] = offer.percentage
    if offer.period_hours is not None:
        doc["period_hours"] = offer.period_hours
    if offer.frequency is not None:
        doc["frequency"] = offer.frequency
    if offer.quantity is not None:
        doc["quantity"] = offer.quantity
    return doc
