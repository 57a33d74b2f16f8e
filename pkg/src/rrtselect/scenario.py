"""Deterministic synthetic travel-marketplace catalogs for tests and benchmarks.

Catalogs cover five booking tasks with a configurable number of
candidates per task. Randomness comes from a self-contained SplitMix64
generator so the same seed yields byte-identical catalogs on any
platform or Python version; golden files depend on this, so neither the
algorithm nor the draw order below may change.
"""

from __future__ import annotations

from dataclasses import dataclass

from .offers import Offer, OfferKind
from .qos import ServiceDescriptor
from .registry import Catalog

TASKS = (
    "flight-booking",
    "hotel-booking",
    "taxi-booking",
    "city-tour",
    "dinner-booking",
)

# Plausible per-task price bands (currency units); configuration defaults.
PRICE_RANGES: dict[str, tuple[float, float]] = {
    "flight-booking": (3000.0, 8000.0),
    "hotel-booking": (1500.0, 6000.0),
    "taxi-booking": (20.0, 80.0),
    "city-tour": (200.0, 1000.0),
    "dinner-booking": (300.0, 1500.0),
}

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """Tiny deterministic PRNG (SplitMix64); stable across platforms."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_uint64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return (z ^ (z >> 31)) & _MASK64

    def random(self) -> float:
        """Float in [0, 1) with 53 bits of precision."""
        return (self.next_uint64() >> 11) * (2.0 ** -53)

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()

    def randint(self, lo: int, hi: int) -> int:
        """Integer in [lo, hi]; modulo bias is irrelevant at these range sizes."""
        return lo + self.next_uint64() % (hi - lo + 1)


@dataclass(frozen=True)
class ScenarioSpec:
    seed: int
    candidates_per_task: int = 5
    tasks: tuple[str, ...] = TASKS
    offer_density: float = 0.6


def generate(spec: ScenarioSpec) -> Catalog:
    """Generate a catalog of candidates_per_task services for each task.

    Every descriptor carries all five built-in QoS values; each offer
    kind is attached independently with probability offer_density / 7.
    Identical specs produce byte-identical catalogs.
    """
    if spec.candidates_per_task < 1:
        raise ValueError("candidates_per_task must be >= 1")
    if not 0.0 <= spec.offer_density <= 1.0:
        raise ValueError("offer_density must be in [0, 1]")

    rng = SplitMix64(spec.seed)
    per_kind_probability = spec.offer_density / 7.0
    services: dict[str, ServiceDescriptor] = {}
    counter = 0
    for task in spec.tasks:
        lo, hi = PRICE_RANGES.get(task, (100.0, 1000.0))
        for i in range(1, spec.candidates_per_task + 1):
            counter += 1
            # Draw order is part of the determinism contract.
            qos = {
                "price": round(rng.uniform(lo, hi), 2),
                "response_time": round(rng.uniform(50.0, 2000.0), 1),
                "reputation": round(rng.uniform(1.0, 5.0), 2),
                "reliability": round(rng.uniform(0.8, 1.0), 3),
                "availability": round(rng.uniform(0.8, 1.0), 3),
            }
            offers = []
            for kind in OfferKind:
                if rng.random() < per_kind_probability:
                    offers.append(_draw_offer(kind, rng))
            descriptor = ServiceDescriptor(
                id=f"svc-{counter:03d}",
                name=f"{task.replace('-', ' ').title()} Provider {i}",
                task_keywords=frozenset({task}),
                qos=qos,
                offers=tuple(offers),
            )
            services[descriptor.id] = descriptor
    return Catalog(services=services, source_path=None, dirty=True)


def _draw_offer(kind: OfferKind, rng: SplitMix64) -> Offer:
    if kind is OfferKind.CO:
        return Offer(kind, price=round(rng.uniform(50.0, 500.0), 2))
    if kind is OfferKind.DO:
        return Offer(kind, percentage=round(rng.uniform(5.0, 50.0), 1))
    if kind is OfferKind.AO:
        return Offer(
            kind,
            price=round(rng.uniform(20.0, 400.0), 2),
            quantity=rng.randint(1, 5),
        )
    if kind is OfferKind.SO:
        return Offer(kind, price=round(rng.uniform(50.0, 800.0), 2))
    if kind is OfferKind.LCO:
        return Offer(
            kind,
            price=round(rng.uniform(100.0, 1000.0), 2),
            period_hours=float(rng.randint(24, 2160)),
        )
    if kind is OfferKind.CSO:
        with_gift_value = rng.random() < 0.5
        gift = round(rng.uniform(100.0, 800.0), 2) if with_gift_value else None
        return Offer(kind, frequency=rng.randint(2, 6), price=gift)
    return Offer(
        kind,
        frequency=rng.randint(2, 6),
        percentage=round(rng.uniform(5.0, 30.0), 1),
    )
