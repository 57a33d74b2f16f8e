from __future__ import annotations

import json
from pathlib import Path

import pytest

from rrtselect import Offer, OfferKind, ServiceDescriptor, parse_rrt

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture()
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture()
def canonical_tree():
    """AND over (DO 0.4 | SO 0.6) and (reputation 0.7 | LCO 0.3), halves at the root."""
    return parse_rrt((DATA_DIR / "canonical_rrt.json").read_text())


@pytest.fixture()
def canonical_services() -> list[ServiceDescriptor]:
    keywords = frozenset({"travel"})
    return [
        ServiceDescriptor(
            "s1", "Svc One", keywords, {"price": 1000.0, "reputation": 4.5},
            (Offer(OfferKind.DO, percentage=15.0),),
        ),
        ServiceDescriptor(
            "s2", "Svc Two", keywords, {"price": 800.0, "reputation": 3.0},
            (Offer(OfferKind.SO, price=400.0), Offer(OfferKind.LCO, price=500.0, period_hours=720.0)),
        ),
        ServiceDescriptor(
            "s3", "Svc Three", keywords, {"price": 1200.0, "reputation": 4.0},
            (Offer(OfferKind.DO, percentage=5.0),),
        ),
    ]


@pytest.fixture()
def golden_report() -> bytes:
    return (DATA_DIR / "canonical_report.golden.json").read_bytes()


@pytest.fixture()
def canonical_rrt_doc() -> dict:
    return json.loads((DATA_DIR / "canonical_rrt.json").read_text())
