"""File-backed service catalog: load, save, register, keyword lookup.

Catalogs are single JSON documents, written deterministically (services
sorted by id) so that golden-file comparisons and repeated saves are
byte-stable. Catalog values behave as immutable snapshots: registering
a service returns a new catalog and never mutates the original.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .qos import ServiceDescriptor, descriptor_from_json, descriptor_to_json, validate_descriptor

CATALOG_VERSION = 1


class CatalogSchemaError(ValueError):
    """Catalog document violates the schema; names the first offending entry."""


class DuplicateIdError(ValueError):
    """A service id appears more than once."""


class ValidationFailedError(ValueError):
    """A descriptor failed validation; carries the violation list."""

    def __init__(self, service_id: str, violations: list[str]):
        super().__init__(f"service {service_id!r}: " + "; ".join(violations))
        self.service_id = service_id
        self.violations = violations


@dataclass
class Catalog:
    services: dict[str, ServiceDescriptor] = field(default_factory=dict)
    source_path: Path | None = None
    dirty: bool = False


def load_catalog(path: str | Path) -> Catalog:
    """Read and validate a catalog document from disk."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CatalogSchemaError(f"invalid JSON: {exc}") from None
    services = parse_catalog_document(data)
    return Catalog(services=services, source_path=path, dirty=False)


def parse_catalog_document(data: object) -> dict[str, ServiceDescriptor]:
    """Parse and validate the catalog JSON object into an id -> descriptor map."""
    if not isinstance(data, dict):
        raise CatalogSchemaError("catalog must be a JSON object")
    unknown = sorted(set(data) - {"version", "services"})
    if unknown:
        raise CatalogSchemaError(f"unknown catalog field: {unknown[0]}")
    if data.get("version") != CATALOG_VERSION:
        raise CatalogSchemaError(f"unsupported catalog version: {data.get('version')!r}")
    entries = data.get("services")
    if not isinstance(entries, list):
        raise CatalogSchemaError("catalog requires a services list")

    services: dict[str, ServiceDescriptor] = {}
    for entry in entries:
        entry_id = entry.get("id", "<missing id>") if isinstance(entry, dict) else "<not an object>"
        try:
            descriptor = descriptor_from_json(entry)
        except ValueError as exc:
            raise CatalogSchemaError(f"service {entry_id!r}: {exc}") from None
        violations = validate_descriptor(descriptor)
        if violations:
            raise CatalogSchemaError(f"service {descriptor.id!r}: {violations[0]}")
        if descriptor.id in services:
            raise DuplicateIdError(f"duplicate service id: {descriptor.id!r}")
        services[descriptor.id] = descriptor
    return services


def catalog_to_json(catalog: Catalog) -> str:
    """Deterministic document form: services sorted by id, two-space indent."""
    doc = {
        "version": CATALOG_VERSION,
        "services": [descriptor_to_json(catalog.services[sid]) for sid in sorted(catalog.services)],
    }
    return json.dumps(doc, indent=2) + "\n"


def save_catalog(catalog: Catalog, path: str | Path) -> None:
    """Write the catalog to disk deterministically and mark it clean.

    The write is atomic (temp file + rename) so a failure never leaves a
    partially written catalog behind.
    """
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(catalog_to_json(catalog), encoding="utf-8")
    os.replace(tmp, path)
    catalog.source_path = path
    catalog.dirty = False


def register_service(catalog: Catalog, descriptor: ServiceDescriptor) -> Catalog:
    """Insert a validated descriptor, returning a new dirty catalog snapshot."""
    violations = validate_descriptor(descriptor)
    if violations:
        raise ValidationFailedError(descriptor.id, violations)
    if descriptor.id in catalog.services:
        raise DuplicateIdError(f"duplicate service id: {descriptor.id!r}")
    services = dict(catalog.services)
    services[descriptor.id] = descriptor
    return Catalog(services=services, source_path=catalog.source_path, dirty=True)


def find_by_keyword(catalog: Catalog, keyword: str) -> list[ServiceDescriptor]:
    """Services whose task keywords contain the keyword (case-insensitive), by id."""
    needle = keyword.casefold()
    matches = [d for d in catalog.services.values() if needle in d.task_keywords]
    return sorted(matches, key=lambda d: d.id)
