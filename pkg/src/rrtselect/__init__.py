"""QoS- and offer-aware service selection over weighted AND-OR requirement trees."""

__version__ = "0.1.0"

from .offers import (  # noqa: E402
    InvalidOfferError,
    Offer,
    OfferKind,
    offer_from_json,
    offer_to_json,
    profit,
    validate_offer,
)
from .qos import (  # noqa: E402
    Direction,
    QosProperty,
    ServiceDescriptor,
    builtin_properties,
    descriptor_from_json,
    descriptor_to_json,
    qos_value,
    resolve_property,
    validate_descriptor,
)
from .rrt import (  # noqa: E402
    OfferRequirement,
    QualityRequirement,
    RrtEdge,
    RrtInternal,
    RrtLeaf,
    RrtNode,
    RrtOp,
    RrtSyntaxError,
    UnknownKindError,
    leaves,
    parse_rrt,
    serialize_rrt,
    validate_rrt,
)
from .engine import (  # noqa: E402
    EmptyLeafError,
    NoFeasibleServiceError,
    SelectionReport,
    combine_and,
    combine_or,
    eligible_candidates,
    evaluate,
    rank_leaf,
    report_to_json,
    scale_leaf,
)
from .oracle import reference_evaluate  # noqa: E402
from .registry import (  # noqa: E402
    Catalog,
    CatalogSchemaError,
    DuplicateIdError,
    ValidationFailedError,
    find_by_keyword,
    load_catalog,
    register_service,
    save_catalog,
)
from .scenario import ScenarioSpec, generate  # noqa: E402
