"""In-memory multilevel index for service repositories.

Services are indexed under one key parameter each, optionally clustered into
input-similar and similar classes, and retrieved by set containment of their
input parameters in a request.
"""

from mlix.model import (
    Deployment,
    IndexModel,
    IndexStats,
    ParameterTable,
    Service,
    new_index,
    stats,
)
from mlix.keys import KeySelector, Strategy, select_designated
from mlix.ops import AdditionReport, TraversalReport, add_service, retrieve
from mlix.oracle import brute_force_retrieve

__all__ = [
    "AdditionReport",
    "Deployment",
    "IndexModel",
    "IndexStats",
    "KeySelector",
    "ParameterTable",
    "Service",
    "Strategy",
    "TraversalReport",
    "add_service",
    "brute_force_retrieve",
    "new_index",
    "retrieve",
    "select_designated",
    "stats",
]
