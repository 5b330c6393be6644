"""Reference retrieval by direct scan; ground truth for the index."""

from __future__ import annotations

from typing import Iterable

from mlix.model import Service


def brute_force_retrieve(services: Iterable[Service], request: Iterable[int]) -> set[int]:
    """Ids of every service whose inputs are all in ``request``."""
    available = frozenset(request)
    return {s.service_id for s in services if available.issuperset(s.inputs)}
