"""Service addition and retrieval over all three deployments.

Additions follow three routes: a single key lookup for the primary index, a
scan of every input parameter's key class for partial/full indices, and a
lookup of only the designated key's class when the designated strategy is in
use. Every call returns a report counting the parameter comparisons it made.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from mlix.compare import equal_sets, indexed_subset, positions
from mlix.keys import KeySelector, Strategy
from mlix.model import (
    Deployment,
    DuplicateServiceError,
    IndexModel,
    InputSimilarClass,
    KeyClass,
    Service,
    SimilarClass,
)


@dataclass
class AdditionReport:
    key: int = -1
    route: str = ""
    parameter_comparisons: int = 0
    key_directory_comparisons: int = 0
    classes_scanned: int = 0
    created_key: bool = False
    created_input_similar: bool = False
    created_similar: bool = False


@dataclass
class TraversalReport:
    traversed_services: int = 0
    traversed_classes: int = 0
    parameter_comparisons: int = 0
    results: int = 0


def _check_fresh(index: IndexModel, service: Service) -> None:
    if service.service_id in index.services:
        raise DuplicateServiceError(f"service id {service.service_id} already indexed")


def _require(index: IndexModel, *allowed: Deployment) -> None:
    if index.deployment not in allowed:
        raise ValueError(f"operation not valid for a {index.deployment.value} index")


def add_service_primary(index: IndexModel, service: Service, selector: KeySelector) -> AdditionReport:
    _require(index, Deployment.PRIMARY)
    _check_fresh(index, service)
    key, chose = selector.choose(service.inputs, index)
    kc, cost, created = index.directory.get_or_create(key)
    kc.members.append(service.service_id)
    index.services[service.service_id] = service
    return AdditionReport(
        key=key,
        route="primary",
        parameter_comparisons=chose + cost,
        key_directory_comparisons=chose + cost,
        created_key=created,
    )


def _place(index: IndexModel, isc: InputSimilarClass, service: Service, report: AdditionReport) -> None:
    """Put ``service`` into ``isc``, locating or creating its similar class in a
    full index."""
    sid = service.service_id
    isc.service_count += 1
    index.services[sid] = service
    if index.deployment is not Deployment.FULL:
        isc.members.append(sid)
        return
    for sc in isc.members:
        report.classes_scanned += 1
        same, cost = equal_sets(service.outputs, sc.output_set)
        report.parameter_comparisons += cost
        if same:
            sc.members.append(sid)
            return
    isc.members.append(SimilarClass(isc.input_set, service.outputs, [sid]))
    index.similar_count += 1
    report.created_similar = True


def _scan_key_class(kc: KeyClass, inputs: Sequence[int], report: AdditionReport) -> InputSimilarClass | None:
    for isc in kc.members:
        report.classes_scanned += 1
        same, cost = equal_sets(inputs, isc.input_set)
        report.parameter_comparisons += cost
        if same:
            return isc
    return None


def _new_input_similar(index: IndexModel, kc: KeyClass, service: Service, report: AdditionReport) -> None:
    isc = InputSimilarClass(service.inputs)
    kc.members.append(isc)
    index.input_similar_count += 1
    report.created_input_similar = True
    _place(index, isc, service, report)


def add_service_scan(index: IndexModel, service: Service, selector: KeySelector) -> AdditionReport:
    """Scan the key class of every input parameter for an input-similar class
    with the same input set; fall back to the selector for a new class."""
    _require(index, Deployment.PARTIAL, Deployment.FULL)
    _check_fresh(index, service)
    report = AdditionReport(route="scan")
    inputs = service.inputs
    for p in inputs:
        kc, cost = index.directory.find(p)
        report.key_directory_comparisons += cost
        report.parameter_comparisons += cost
        if kc is None:
            continue
        isc = _scan_key_class(kc, inputs, report)
        if isc is not None:
            report.key = p
            _place(index, isc, service, report)
            return report
    key, chose = selector.choose(inputs, index)
    kc, cost, created = index.directory.get_or_create(key)
    report.key_directory_comparisons += chose + cost
    report.parameter_comparisons += chose + cost
    report.key = key
    report.created_key = created
    _new_input_similar(index, kc, service, report)
    return report


def add_service_designated(index: IndexModel, service: Service) -> AdditionReport:
    """Examine only the designated key's class for a matching input set."""
    _require(index, Deployment.PARTIAL, Deployment.FULL)
    _check_fresh(index, service)
    inputs = service.inputs
    key = inputs[sum(inputs) % len(inputs)]
    kc, cost, created = index.directory.get_or_create(key)
    report = AdditionReport(
        key=key,
        route="designated",
        parameter_comparisons=cost,
        key_directory_comparisons=cost,
        created_key=created,
    )
    isc = _scan_key_class(kc, inputs, report)
    if isc is not None:
        _place(index, isc, service, report)
    else:
        _new_input_similar(index, kc, service, report)
    return report


def add_service(index: IndexModel, service: Service, selector: KeySelector) -> AdditionReport:
    if index.deployment is Deployment.PRIMARY:
        return add_service_primary(index, service, selector)
    if selector.strategy is Strategy.DESIGNATED:
        return add_service_designated(index, service)
    return add_service_scan(index, service, selector)


def retrieve(index: IndexModel, request: Sequence[int]) -> tuple[set[int], TraversalReport]:
    """All indexed services whose input set is contained in ``request``.

    Only key classes whose key occurs in the request are examined. Each
    service sits under exactly one key drawn from its own inputs, so nothing
    is reached twice.
    """
    request = sorted(set(request))
    pos = positions(request)
    report = TraversalReport()
    found: list[int] = []
    directory = index.directory
    primary = index.deployment is Deployment.PRIMARY
    services = index.services
    for p in request:
        kc = directory.get(p)
        if kc is None:
            continue
        if primary:
            report.traversed_services += len(kc.members)
            for sid in kc.members:
                ok, cost = indexed_subset(services[sid].inputs, request, pos)
                report.parameter_comparisons += cost
                if ok:
                    found.append(sid)
            continue
        report.traversed_classes += len(kc.members)
        for isc in kc.members:
            report.traversed_services += isc.service_count
            ok, cost = indexed_subset(isc.input_set, request, pos)
            report.parameter_comparisons += cost
            if ok:
                found.extend(isc.service_ids())
    ids = set(found)
    assert len(ids) == len(found), "service emitted twice"
    report.results = len(ids)
    return ids, report
