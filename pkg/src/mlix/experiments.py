"""Index builds and retrieval runs with aggregated instrumentation."""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from mlix.datagen import Dataset
from mlix.keys import KeySelector, Strategy
from mlix.model import Deployment, IndexModel, IndexStats, new_index
from mlix.ops import TraversalReport, add_service, retrieve
from mlix.oracle import brute_force_retrieve


@dataclass
class BuildResult:
    index: IndexModel
    wall_ns: int
    parameter_comparisons: int = 0
    key_directory_comparisons: int = 0
    classes_scanned: int = 0

    @property
    def stats(self) -> IndexStats:
        return self.index.stats


def build(
    dataset: Dataset,
    deployment: Deployment | str,
    method: Strategy | str,
    seed: int = 0,
    route: Callable | None = None,
) -> BuildResult:
    """Add every service of ``dataset`` in file order and total the reports.

    ``route`` overrides the addition function, e.g. to force the scanning
    algorithm under designated keys.
    """
    index = new_index(deployment, dataset.parameters)
    selector = KeySelector(method, seed)
    add = route or add_service
    pc = kdc = scanned = 0
    t0 = time.perf_counter_ns()
    for service in dataset.services:
        rep = add(index, service, selector)
        pc += rep.parameter_comparisons
        kdc += rep.key_directory_comparisons
        scanned += rep.classes_scanned
    wall = time.perf_counter_ns() - t0
    return BuildResult(index, wall, pc, kdc, scanned)


@dataclass
class RetrievalRun:
    reports: list[TraversalReport] = field(default_factory=list)
    results: list[set[int]] = field(default_factory=list)
    wall_ns: int = 0

    def column(self, name: str) -> list[int]:
        return [getattr(r, name) for r in self.reports]

    def mean(self, name: str) -> float:
        col = self.column(name)
        return statistics.fmean(col) if col else 0.0

    def std(self, name: str) -> float:
        col = self.column(name)
        return statistics.pstdev(col) if col else 0.0


def run_requests(index: IndexModel, requests: Sequence[Sequence[int]]) -> RetrievalRun:
    run = RetrievalRun()
    t0 = time.perf_counter_ns()
    for req in requests:
        ids, rep = retrieve(index, req)
        run.results.append(ids)
        run.reports.append(rep)
    run.wall_ns = time.perf_counter_ns() - t0
    return run


@dataclass
class Mismatch:
    request_index: int
    request: tuple[int, ...]
    missing: set[int]
    extra: set[int]


def verify(index: IndexModel, dataset: Dataset) -> list[Mismatch]:
    """Compare index retrieval with the brute-force oracle on every request."""
    out = []
    for i, req in enumerate(dataset.requests):
        got, _ = retrieve(index, req)
        want = brute_force_retrieve(dataset.services, req)
        if got != want:
            out.append(Mismatch(i, tuple(req), want - got, got - want))
    return out


def mean_sizes(dataset: Dataset) -> tuple[float, float, float]:
    """Mean inputs per service, outputs per service and request size."""
    svc = dataset.services
    n = statistics.fmean(len(s.inputs) for s in svc) if svc else 0.0
    m = statistics.fmean(len(s.outputs) for s in svc) if svc else 0.0
    r = statistics.fmean(len(q) for q in dataset.requests) if dataset.requests else 0.0
    return n, m, r


def median_ns(samples: Sequence[int]) -> int:
    return int(statistics.median(samples)) if samples else 0
