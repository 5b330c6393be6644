"""Seeded synthetic datasets and their text file format.

File format (UTF-8, one record per line)::

    #mlix-dataset v1 P=<|P|> S=<|S|> n=<n> m=<m> r=<r> seed=<seed>
    S <id>|<input ids ascending>|<output ids ascending>
    R <request ids ascending>

Ids are space-separated. Parameters are named ``p0 .. p{P-1}``.
"""

from __future__ import annotations

import io
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable

import numpy as np

from mlix.model import ParameterTable, Service

MAGIC = "#mlix-dataset v1"
_HEADER = re.compile(
    r"^#mlix-dataset v1 P=(\d+) S=(\d+) n=(\d+) m=(\d+) r=(\d+) seed=(\d+)$"
)
_CHUNK = 2048


class DatasetFormatError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class DatasetSpec:
    parameter_count: int
    service_count: int
    inputs_per_service: int
    outputs_per_service: int
    request_count: int
    request_size: int
    seed: int = 0

    def validate(self) -> None:
        P = self.parameter_count
        checks = [
            (P > 0, "parameter_count must be positive"),
            (self.service_count >= 0, "service_count must be non-negative"),
            (self.request_count >= 0, "request_count must be non-negative"),
            (0 < self.inputs_per_service <= P, "need 0 < n <= |P|"),
            (0 <= self.outputs_per_service <= P, "need 0 <= m <= |P|"),
            (0 <= self.request_size <= P, "need 0 <= r <= |P|"),
            (0 <= self.seed < 2**64, "seed must fit in an unsigned 64-bit integer"),
        ]
        for ok, msg in checks:
            if not ok:
                raise ValueError(msg)


@dataclass
class Dataset:
    spec: DatasetSpec
    parameters: ParameterTable
    services: list[Service] = field(default_factory=list)
    requests: list[tuple[int, ...]] = field(default_factory=list)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.spec == other.spec
            and self.parameters == other.parameters
            and [(s.service_id, s.inputs, s.outputs) for s in self.services]
            == [(s.service_id, s.inputs, s.outputs) for s in other.services]
            and self.requests == other.requests
        )


def _sample_rows(rng: np.random.Generator, rows: int, population: int, k: int) -> list[tuple[int, ...]]:
    """``rows`` independent uniform k-subsets of ``range(population)``, each
    sorted ascending."""
    out: list[tuple[int, ...]] = []
    if k == 0:
        return [()] * rows
    done = 0
    while done < rows:
        batch = min(_CHUNK, rows - done)
        # the k smallest of i.i.d. uniform scores form a uniform k-subset
        scores = rng.random((batch, population))
        if k < population:
            picked = np.argpartition(scores, k - 1, axis=1)[:, :k]
        else:
            picked = np.tile(np.arange(population), (batch, 1))
        picked.sort(axis=1)
        out.extend(tuple(row) for row in picked.tolist())
        done += batch
    return out


def generate(spec: DatasetSpec) -> Dataset:
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    P, S = spec.parameter_count, spec.service_count
    inputs = _sample_rows(rng, S, P, spec.inputs_per_service)
    outputs = _sample_rows(rng, S, P, spec.outputs_per_service)
    requests = _sample_rows(rng, spec.request_count, P, spec.request_size)
    services = [Service(i, ins, outs) for i, (ins, outs) in enumerate(zip(inputs, outputs))]
    return Dataset(spec, ParameterTable.numbered(P), services, requests)


def _ids(ids: Iterable[int]) -> str:
    return " ".join(map(str, ids))


def dump(dataset: Dataset, fh: IO[str]) -> None:
    sp = dataset.spec
    fh.write(
        f"{MAGIC} P={sp.parameter_count} S={sp.service_count} n={sp.inputs_per_service} "
        f"m={sp.outputs_per_service} r={sp.request_size} seed={sp.seed}\n"
    )
    for s in dataset.services:
        fh.write(f"S {s.service_id}|{_ids(s.inputs)}|{_ids(s.outputs)}\n")
    for req in dataset.requests:
        fh.write(f"R {_ids(req)}\n")


def dumps(dataset: Dataset) -> str:
    buf = io.StringIO()
    dump(dataset, buf)
    return buf.getvalue()


def _parse_ids(text: str, lineno: int, P: int) -> tuple[int, ...]:
    try:
        ids = [int(tok) for tok in text.split()]
    except ValueError:
        raise DatasetFormatError(lineno, f"bad parameter id list {text!r}") from None
    for pid in ids:
        if not 0 <= pid < P:
            raise DatasetFormatError(lineno, f"parameter id {pid} outside 0..{P - 1}")
    if ids != sorted(set(ids)):
        raise DatasetFormatError(lineno, "ids must be ascending and duplicate-free")
    return tuple(ids)


def load(fh: IO[str]) -> Dataset:
    header = fh.readline().rstrip("\n")
    m = _HEADER.match(header)
    if not m:
        raise DatasetFormatError(1, f"expected '{MAGIC} P=.. S=.. n=.. m=.. r=.. seed=..' header")
    P, S, n, m_out, r, seed = (int(g) for g in m.groups())
    services: list[Service] = []
    requests: list[tuple[int, ...]] = []
    seen: set[int] = set()
    lineno = 1
    for lineno, raw in enumerate(fh, start=2):
        line = raw.rstrip("\n")
        if not line:
            continue
        tag, _, body = line.partition(" ")
        if tag == "S":
            fields = body.split("|")
            if len(fields) != 3:
                raise DatasetFormatError(lineno, "service line needs '<id>|<inputs>|<outputs>'")
            try:
                sid = int(fields[0])
            except ValueError:
                raise DatasetFormatError(lineno, f"bad service id {fields[0]!r}") from None
            if sid in seen:
                raise DatasetFormatError(lineno, f"duplicate service id {sid}")
            ins = _parse_ids(fields[1], lineno, P)
            outs = _parse_ids(fields[2], lineno, P)
            if not ins:
                raise DatasetFormatError(lineno, "service has no input parameters")
            seen.add(sid)
            services.append(Service(sid, ins, outs))
        elif tag == "R":
            requests.append(_parse_ids(body, lineno, P))
        else:
            raise DatasetFormatError(lineno, f"unknown record tag {tag!r}")
    if len(services) != S:
        raise DatasetFormatError(lineno, f"header says S={S}, found {len(services)} services")
    spec = DatasetSpec(P, S, n, m_out, len(requests), r, seed)
    return Dataset(spec, ParameterTable.numbered(P), services, requests)


def loads(text: str) -> Dataset:
    return load(io.StringIO(text))


def write_dataset(dataset: Dataset, path: str | Path) -> None:
    if str(path) == "-":
        dump(dataset, sys.stdout)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        dump(dataset, fh)


def read_dataset(path: str | Path) -> Dataset:
    if str(path) == "-":
        return load(sys.stdin)
    with open(path, encoding="utf-8") as fh:
        return load(fh)
