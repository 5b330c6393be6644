"""Domain types: parameters, services, the class hierarchy and index deployments."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping


class Deployment(enum.Enum):
    """Which index levels are deployed.

    PRIMARY uses key classes only, PARTIAL adds input-similar classes and
    FULL adds similar classes beneath those.
    """

    PRIMARY = "primary"
    PARTIAL = "partial"
    FULL = "full"


class IndexModelError(ValueError):
    pass


class DuplicateServiceError(IndexModelError):
    pass


class EmptyInputsError(IndexModelError):
    pass


class ParameterTable:
    """Bijection between parameter names and dense integer ids."""

    def __init__(self, names: Iterable[str] = ()):
        self._ids: dict[str, int] = {}
        self._names: list[str] = []
        for name in names:
            self.intern(name)

    @classmethod
    def numbered(cls, count: int, prefix: str = "p") -> "ParameterTable":
        return cls(f"{prefix}{i}" for i in range(count))

    def intern(self, name: str) -> int:
        pid = self._ids.get(name)
        if pid is None:
            pid = len(self._names)
            self._ids[name] = pid
            self._names.append(name)
        return pid

    def lookup(self, name: str) -> int:
        return self._ids[name]

    def name(self, pid: int) -> str:
        return self._names[pid]

    def __len__(self) -> int:
        return len(self._names)

    def __contains__(self, name: object) -> bool:
        return name in self._ids

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ParameterTable) and self._names == other._names


def canonical(ids: Iterable[int]) -> tuple[int, ...]:
    """Ascending, duplicate-free tuple of ids."""
    return tuple(sorted(set(ids)))


@dataclass(frozen=True)
class Service:
    service_id: int
    inputs: tuple[int, ...]
    outputs: tuple[int, ...] = ()
    attributes: Mapping[str, str] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.service_id < 0:
            raise ValueError(f"service id must be non-negative, got {self.service_id}")
        # normalise to the canonical ascending order
        object.__setattr__(self, "inputs", canonical(self.inputs))
        object.__setattr__(self, "outputs", canonical(self.outputs))
        if not self.inputs:
            raise EmptyInputsError(f"service {self.service_id} has no input parameters")


@dataclass
class SimilarClass:
    """Services sharing both input set and output set."""

    input_set: tuple[int, ...]
    output_set: tuple[int, ...]
    members: list[int] = field(default_factory=list)


@dataclass
class InputSimilarClass:
    """Services (partial) or similar classes (full) sharing one input set."""

    input_set: tuple[int, ...]
    members: list = field(default_factory=list)
    service_count: int = 0

    def service_ids(self) -> Iterator[int]:
        for m in self.members:
            if isinstance(m, SimilarClass):
                yield from m.members
            else:
                yield m


@dataclass
class KeyClass:
    key: int
    members: list = field(default_factory=list)


class KeyDirectory:
    """Ordered map from key parameter to key class.

    Lookups descend a balanced binary search over the sorted keys and report
    how many keys they compared, one per node visited.
    """

    def __init__(self):
        self._keys: list[int] = []
        self._classes: dict[int, KeyClass] = {}

    def _descend(self, key: int) -> tuple[int, bool, int]:
        keys = self._keys
        lo, hi, cost = 0, len(keys), 0
        while lo < hi:
            mid = (lo + hi) // 2
            probe = keys[mid]
            cost += 1
            if probe == key:
                return mid, True, cost
            if probe < key:
                lo = mid + 1
            else:
                hi = mid
        return lo, False, cost

    def find(self, key: int) -> tuple[KeyClass | None, int]:
        _, found, cost = self._descend(key)
        return (self._classes[key] if found else None), cost

    def get_or_create(self, key: int) -> tuple[KeyClass, int, bool]:
        at, found, cost = self._descend(key)
        if found:
            return self._classes[key], cost, False
        kc = KeyClass(key)
        self._keys.insert(at, key)
        self._classes[key] = kc
        return kc, cost, True

    def get(self, key: int) -> KeyClass | None:
        """Uninstrumented lookup."""
        return self._classes.get(key)

    def __contains__(self, key: object) -> bool:
        return key in self._classes

    def __len__(self) -> int:
        return len(self._keys)

    def __iter__(self) -> Iterator[int]:
        return iter(self._keys)

    def classes(self) -> Iterator[KeyClass]:
        for k in self._keys:
            yield self._classes[k]


@dataclass(frozen=True)
class IndexStats:
    service_count: int = 0
    input_similar_count: int = 0
    similar_count: int = 0
    key_count: int = 0
    parameter_count: int = 0


class IndexModel:
    """A multilevel index of one fixed deployment.

    Mutate it through :mod:`mlix.ops`; additions must come from a single
    writer, retrieval is read-only.
    """

    def __init__(self, deployment: Deployment, parameters: ParameterTable | int | None = None):
        self._deployment = Deployment(deployment)
        if isinstance(parameters, ParameterTable):
            self.parameter_count = len(parameters)
        else:
            self.parameter_count = int(parameters or 0)
        self.directory = KeyDirectory()
        self.services: dict[int, Service] = {}
        self.input_similar_count = 0
        self.similar_count = 0

    @property
    def deployment(self) -> Deployment:
        return self._deployment

    @property
    def stats(self) -> IndexStats:
        return IndexStats(
            service_count=len(self.services),
            input_similar_count=self.input_similar_count,
            similar_count=self.similar_count,
            key_count=len(self.directory),
            parameter_count=self.parameter_count,
        )

    def key_class_size(self, key: int) -> int:
        kc = self.directory.get(key)
        return 0 if kc is None else len(kc.members)

    def walk(self) -> Iterator[tuple[KeyClass, InputSimilarClass | None, SimilarClass | None, int]]:
        """Yield ``(key class, input-similar class, similar class, service id)``
        for every indexed service; absent levels are None."""
        for kc in self.directory.classes():
            if self._deployment is Deployment.PRIMARY:
                for sid in kc.members:
                    yield kc, None, None, sid
                continue
            for isc in kc.members:
                for m in isc.members:
                    if isinstance(m, SimilarClass):
                        for sid in m.members:
                            yield kc, isc, m, sid
                    else:
                        yield kc, isc, None, m

    def partition(self) -> dict:
        """Canonical nested description of the class structure, for comparing
        two builds."""
        out: dict = {}
        for kc in self.directory.classes():
            if self._deployment is Deployment.PRIMARY:
                out[kc.key] = tuple(sorted(kc.members))
                continue
            classes = {}
            for isc in kc.members:
                if self._deployment is Deployment.FULL:
                    classes[isc.input_set] = {
                        sc.output_set: tuple(sorted(sc.members)) for sc in isc.members
                    }
                else:
                    classes[isc.input_set] = tuple(sorted(isc.members))
            out[kc.key] = classes
        return out


def new_index(deployment: Deployment | str, parameters: ParameterTable | int | None = None) -> IndexModel:
    return IndexModel(Deployment(deployment), parameters)


def stats(index: IndexModel) -> IndexStats:
    return index.stats
