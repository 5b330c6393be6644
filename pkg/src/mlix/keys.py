"""Key selection strategies.

Every strategy maps a service's (ascending) input set to one of its members.
The ``choose_*`` helpers also report how many key-directory comparisons the
strategy spent inspecting the index; the public ``select_*`` functions return
only the key.
"""

from __future__ import annotations

import enum
import math
from typing import Sequence

import numpy as np

from mlix.model import Deployment, EmptyInputsError, IndexModel

_RANDOM_BLOCK = 4096


class Strategy(enum.Enum):
    ORIGINAL = "original"
    RANDOM = "random"
    MAXIMUM = "maximum"
    MINIMUM = "minimum"
    DESIGNATED = "designated"


def _require(inputs: Sequence[int]) -> None:
    if not inputs:
        raise EmptyInputsError("no key selectable from an empty input set")


def select_designated(inputs: Sequence[int]) -> int:
    """The ``(sum of ids mod count)``-th input in ascending order.

    The key depends only on the input *set*, so services with equal inputs
    always land in the same key class.
    """
    _require(inputs)
    ordered = sorted(inputs)
    return ordered[sum(ordered) % len(ordered)]


def choose_original(inputs: Sequence[int], index: IndexModel) -> tuple[int, int]:
    _require(inputs)
    if index.deployment is Deployment.PRIMARY:
        target = math.sqrt(len(index.services) + 1)
    else:
        target = math.sqrt(index.input_similar_count + 1)
    best, best_gap, cost = None, math.inf, 0
    for p in inputs:
        kc, c = index.directory.find(p)
        cost += c
        size = 0 if kc is None else len(kc.members)
        gap = abs(size + 1 - target)
        # strict < keeps the smallest id on ties since inputs ascend
        if gap < best_gap:
            best, best_gap = p, gap
    return best, cost


def choose_maximum(inputs: Sequence[int], index: IndexModel) -> tuple[int, int]:
    _require(inputs)
    cost = 0
    for p in inputs:
        kc, c = index.directory.find(p)
        cost += c
        if kc is None:
            return p, cost
    return inputs[0], cost


def choose_minimum(inputs: Sequence[int], index: IndexModel) -> tuple[int, int]:
    _require(inputs)
    cost = 0
    for p in inputs:
        kc, c = index.directory.find(p)
        cost += c
        if kc is not None:
            return p, cost
    return inputs[0], cost


def select_original(inputs: Sequence[int], index: IndexModel) -> int:
    """Input whose key class, after adding one member, is closest in size to
    the square root of the running service count (primary) or input-similar
    class count (partial/full). Ties go to the smallest id."""
    return choose_original(sorted(inputs), index)[0]


def select_maximum(inputs: Sequence[int], index: IndexModel) -> int:
    """Smallest input that is not yet a key; smallest input if all are."""
    return choose_maximum(sorted(inputs), index)[0]


def select_minimum(inputs: Sequence[int], index: IndexModel) -> int:
    """Smallest input that is already a key; smallest input if none is."""
    return choose_minimum(sorted(inputs), index)[0]


class KeySelector:
    """A key-selection strategy plus, for RANDOM, its generator state.

    RANDOM draws from a PCG64 generator seeded with ``seed``; the draw sequence
    is fixed by the seed and the order of calls. Do not share a RANDOM selector
    between concurrent builds.
    """

    def __init__(self, strategy: Strategy | str, seed: int = 0):
        self.strategy = Strategy(strategy)
        self.seed = seed
        self._rng = np.random.default_rng(seed)
        self._block: list[float] = []
        self._next = 0

    def __repr__(self):
        if self.strategy is Strategy.RANDOM:
            return f"KeySelector({self.strategy.value!r}, seed={self.seed})"
        return f"KeySelector({self.strategy.value!r})"

    def uniform(self) -> float:
        if self._next >= len(self._block):
            self._block = self._rng.random(_RANDOM_BLOCK).tolist()
            self._next = 0
        u = self._block[self._next]
        self._next += 1
        return u

    def choose(self, inputs: Sequence[int], index: IndexModel) -> tuple[int, int]:
        """Return ``(key, key-directory comparisons spent choosing it)``.

        ``inputs`` must already be ascending and duplicate-free.
        """
        s = self.strategy
        if s is Strategy.DESIGNATED:
            _require(inputs)
            return inputs[sum(inputs) % len(inputs)], 0
        if s is Strategy.RANDOM:
            _require(inputs)
            return inputs[int(self.uniform() * len(inputs))], 0
        if s is Strategy.ORIGINAL:
            return choose_original(inputs, index)
        if s is Strategy.MAXIMUM:
            return choose_maximum(inputs, index)
        return choose_minimum(inputs, index)

    def select(self, inputs: Sequence[int], index: IndexModel | None = None) -> int:
        if index is None:
            if self.strategy not in (Strategy.DESIGNATED, Strategy.RANDOM):
                raise ValueError(f"{self.strategy.value} selection needs an index")
            index = IndexModel(Deployment.PRIMARY)
        return self.choose(sorted(inputs), index)[0]


def select_random(inputs: Sequence[int], selector: KeySelector) -> int:
    """Uniform member of ``inputs``; advances the selector's generator."""
    if selector.strategy is not Strategy.RANDOM:
        raise ValueError("select_random needs a RANDOM selector")
    return selector.select(inputs)
