"""Set comparisons over ascending id tuples, with parameter-comparison counts.

One comparison is one equality-or-order test between two parameter ids.
"""

from __future__ import annotations

from bisect import bisect_left
from typing import Mapping, Sequence


def equal_sets(a: Sequence[int], b: Sequence[int]) -> tuple[bool, int]:
    """Element-wise equality of two sorted sets.

    A size mismatch is detected with a single test; otherwise elements are
    compared pairwise until the first mismatch.
    """
    if len(a) != len(b):
        return False, 1
    for i, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return False, i + 1
    return True, len(a)


def merge_subset(sub: Sequence[int], sup: Sequence[int]) -> tuple[bool, int]:
    """Linear-merge test of ``sub <= sup``; every merge step costs one test."""
    i = j = steps = 0
    while i < len(sub) and j < len(sup):
        steps += 1
        x, y = sub[i], sup[j]
        if x == y:
            i += 1
            j += 1
        elif x > y:
            j += 1
        else:
            return False, steps
    return i == len(sub), steps


def positions(request: Sequence[int]) -> dict[int, int]:
    return {p: k for k, p in enumerate(request)}


def indexed_subset(
    sub: Sequence[int], sup: Sequence[int], pos: Mapping[int, int]
) -> tuple[bool, int]:
    """Same result and cost as :func:`merge_subset`, without walking the merge.

    Each merge step advances the cursor into ``sup`` by one, so the step count
    is determined by where the walk stops: just past the last element of
    ``sub`` on success, or at the insertion point of the first missing element
    (plus the failing test) on failure. ``pos`` maps each element of ``sup``
    to its index.
    """
    if not sub:
        return True, 0
    for x in sub:
        if x not in pos:
            k = bisect_left(sup, x)
            return False, k + 1 if k < len(sup) else len(sup)
    return True, pos[sub[-1]] + 1
