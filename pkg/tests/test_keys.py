import collections

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mlix.keys import (
    KeySelector,
    Strategy,
    select_designated,
    select_maximum,
    select_minimum,
    select_original,
    select_random,
)
from mlix.model import EmptyInputsError, IndexModel, Service, new_index
from mlix.ops import add_service

input_sets = st.lists(st.integers(0, 500), min_size=1, max_size=12, unique=True)


def _primary(sizes, total):
    """Primary index whose key ``k`` holds ``sizes[k]`` services, padded with
    filler services under key 999 up to ``total``."""
    index = new_index("primary", 1000)
    sid = 0
    for key, count in list(sizes.items()) + [(999, total - sum(sizes.values()))]:
        if count <= 0:
            continue
        kc, _, _ = index.directory.get_or_create(key)
        for _ in range(count):
            index.services[sid] = Service(sid, (key,))
            kc.members.append(sid)
            sid += 1
    return index


@pytest.mark.parametrize(
    "inputs, key",
    [((3, 7, 12), 7), ((5,), 5), ((0, 1, 2), 0), ((12, 3, 7), 7), ((7, 12, 3), 7)],
)
def test_designated_examples(inputs, key):
    assert select_designated(inputs) == key


def test_empty_inputs_rejected():
    for strategy in Strategy:
        with pytest.raises(EmptyInputsError):
            KeySelector(strategy).choose((), new_index("primary"))


def test_random_singleton():
    assert select_random((5,), KeySelector("random", seed=123)) == 5


def test_random_is_uniform():
    sel = KeySelector("random", seed=2024)
    inputs = tuple(range(1, 11))
    counts = collections.Counter(select_random(inputs, sel) for _ in range(10_000))
    assert set(counts) == set(inputs)
    assert all(850 <= c <= 1150 for c in counts.values()), counts


def test_random_reproducible():
    a, b = KeySelector("random", seed=9), KeySelector("random", seed=9)
    inputs = tuple(range(20))
    assert [select_random(inputs, a) for _ in range(500)] == [select_random(inputs, b) for _ in range(500)]


def test_original_examples():
    assert select_original((3, 7, 12), new_index("primary")) == 3
    # target 3: key 7 would grow to 5 (gap 2), fresh keys give 1 (gap 2)
    assert select_original((3, 7, 12), _primary({7: 4}, 8)) == 3
    assert select_original((3, 7), _primary({3: 2}, 8)) == 3


def test_original_prefers_class_nearest_target():
    # target sqrt(16+1) ~ 4.12: key 12 at size 3 -> 4 is closest
    assert select_original((3, 7, 12), _primary({3: 8, 12: 3}, 16)) == 12


def test_original_partial_target_uses_input_similar_count():
    index = new_index("partial", 1000)
    sel = KeySelector("minimum")
    # eight distinct input sets all keyed on 2
    for i in range(8):
        add_service(index, Service(i, (2, 100 + i)), sel)
    kc = index.directory.get(2)
    assert len(kc.members) == 8 and index.input_similar_count == 8
    # target 3: key 2 -> 9 (gap 6), fresh key 500 -> 1 (gap 2)
    assert select_original((2, 500), index) == 500


def test_maximum_examples():
    assert select_maximum((3, 7, 12), new_index("primary")) == 3
    assert select_maximum((3, 7, 12), _primary({3: 1, 7: 1}, 2)) == 12
    assert select_maximum((3, 7, 12), _primary({3: 1, 7: 1, 12: 1}, 3)) == 3


def test_minimum_examples():
    assert select_minimum((3, 7, 12), new_index("primary")) == 3
    assert select_minimum((3, 7, 12), _primary({7: 1, 12: 1}, 2)) == 7
    assert select_minimum((3, 7, 12), _primary({12: 1}, 1)) == 12


@given(input_sets, st.sampled_from(list(Strategy)), st.integers(0, 2**63))
def test_every_strategy_returns_an_input(inputs, strategy, seed):
    index = _primary({inputs[0]: 2, 250: 3}, 6)
    assert KeySelector(strategy, seed).select(inputs, index) in inputs


@given(input_sets, st.randoms())
def test_designated_depends_only_on_the_set(inputs, rnd):
    shuffled = list(inputs)
    rnd.shuffle(shuffled)
    assert select_designated(shuffled) == select_designated(inputs)


def test_designated_position_is_near_uniform():
    rng = np.random.default_rng(11)
    c = 10
    counts = np.zeros(c, dtype=int)
    for _ in range(20_000):
        inputs = np.sort(rng.choice(100_000, size=c, replace=False))
        key = select_designated(inputs.tolist())
        counts[int(np.searchsorted(inputs, key))] += 1
    assert counts.max() / counts.min() <= 1.3, counts


def test_maximum_grows_key_set_at_least_as_fast_as_minimum(small_dataset):
    sizes = {}
    for strategy in ("maximum", "minimum"):
        index = IndexModel("primary", small_dataset.parameters)
        sel = KeySelector(strategy)
        for s in small_dataset.services:
            add_service(index, s, sel)
        sizes[strategy] = index.stats.key_count
    assert sizes["maximum"] >= sizes["minimum"]
