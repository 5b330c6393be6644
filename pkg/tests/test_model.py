import math

import pytest
from hypothesis import given, settings, strategies as st

from mlix.keys import KeySelector, Strategy
from mlix.model import (
    Deployment,
    EmptyInputsError,
    KeyDirectory,
    ParameterTable,
    Service,
    new_index,
    stats,
)
from mlix.ops import add_service, retrieve


def test_parameter_table_is_a_bijection():
    table = ParameterTable(["temp", "city", "temp", "date"])
    assert len(table) == 3
    for name in ("temp", "city", "date"):
        assert table.name(table.lookup(name)) == name
    assert [table.lookup(n) for n in ("temp", "city", "date")] == [0, 1, 2]


def test_service_normalises_parameter_order():
    s = Service(4, (12, 3, 7, 3), (9, 1))
    assert s.inputs == (3, 7, 12)
    assert s.outputs == (1, 9)


def test_service_needs_inputs():
    with pytest.raises(EmptyInputsError):
        Service(1, ())


def test_attributes_do_not_affect_identity():
    assert Service(1, (2,), attributes={"qos": "gold"}) == Service(1, (2,))


def test_new_primary_index_is_empty():
    st_ = stats(new_index(Deployment.PRIMARY, ParameterTable.numbered(50)))
    assert (st_.service_count, st_.key_count, st_.parameter_count) == (0, 0, 50)


def test_new_partial_index_retrieves_nothing():
    ids, rep = retrieve(new_index("partial"), (1, 2, 3))
    assert ids == set() and rep.traversed_classes == 0


def test_full_index_after_one_addition():
    index = new_index("full")
    add_service(index, Service(0, (3, 7, 12), (20,)), KeySelector("designated"))
    st_ = index.stats
    assert (st_.service_count, st_.input_similar_count, st_.similar_count, st_.key_count) == (1, 1, 1, 1)


@pytest.mark.parametrize("outputs, similar", [((20,), 1), ((21,), 2)])
def test_full_index_clustering(outputs, similar):
    index = new_index("full")
    sel = KeySelector("designated")
    add_service(index, Service(0, (3, 7), (20,)), sel)
    add_service(index, Service(1, (3, 7), outputs), sel)
    st_ = index.stats
    assert (st_.service_count, st_.input_similar_count, st_.similar_count) == (2, 1, similar)


def test_key_directory_iterates_in_order_and_bounds_lookups():
    d = KeyDirectory()
    keys = [50, 3, 99, 7, 12, 64, 1, 33, 80]
    for k in keys:
        d.get_or_create(k)
    assert list(d) == sorted(keys)
    bound = math.ceil(math.log2(len(keys))) + 1
    for k in keys:
        kc, cost = d.find(k)
        assert kc.key == k and 1 <= cost <= bound
    assert d.find(1000)[0] is None


@given(st.lists(st.integers(0, 10_000), min_size=1, max_size=300, unique=True))
def test_key_directory_lookup_bound(keys):
    d = KeyDirectory()
    for k in keys:
        d.get_or_create(k)
    bound = math.ceil(math.log2(len(keys))) + 1
    assert all(d.find(k)[1] <= bound for k in keys)


# random small services over a tiny universe so that clustering actually happens
services_st = st.lists(
    st.tuples(
        st.frozensets(st.integers(0, 7), min_size=1, max_size=3),
        st.frozensets(st.integers(0, 7), max_size=2),
    ),
    max_size=40,
)


def _walk_counts(index):
    isc_ids, sc_ids, sids = set(), set(), []
    for kc, isc, sc, sid in index.walk():
        service = index.services[sid]
        assert kc.key in service.inputs
        if isc is not None:
            assert isc.input_set == service.inputs
            isc_ids.add(id(isc))
        if sc is not None:
            assert (sc.input_set, sc.output_set) == (service.inputs, service.outputs)
            sc_ids.add(id(sc))
        sids.append(sid)
    return isc_ids, sc_ids, sids


@settings(max_examples=60, deadline=None)
@given(services_st, st.sampled_from(list(Deployment)), st.sampled_from(list(Strategy)), st.integers(0, 2**32))
def test_structural_invariants(raw, deployment, strategy, seed):
    index = new_index(deployment, 8)
    sel = KeySelector(strategy, seed)
    prev = index.stats
    for i, (ins, outs) in enumerate(raw):
        add_service(index, Service(i, tuple(ins), tuple(outs)), sel)
        cur = index.stats
        assert cur.service_count == prev.service_count + 1
        assert 0 <= cur.key_count - prev.key_count <= 1
        assert 0 <= cur.input_similar_count - prev.input_similar_count <= 1
        assert 0 <= cur.similar_count - prev.similar_count <= 1
        prev = cur

    isc_ids, sc_ids, sids = _walk_counts(index)
    st_ = index.stats
    # every service reachable exactly once
    assert sorted(sids) == list(range(len(raw)))
    assert st_.key_count <= st_.parameter_count
    if deployment is Deployment.PRIMARY:
        return
    # quotient sets: one class per distinct input set / (input, output) pair
    assert st_.input_similar_count == len(isc_ids) == len({s.inputs for s in index.services.values()})
    assert st_.key_count <= st_.input_similar_count <= st_.service_count
    if deployment is Deployment.FULL:
        pairs = {(s.inputs, s.outputs) for s in index.services.values()}
        assert st_.similar_count == len(sc_ids) == len(pairs)
        assert st_.input_similar_count <= st_.similar_count <= st_.service_count
