import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixtures import G11, G21
from modelkit.errors import InvalidDatumError, NotGridError, PreconditionError, UnsaturatedError
from modelkit.lattice import ArrowSet, Lattice, iter_bits
from modelkit.model import ModelStructure, enumerate_model_structures
from modelkit.saturation import (
    SaturatedGridDatum,
    enumerate_saturated,
    enumerate_saturated_data,
    grid_saturated_check,
    is_saturated,
    reachability_graph,
    saturated_bigger_to_smaller,
    saturated_smaller_to_bigger,
    zigzag_realize,
)
from modelkit.transfer import enumerate_transfer_systems, transfer_closure


def saturated_by_definition(T):
    lat = T.lattice
    for x, y, z in itertools.product(range(lat.size), repeat=3):
        if (x, y) in T and (x, z) in T and lat.leq(y, z) and (y, z) not in T:
            return False
    return True


@pytest.mark.parametrize("lat", [G11, G21, Lattice.chain(3), Lattice.grid(1, 2)], ids=repr)
def test_predicate_matches_definition(lat):
    for T in enumerate_transfer_systems(lat):
        assert is_saturated(T) == saturated_by_definition(T)


@pytest.mark.parametrize("lat", [G11, G21, Lattice.grid(1, 2), Lattice.grid(2, 2)], ids=repr)
def test_short_arrow_criterion(lat):
    bits = list(iter_bits(lat.short_mask))
    for r in range(1 << len(bits)):
        S = ArrowSet(lat, sum(1 << b for k, b in enumerate(bits) if r >> k & 1))
        T = transfer_closure(lat, S)
        assert grid_saturated_check(lat, S) == (is_saturated(T) and T.short() == S)


def test_short_arrow_criterion_rejects_bad_input():
    with pytest.raises(PreconditionError):
        grid_saturated_check(G11, ArrowSet.all(G11))
    m3 = Lattice.explicit(5, [(0, 1), (0, 2), (0, 3), (0, 4), (1, 4), (2, 4), (3, 4)])
    with pytest.raises(NotGridError):
        grid_saturated_check(m3, ArrowSet.identities(m3))


@pytest.mark.parametrize("m,n", [(0, 0), (1, 0), (1, 1), (2, 0), (1, 2), (3, 0), (2, 1)])
def test_bijection_roundtrip(m, n):
    sats = enumerate_saturated(Lattice.grid(m, n + 1))
    data = enumerate_saturated_data(m, n)
    assert len(data) == len(sats)
    assert {saturated_smaller_to_bigger(d).mask for d in data} == {T.mask for T in sats}
    for T in sats:
        assert saturated_smaller_to_bigger(saturated_bigger_to_smaller(T)) == T
    for d in data:
        assert saturated_bigger_to_smaller(saturated_smaller_to_bigger(d)).key() == d.key()


def test_datum_defaults_and_validation():
    small = Lattice.grid(1, 0)
    d = SaturatedGridDatum(2, 0, (0, 2), ArrowSet.identities(small))
    assert d.top_verticals == 1 and d.top_joins == ()
    # with no top verticals the join inside the block becomes optional, and is taken
    assert SaturatedGridDatum(2, 0, (0, 2), ArrowSet.identities(small), 0).top_joins == (0,)
    with pytest.raises(InvalidDatumError):
        SaturatedGridDatum(2, 0, (1, 2), ArrowSet.identities(small)).validate()
    joined = ArrowSet.all(small)
    with pytest.raises(InvalidDatumError):
        SaturatedGridDatum(2, 0, (0, 2), joined).validate()
    with pytest.raises(InvalidDatumError):
        SaturatedGridDatum(2, 0, (0, 2), ArrowSet.identities(small), 3, ()).validate()


def test_bigger_to_smaller_rejects_unsaturated():
    T = transfer_closure(G11, ArrowSet.from_pairs(G11, [((0, 0), (1, 1))]))
    assert not is_saturated(T)
    with pytest.raises(UnsaturatedError):
        saturated_bigger_to_smaller(T)
    with pytest.raises(PreconditionError):
        saturated_bigger_to_smaller(ArrowSet.identities(Lattice.grid(2, 0)))


saturated_structures = [ms for ms in enumerate_model_structures(G21) if is_saturated(ms.AF)]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(saturated_structures))
def test_zigzag_replays(ms):
    seq = zigzag_realize(ms)
    assert seq.base == ModelStructure.trivial(G21)
    assert seq.replay() == ms
    sides = [s.side for s in seq.steps]
    # right steps first, then left
    assert sides == sorted(sides, key=lambda s: s == "left")


def test_zigzag_rejects_unsaturated():
    ms = next(ms for ms in enumerate_model_structures(G21) if not is_saturated(ms.AF))
    with pytest.raises(UnsaturatedError):
        zigzag_realize(ms)


def test_reachability_on_three_by_two():
    graph = reachability_graph(G21)
    assert len(graph.nodes) == 182
    assert len(graph.reachable) == 167
    assert graph.missing == 0
    # the trivial structure has no incoming edge either
    assert len(graph.without_incoming()) == 14
    # every unreachable structure has unsaturated acyclic fibrations
    assert not any(is_saturated(ms.AF) for ms in graph.unreachable)


def test_dot_export():
    dot = reachability_graph(G11).to_dot()
    assert dot.startswith("digraph localizations {")
    assert '"W0-AF0"' in dot
    assert "side=right" in dot and "side=left" in dot
    assert 'arrow="(0, 0)->(0, 1)"' in dot
    assert dot.count("->") - dot.count(')->(') == 64
