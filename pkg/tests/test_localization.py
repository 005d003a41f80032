import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixtures import G11, G21, class_w, good_example
from modelkit.errors import NoLocalizationError, PreconditionError
from modelkit.lattice import ArrowSet, Lattice, rlp_set
from modelkit.localization import (
    LocalizationSequence,
    LocalizationStep,
    copper_arrows,
    golden_arrows,
    left_localize,
    left_localize_w,
    localize,
    localize_along,
    replay,
    right_localize,
    right_localize_w,
    short_candidates,
    total_order_right_localize,
    weq_classes,
)
from modelkit.model import ModelStructure, enumerate_model_structures, is_legal_w, is_model_structure
from modelkit.transfer import transfer_closure

G22 = Lattice.grid(2, 2)


def minimal_enlargements(mss, ms, f, side):
    """Brute force: minimal W among structures fixing F (right) or C (left)."""
    fixed = (lambda m: m.AC.mask) if side == "right" else (lambda m: m.AF.mask)
    cands = [m.W for m in mss if fixed(m) == fixed(ms) and f in m.W and ms.W <= m.W]
    return [w for w in cands if not any(c < w for c in cands)]


@pytest.mark.parametrize("lat", [G11, G21, Lattice.grid(3, 1), Lattice.chain(4)], ids=repr)
@pytest.mark.parametrize("side", ["right", "left"])
def test_new_w_is_the_unique_minimal_enlargement(lat, side):
    mss = enumerate_model_structures(lat)
    grow = right_localize_w if side == "right" else left_localize_w
    for ms in mss:
        for f in short_candidates(ms):
            assert minimal_enlargements(mss, ms, f, side) == [grow(ms, f)]


@pytest.mark.parametrize("side", ["right", "left"])
def test_missing_localizations_have_several_minima(side):
    mss = enumerate_model_structures(G22)
    grow = right_localize_w if side == "right" else left_localize_w
    missing = 0
    for ms in mss:
        for f in short_candidates(ms):
            mins = minimal_enlargements(mss, ms, f, side)
            try:
                W = grow(ms, f)
            except NoLocalizationError:
                missing += 1
                assert len(mins) > 1
            else:
                assert mins == [W]
    assert missing == 20


def test_two_incomparable_minima():
    W = ArrowSet.from_pairs(G22, [((0, 1), (1, 1)), ((0, 2), (1, 2))])
    ms = ModelStructure.checked(W, ArrowSet.identities(G22))
    f = ((0, 1), (0, 2))
    with pytest.raises(NoLocalizationError) as err:
        right_localize(ms, f)
    assert err.value.code == "NO_LOCALIZATION"
    mins = minimal_enlargements(enumerate_model_structures(G22), ms, G22.arrow(*f), "right")
    extra = {frozenset(m - W - ArrowSet.from_pairs(G22, [f])) for m in mins}
    assert len(mins) == 2
    assert any(G22.arrow((0, 0), (1, 0)) in e for e in extra)
    assert any(G22.arrow((2, 1), (2, 2)) in e for e in extra)


def test_unrestricted_iteration_overshoots():
    mss = enumerate_model_structures(G21)
    bigger = 0
    for ms in mss:
        for f in short_candidates(ms):
            small = right_localize_w(ms, f)
            big = right_localize_w(ms, f, method="unrestricted")
            assert small <= big and is_legal_w(G21, big)
            bigger += small != big
    assert bigger == 6


structures = st.sampled_from(enumerate_model_structures(G21))


@settings(max_examples=150, deadline=None)
@given(structures, st.data())
def test_localizations_fix_the_right_classes(ms, data):
    cands = short_candidates(ms)
    if not cands:
        return
    f = data.draw(st.sampled_from(cands))
    r = right_localize(ms, f)
    assert is_model_structure(G21, r.W, r.AF)
    assert r.F == ms.F and ms.W <= r.W and f in r.W and ms.AF <= r.AF
    l = left_localize(ms, f)
    assert is_model_structure(G21, l.W, l.AF)
    assert l.C == ms.C and ms.W <= l.W and f in l.W and l.AF == ms.AF


@pytest.mark.parametrize("lat", [G11, G21, G22], ids=repr)
def test_left_is_mirrored_right(lat):
    for ms in enumerate_model_structures(lat):
        d = ms.dual()
        for f in short_candidates(ms):
            try:
                a = left_localize(ms, f).dual()
            except NoLocalizationError:
                a = None
            try:
                b = right_localize(d, lat.mirror_arrow(f))
            except NoLocalizationError:
                b = None
            assert a == b


def test_good_example_golden_arrows():
    lat, W, AF = good_example()
    ms = ModelStructure.checked(W, AF)
    f = ((1, 0), (1, 1))
    gamma = golden_arrows(ms, f)
    assert set(gamma) == {lat.arrow(*a) for a in [((1, 0), (1, 3)), ((0, 0), (0, 1)), ((0, 1), (0, 3))]}
    # (0,0)->(0,1) restricts (1,0)->(1,3) but (0,1)->(0,3) is needed
    assert transfer_closure(lat, AF | ArrowSet.from_pairs(lat, [((1, 0), (1, 3))])) != transfer_closure(lat, AF | gamma.arrows)
    out = right_localize(ms, f)
    classes = [sorted(lat.label(x) for x in c) for c in weq_classes(out)]
    assert classes == [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(1, 0), (1, 1), (1, 2), (1, 3)],
        [(2, 0)],
        [(2, 1), (2, 2)],
        [(2, 3)],
    ]
    assert lat.arrow((0, 1), (0, 2)) in out.AF


def test_square_example_needs_both_golden_arrows():
    W = ArrowSet.from_pairs(G11, [((0, 0), (1, 0)), ((0, 0), (0, 1))])
    ms = ModelStructure.checked(W, W)
    f = ((0, 1), (1, 1))
    gamma = golden_arrows(ms, f)
    assert set(gamma) == {G11.arrow((0, 1), (1, 1)), G11.arrow((1, 0), (1, 1))}
    out = right_localize(ms, f)
    assert out.W == ArrowSet.all(G11) and out.AF == ArrowSet.all(G11)
    for g in gamma:
        assert transfer_closure(G11, W | ArrowSet.from_pairs(G11, [g])) != out.AF


def test_copper_example():
    W = class_w(G21, [[(0, 1), (1, 1), (2, 1), (1, 0), (2, 0)]])
    AF = rlp_set(G21, ArrowSet.from_pairs(G21, [((1, 0), (2, 1)), ((0, 1), (1, 1)), ((1, 0), (1, 1)),
                                              ((1, 1), (2, 1)), ((2, 0), (2, 1)), ((0, 1), (2, 1))])) & W
    ms = ModelStructure.checked(W, AF)
    kappa = copper_arrows(ms, ((0, 0), (1, 0)))
    assert set(kappa) == {G21.arrow((0, 0), (0, 1)), G21.arrow((0, 0), (1, 0))}
    assert set(kappa.witness.values()) <= set(left_localize_w(ms, ((0, 0), (1, 0))).short())


@pytest.mark.parametrize("f", [((0, 0), (1, 0)), ((0, 0), (0, 1))])
def test_right_localizing_a_big_class(f):
    W = class_w(G21, [[(0, 1), (1, 1), (2, 1), (1, 0), (2, 0)]])
    ms = ModelStructure.checked(W, ArrowSet.identities(G21))
    out = right_localize(ms, f)
    assert out.W == ArrowSet.all(G21)
    assert set(out.AF) == {G21.arrow((0, 0), x) for x in [(1, 0), (2, 0), (0, 1), (1, 1), (2, 1)]}


def test_preconditions():
    ms = ModelStructure.trivial(G11)
    with pytest.raises(PreconditionError):
        right_localize(ms, ((0, 0), (1, 1)))
    done = right_localize(ms, ((0, 0), (0, 1)))
    with pytest.raises(PreconditionError):
        left_localize(done, ((0, 0), (0, 1)))
    with pytest.raises(PreconditionError):
        localize(ms, "up", ((0, 0), (0, 1)))
    with pytest.raises(PreconditionError):
        total_order_right_localize(ms, 0)


def test_localize_along_walks_a_chain():
    ms = ModelStructure.trivial(G11)
    out = localize_along(ms, "right", ((0, 0), (1, 1)))
    step = right_localize(right_localize(ms, ((0, 0), (0, 1))), ((0, 1), (1, 1)))
    assert out == step


@pytest.mark.parametrize("lat", [G11, G21], ids=repr)
def test_localize_along_is_chain_independent(lat):
    for ms in enumerate_model_structures(lat):
        for a in lat.arrows:
            if lat.is_short(a) or a in ms.W:
                continue
            for side in ("left", "right"):
                results = set()
                for chain in lat.maximal_chains(*a):
                    out = ms
                    for s, t in zip(chain, chain[1:]):
                        if (s, t) not in out.W:
                            out = localize(out, side, (s, t))
                    results.add(out.key)
                assert results == {localize_along(ms, side, a).key}


def test_sequence_replay():
    base = ModelStructure.trivial(G11)
    steps = (LocalizationStep("right", G11.arrow((0, 0), (0, 1))), LocalizationStep("left", G11.arrow((0, 1), (1, 1))))
    seq = LocalizationSequence(base, steps)
    assert len(seq) == 2
    assert seq.replay() == replay(base, steps) == left_localize(right_localize(base, steps[0].arrow), steps[1].arrow)


def test_weq_classes_partition():
    ms = ModelStructure(class_w(G21, [[(0, 0), (1, 0)], [(1, 1), (2, 1)]]), ArrowSet.identities(G21))
    classes = weq_classes(ms)
    assert sorted(map(sorted, classes)) == [[0, 2], [1], [3, 5], [4]]
