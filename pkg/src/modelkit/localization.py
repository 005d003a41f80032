"""Left and right Bousfield localization at short edges.

Right localization keeps the fibrations and enlarges ``W``; left localization
keeps the cofibrations.  The new weak equivalences come from an iterative
closure; the new acyclic fibrations (right) or acyclic cofibrations (left) are
computed twice, once from golden / copper generating arrows and once from the
lifting classes, and the two answers must agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Literal

from .errors import InternalDisagreementError, NoLocalizationError, PreconditionError
from .lattice import Arrow, ArrowSet, Lattice, iter_bits, llp_set, rlp_set
from .model import ModelStructure, compose, is_legal_w, two_out_of_three_closure
from .transfer import cotransfer_closure, transfer_closure

Side = Literal["left", "right"]


def as_arrow(lat: Lattice, f) -> Arrow:
    if isinstance(f, Arrow):
        return f
    s, t = f
    return lat.arrow(s, t)


def _check_admissible(ms: ModelStructure, f) -> Arrow:
    lat = ms.lattice
    f = as_arrow(lat, f)
    if not lat.is_short(f):
        raise PreconditionError(f"{lat.label(f.source)}->{lat.label(f.target)} is not a short edge")
    if f in ms.W:
        raise PreconditionError(f"{lat.label(f.source)}->{lat.label(f.target)} is already a weak equivalence")
    return f


def weq_classes(ms: ModelStructure) -> list[frozenset[int]]:
    """Partition of the elements into weak-equivalence classes."""
    lat = ms.lattice
    parent = list(range(lat.size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s, t in ms.W:
        parent[find(s)] = find(t)
    groups: dict[int, set[int]] = {}
    for x in range(lat.size):
        groups.setdefault(find(x), set()).add(x)
    return sorted((frozenset(g) for g in groups.values()), key=min)


def weq_class(ms: ModelStructure, x) -> frozenset[int]:
    x = ms.lattice.element(x)
    for cls in weq_classes(ms):
        if x in cls:
            return cls
    raise AssertionError("unreachable")


def _class_of(ms: ModelStructure) -> list[frozenset[int]]:
    out = [frozenset()] * ms.lattice.size
    for cls in weq_classes(ms):
        for x in cls:
            out[x] = cls
    return out


# -- weak equivalences -------------------------------------------------------


Method = Literal["restricted", "unrestricted"]


def _grow_w(ms: ModelStructure, f, side: Side, method: Method) -> ArrowSet:
    lat = ms.lattice
    f = _check_admissible(ms, f)
    if method not in ("restricted", "unrestricted"):
        raise PreconditionError(f"unknown method {method!r}")
    if side == "right":
        fixed, grow, allowed, close = ms.AC, ms.AF, ms.F, transfer_closure
    else:
        fixed, grow, allowed, close = ms.AF, ms.AC, ms.C, cotransfer_closure
    if method == "unrestricted":
        allowed = ArrowSet.all(lat)
    fresh = ArrowSet.from_pairs(lat, [f])
    W = ms.W
    for _ in range(len(lat.arrows) + 1):
        grow = close(lat, grow | (fresh & allowed))
        comp = compose(fixed, grow) if side == "right" else compose(grow, fixed)
        grown = two_out_of_three_closure(comp | W)
        fresh = grown - W
        W = grown
        if not fresh.mask:
            break
    else:
        raise InternalDisagreementError("weak-equivalence iteration did not stabilize")
    verdict = is_legal_w(lat, W)
    if not verdict:
        raise NoLocalizationError(
            f"{side} localization at {lat.label(f.source)}->{lat.label(f.target)} does not exist ({verdict.reason})"
        )
    return W


def right_localize_w(ms: ModelStructure, f, method: Method = "restricted") -> ArrowSet:
    """Weak equivalences of the right localization at the short edge ``f``.

    Grow the acyclic fibrations by the newest weak equivalences, recompose
    with the fixed acyclic cofibrations and close under two-out-of-three,
    until nothing new appears.  With ``method="restricted"`` only new weak
    equivalences that are fibrations are fed back, since fibrations never
    change; this gives the smallest admissible ``W``.  ``"unrestricted"``
    feeds back every new weak equivalence and can overshoot.

    Raises :class:`NoLocalizationError` when the smallest candidate is not
    legal, which happens exactly when several incomparable minimal
    enlargements exist.
    """
    return _grow_w(ms, f, "right", method)


def left_localize_w(ms: ModelStructure, f, method: Method = "restricted") -> ArrowSet:
    """Weak equivalences of the left localization at the short edge ``f``.

    Mirror image of :func:`right_localize_w`: grow the acyclic cofibrations
    (restricted to cofibrations) and recompose with the fixed acyclic
    fibrations.
    """
    return _grow_w(ms, f, "left", method)


# -- generating arrows ---------------------------------------------------------


@dataclass(frozen=True)
class GeneratingArrows:
    """Golden or copper arrows, each tagged with the new short edge it came from."""

    arrows: ArrowSet
    witness: dict[Arrow, Arrow] = field(default_factory=dict, compare=False)

    def __iter__(self):
        return iter(self.arrows)

    def __len__(self):
        return len(self.arrows)

    def __contains__(self, a):
        return a in self.arrows


GoldenArrowSet = GeneratingArrows
CopperArrowSet = GeneratingArrows


def _golden(ms: ModelStructure, new_w: ArrowSet) -> GeneratingArrows:
    lat = ms.lattice
    cls = _class_of(ms)
    leq = lat.leq
    witness: dict[Arrow, Arrow] = {}
    for sigma in (new_w - ms.W).short():
        tops = [y for y in cls[sigma.target] if not any(z != y and leq(y, z) for z in cls[sigma.target])]
        sources = cls[sigma.source]
        for t in tops:
            below = [y for y in sources if leq(y, t)]
            for s in below:
                # s must be maximal among its class members under t
                if any(z != s and leq(s, z) for z in below):
                    continue
                if s != t:
                    witness.setdefault(lat.arrow(s, t), sigma)
    return GeneratingArrows(ArrowSet.from_pairs(lat, witness), witness)


def golden_arrows(ms: ModelStructure, f, method: Method = "restricted") -> GeneratingArrows:
    """Maximal new acyclic fibrations generating the right localization."""
    return _golden(ms, right_localize_w(ms, f, method))


def _copper(ms: ModelStructure, new_w: ArrowSet) -> GeneratingArrows:
    lat = ms.lattice
    cls = _class_of(ms)
    leq = lat.leq
    witness: dict[Arrow, Arrow] = {}
    for sigma in (new_w - ms.W).short():
        bottoms = [y for y in cls[sigma.source] if not any(z != y and leq(z, y) for z in cls[sigma.source])]
        targets = cls[sigma.target]
        for s in bottoms:
            above = [y for y in targets if leq(s, y)]
            for t in above:
                # t must be minimal among its class members over s
                if any(z != t and leq(z, t) for z in above):
                    continue
                if s != t:
                    witness.setdefault(lat.arrow(s, t), sigma)
    return GeneratingArrows(ArrowSet.from_pairs(lat, witness), witness)


def copper_arrows(ms: ModelStructure, f, method: Method = "restricted") -> GeneratingArrows:
    """Minimal new acyclic cofibrations generating the left localization."""
    return _copper(ms, left_localize_w(ms, f, method))


# -- full localizations ------------------------------------------------------


def right_localize(ms: ModelStructure, f, method: Method = "restricted") -> ModelStructure:
    """Right localization at the short edge ``f``.

    The acyclic fibrations are the transfer closure of the old ones and the
    golden arrows; this must coincide with the fibrations (unchanged) that
    are new weak equivalences.
    """
    lat = ms.lattice
    W = right_localize_w(ms, f, method)
    gamma = _golden(ms, W)
    af = transfer_closure(lat, ms.AF | gamma.arrows)
    expected = rlp_set(lat, ms.AC) & W
    if af != expected:
        raise InternalDisagreementError(f"golden closure {af!r} differs from fibrations in W {expected!r}")
    out = ModelStructure(W, af)
    if out.AC != ms.AC:
        raise InternalDisagreementError("right localization changed the acyclic cofibrations")
    return out


def left_localize(ms: ModelStructure, f, method: Method = "restricted") -> ModelStructure:
    """Left localization at the short edge ``f``.

    The acyclic cofibrations are the co-transfer closure of the old ones and
    the copper arrows; they must equal the cofibrations that became weak
    equivalences, and must leave the acyclic fibrations unchanged.
    """
    lat = ms.lattice
    W = left_localize_w(ms, f, method)
    kappa = _copper(ms, W)
    ac = cotransfer_closure(lat, ms.AC | kappa.arrows)
    expected = llp_set(lat, ms.AF) & W
    if ac != expected:
        raise InternalDisagreementError(f"copper closure {ac!r} differs from cofibrations in W {expected!r}")
    af = rlp_set(lat, ac) & W
    if af != ms.AF:
        raise InternalDisagreementError("left localization changed the acyclic fibrations")
    return ModelStructure(W, af)


def localize(ms: ModelStructure, side: Side, f) -> ModelStructure:
    if side == "right":
        return right_localize(ms, f)
    if side == "left":
        return left_localize(ms, f)
    raise PreconditionError(f"unknown side {side!r}")


def localize_along(ms: ModelStructure, side: Side, f) -> ModelStructure:
    """Localize at an arbitrary arrow, one short edge at a time.

    Maximal chains from source to target are tried in lexicographic order and
    the first one whose every step exists is used.  Short edges that are
    already weak equivalences are skipped.
    """
    lat = ms.lattice
    f = as_arrow(lat, f)
    chains = sorted(lat.maximal_chains(f.source, f.target))
    if not chains:
        raise PreconditionError(f"{f} is not an arrow")
    last = None
    for chain in chains:
        out = ms
        try:
            for a, b in zip(chain, chain[1:]):
                if (a, b) not in out.W:
                    out = localize(out, side, (a, b))
        except NoLocalizationError as exc:
            last = exc
            continue
        return out
    raise last


def total_order_right_localize(ms: ModelStructure, i: int) -> ModelStructure:
    """Closed-form right localization at ``i -> i+1`` on a chain."""
    lat = ms.lattice
    if lat.tag[0] != "chain":
        raise PreconditionError("total-order formula needs a chain")
    n = lat.tag[1]
    if not 0 <= i < n:
        raise PreconditionError(f"index {i} out of range for chain [{n}]")
    if (i, i + 1) in ms.W:
        raise PreconditionError(f"{i}->{i + 1} is already a weak equivalence")
    j = i + 1
    while j + 1 <= n and (i + 1, j + 1) in ms.W:
        j += 1
    sources = [m for m in range(i + 1) if (m, i) in ms.AF]
    added = [(m, jj) for m in sources for jj in range(i + 1, j + 1)]
    AF = ms.AF | ArrowSet.from_pairs(lat, added)
    # acyclic cofibrations are unchanged, so W is their composite with AF
    W = compose(ms.AC, AF)
    return ModelStructure(W, AF)


# -- sequences ---------------------------------------------------------------------


@dataclass(frozen=True)
class LocalizationStep:
    side: Side
    arrow: Arrow


@dataclass(frozen=True)
class LocalizationSequence:
    base: ModelStructure
    steps: tuple[LocalizationStep, ...] = ()

    def replay(self) -> ModelStructure:
        return replay(self.base, self.steps)

    def __len__(self):
        return len(self.steps)


def replay(base: ModelStructure, steps: Iterable[LocalizationStep]) -> ModelStructure:
    ms = base
    for step in steps:
        ms = localize(ms, step.side, step.arrow)
    return ms


def short_candidates(ms: ModelStructure) -> list[Arrow]:
    """Short edges not yet weak equivalences, in index order."""
    lat = ms.lattice
    return [lat.arrows[k] for k in iter_bits(lat.short_mask & ~ms.W.mask)]
