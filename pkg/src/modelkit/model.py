"""Model structures on finite lattices.

A model structure is stored as its weak equivalences ``W`` and acyclic
fibrations ``AF``; the remaining classes are derived by lifting properties.
Two independent validity checks are provided: :func:`is_model_structure`
(legality of ``W`` plus the minimal transfer system ``T_min``) and
:func:`check_model_axioms` (the model category axioms checked directly).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, NamedTuple

from .errors import ConsistencyError, IllegalWeakEquivalencesError, InvalidModelStructureError
from .lattice import ArrowSet, Lattice, iter_bits, llp_set, mask_from_rows, rlp_set
from .transfer import (
    check_size,
    closed_sets,
    composition_closure_mask,
    is_cotransfer_system,
    is_transfer_system,
    transfer_closure_mask,
    transfer_systems_between,
)

# stable reason codes
NOT_COMPOSITION_CLOSED = "NOT_COMPOSITION_CLOSED"
NOT_DECOMPOSABLE = "NOT_DECOMPOSABLE"
SHORT_EDGE_NEITHER_STABLE = "SHORT_EDGE_NEITHER_STABLE"
NO_SPLIT_INDEX = "NO_SPLIT_INDEX"
NOT_TRANSFER_SYSTEM = "NOT_TRANSFER_SYSTEM"
AF_NOT_IN_W = "AF_NOT_IN_W"
TMIN_NOT_CONTAINED = "TMIN_NOT_CONTAINED"
NOT_TWO_OF_THREE = "NOT_TWO_OF_THREE"
AF_NOT_FIBRATIONS_IN_W = "AF_NOT_FIBRATIONS_IN_W"
NO_FACTORIZATION = "NO_FACTORIZATION"


class Verdict(NamedTuple):
    """Boolean result with a reason code when false."""

    ok: bool
    reason: str | None = None
    detail: str | None = None

    def __bool__(self):
        return self.ok


OK = Verdict(True)


@dataclass(frozen=True)
class ModelStructure:
    W: ArrowSet
    AF: ArrowSet

    @property
    def lattice(self) -> Lattice:
        return self.W.lattice

    @classmethod
    def trivial(cls, lat: Lattice) -> "ModelStructure":
        return cls(ArrowSet.identities(lat), ArrowSet.identities(lat))

    @classmethod
    def checked(cls, W: ArrowSet, AF: ArrowSet) -> "ModelStructure":
        verdict = is_model_structure(W.lattice, W, AF)
        if not verdict:
            raise InvalidModelStructureError(verdict.detail or "", code=verdict.reason)
        return cls(W, AF)

    @property
    def key(self) -> tuple[int, int]:
        return self.W.mask, self.AF.mask

    @property
    def ident(self) -> str:
        return f"W{self.W.mask:x}-AF{self.AF.mask:x}"

    @cached_property
    def C(self) -> ArrowSet:
        return llp_set(self.lattice, self.AF)

    @cached_property
    def AC(self) -> ArrowSet:
        return self.C & self.W

    @cached_property
    def F(self) -> ArrowSet:
        return rlp_set(self.lattice, self.AC)

    def dual(self) -> "ModelStructure":
        """The same model structure read in the order-dual lattice.

        Acyclic cofibrations become acyclic fibrations and vice versa.
        """
        from .lattice import mirror_set

        dual = self.lattice.dual()
        return ModelStructure(mirror_set(self.W, dual), mirror_set(self.AC, dual))


# -- weak equivalences ------------------------------------------------------


def is_decomposable(lat: Lattice, S: ArrowSet) -> bool:
    """Every factor of every member is a member."""
    mask = S.mask
    for k in iter_bits(mask):
        if lat.interval_masks[k] & ~mask:
            return False
    return True


def factor_closure_mask(lat: Lattice, mask: int) -> int:
    """Smallest decomposable, composition-closed set containing ``mask``."""
    while True:
        grown = mask
        for k in iter_bits(mask):
            grown |= lat.interval_masks[k]
        grown = composition_closure_mask(lat, grown)
        if grown == mask:
            return mask
        mask = grown


def pullback_stable(lat: Lattice, W: ArrowSet, k: int) -> bool:
    return lat.pullback_masks[k] & ~W.mask == 0


def pushout_stable(lat: Lattice, W: ArrowSet, k: int) -> bool:
    return lat.pushout_masks[k] & ~W.mask == 0


def is_legal_w(lat: Lattice, W: ArrowSet) -> Verdict:
    """Whether ``W`` is the class of weak equivalences of some model structure.

    ``W`` must be composition-closed and decomposable, every short member must
    have all its pullbacks or all its pushouts in ``W``, and along every
    maximal chain of every member the pushout-stable edges must form a prefix
    that meets the pullback-stable suffix.
    """
    if composition_closure_mask(lat, W.mask) != W.mask:
        return Verdict(False, NOT_COMPOSITION_CLOSED)
    if not is_decomposable(lat, W):
        return Verdict(False, NOT_DECOMPOSABLE)
    ab = lat.arrow_bit
    push_ok, pull_ok = {}, {}
    for k in iter_bits(W.mask & lat.short_mask):
        push_ok[k] = pushout_stable(lat, W, k)
        pull_ok[k] = pullback_stable(lat, W, k)
        if not (push_ok[k] or pull_ok[k]):
            s, t = lat.arrows[k]
            return Verdict(False, SHORT_EDGE_NEITHER_STABLE, f"{lat.label(s)}->{lat.label(t)}")
    for s, t in W:
        for chain in _chains(lat, s, t):
            edges = [(ab[a][b]).bit_length() - 1 for a, b in zip(chain, chain[1:])]
            prefix = 0
            while prefix < len(edges) and push_ok[edges[prefix]]:
                prefix += 1
            # every edge after the pushout-stable prefix must be pullback-stable
            if not all(pull_ok[e] for e in edges[prefix:]):
                return Verdict(False, NO_SPLIT_INDEX, f"{lat.label(s)}->{lat.label(t)}")
    return OK


def _chains(lat: Lattice, s: int, t: int):
    cache = lat.__dict__.setdefault("_chain_cache", {})
    key = (s, t)
    if key not in cache:
        cache[key] = lat.maximal_chains(s, t)
    return cache[key]


def largest_cotransfer_within(lat: Lattice, W: ArrowSet) -> ArrowSet:
    """Largest co-transfer system inside a composition-closed ``W``.

    Greatest fixed point: drop members with a pushout outside the current set
    until nothing changes.
    """
    K = W.mask
    while True:
        keep = 0
        for k in iter_bits(K):
            if lat.pushout_masks[k] & ~K == 0:
                keep |= 1 << k
        if keep == K:
            break
        K = keep
    if composition_closure_mask(lat, K) != K:
        raise ConsistencyError("pushout-stable part of W is not composition-closed")
    return ArrowSet(lat, K)


def largest_transfer_within(lat: Lattice, W: ArrowSet) -> ArrowSet:
    """Largest transfer system inside a composition-closed ``W``."""
    K = W.mask
    while True:
        keep = 0
        for k in iter_bits(K):
            if lat.pullback_masks[k] & ~K == 0:
                keep |= 1 << k
        if keep == K:
            break
        K = keep
    if composition_closure_mask(lat, K) != K:
        raise ConsistencyError("pullback-stable part of W is not composition-closed")
    return ArrowSet(lat, K)


def t_min(lat: Lattice, W: ArrowSet) -> ArrowSet:
    """Minimal transfer system that can serve as ``AF`` for the legal ``W``."""
    verdict = is_legal_w(lat, W)
    if not verdict:
        raise IllegalWeakEquivalencesError(verdict.detail or "", code=verdict.reason)
    return _t_min(lat, W)


def _t_min(lat: Lattice, W: ArrowSet) -> ArrowSet:
    K = largest_cotransfer_within(lat, W)
    return rlp_set(lat, K) & W


def compose(first: ArrowSet, second: ArrowSet) -> ArrowSet:
    """All composites ``g . f`` with ``f`` in ``first`` and ``g`` in ``second``."""
    lat = first.lattice
    n = lat.size
    r1 = first.rows()
    r2 = second.rows()
    out = [0] * n
    for a in range(n):
        row = r2[a] | r1[a]
        for b in iter_bits(r1[a]):
            row |= r2[b]
        out[a] = row
    return ArrowSet(lat, mask_from_rows(lat, out))


def two_out_of_three_closure(S: ArrowSet) -> ArrowSet:
    """Close ``S`` under two-out-of-three over all composable pairs."""
    lat = S.lattice
    ab = lat.arrow_bit
    n = lat.size
    mask = S.mask

    def has(a, b):
        return a == b or bool(mask & ab[a][b])

    changed = True
    while changed:
        changed = False
        for a in range(n):
            for b in iter_bits(lat.leq_rows[a]):
                if b == a:
                    continue
                for c in iter_bits(lat.leq_rows[b]):
                    if c == b:
                        continue
                    x, y, z = has(a, b), has(b, c), has(a, c)
                    if x + y + z == 2:
                        mask |= ab[a][b] | ab[b][c] | ab[a][c]
                        changed = True
    return ArrowSet(lat, mask)


def has_two_out_of_three(S: ArrowSet) -> bool:
    return two_out_of_three_closure(S).mask == S.mask


# -- model structures ----------------------------------------------------------


class Classes(NamedTuple):
    C: ArrowSet
    AC: ArrowSet
    F: ArrowSet


def derive_classes(ms: ModelStructure) -> Classes:
    """Cofibrations, acyclic cofibrations and fibrations of ``ms``, cross-checked."""
    lat = ms.lattice
    C = llp_set(lat, ms.AF)
    AC = C & ms.W
    if not is_cotransfer_system(lat, AC):
        raise ConsistencyError("acyclic cofibrations are not a co-transfer system")
    F = rlp_set(lat, AC)
    if F & ms.W != ms.AF:
        raise ConsistencyError("AF differs from F intersected with W")
    if compose(AC, ms.AF) != ms.W:
        raise ConsistencyError("W differs from AF composed with AC")
    return Classes(C, AC, F)


def is_model_structure(lat: Lattice, W: ArrowSet, AF: ArrowSet) -> Verdict:
    """Check ``(W, AF)`` through legality of ``W`` and ``T_min(W) <= AF <= W``."""
    if not AF <= W:
        return Verdict(False, AF_NOT_IN_W)
    verdict = is_legal_w(lat, W)
    if not verdict:
        return verdict
    if not is_transfer_system(lat, AF):
        return Verdict(False, NOT_TRANSFER_SYSTEM)
    if not _t_min(lat, W) <= AF:
        return Verdict(False, TMIN_NOT_CONTAINED)
    return OK


def check_model_axioms(lat: Lattice, W: ArrowSet, AF: ArrowSet) -> Verdict:
    """Check ``(W, AF)`` directly against the model category axioms.

    In any model category the cofibrations are exactly the maps lifting
    against ``AF`` and the fibrations those lifting against ``AC``, so the
    classes are forced and only need checking: two-out-of-three for ``W``,
    ``AF = F & W``, the lifting axiom and both factorizations.  Limits and
    retract closure are automatic in a finite lattice.
    """
    if not has_two_out_of_three(W):
        return Verdict(False, NOT_TWO_OF_THREE)
    if not AF <= W:
        return Verdict(False, AF_NOT_IN_W)
    C = llp_set(lat, AF)
    AC = C & W
    F = rlp_set(lat, AC)
    if F & W != AF:
        return Verdict(False, AF_NOT_FIBRATIONS_IN_W)
    for cls in (C, F):
        if composition_closure_mask(lat, cls.mask) != cls.mask:
            return Verdict(False, NOT_COMPOSITION_CLOSED)
    for i in C:
        for p in AF:
            if not _lifts(lat, i, p):
                return Verdict(False, "NO_LIFT")
    for i in AC:
        for p in F:
            if not _lifts(lat, i, p):
                return Verdict(False, "NO_LIFT")
    for x in range(lat.size):
        for y in range(lat.size):
            if not lat.leq(x, y):
                continue
            up = [z for z in range(lat.size) if lat.leq(x, z) and lat.leq(z, y)]
            if not any((x, z) in C and (z, y) in AF for z in up):
                return Verdict(False, NO_FACTORIZATION, f"{lat.label(x)}->{lat.label(y)} (C, AF)")
            if not any((x, z) in AC and (z, y) in F for z in up):
                return Verdict(False, NO_FACTORIZATION, f"{lat.label(x)}->{lat.label(y)} (AC, F)")
    return OK


def _lifts(lat, i, p):
    (a, b), (x, y) = i, p
    return not (lat.leq(a, x) and lat.leq(b, y) and not lat.leq(b, x))


def enumerate_weak_equivalences(lat: Lattice, *, limit: int | None = None, force: bool = False) -> list[ArrowSet]:
    """All legal weak-equivalence classes, sorted by bit pattern."""
    check_size(lat, limit, force)
    out = []
    for mask in closed_sets(lat, lambda m: factor_closure_mask(lat, m)):
        W = ArrowSet(lat, mask)
        if is_legal_w(lat, W):
            out.append(W)
    out.sort(key=lambda w: w.mask)
    return out


def iter_model_structures(lat: Lattice, *, limit: int | None = None, force: bool = False) -> Iterator[ModelStructure]:
    for W in enumerate_weak_equivalences(lat, limit=limit, force=force):
        low = _t_min(lat, W)
        for T in transfer_systems_between(lat, low, W):
            yield ModelStructure(W, T)


def enumerate_model_structures(lat: Lattice, *, limit: int | None = None, force: bool = False) -> list[ModelStructure]:
    """Every model structure on ``lat``, sorted by ``(W, AF)`` bit patterns."""
    return sorted(iter_model_structures(lat, limit=limit, force=force), key=lambda ms: ms.key)


def transfer_closure(lat: Lattice, M: ArrowSet) -> ArrowSet:
    return ArrowSet(lat, transfer_closure_mask(lat, M.mask))
