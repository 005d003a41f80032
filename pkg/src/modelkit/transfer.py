"""Transfer systems and co-transfer systems.

A transfer system is a wide subcategory closed under pullback along any arrow;
a co-transfer system is closed under pushout instead.  Closures are computed on
the integer masks of :class:`~modelkit.lattice.ArrowSet`.
"""

from __future__ import annotations

import os
from typing import Callable, Iterator

from .errors import SizeGuardError
from .lattice import ArrowSet, Lattice, iter_bits, mask_from_rows, rows_from_mask

DEFAULT_MAX_ELEMENTS = 16


def max_elements() -> int:
    """Enumeration size guard, overridable through ``MODELKIT_MAX_ELEMENTS``."""
    raw = os.environ.get("MODELKIT_MAX_ELEMENTS")
    return int(raw) if raw else DEFAULT_MAX_ELEMENTS


def check_size(lat: Lattice, limit: int | None = None, force: bool = False) -> None:
    limit = max_elements() if limit is None else limit
    if not force and lat.size > limit:
        raise SizeGuardError(f"lattice has {lat.size} elements, enumeration limit is {limit}")


# -- mask-level closure kernels ---------------------------------------------


def composition_closure_mask(lat: Lattice, mask: int) -> int:
    rows = rows_from_mask(lat, mask)
    n = lat.size
    for k in range(n):
        bk, rk = 1 << k, rows[k]
        if not rk:
            continue
        for i in range(n):
            if rows[i] & bk:
                rows[i] |= rk
    return mask_from_rows(lat, rows)


def _spread(masks, mask: int) -> int:
    out = mask
    for k in iter_bits(mask):
        out |= masks[k]
    return out


def restriction_closure_mask(lat: Lattice, mask: int) -> int:
    return _spread(lat.pullback_masks, mask)


def extension_closure_mask(lat: Lattice, mask: int) -> int:
    return _spread(lat.pushout_masks, mask)


def transfer_closure_mask(lat: Lattice, mask: int) -> int:
    while True:
        new = composition_closure_mask(lat, restriction_closure_mask(lat, mask))
        if new == mask:
            return mask
        mask = new


def cotransfer_closure_mask(lat: Lattice, mask: int) -> int:
    while True:
        new = composition_closure_mask(lat, extension_closure_mask(lat, mask))
        if new == mask:
            return mask
        mask = new


# -- public operations -------------------------------------------------------


def transfer_closure(lat: Lattice, M: ArrowSet) -> ArrowSet:
    """Smallest transfer system containing ``M``."""
    return ArrowSet(lat, transfer_closure_mask(lat, M.mask))


def cotransfer_closure(lat: Lattice, M: ArrowSet) -> ArrowSet:
    """Smallest co-transfer system containing ``M``."""
    return ArrowSet(lat, cotransfer_closure_mask(lat, M.mask))


def transfer_closure_two_phase(lat: Lattice, M: ArrowSet) -> ArrowSet:
    """All restrictions of members of ``M``, then all composites of those."""
    return ArrowSet(lat, composition_closure_mask(lat, restriction_closure_mask(lat, M.mask)))


def is_composition_closed(S: ArrowSet) -> bool:
    return composition_closure_mask(S.lattice, S.mask) == S.mask


def is_transfer_system(lat: Lattice, S: ArrowSet) -> bool:
    return transfer_closure_mask(lat, S.mask) == S.mask


def is_cotransfer_system(lat: Lattice, S: ArrowSet) -> bool:
    return cotransfer_closure_mask(lat, S.mask) == S.mask


def closed_sets(
    lat: Lattice,
    closure: Callable[[int], int],
    start: int = 0,
    limit: int | None = None,
) -> Iterator[int]:
    """Every closed mask ``C`` with ``start <= C <= limit``, each exactly once.

    Close-by-one search: extend by the next arrow, close, and keep the branch
    only if the closure adds no arrow of smaller index than the one added.
    ``start`` must already be closed.
    """
    limit = lat.full_mask if limit is None else limit
    count = len(lat.arrows)
    below = [(1 << j) - 1 for j in range(count)]

    def extend(current: int, first: int):
        yield current
        for j in range(first, count):
            bit = 1 << j
            if current & bit or not limit & bit:
                continue
            grown = closure(current | bit)
            if grown & ~limit or grown & ~current & below[j]:
                continue
            yield from extend(grown, j + 1)

    yield from extend(start, 0)


def enumerate_transfer_systems(lat: Lattice, *, limit: int | None = None, force: bool = False) -> list[ArrowSet]:
    """All transfer systems on ``lat``, sorted by membership bit pattern."""
    check_size(lat, limit, force)
    masks = sorted(closed_sets(lat, lambda m: transfer_closure_mask(lat, m)))
    return [ArrowSet(lat, m) for m in masks]


def enumerate_cotransfer_systems(lat: Lattice, *, limit: int | None = None, force: bool = False) -> list[ArrowSet]:
    check_size(lat, limit, force)
    masks = sorted(closed_sets(lat, lambda m: cotransfer_closure_mask(lat, m)))
    return [ArrowSet(lat, m) for m in masks]


def transfer_systems_between(lat: Lattice, lower: ArrowSet, upper: ArrowSet) -> list[ArrowSet]:
    """Transfer systems ``T`` with ``lower <= T <= upper`` (``lower`` closed)."""
    masks = sorted(closed_sets(lat, lambda m: transfer_closure_mask(lat, m), lower.mask, upper.mask))
    return [ArrowSet(lat, m) for m in masks]
