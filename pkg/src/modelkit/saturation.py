"""Saturated transfer systems, the grid bijection, zigzags and reachability.

A transfer system is saturated when ``x -> y`` and ``x -> z`` in ``T`` force
``y -> z`` in ``T``.  On a grid ``[m] x [n+1]`` a saturated system is
determined by its short arrows, and it decomposes into data on a smaller grid
(see :class:`SaturatedGridDatum`).
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from .errors import (
    InternalDisagreementError,
    InvalidDatumError,
    NoLocalizationError,
    NotGridError,
    PreconditionError,
    UnsaturatedError,
)
from .lattice import Arrow, ArrowSet, Lattice, iter_bits
from .localization import (
    LocalizationSequence,
    LocalizationStep,
    left_localize,
    localize,
    right_localize,
)
from .model import ModelStructure, enumerate_model_structures
from .transfer import check_size, enumerate_transfer_systems, transfer_closure


def is_saturated(T: ArrowSet) -> bool:
    """Two-out-of-three for a transfer system: ``x->y, x->z`` give ``y->z``."""
    lat = T.lattice
    rows = T.rows()
    for x in range(lat.size):
        out = rows[x]
        for y in iter_bits(out):
            if out & lat.leq_rows[y] & ~rows[y] & ~(1 << y):
                return False
    return True


def enumerate_saturated(lat: Lattice, **kw) -> list[ArrowSet]:
    return [T for T in enumerate_transfer_systems(lat, **kw) if is_saturated(T)]


# -- grid helpers ------------------------------------------------------------


def _require_grid(lat: Lattice) -> tuple[int, int]:
    if not lat.is_grid:
        raise NotGridError(f"{lat!r} is not a grid")
    return lat.grid_shape


def _short_sets(lat: Lattice):
    """Vertical and horizontal short edges of a grid, keyed by lower corner."""
    m, n = lat.grid_shape
    vert = {(i, j): lat.arrow((i, j), (i, j + 1)) for i in range(m + 1) for j in range(n)}
    horiz = {(i, j): lat.arrow((i, j), (i + 1, j)) for i in range(m) for j in range(n + 1)}
    return vert, horiz


def grid_saturated_check(lat: Lattice, S: ArrowSet) -> bool:
    """Whether a set of short grid arrows generates a saturated transfer system.

    ``S`` must be closed under pullback within the short arrows and satisfy
    three-out-of-four on every unit square.
    """
    m, n = _require_grid(lat)
    if S.mask & ~lat.short_mask:
        raise PreconditionError("expected short arrows only")
    for k in iter_bits(S.mask):
        if lat.pullback_masks[k] & lat.short_mask & ~S.mask:
            return False
    vert, horiz = _short_sets(lat)
    for i in range(m):
        for j in range(n):
            sides = (horiz[i, j] in S, vert[i + 1, j] in S, vert[i, j] in S, horiz[i, j + 1] in S)
            if sum(sides) == 3:
                return False
    T = transfer_closure(lat, S)
    if not is_saturated(T) or T.short() != S:
        raise InternalDisagreementError("short-arrow criterion disagrees with the saturation predicate")
    return True


# -- the smaller <-> bigger bijection ----------------------------------------


@dataclass(frozen=True)
class SaturatedGridDatum:
    """Data on a smaller grid describing a saturated system on ``[m] x [n+1]``.

    ``A`` lists the leftmost columns of the blocks of columns that are joined
    by horizontal arrows through rows ``0..n``; ``inner`` is the collapsed
    saturated system on ``A x [n]``.  The top row is described by
    ``top_verticals`` (columns ``0..a-1`` carry the vertical arrow into row
    ``n+1``) and ``top_joins`` (column gaps ``i`` with ``(i,n+1)->(i+1,n+1)``).
    Leaving either of these as ``None`` selects the standard choice: ``a`` is
    the least column outside ``A`` and every optional top join is present.
    """

    m: int
    n: int
    A: tuple[int, ...]
    inner: ArrowSet
    top_verticals: int | None = None
    top_joins: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "A", tuple(sorted(self.A)))
        if self.top_verticals is None:
            missing = [i for i in range(self.m + 1) if i not in self.A]
            object.__setattr__(self, "top_verticals", missing[0] if missing else self.m + 1)
        if self.top_joins is None:
            forced, free = self._top_options()
            object.__setattr__(self, "top_joins", tuple(sorted(forced | free)))
        else:
            object.__setattr__(self, "top_joins", tuple(sorted(self.top_joins)))

    def blocks(self) -> list[range]:
        ends = list(self.A[1:]) + [self.m + 1]
        return [range(a, e) for a, e in zip(self.A, ends)]

    def iota(self, k: int) -> int:
        """Column carrying block ``k`` (its rightmost column)."""
        return self.blocks()[k][-1]

    def joined(self) -> set[int]:
        """Column gaps ``i`` inside a block."""
        return {i for b in self.blocks() for i in b[:-1]}

    def _top_options(self) -> tuple[set[int], set[int]]:
        a = self.top_verticals
        joined = self.joined()
        forced = {i for i in joined if i + 1 < a}
        free = {i for i in joined if i >= a}
        return forced, free

    def validate(self) -> None:
        m, n, A = self.m, self.n, self.A
        if m < 0 or n < 0:
            raise InvalidDatumError("grid dimensions must be non-negative")
        if not A or A[0] != 0 or len(set(A)) != len(A) or A[-1] > m:
            raise InvalidDatumError(f"A must be a subset of 0..{m} containing 0, got {A}")
        lat = self.inner.lattice
        if not lat.is_grid or lat.grid_shape != (len(A) - 1, n):
            raise InvalidDatumError(f"inner system must live on [{len(A) - 1}]x[{n}]")
        if transfer_closure(lat, self.inner) != self.inner or not is_saturated(self.inner):
            raise InvalidDatumError("inner system is not a saturated transfer system")
        for k in range(len(A) - 1):
            if lat.arrow((k, n), (k + 1, n)) in self.inner:
                raise InvalidDatumError(f"blocks {A[k]} and {A[k + 1]} are joined at full height")
        if not 0 <= self.top_verticals <= m + 1:
            raise InvalidDatumError("top_verticals out of range")
        forced, free = self._top_options()
        joins = set(self.top_joins)
        if not forced <= joins or not joins <= forced | free:
            raise InvalidDatumError(f"top joins {sorted(joins)} violate the saturation constraints")

    def key(self):
        return self.m, self.n, self.A, self.inner.mask, self.top_verticals, self.top_joins


def saturated_smaller_to_bigger(datum: SaturatedGridDatum) -> ArrowSet:
    """Saturated transfer system on ``[m] x [n+1]`` described by ``datum``."""
    datum.validate()
    m, n, A = datum.m, datum.n, datum.A
    big = Lattice.grid(m, n + 1)
    small = datum.inner.lattice
    pairs = []
    for k, block in enumerate(datum.blocks()):
        for j in range(n):
            if small.arrow((k, j), (k, j + 1)) in datum.inner:
                pairs += [((i, j), (i, j + 1)) for i in block]
        for i in block[:-1]:
            pairs += [((i, j), (i + 1, j)) for j in range(n + 1)]
        if k + 1 < len(A):
            for j in range(n + 1):
                if small.arrow((k, j), (k + 1, j)) in datum.inner:
                    pairs.append(((datum.iota(k), j), (A[k + 1], j)))
    pairs += [((i, n), (i, n + 1)) for i in range(datum.top_verticals)]
    pairs += [((i, n + 1), (i + 1, n + 1)) for i in datum.top_joins]
    S = ArrowSet.from_pairs(big, pairs)
    T = transfer_closure(big, S)
    if T.short() != S or not is_saturated(T):
        raise InternalDisagreementError("assembled short arrows do not form a saturated system")
    return T


def saturated_bigger_to_smaller(T: ArrowSet) -> SaturatedGridDatum:
    """Inverse of :func:`saturated_smaller_to_bigger`."""
    lat = T.lattice
    m, rows = _require_grid(lat)
    if rows < 1:
        raise PreconditionError("need at least two rows")
    if transfer_closure(lat, T) != T:
        raise PreconditionError("not a transfer system")
    if not is_saturated(T):
        raise UnsaturatedError("transfer system is not saturated")
    n = rows - 1

    def has(s, t):
        return lat.arrow(s, t) in T

    A = [0] + [i + 1 for i in range(m) if not has((i, n), (i + 1, n))]
    small = Lattice.grid(len(A) - 1, n)
    ends = A[1:] + [m + 1]
    pairs = []
    for k, a in enumerate(A):
        pairs += [((k, j), (k, j + 1)) for j in range(n) if has((a, j), (a, j + 1))]
        if k + 1 < len(A):
            pairs += [((k, j), (k + 1, j)) for j in range(n + 1) if has((ends[k] - 1, j), (A[k + 1], j))]
    inner = transfer_closure(small, ArrowSet.from_pairs(small, pairs))
    a = 0
    while a <= m and has((a, n), (a, n + 1)):
        a += 1
    joins = tuple(i for i in range(m) if has((i, n + 1), (i + 1, n + 1)))
    datum = SaturatedGridDatum(m, n, tuple(A), inner, a, joins)
    datum.validate()
    return datum


def enumerate_saturated_data(m: int, n: int) -> list[SaturatedGridDatum]:
    """Every valid datum for ``[m] x [n+1]``, built without the big grid."""
    out = []
    for r in range(m + 1):
        for rest in itertools.combinations(range(1, m + 1), r):
            A = (0,) + rest
            small = Lattice.grid(len(A) - 1, n)
            tops = [small.arrow((k, n), (k + 1, n)) for k in range(len(A) - 1)]
            for inner in enumerate_saturated(small, force=True):
                if any(t in inner for t in tops):
                    continue
                for a in range(m + 2):
                    base = SaturatedGridDatum(m, n, A, inner, a, ())
                    forced, free = base._top_options()
                    for c in range(len(free) + 1):
                        for extra in itertools.combinations(sorted(free), c):
                            out.append(SaturatedGridDatum(m, n, A, inner, a, tuple(sorted(forced | set(extra)))))
    return out


# -- zigzags -------------------------------------------------------------------


def _right_order(T: ArrowSet) -> list[Arrow]:
    """Short arrows of a saturated grid system, in recursive block order.

    Arrows of the collapsed system come first (moved along ``iota``), then
    the top verticals, the top joins and the arrows thickening each block.
    """
    lat = T.lattice
    m, rows = lat.grid_shape
    if rows == 0:
        return list(T.short())
    d = saturated_bigger_to_smaller(T)
    n = d.n
    small = d.inner.lattice
    order = []
    for s, t in _right_order(d.inner):
        (k, j), (k2, j2) = small.label(s), small.label(t)
        target = (d.iota(k), j2) if k2 == k else (d.A[k2], j2)
        order.append(lat.arrow((d.iota(k), j), target))
    order += [lat.arrow((i, n), (i, n + 1)) for i in range(d.top_verticals)]
    order += [lat.arrow((i, n + 1), (i + 1, n + 1)) for i in d.top_joins]
    for block in d.blocks():
        for i in block[:-1]:
            order += [lat.arrow((i, j), (i + 1, j)) for j in range(n + 1)]
    seen = set(order)
    order += [a for a in T.short() if a not in seen]
    return order


def zigzag_realize(ms: ModelStructure) -> LocalizationSequence:
    """Localization steps leading from the trivial model structure to ``ms``.

    Right localizations at the short acyclic fibrations reach ``(AF, AF)``;
    left localizations at the remaining short weak equivalences then reach
    ``ms``.  The sequence is replayed before it is returned.
    """
    lat = ms.lattice
    _require_grid(lat)
    if not is_saturated(ms.AF):
        raise UnsaturatedError("acyclic fibrations are not saturated")
    base = ModelStructure.trivial(lat)
    cur = base
    steps: list[LocalizationStep] = []
    for f in _right_order(ms.AF):
        if f in cur.W:
            continue
        cur = right_localize(cur, f)
        steps.append(LocalizationStep("right", f))
    if cur.key != (ms.AF.mask, ms.AF.mask):
        raise InternalDisagreementError("right localizations overshot the acyclic fibrations")
    pending = [f for f in ms.W.short() if f not in cur.W]
    while pending:
        for f in pending:
            try:
                nxt = left_localize(cur, f)
            except NoLocalizationError:
                continue
            if nxt.W <= ms.W:
                cur = nxt
                steps.append(LocalizationStep("left", f))
                break
        else:
            raise InternalDisagreementError("no admissible left localization towards the target")
        pending = [f for f in ms.W.short() if f not in cur.W]
    seq = LocalizationSequence(base, tuple(steps))
    if seq.replay().key != ms.key:
        raise InternalDisagreementError("zigzag replay does not reproduce the model structure")
    return seq


# -- reachability ------------------------------------------------------------------


@dataclass
class ReachabilityGraph:
    """Localization graph over every model structure of a lattice."""

    lattice: Lattice
    nodes: list[ModelStructure]
    edges: list[tuple[str, str, LocalizationStep]]
    root: str
    reachable: set[str] = field(default_factory=set)
    missing: int = 0  # localizations that do not exist

    @property
    def unreachable(self) -> list[ModelStructure]:
        return [ms for ms in self.nodes if ms.ident not in self.reachable]

    def without_incoming(self) -> list[ModelStructure]:
        """Model structures that are not a localization of any other one."""
        hit = {b for a, b, _ in self.edges if a != b}
        return [ms for ms in self.nodes if ms.ident not in hit]

    def to_dot(self) -> str:
        lat = self.lattice
        lines = ["digraph localizations {"]
        for ms in self.nodes:
            style = "" if ms.ident in self.reachable else ", style=dashed"
            lines.append(f'  "{ms.ident}" [label="{ms.ident}"{style}];')
        for a, b, step in self.edges:
            s, t = (lat.label(x) for x in step.arrow)
            color = "blue" if step.side == "right" else "grey"
            lines.append(f'  "{a}" -> "{b}" [side={step.side}, arrow="{s}->{t}", color={color}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def reachability_graph(lat: Lattice, *, limit: int | None = None, force: bool = False) -> ReachabilityGraph:
    """Left and right localizations at every admissible short edge.

    Edges are computed from every enumerated model structure; reachability
    is a breadth-first search from the trivial one.
    """
    check_size(lat, limit, force)
    nodes = enumerate_model_structures(lat, force=True)
    known = {ms.ident for ms in nodes}
    edges = []
    missing = 0
    for ms in nodes:
        for k in iter_bits(lat.short_mask & ~ms.W.mask):
            f = lat.arrows[k]
            for side in ("right", "left"):
                try:
                    out = localize(ms, side, f)
                except NoLocalizationError:
                    missing += 1
                    continue
                if out.ident not in known:
                    raise InternalDisagreementError(f"localization left the census: {out.ident}")
                edges.append((ms.ident, out.ident, LocalizationStep(side, f)))
    root = ModelStructure.trivial(lat).ident
    adj: dict[str, list[str]] = {}
    for a, b, _ in edges:
        adj.setdefault(a, []).append(b)
    seen = {root}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in adj.get(x, ()):
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return ReachabilityGraph(lat, nodes, edges, root, seen, missing)

