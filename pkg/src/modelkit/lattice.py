"""Finite lattices, arrows and arrow sets.

Elements are integers ``0..size-1`` numbered along a linear extension of the
order (bottom first).  Grids ``[m] x [n]`` number the coordinate ``(x, y)`` as
``x * (n + 1) + y``, which is row-major order of the coordinate tuples.

Relations are stored as bit rows: ``leq_rows[i]`` has bit ``j`` set iff
``i <= j``.  An :class:`ArrowSet` is a single integer mask over the list of
non-identity arrows ``Lattice.arrows``; identities are implicit members.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, NamedTuple

from .errors import ArrowError, ArrowMismatchError, LatticeError


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Arrow(NamedTuple):
    source: int
    target: int

    @property
    def is_identity(self) -> bool:
        return self.source == self.target


class Lattice:
    """An immutable finite lattice.

    Use :meth:`chain`, :meth:`grid` or :meth:`explicit` to build one.  Only
    explicit lattices are validated; the other constructors are correct by
    construction.
    """

    def __init__(self, leq_rows, labels=None, tag=("explicit",)):
        self.size = len(leq_rows)
        self.leq_rows = tuple(leq_rows)
        self.labels = tuple(labels) if labels is not None else tuple(range(self.size))
        self.tag = tuple(tag)
        n = self.size
        geq = [0] * n
        for i in range(n):
            for j in iter_bits(self.leq_rows[i]):
                geq[j] |= 1 << i
        self.geq_rows = tuple(geq)
        self._label_index = {lab: i for i, lab in enumerate(self.labels)}

        self.arrows: tuple[Arrow, ...] = tuple(
            Arrow(s, t) for s in range(n) for t in iter_bits(self.leq_rows[s]) if s != t
        )
        self.arrow_index = {a: k for k, a in enumerate(self.arrows)}
        self.full_mask = (1 << len(self.arrows)) - 1
        # arrow_bit[s][t] is the ArrowSet bit of s -> t, 0 for identities/non-arrows
        self.arrow_bit = [[0] * n for _ in range(n)]
        for k, (s, t) in enumerate(self.arrows):
            self.arrow_bit[s][t] = 1 << k

        self.meet_table = self._bound_table(self.geq_rows, "meet")
        self.join_table = self._bound_table(self.leq_rows, "join")
        bottoms = [i for i in range(n) if self.leq_rows[i] == (1 << n) - 1]
        tops = [i for i in range(n) if self.geq_rows[i] == (1 << n) - 1]
        if len(bottoms) != 1 or len(tops) != 1:
            raise LatticeError("lattice needs a unique bottom and top")
        self.bottom, self.top = bottoms[0], tops[0]
        self._build_arrow_tables()

    # -- construction -------------------------------------------------------

    @staticmethod
    @lru_cache(maxsize=None)
    def chain(n: int) -> "Lattice":
        """The total order ``[n] = {0 < 1 < ... < n}``."""
        if n < 0:
            raise LatticeError("chain length must be >= 0")
        size = n + 1
        rows = [((1 << size) - 1) ^ ((1 << i) - 1) for i in range(size)]
        return Lattice(rows, tag=("chain", n))

    @staticmethod
    @lru_cache(maxsize=None)
    def grid(m: int, n: int) -> "Lattice":
        """The product ``[m] x [n]`` with coordinates ``(x, y)``."""
        if m < 0 or n < 0:
            raise LatticeError("grid dimensions must be >= 0")
        coords = [(x, y) for x in range(m + 1) for y in range(n + 1)]
        rows = []
        for x, y in coords:
            row = 0
            for k, (u, v) in enumerate(coords):
                if x <= u and y <= v:
                    row |= 1 << k
            rows.append(row)
        return Lattice(rows, labels=coords, tag=("grid", m, n))

    @staticmethod
    def explicit(size: int, pairs: Iterable[tuple[int, int]], labels=None) -> "Lattice":
        """Build and validate a lattice from ``i <= j`` pairs.

        Reflexive pairs are added automatically.  The relation must already be
        transitive and antisymmetric, and element ids must form a linear
        extension (``i <= j`` implies ``i <= j`` as integers).
        """
        if size < 1:
            raise LatticeError("a lattice needs at least one element")
        rows = [1 << i for i in range(size)]
        for i, j in pairs:
            if not (0 <= i < size and 0 <= j < size):
                raise LatticeError(f"pair {(i, j)} out of range")
            rows[i] |= 1 << j
        for i in range(size):
            for j in iter_bits(rows[i]):
                if j < i:
                    if rows[j] >> i & 1:
                        raise LatticeError(f"relation is not antisymmetric at {(i, j)}")
                    raise LatticeError("element ids must follow a linear extension of the order")
                if rows[j] & ~rows[i]:
                    raise LatticeError(f"relation is not transitive at {(i, j)}")
        return Lattice(rows, labels=labels, tag=("explicit",))

    def _bound_table(self, side_rows, name):
        # side_rows[i]: elements below i for meets, above i for joins
        n = self.size
        table = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                common = side_rows[i] & side_rows[j]
                best = [b for b in iter_bits(common) if side_rows[b] & common == common]
                if len(best) != 1:
                    raise LatticeError(
                        f"elements {self.labels[i]} and {self.labels[j]} have no unique {name}"
                    )
                table[i][j] = table[j][i] = best[0]
        return tuple(tuple(r) for r in table)

    def _build_arrow_tables(self):
        n = self.size
        arrows = self.arrows
        ab = self.arrow_bit
        meet, join = self.meet_table, self.join_table
        pull, push, interval = [], [], []
        for s, t in arrows:
            # pullbacks along every l -> t, pushouts along every s -> c
            p = 0
            for l in iter_bits(self.geq_rows[t]):
                p |= ab[meet[s][l]][l]
            pull.append(p)
            q = 0
            for c in iter_bits(self.leq_rows[s]):
                q |= ab[c][join[t][c]]
            push.append(q)
            inner = self.leq_rows[s] & self.geq_rows[t]
            m = 0
            for u in iter_bits(inner):
                for v in iter_bits(self.leq_rows[u] & inner):
                    m |= ab[u][v]
            interval.append(m)
        self.pullback_masks = tuple(pull)
        self.pushout_masks = tuple(push)
        self.interval_masks = tuple(interval)
        # lift[k]: arrows g with arrows[k] lifting against g
        leq = self.leq_rows
        rlp_of, llp_of = [], [0] * len(arrows)
        for k, (a, b) in enumerate(arrows):
            m = 0
            for g, (x, y) in enumerate(arrows):
                if not (leq[a] >> x & 1 and leq[b] >> y & 1 and not leq[b] >> x & 1):
                    m |= 1 << g
                    llp_of[g] |= 1 << k
            rlp_of.append(m)
        self.rlp_masks = tuple(rlp_of)
        self.llp_masks = tuple(llp_of)
        covers = 0
        for k, (s, t) in enumerate(arrows):
            between = leq[s] & self.geq_rows[t] & ~(1 << s) & ~(1 << t)
            if not between:
                covers |= 1 << k
        self.short_mask = covers

    # -- basic queries ------------------------------------------------------

    def __repr__(self):
        kind = self.tag[0]
        if kind == "chain":
            return f"Lattice.chain({self.tag[1]})"
        if kind == "grid":
            return f"Lattice.grid({self.tag[1]}, {self.tag[2]})"
        return f"Lattice.explicit(size={self.size})"

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.leq_rows == other.leq_rows and self.tag == other.tag

    def __hash__(self):
        return hash((self.leq_rows, self.tag))

    @property
    def is_grid(self) -> bool:
        return self.tag[0] in ("grid", "chain")

    @property
    def grid_shape(self) -> tuple[int, int]:
        """``(m, n)`` for ``[m] x [n]``; a chain ``[n]`` is ``[n] x [0]``."""
        if self.tag[0] == "grid":
            return self.tag[1], self.tag[2]
        if self.tag[0] == "chain":
            return self.tag[1], 0
        raise LatticeError("not a grid lattice")

    def element(self, x) -> int:
        """Resolve an element id or a label (e.g. a grid coordinate)."""
        if isinstance(x, (list, tuple)):
            key = tuple(x)
            if self.tag[0] == "chain" and len(key) == 2 and key[1] == 0:
                key = key[0]
            try:
                return self._label_index[key]
            except KeyError:
                raise ArrowError(f"unknown element {x!r}") from None
        if isinstance(x, int) and 0 <= x < self.size:
            return x
        raise ArrowError(f"unknown element {x!r}")

    def leq(self, x: int, y: int) -> bool:
        return bool(self.leq_rows[x] >> y & 1)

    def arrow(self, source, target) -> Arrow:
        s, t = self.element(source), self.element(target)
        if not self.leq(s, t):
            raise ArrowError(f"{self.labels[s]} is not <= {self.labels[t]}")
        return Arrow(s, t)

    def label(self, x: int):
        return self.labels[x]

    def dual(self) -> "Lattice":
        """Order dual, with element ``x`` renamed ``size - 1 - x``.

        For chains and grids the result is the same lattice again (the renaming
        is the point reflection of the grid).
        """
        if self.tag[0] == "chain":
            return Lattice.chain(self.tag[1])
        if self.tag[0] == "grid":
            return Lattice.grid(self.tag[1], self.tag[2])
        n = self.size
        rows = [0] * n
        for x in range(n):
            for y in iter_bits(self.leq_rows[x]):
                rows[n - 1 - y] |= 1 << (n - 1 - x)
        return Lattice(rows, labels=[("op", lab) for lab in reversed(self.labels)], tag=("explicit",))

    def mirror_element(self, x: int) -> int:
        return self.size - 1 - x

    def mirror_arrow(self, a: Arrow) -> Arrow:
        return Arrow(self.size - 1 - a.target, self.size - 1 - a.source)

    # -- order calculus -----------------------------------------------------

    def meet(self, x, y) -> int:
        return self.meet_table[self.element(x)][self.element(y)]

    def join(self, x, y) -> int:
        return self.join_table[self.element(x)][self.element(y)]

    def short_edges(self) -> "ArrowSet":
        """All covering pairs ``x < y`` with nothing strictly between."""
        return ArrowSet(self, self.short_mask)

    def is_short(self, a: Arrow) -> bool:
        return bool(self.arrow_bit[a.source][a.target] & self.short_mask)

    def maximal_chains(self, x: int, y: int) -> list[list[int]]:
        """All maximal chains ``x = c0 < c1 < ... < ck = y`` (as element lists)."""
        if not self.leq(x, y):
            return []
        if x == y:
            return [[x]]
        out = []
        for k in iter_bits(self.short_mask):
            s, t = self.arrows[k]
            if s == x and self.leq(t, y):
                out.extend([x] + rest for rest in self.maximal_chains(t, y))
        return out


def pullback_arrow(lat: Lattice, f: Arrow, g: Arrow) -> Arrow:
    """Pullback of ``f = (k -> h)`` along ``g = (l -> h)``: ``(k meet l -> l)``."""
    if f.target != g.target:
        raise ArrowMismatchError("pullback needs arrows with a common target")
    return Arrow(lat.meet_table[f.source][g.source], g.source)


def pushout_arrow(lat: Lattice, f: Arrow, g: Arrow) -> Arrow:
    """Pushout of ``f = (a -> b)`` along ``g = (a -> c)``: ``(c -> b join c)``."""
    if f.source != g.source:
        raise ArrowMismatchError("pushout needs arrows with a common source")
    return Arrow(g.target, lat.join_table[f.target][g.target])


def lifts_against(lat: Lattice, i: Arrow, p: Arrow) -> bool:
    """``i`` has the left lifting property against ``p``.

    A square from ``i = (a -> b)`` to ``p = (x -> y)`` exists iff ``a <= x``
    and ``b <= y``; it has a diagonal iff ``b <= x``.
    """
    a, b = i
    x, y = p
    return not (lat.leq(a, x) and lat.leq(b, y) and not lat.leq(b, x))


class ArrowSet:
    """A set of arrows of a lattice, identities implicitly included."""

    __slots__ = ("lattice", "mask")

    def __init__(self, lattice: Lattice, mask: int = 0):
        self.lattice = lattice
        self.mask = mask

    @classmethod
    def from_pairs(cls, lattice: Lattice, pairs) -> "ArrowSet":
        mask = 0
        for pair in pairs:
            a = pair if isinstance(pair, Arrow) else lattice.arrow(*pair)
            if not lattice.leq(a.source, a.target):
                raise ArrowError(f"{a} is not an arrow")
            mask |= lattice.arrow_bit[a.source][a.target]
        return cls(lattice, mask)

    @classmethod
    def identities(cls, lattice: Lattice) -> "ArrowSet":
        return cls(lattice, 0)

    @classmethod
    def all(cls, lattice: Lattice) -> "ArrowSet":
        return cls(lattice, lattice.full_mask)

    def __contains__(self, a) -> bool:
        s, t = a
        if s == t:
            return True
        return bool(self.mask & self.lattice.arrow_bit[s][t])

    def __iter__(self) -> Iterator[Arrow]:
        arrows = self.lattice.arrows
        for k in iter_bits(self.mask):
            yield arrows[k]

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __bool__(self):
        return True

    def _check(self, other):
        if not isinstance(other, ArrowSet):
            return NotImplemented
        if other.lattice is not self.lattice and other.lattice != self.lattice:
            raise ArrowMismatchError("arrow sets live on different lattices")
        return other

    def __or__(self, other):
        self._check(other)
        return ArrowSet(self.lattice, self.mask | other.mask)

    def __and__(self, other):
        self._check(other)
        return ArrowSet(self.lattice, self.mask & other.mask)

    def __sub__(self, other):
        self._check(other)
        return ArrowSet(self.lattice, self.mask & ~other.mask)

    def __le__(self, other):
        self._check(other)
        return self.mask & ~other.mask == 0

    def __lt__(self, other):
        return self <= other and self.mask != other.mask

    def __ge__(self, other):
        return other <= self

    def __eq__(self, other):
        if not isinstance(other, ArrowSet):
            return NotImplemented
        return self.mask == other.mask and self.lattice == other.lattice

    def __hash__(self):
        return hash(self.mask)

    def __repr__(self):
        lab = self.lattice.labels
        inner = ", ".join(f"{lab[s]}->{lab[t]}" for s, t in self)
        return f"ArrowSet({{{inner}}})"

    def pairs(self) -> list[tuple[int, int]]:
        return [tuple(a) for a in self]

    def rows(self) -> list[int]:
        """Bit rows of the non-identity members, indexed by source."""
        rows = [0] * self.lattice.size
        for s, t in self:
            rows[s] |= 1 << t
        return rows

    def short(self) -> "ArrowSet":
        return ArrowSet(self.lattice, self.mask & self.lattice.short_mask)


def mask_from_rows(lat: Lattice, rows) -> int:
    ab = lat.arrow_bit
    mask = 0
    for s, row in enumerate(rows):
        for t in iter_bits(row & ~(1 << s)):
            mask |= ab[s][t]
    return mask


def rows_from_mask(lat: Lattice, mask: int) -> list[int]:
    rows = [0] * lat.size
    arrows = lat.arrows
    for k in iter_bits(mask):
        s, t = arrows[k]
        rows[s] |= 1 << t
    return rows


def rlp_set(lat: Lattice, S: ArrowSet) -> ArrowSet:
    """Arrows with the right lifting property against every member of ``S``."""
    m = lat.full_mask
    for k in iter_bits(S.mask):
        m &= lat.rlp_masks[k]
    return ArrowSet(lat, m)


def llp_set(lat: Lattice, S: ArrowSet) -> ArrowSet:
    """Arrows with the left lifting property against every member of ``S``."""
    m = lat.full_mask
    for k in iter_bits(S.mask):
        m &= lat.llp_masks[k]
    return ArrowSet(lat, m)


def mirror_set(S: ArrowSet, dual: Lattice | None = None) -> ArrowSet:
    """Image of ``S`` in the order-dual lattice."""
    lat = S.lattice
    dual = dual if dual is not None else lat.dual()
    return ArrowSet.from_pairs(dual, (lat.mirror_arrow(a) for a in S))


def all_pairs(lat: Lattice) -> Iterator[tuple[int, int]]:
    return product(range(lat.size), repeat=2)
