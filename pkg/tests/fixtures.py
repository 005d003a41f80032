"""Hand-encoded model structures and transfer systems used as fixtures."""

from modelkit import ArrowSet, Lattice
from modelkit.transfer import transfer_closure

G11 = Lattice.grid(1, 1)
G21 = Lattice.grid(2, 1)

# the ten transfer systems on [1] x [1], as drawn
FIG_TEN = [
    [],
    [((0, 0), (1, 0))],
    [((0, 0), (0, 1))],
    [((0, 0), (1, 0)), ((0, 1), (1, 1))],
    [((0, 0), (0, 1)), ((0, 0), (1, 0))],
    [((0, 0), (0, 1)), ((1, 0), (1, 1))],
    [((0, 0), (0, 1)), ((0, 0), (1, 0)), ((0, 0), (1, 1))],
    [((0, 0), (0, 1)), ((0, 0), (1, 0)), ((0, 0), (1, 1)), ((1, 0), (1, 1))],
    [((0, 0), (0, 1)), ((0, 0), (1, 0)), ((0, 0), (1, 1)), ((0, 1), (1, 1))],
    [((0, 0), (0, 1)), ((0, 0), (1, 0)), ((0, 0), (1, 1)), ((0, 1), (1, 1)), ((1, 0), (1, 1))],
]

# letter names for [2] x [1]: top row A B C, bottom row D E F
POINTS = dict(A=(0, 1), B=(1, 1), C=(2, 1), D=(0, 0), E=(1, 0), F=(2, 0))


def named(lat: Lattice, *names: str) -> ArrowSet:
    return ArrowSet.from_pairs(lat, [(POINTS[n[0]], POINTS[n[1]]) for n in names])


def _groups():
    S = lambda *n: named(G21, *n)  # noqa: E731
    ALL = ArrowSet.all(G21)
    rows = S("AB", "BC", "AC", "DE", "EF", "DF")
    g1 = ["DE", "DC", "DA", "DB", "DF", "EB"]
    g2 = ["AB", "DE", "DA", "DB", "DF", "EB"]
    g2d = ["AB", "DE", "DC", "DA", "EF", "DB", "DF", "EB"]
    g3 = ["AB", "DE", "DA", "DB", "DF"]
    g3c = ["AB", "DE", "DC", "DA", "DB", "DF"]
    g4 = ["DE", "DA", "DB", "DF"]
    return {
        "G1": [(ALL, S(*g1)), (ALL, S(*g1, "EF")), (ALL, S("BC", "DE", "DC", "DA", "EF", "DB", "DF", "EB", "EC"))],
        "G2": [
            (ALL, S(*g2)),
            (ALL, S(*g2, "DC")),
            (ALL, S(*g2, "DC", "FC")),
            (ALL, S(*g2d)),
            (ALL, S(*g2d, "EC")),
        ],
        "G3": [(ALL, S(*g3)), (ALL, S(*g3, "EF")), (ALL, S(*g3c)), (ALL, S(*g3c, "EF"))],
        "G4": [(ALL, S(*g4)), (ALL, S(*g4, "EF"))],
        "G5": [(rows, S("AB", "DE", "DF")), (rows, S("AC", "AB", "DE", "EF", "DF"))],
    }


# the sixteen model structures on [2] x [1] listed as non-localizations
GROUPS = _groups()
# all arrows weak, AF containing the long diagonal (0,0)->(2,1)
LONG_DIAGONAL = GROUPS["G3"][3]


def class_w(lat: Lattice, classes) -> ArrowSet:
    """Weak equivalences whose classes are the given lists of elements."""
    pairs = [(a, b) for c in classes for a in c for b in c if a != b and lat.leq(lat.element(a), lat.element(b))]
    return ArrowSet.from_pairs(lat, pairs)


def good_example():
    """Model structure on [2] x [3] with a three-arrow golden set at (1,0)->(1,1)."""
    lat = Lattice.grid(2, 3)
    W = class_w(lat, [[(0, 2), (0, 3)], [(1, 1), (1, 2), (1, 3)], [(2, 1), (2, 2)]])
    AF = transfer_closure(lat, ArrowSet.from_pairs(lat, [((0, 2), (0, 3)), ((1, 2), (1, 3))]))
    return lat, W, AF
