"""Good families as staircases: downward-closed index sets stored by the
minimal generators (corners) of their upward-closed complement."""

from itertools import product

from .errors import AlreadyRemoved, StructuralError
from .poly import divides


def _as_index(j):
    """Accept a module index or, for the m = 1 case, a bare exponent vector."""
    if len(j) == 2 and isinstance(j[1], tuple):
        return j
    return (1, tuple(j))


def minimal_generators(indices):
    """Componentwise-minimal elements of ``indices``, compared slot by slot."""
    idx = sorted({_as_index(j) for j in indices}, key=lambda j: (j[0], sum(j[1]), j[1]))
    kept = []
    for j in idx:
        if not any(k[0] == j[0] and divides(k[1], j[1]) for k in kept):
            kept.append(j)
    return frozenset(kept)


def monomials_up_to(n, d):
    """All exponent vectors of length n with total degree <= d."""
    if n == 0:
        return [()] if d >= 0 else []
    return [e for e in product(range(d + 1), repeat=n) if sum(e) <= d]


class Staircase:
    """Family of indices (slot, exps) not divisible by any corner of the same slot."""

    __slots__ = ("m", "n", "corners")

    def __init__(self, m, n, corners=()):
        corners = [_as_index(c) for c in corners]
        for c in corners:
            if not 1 <= c[0] <= m or len(c[1]) != n:
                raise StructuralError(f"corner {c!r} does not fit shape m={m}, n={n}")
        self.m = m
        self.n = n
        self.corners = minimal_generators(corners)

    @classmethod
    def full(cls, m, n):
        return cls(m, n)

    @property
    def shape(self):
        return (self.m, self.n)

    def __eq__(self, other):
        if not isinstance(other, Staircase):
            return NotImplemented
        return self.shape == other.shape and self.corners == other.corners

    def __hash__(self):
        return hash((self.shape, self.corners))

    def __repr__(self):
        return f"Staircase(m={self.m}, n={self.n}, corners={sorted(self.corners)!r})"

    def contains(self, j):
        slot, e = _as_index(j)
        if not 1 <= slot <= self.m or len(e) != self.n:
            raise StructuralError(f"index {j!r} does not fit shape {self.shape}")
        return not any(c[0] == slot and divides(c[1], e) for c in self.corners)

    __contains__ = contains

    def remove_corner(self, j):
        """Remove j and its whole upward cone."""
        j = _as_index(j)
        if not self.contains(j):
            raise AlreadyRemoved(f"{j!r} is not in the family")
        return Staircase(self.m, self.n, set(self.corners) | {j})

    def members_up_to(self, d):
        """Family members of total degree <= d, by enumeration."""
        mons = monomials_up_to(self.n, d)
        return [(slot, e) for slot in range(1, self.m + 1) for e in mons
                if self.contains((slot, e))]

    def count_up_to_degree(self, d):
        return len(self.members_up_to(d))

    def is_finite(self):
        """True iff the family is finite: every slot has a pure power of each variable as corner."""
        for slot in range(1, self.m + 1):
            for i in range(self.n):
                if not any(c[0] == slot and all(v == 0 for k, v in enumerate(c[1]) if k != i)
                           for c in self.corners):
                    return False
        return True

    def render_ascii(self, slot=1, size=None):
        """Grid for n = 2: ``C`` corner, ``#`` removed, ``.`` family; x grows right, y up."""
        if self.n != 2:
            raise StructuralError("ASCII rendering needs exactly two variables")
        cs = [c[1] for c in self.corners if c[0] == slot]
        if size is None:
            size = max([8] + [max(c) + 2 for c in cs])
        rows = []
        for y in reversed(range(size)):
            row = []
            for x in range(size):
                if (x, y) in cs:
                    row.append("C")
                elif self.contains((slot, (x, y))):
                    row.append(".")
                else:
                    row.append("#")
            rows.append("".join(row))
        return "\n".join(rows)


def contains(st, j):
    return st.contains(j)


def remove_corner(st, j):
    return st.remove_corner(j)


def count_up_to_degree(st, d):
    return st.count_up_to_degree(d)
