"""Tracked localization of A: every element the solver inverts is recorded,
and the normalized product of the record is the witness f."""

from .errors import ZeroInversion
from .poly import ParamPoly, RatFunc, squarefree_primitive

# Elements of A[f^-1] are ordinary reduced fractions; the accumulator is what
# guarantees their denominators divide a power of f.
TrackedScalar = RatFunc


class WitnessAccumulator:
    """Multiset of the nonconstant elements of A inverted during one run."""

    def __init__(self, nparams):
        self.nparams = nparams
        self.factors = []

    def add(self, a):
        if a.is_zero():
            raise ZeroInversion("cannot localize at zero")
        # units of A are already invertible
        if not a.is_constant():
            self.factors.append(a.primitive())

    def product(self):
        out = ParamPoly.const(1, self.nparams)
        for a in self.factors:
            out = out * a
        return out

    def __len__(self):
        return len(self.factors)

    def __repr__(self):
        return f"WitnessAccumulator({self.factors!r})"


def invert(acc, a):
    """Return 1/a as a tracked scalar and record a in the accumulator."""
    if isinstance(a, RatFunc):
        if not a.den.is_one():
            raise TypeError("invert expects an element of A; use invert_scalar")
        a = a.num
    if a.is_zero():
        raise ZeroInversion("attempt to invert the zero element of A")
    acc.add(a)
    return RatFunc(ParamPoly.const(1, a.nvars), a)


def invert_scalar(acc, s):
    """Inverse of a nonzero tracked scalar p/q, recording its numerator p."""
    if s.is_zero():
        raise ZeroInversion("attempt to invert zero")
    return invert(acc, s.num) * s.den


def witness(acc):
    """Squarefree primitive part of everything inverted so far; 1 if nothing was."""
    factors = []
    for a in acc.factors:
        factors.append(squarefree_primitive(a))
    # squarefree of a product of squarefree parts, computed pairwise to keep degrees low
    out = ParamPoly.const(1, acc.nparams)
    for a in factors:
        out = squarefree_primitive(out * a)
    return out


def is_zero(s):
    """Exact zero test for an element of A or a tracked scalar."""
    if isinstance(s, RatFunc):
        return s.num.is_zero()
    return s.is_zero()
