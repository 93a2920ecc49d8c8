"""Exact arithmetic over A = Q[t1..tk] and its fraction field, plus sparse
algebra polynomials and module vectors keyed by lexicographically ordered
indices.

Indices are plain tuples: an exponent vector is ``(i1, ..., in)`` and a module
index is ``(slot, (i1, ..., in))`` with a 1-based slot.  Python's tuple
comparison is exactly the lexicographic order on both.
"""

from fractions import Fraction

from gmpy2 import mpq
from functools import reduce as _fold
from math import gcd as _igcd, lcm as _ilcm

from .errors import StructuralError, ZeroInput

# exact arbitrary-precision rationals
Rational = mpq
SCALARS = (int, Fraction, type(mpq(0)))

ORDERS = ("lex", "grlex")


# ---------------------------------------------------------------- indices

def _is_module_index(a):
    return len(a) == 2 and isinstance(a[1], tuple)


def exponent_key(order="lex"):
    """Sort key on exponent vectors for the named order."""
    if order == "lex":
        return lambda e: e
    if order == "grlex":
        return lambda e: (sum(e), e)
    raise ValueError(f"unknown order {order!r}")


def index_key(order="lex"):
    """Sort key on module indices: slot first, then the exponent order."""
    if order == "lex":
        return lambda j: j
    if order == "grlex":
        return lambda j: (j[0], sum(j[1]), j[1])
    raise ValueError(f"unknown order {order!r}")


def _shape(a):
    if _is_module_index(a):
        return ("module", len(a[1]))
    return ("exponent", len(a))


def cmp_index(a, b, order="lex"):
    """Three-way compare two indices of the same shape; returns -1, 0 or 1."""
    if _shape(a) != _shape(b):
        raise StructuralError(f"cannot compare indices {a!r} and {b!r}")
    key = index_key(order) if _is_module_index(a) else exponent_key(order)
    ka, kb = key(a), key(b)
    return (ka > kb) - (ka < kb)


def divides(a, b):
    """Componentwise a <= b for exponent vectors."""
    return all(x <= y for x, y in zip(a, b))


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a, b):
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


# ---------------------------------------------------------------- rendering

def _fmt_rational(c):
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def monomial_text(exps, names):
    """Render an exponent vector as ``x^2*y``; the unit monomial is ``1``."""
    parts = []
    for name, e in zip(names, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def join_signed(pieces):
    """Join ``(coefficient, factor_text)`` pairs into a signed sum.

    ``factor_text`` is '' for a pure constant term.
    """
    if not pieces:
        return "0"
    out = []
    for i, (c, factors) in enumerate(pieces):
        neg = c < 0
        a = -c if neg else c
        if not factors:
            body = _fmt_rational(a)
        elif a == 1:
            body = factors
        else:
            body = f"{_fmt_rational(a)}*{factors}"
        if i == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


# ---------------------------------------------------------------- ParamPoly

class ParamPoly:
    """Element of Q[t1..tk], stored sparsely as {exponents: Rational}."""

    __slots__ = ("terms", "nvars", "_hash")

    def __init__(self, terms=None, nvars=0):
        self.nvars = nvars
        self.terms = {}
        self._hash = None
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise StructuralError(f"exponent {e!r} does not have length {nvars}")
                if c:
                    self.terms[e] = mpq(c)

    @classmethod
    def _raw(cls, terms, nvars):
        p = cls.__new__(cls)
        p.terms = terms
        p.nvars = nvars
        p._hash = None
        return p

    @classmethod
    def const(cls, c, nvars):
        c = mpq(c)
        return cls._raw({(0,) * nvars: c} if c else {}, nvars)

    @classmethod
    def var(cls, i, nvars):
        e = tuple(1 if j == i else 0 for j in range(nvars))
        return cls._raw({e: mpq(1)}, nvars)

    # -- predicates
    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self):
        return self.terms.get((0,) * self.nvars, mpq(0))

    def is_one(self):
        return self.is_constant() and self.constant_value() == 1

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, ParamPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, SCALARS):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # -- structure
    def leading(self):
        """Lex-leading (exponents, coefficient)."""
        e = max(self.terms)
        return e, self.terms[e]

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def sorted_terms(self):
        return sorted(self.terms.items(), reverse=True)

    # -- arithmetic
    def _check(self, other):
        if other.nvars != self.nvars:
            raise StructuralError("parameter polynomials over different rings")

    def _coerce(self, other):
        if isinstance(other, ParamPoly):
            self._check(other)
            return other
        if isinstance(other, SCALARS):
            return ParamPoly.const(other, self.nvars)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e, 0) + c
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        return ParamPoly._raw(t, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly._raw({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, SCALARS):
            if not other:
                return ParamPoly._raw({}, self.nvars)
            return ParamPoly._raw({e: c * other for e, c in self.terms.items()}, self.nvars)
        if not isinstance(other, ParamPoly):
            return NotImplemented
        self._check(other)
        if self.is_constant():
            return other * self.constant_value()
        if other.is_constant():
            return self * other.constant_value()
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return ParamPoly._raw({e: c for e, c in t.items() if c}, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = ParamPoly.const(1, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def diff(self, i):
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = e[:i] + (e[i] - 1,) + e[i + 1:]
                t[e2] = c * e[i]
        return ParamPoly._raw(t, self.nvars)

    def evaluate(self, point):
        """Value at a rational point."""
        if len(point) != self.nvars:
            raise StructuralError(f"point {point!r} has wrong length")
        total = mpq(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v *= mpq(x) ** k
            total += v
        return total

    def exquo(self, other):
        """Exact quotient; raises ArithmeticError if ``other`` does not divide."""
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if other.is_constant():
            return self * (1 / other.constant_value())
        le, lc = other.leading()
        rem = dict(self.terms)
        q = {}
        while rem:
            e = max(rem)
            if not divides(le, e):
                raise ArithmeticError("inexact polynomial division")
            qe = mono_div(e, le)
            qc = rem[e] / lc
            q[qe] = qc
            for e2, c2 in other.terms.items():
                k = mono_mul(qe, e2)
                s = rem.get(k, 0) - qc * c2
                if s:
                    rem[k] = s
                else:
                    rem.pop(k, None)
        return ParamPoly._raw(q, self.nvars)

    def divides(self, other):
        try:
            other.exquo(self)
        except ArithmeticError:
            return False
        return True

    def content(self):
        """Positive rational c with self/c integral and primitive."""
        if not self.terms:
            return mpq(0)
        nums = [int(c.numerator) for c in self.terms.values()]
        dens = [int(c.denominator) for c in self.terms.values()]
        return mpq(abs(_fold(_igcd, nums)), _fold(_ilcm, dens))

    def primitive(self):
        """Integer coefficients with gcd 1 and positive lex-leading coefficient."""
        if not self.terms:
            return self
        c = self.content()
        if self.leading()[1] < 0:
            c = -c
        return self * (1 / c)

    def render(self, names):
        """Canonical text, terms in descending lex order."""
        return join_signed([(c, monomial_text(e, names) if any(e) else "")
                            for e, c in self.sorted_terms()])

    def __repr__(self):
        names = [f"t{i + 1}" for i in range(self.nvars)] if self.nvars != 1 else ["t"]
        return f"ParamPoly({self.render(names)!r})"


# ---------------------------------------------------------------- gcd

_RINGS = {}


def _zz_ring(k):
    if k not in _RINGS:
        from sympy import ZZ
        from sympy.polys.rings import ring

        _RINGS[k] = ring([f"t{i}" for i in range(k)], ZZ)[0]
    return _RINGS[k]


def _to_zz(p, R):
    # clear denominators; the gcd is only needed up to a rational unit
    scale = _fold(_ilcm, (int(c.denominator) for c in p.terms.values()), 1)
    return R({e: int(c * scale) for e, c in p.terms.items()})


def gcd(p, q):
    """Greatest common divisor in Q[t1..tk], normalized with ``primitive``."""
    p._check(q)
    if p.is_zero():
        return q.primitive()
    if q.is_zero():
        return p.primitive()
    if p.is_constant() or q.is_constant():
        return ParamPoly.const(1, p.nvars)
    R = _zz_ring(p.nvars)
    g = _to_zz(p, R).gcd(_to_zz(q, R))
    return ParamPoly._raw({e: mpq(int(c)) for e, c in g.items()}, p.nvars).primitive()


def squarefree_primitive(p):
    """Product of the distinct irreducible factors of p, primitive and with
    positive lex-leading coefficient."""
    if p.is_zero():
        raise ZeroInput("squarefree part of the zero polynomial")
    if p.is_constant():
        return ParamPoly.const(1, p.nvars)
    g = p
    for i in range(p.nvars):
        g = gcd(g, p.diff(i))
    return p.exquo(g).primitive()


def divides_power(d, f):
    """True iff d divides some power of f (d, f nonzero)."""
    if d.is_zero():
        return False
    while not d.is_constant():
        g = gcd(d, f)
        if g.is_constant():
            return False
        d = d.exquo(g)
    return True


# ---------------------------------------------------------------- RatFunc

class RatFunc:
    """Element of Frac(A) = Q(t1..tk) as a reduced fraction of ParamPolys.

    The denominator is primitive with positive leading coefficient, so equal
    values have equal representations.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _normalized=False):
        if den is None:
            den = ParamPoly.const(1, num.nvars)
        if not _normalized:
            if den.is_zero():
                raise ZeroDivisionError("zero denominator")
            if num.is_zero():
                den = ParamPoly.const(1, num.nvars)
            elif den.is_constant():
                num = num * (1 / den.constant_value())
                den = ParamPoly.const(1, num.nvars)
            else:
                g = gcd(num, den)
                if not g.is_constant():
                    num, den = num.exquo(g), den.exquo(g)
                c = den.content()
                if den.leading()[1] < 0:
                    c = -c
                num, den = num * (1 / c), den * (1 / c)
        self.num = num
        self.den = den

    @classmethod
    def const(cls, c, nvars):
        return cls(ParamPoly.const(c, nvars), ParamPoly.const(1, nvars), _normalized=True)

    @property
    def nvars(self):
        return self.num.nvars

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (ParamPoly,) + SCALARS):
            return self.den.is_one() and self.num == other
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def _lift(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, ParamPoly):
            return RatFunc(other, _normalized=False)
        if isinstance(other, SCALARS):
            return RatFunc.const(other, self.nvars)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        if self.den.is_one() and other.den.is_one():
            return RatFunc(self.num + other.num, self.den, _normalized=True)
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        if self.den.is_one() and other.den.is_one():
            return RatFunc(self.num * other.num, self.den, _normalized=True)
        if self.is_zero() or other.is_zero():
            return RatFunc.const(0, self.nvars)
        if self.num.is_constant() and self.den.is_one():
            return RatFunc(other.num * self.num.constant_value(), other.den, _normalized=True)
        if other.num.is_constant() and other.den.is_one():
            return RatFunc(self.num * other.num.constant_value(), self.den, _normalized=True)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        """Multiplicative inverse.  Callers that must record the inverted
        element go through ``localize.invert`` instead."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(self.den, self.num)

    def evaluate(self, point):
        d = self.den.evaluate(point)
        if not d:
            raise ZeroDivisionError(f"denominator vanishes at {point!r}")
        return self.num.evaluate(point) / d

    def render(self, names):
        if self.den.is_one():
            return self.num.render(names)
        return f"({self.num.render(names)})/({self.den.render(names)})"

    def __repr__(self):
        names = [f"t{i + 1}" for i in range(self.nvars)] if self.nvars != 1 else ["t"]
        return f"RatFunc({self.render(names)!r})"


# ---------------------------------------------------------------- sparse carriers

class _Sparse:
    """Immutable sparse map index -> nonzero RatFunc."""

    __slots__ = ("terms", "nparams")

    def __init__(self, terms=None, nparams=0):
        self.nparams = nparams
        self.terms = {}
        for key, c in (terms or {}).items():
            c = _as_ratfunc(c, nparams)
            if c:
                self._check_key(key)
                self.terms[key] = c

    @classmethod
    def _raw(cls, terms, nparams, **kw):
        v = cls.__new__(cls)
        v.terms = terms
        v.nparams = nparams
        for k, val in kw.items():
            setattr(v, k, val)
        return v

    def _check_key(self, key):
        raise NotImplementedError

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self._shape() == other._shape() and self.terms == other.terms

    def __hash__(self):
        return hash((type(self).__name__, self._shape(), frozenset(self.terms.items())))

    def _combine(self, other, sign):
        if type(other) is not type(self) or other._shape() != self._shape():
            raise StructuralError(f"cannot combine {type(self).__name__} and {type(other).__name__}")
        t = dict(self.terms)
        for k, c in other.terms.items():
            s = t[k] + c * sign if k in t else c * sign
            if s:
                t[k] = s
            else:
                t.pop(k, None)
        return self._like(t)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self._like({k: -c for k, c in self.terms.items()})

    def scale(self, s):
        """Multiply by a scalar of A or Frac(A)."""
        s = _as_ratfunc(s, self.nparams)
        if not s:
            return self._like({})
        return self._like({k: c * s for k, c in self.terms.items()})

    def sorted_terms(self, order="lex"):
        key = self._key(order)
        return sorted(self.terms.items(), key=lambda kv: key(kv[0]), reverse=True)

    def leading_term(self, order="lex"):
        return leading_term(self, order)

    def evaluate(self, point):
        """Specialize every coefficient at a rational point of the parameters."""
        values = ((k, c.evaluate(point)) for k, c in self.terms.items())
        return self._like({k: RatFunc.const(v, 0) for k, v in values if v}, nparams=0)


def _as_ratfunc(c, nparams):
    if isinstance(c, RatFunc):
        return c
    if isinstance(c, ParamPoly):
        return RatFunc(c, _normalized=False)
    if isinstance(c, SCALARS):
        return RatFunc.const(c, nparams)
    raise StructuralError(f"not a scalar: {c!r}")


class AlgPoly(_Sparse):
    """Polynomial in x1..xn with coefficients in Frac(A)."""

    __slots__ = ("nvars",)

    def __init__(self, terms=None, nvars=0, nparams=0):
        self.nvars = nvars
        super().__init__(terms, nparams)

    def _check_key(self, key):
        if len(key) != self.nvars or any(e < 0 for e in key):
            raise StructuralError(f"bad exponent vector {key!r} for n={self.nvars}")

    def _shape(self):
        return (self.nvars, self.nparams)

    def _like(self, terms, nparams=None):
        return AlgPoly._raw(terms, self.nparams if nparams is None else nparams, nvars=self.nvars)

    @staticmethod
    def _key(order):
        return exponent_key(order)

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def __mul__(self, other):
        if isinstance(other, AlgPoly):
            if other._shape() != self._shape():
                raise StructuralError("algebra polynomials over different rings")
            t = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = mono_mul(e1, e2)
                    t[e] = t[e] + c1 * c2 if e in t else c1 * c2
            return self._like({e: c for e, c in t.items() if c})
        if isinstance(other, ModVector):
            return other.__rmul__(self)
        if isinstance(other, (RatFunc, ParamPoly) + SCALARS):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (RatFunc, ParamPoly) + SCALARS):
            return self.scale(other)
        return NotImplemented

    def __repr__(self):
        return f"AlgPoly({self.terms!r})"


class ModVector(_Sparse):
    """Element of the free module on v1..vm over Frac(A)[x1..xn]."""

    __slots__ = ("nvars", "ngens")

    def __init__(self, terms=None, ngens=0, nvars=0, nparams=0):
        self.nvars = nvars
        self.ngens = ngens
        super().__init__(terms, nparams)

    def _check_key(self, key):
        if not _is_module_index(key) or not 1 <= key[0] <= self.ngens \
                or len(key[1]) != self.nvars or any(e < 0 for e in key[1]):
            raise StructuralError(f"bad module index {key!r} for m={self.ngens}, n={self.nvars}")

    def _shape(self):
        return (self.ngens, self.nvars, self.nparams)

    def _like(self, terms, nparams=None):
        return ModVector._raw(terms, self.nparams if nparams is None else nparams,
                              nvars=self.nvars, ngens=self.ngens)

    @staticmethod
    def _key(order):
        return index_key(order)

    def degree(self):
        return max((sum(j[1]) for j in self.terms), default=-1)

    def __mul__(self, other):
        if isinstance(other, ModVector):
            raise StructuralError("product of two module vectors is undefined")
        if isinstance(other, (RatFunc, ParamPoly) + SCALARS):
            return self.scale(other)
        if isinstance(other, AlgPoly):
            return self.__rmul__(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, AlgPoly):
            if other.nvars != self.nvars or other.nparams != self.nparams:
                raise StructuralError("algebra and module over different rings")
            t = {}
            for (slot, e1), c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    k = (slot, mono_mul(e1, e2))
                    t[k] = t[k] + c1 * c2 if k in t else c1 * c2
            return self._like({k: c for k, c in t.items() if c})
        if isinstance(other, (RatFunc, ParamPoly) + SCALARS):
            return self.scale(other)
        return NotImplemented

    def __repr__(self):
        return f"ModVector({self.terms!r})"


def leading_term(v, order="lex"):
    """(largest index, its coefficient) of a nonzero AlgPoly or ModVector."""
    from .errors import EmptyVector

    if not v.terms:
        raise EmptyVector("leading term of the zero vector")
    key = v._key(order)
    k = max(v.terms, key=key)
    return k, v.terms[k]
