"""Critical-pair completion over Frac(A) with tracked localization.

Every rule is kept monic by inverting its leading coefficient through the
witness accumulator, so all later reductions only multiply and the finished
rule set is a Groebner basis over A[f^-1] itself.  The corners of the
algebra and module staircases are the leading indices of the reduced bases.
"""

import heapq
from dataclasses import dataclass, field

from .errors import CapExceeded, StructuralError
from .localize import WitnessAccumulator, invert_scalar, witness
from .poly import (AlgPoly, ModVector, ORDERS, ParamPoly, RatFunc, divides, index_key,
                   mono_div, mono_lcm, mono_mul)
from .staircase import Staircase


@dataclass(frozen=True)
class ProblemSpec:
    """A = Q[params], B = A[vars]/(algebra_relations), M = B<gens>/(module_relations)."""

    param_names: tuple = ()
    var_names: tuple = ()
    gen_names: tuple = ()
    algebra_relations: tuple = ()
    module_relations: tuple = ()

    def __post_init__(self):
        for name in ("param_names", "var_names", "gen_names",
                     "algebra_relations", "module_relations"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        k, n, m = self.k, self.n, self.m
        for r in self.algebra_relations:
            if not isinstance(r, AlgPoly) or r.nvars != n or r.nparams != k:
                raise StructuralError(f"algebra relation {r!r} does not fit n={n}, k={k}")
        for r in self.module_relations:
            if not isinstance(r, ModVector) or r.ngens != m or r.nvars != n or r.nparams != k:
                raise StructuralError(f"module relation {r!r} does not fit m={m}, n={n}, k={k}")

    @property
    def k(self):
        return len(self.param_names)

    @property
    def n(self):
        return len(self.var_names)

    @property
    def m(self):
        return len(self.gen_names)

    def max_degree(self):
        return max([r.degree() for r in self.algebra_relations + self.module_relations] + [0])


@dataclass(frozen=True)
class SolveConfig:
    order: str = "lex"
    degree_cap: int = None
    deterministic_seed: int = 0

    def __post_init__(self):
        if self.order not in ORDERS:
            raise ValueError(f"unknown order {self.order!r}")
        if self.degree_cap is not None and self.degree_cap < 0:
            raise ValueError("degree_cap must be nonnegative")


def default_cap(problem):
    return 4 * (1 + problem.max_degree())


@dataclass(frozen=True)
class CornerRelation:
    """w_corner = sum of coeff * w_index over the tail, every tail index below the corner."""

    corner: tuple
    tail: tuple = field(default=())

    def tail_dict(self):
        return dict(self.tail)


def _relation(corner, tail, key):
    items = sorted(tail.items(), key=lambda kv: key(kv[0]), reverse=True)
    return CornerRelation(corner, tuple(items))


# ---------------------------------------------------------------- completion

def _normal_form(p, rules, key):
    """Fully reduce the dict ``p`` by monic rules (corner, tail-dict)."""
    p = dict(p)
    out = {}
    while p:
        lead = max(p, key=key)
        c = p.pop(lead)
        slot, e = lead
        for (cslot, ce), tail in rules:
            if cslot == slot and divides(ce, e):
                q = mono_div(e, ce)
                for (ts, te), a in tail.items():
                    kk = (ts, mono_mul(te, q))
                    v = p.get(kk)
                    s = c * a if v is None else v + c * a
                    if s:
                        p[kk] = s
                    else:
                        del p[kk]
                break
        else:
            out[lead] = c
    return out


class _Completion:
    def __init__(self, key, acc, cap, stage, ideal=False):
        self.key = key
        self.acc = acc
        self.cap = cap
        self.stage = stage
        self.ideal = ideal
        self.rules = []
        self.pairs = []
        self.frozen = 0  # rules [0, frozen) are already a completed system

    def _diagnostics(self, degree):
        return {"stage": self.stage, "degree": degree, "cap": self.cap,
                "corners": [c for c, _ in self.rules], "witness": witness(self.acc)}

    def add_completed(self, corner, tail):
        self.rules.append((corner, tail))
        self.frozen = len(self.rules)

    def add_input(self, p):
        h = _normal_form(p, self.rules, self.key)
        if h:
            self._insert(h)

    def _insert(self, h):
        deg = max(sum(k[1]) for k in h)
        if deg > self.cap:
            raise CapExceeded(f"{self.stage} completion reached degree {deg} > cap {self.cap}",
                              self._diagnostics(deg))
        lead = max(h, key=self.key)
        inv = invert_scalar(self.acc, h[lead])
        tail = {k: -(c * inv) for k, c in h.items() if k != lead}
        j = len(self.rules)
        self.rules.append((lead, tail))
        for i, (other, _) in enumerate(self.rules[:-1]):
            if other[0] == lead[0]:
                lcm = (lead[0], mono_lcm(other[1], lead[1]))
                heapq.heappush(self.pairs, (self.key(lcm), i, j))

    def run(self):
        while self.pairs:
            _, i, j = heapq.heappop(self.pairs)
            (ci, ti), (cj, tj) = self.rules[i], self.rules[j]
            lcm = mono_lcm(ci[1], cj[1])
            if self.ideal and lcm == mono_mul(ci[1], cj[1]):
                continue
            if self._chain(i, j, lcm):
                continue
            s = {}
            for tail, corner, sign in ((ti, ci, 1), (tj, cj, -1)):
                q = mono_div(lcm, corner[1])
                for (slot, e), a in tail.items():
                    kk = (slot, mono_mul(e, q))
                    v = s.get(kk)
                    val = a if sign > 0 else -a
                    t = val if v is None else v + val
                    if t:
                        s[kk] = t
                    else:
                        del s[kk]
            self.add_input(s)

    def _chain(self, i, j, lcm):
        """Buchberger's chain criterion against pairs already handled."""
        slot = self.rules[i][0][0]
        for r, (c, _) in enumerate(self.rules):
            if r in (i, j) or c[0] != slot or not divides(c[1], lcm):
                continue
            if self._done(i, r) and self._done(j, r):
                return True
        return False

    def _done(self, a, b):
        a, b = min(a, b), max(a, b)
        if b < self.frozen:
            return True
        lcm = (self.rules[a][0][0], mono_lcm(self.rules[a][0][1], self.rules[b][0][1]))
        return (self.key(lcm), a, b) not in self.pairs

    def result(self):
        """Reduced basis as a list of (corner, tail) sorted by descending corner."""
        kept = []
        for idx, (c, tail) in enumerate(self.rules):
            if not any(o != idx and oc[0] == c[0] and divides(oc[1], c[1]) and oc != c
                       for o, (oc, _) in enumerate(self.rules)):
                kept.append((c, tail))
        out = []
        for idx, (c, tail) in enumerate(kept):
            others = kept[:idx] + kept[idx + 1:]
            out.append((c, _normal_form(tail, others, self.key)))
        out.sort(key=lambda r: self.key(r[0]), reverse=True)
        return out


# ---------------------------------------------------------------- public API

def _algebra_terms(r):
    return {(1, e): c for e, c in r.terms.items()}


def _complete(problem, cfg):
    cap = cfg.degree_cap if cfg.degree_cap is not None else default_cap(problem)
    key = index_key(cfg.order)
    acc = WitnessAccumulator(problem.k)

    alg = _Completion(key, acc, cap, "algebra", ideal=True)
    for r in problem.algebra_relations:
        if r:
            alg.add_input(_algebra_terms(r))
    alg.run()
    arules = alg.result()

    mod = _Completion(key, acc, cap, "module")
    for slot in range(1, problem.m + 1):
        for (_, ce), tail in arules:
            mod.add_completed((slot, ce), {(slot, te): a for (_, te), a in tail.items()})
    for r in problem.module_relations:
        if r:
            mod.add_input(r.terms)
    mod.run()
    mrules = mod.result()
    return acc, arules, mrules


def _certificate(problem, cfg, acc, arules, mrules):
    from .certificate import Certificate, problem_digest

    akey = index_key(cfg.order)
    algebra_corners = tuple(
        _relation(c[1], {te: a for (_, te), a in tail.items()}, lambda e: akey((1, e)))
        for c, tail in arules)
    module_corners = tuple(_relation(c, tail, akey) for c, tail in mrules)
    return Certificate(
        witness=witness(acc),
        algebra_staircase=Staircase(1, problem.n, [c for c, _ in arules]),
        algebra_corners=algebra_corners,
        module_staircase=Staircase(problem.m, problem.n, [c for c, _ in mrules]),
        module_corners=module_corners,
        problem_digest=problem_digest(problem),
        config=SolveConfig(cfg.order, cfg.degree_cap),
        names=(problem.param_names, problem.var_names, problem.gen_names),
    )


def solve(problem, cfg=None):
    """Compute the witness f, both staircases and their corner relations."""
    cfg = cfg or SolveConfig()
    acc, arules, mrules = _complete(problem, cfg)
    return _certificate(problem, cfg, acc, arules, mrules)


def reduce_normal_form(v, rules, acc=None, order="lex"):
    """Normal form of an AlgPoly or ModVector under corner relations."""
    corners = [r.corner for r in rules]
    if len(set(corners)) != len(corners):
        raise StructuralError("corner relations must have distinct corners")
    if isinstance(v, AlgPoly):
        rs = [((1, r.corner), {(1, e): a for e, a in r.tail}) for r in rules]
        _check_antichain([c for c, _ in rs])
        out = _normal_form(_algebra_terms(v), rs, index_key(order))
        return v._like({e: c for (_, e), c in out.items()})
    if isinstance(v, ModVector):
        rs = [(r.corner, dict(r.tail)) for r in rules]
        _check_antichain([c for c, _ in rs])
        return v._like(_normal_form(v.terms, rs, index_key(order)))
    raise StructuralError(f"cannot reduce {type(v).__name__}")


def _check_antichain(corners):
    for a in corners:
        for b in corners:
            if a != b and a[0] == b[0] and divides(a[1], b[1]):
                raise StructuralError(f"corners {a!r} and {b!r} are not an antichain")


# ---------------------------------------------------------------- n = 0

def _echelon(rows, width, acc):
    """Reduced echelon form over Frac(A) of vectors given as lists of RatFunc.

    Each row's pivot is its largest nonzero position; returns {pivot: row}
    with row[pivot] == 1 and zeros in every other pivot column.
    """
    pivots = {}
    for row in rows:
        row = list(row)
        for p in sorted(pivots, reverse=True):
            c = row[p]
            if c:
                prow = pivots[p]
                row = [a - c * b for a, b in zip(row, prow)]
        nz = [i for i in range(width) if row[i]]
        if not nz:
            continue
        p = nz[-1]
        inv = invert_scalar(acc, row[p])
        row = [a * inv for a in row]
        for q, qrow in pivots.items():
            c = qrow[p]
            if c:
                pivots[q] = [a - c * b for a, b in zip(qrow, row)]
        pivots[p] = row
    return pivots


def module_case_echelon(problem):
    """Solve an n = 0 problem by elimination on the relation matrix."""
    if problem.n != 0:
        raise StructuralError("module_case_echelon needs a problem with no algebra variables")
    k, m = problem.k, problem.m
    acc = WitnessAccumulator(k)
    zero = RatFunc.const(0, k)
    one = RatFunc.const(1, k)

    arows = [[r.terms.get((), zero)] for r in problem.algebra_relations if r]
    apiv = _echelon(arows, 1, acc)
    algebra_dead = 0 in apiv

    rows = []
    if algebra_dead:
        for slot in range(m):
            rows.append([one if i == slot else zero for i in range(m)])
    for r in problem.module_relations:
        if r:
            rows.append([r.terms.get((i + 1, ()), zero) for i in range(m)])
    mpiv = _echelon(rows, m, acc)

    key = index_key("lex")
    acorners = (CornerRelation((), ()),) if algebra_dead else ()
    mrels = []
    for p in sorted(mpiv, reverse=True):
        row = mpiv[p]
        tail = {(i + 1, ()): -row[i] for i in range(m) if i != p and row[i]}
        mrels.append(_relation((p + 1, ()), tail, key))

    from .certificate import Certificate, problem_digest

    return Certificate(
        witness=witness(acc),
        algebra_staircase=Staircase(1, 0, [(1, ())] if algebra_dead else []),
        algebra_corners=acorners,
        module_staircase=Staircase(m, 0, [r.corner for r in mrels]),
        module_corners=tuple(mrels),
        problem_digest=problem_digest(problem),
        config=SolveConfig(),
        names=(problem.param_names, problem.var_names, problem.gen_names),
    )


def agree_with_general(problem):
    """Both solution paths give the same staircases and unit-equivalent witnesses."""
    a = solve(problem)
    b = module_case_echelon(problem)
    return (a.algebra_staircase == b.algebra_staircase
            and a.module_staircase == b.module_staircase
            and a.witness.primitive() == b.witness.primitive())
