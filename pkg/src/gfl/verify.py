"""Certificate verification.

Nothing here touches the solver's internals: rewriting uses its own loop, and
independence is probed at rational points where f does not vanish, either by
re-solving over Q or by exact elimination on Macaulay matrices of the
specialized relations.  The verifier never inverts an element of A.
"""

import random
from collections import defaultdict
from dataclasses import dataclass, field

from gmpy2 import mpq

from .engine import ProblemSpec, SolveConfig, solve
from .errors import PointOutsideWitnessLocus, SamplingExhausted, WrongProblem
from .poly import (AlgPoly, ModVector, RatFunc, divides, divides_power, index_key, mono_div,
                   mono_lcm, mono_mul)
from .staircase import Staircase, monomials_up_to

MAX_SAMPLING_ATTEMPTS = 1000
MAX_REWRITES = 200_000


@dataclass
class VerifyReport:
    passed: bool
    checks: list = field(default_factory=list)  # (name, ok, detail)
    specialization_points: list = field(default_factory=list)

    def render(self):
        return "\n".join(f"{name}: {'PASS' if ok else 'FAIL'} — {detail}"
                         for name, ok, detail in self.checks)


def density_witness(cert):
    """D(f) is dense in Spec A exactly when f is nonzero (A is a domain)."""
    return not cert.witness.is_zero()


def specialize(problem, point, f):
    """Substitute a rational point for the parameters; f must not vanish there."""
    point = tuple(mpq(x) for x in point)
    if f.evaluate(point) == 0:
        raise PointOutsideWitnessLocus(f"witness vanishes at {tuple(map(str, point))}")
    alg = tuple(r.evaluate(point) for r in problem.algebra_relations)
    mod = tuple(r.evaluate(point) for r in problem.module_relations)
    return ProblemSpec((), problem.var_names, problem.gen_names, alg, mod)


def sample_points(f, k, trials, seed):
    """Integer points in [-B, B]^k with f != 0, B = 10 + 10 deg f."""
    rng = random.Random(seed)
    bound = 10 + 10 * max(f.degree(), 0)
    points = []
    for _ in range(trials):
        for _ in range(MAX_SAMPLING_ATTEMPTS):
            tau = tuple(rng.randint(-bound, bound) for _ in range(k))
            if f.evaluate(tau) != 0:
                points.append(tau)
                break
        else:
            raise SamplingExhausted(f"no point with f != 0 after {MAX_SAMPLING_ATTEMPTS} draws")
    return points


# ---------------------------------------------------------------- rewriting

class _Diverged(Exception):
    pass


def rewrite(p, rules, key):
    """Rewrite the largest reducible index until none is left.

    ``rules`` maps a slot to [(corner exponents, tail dict)].
    """
    p = {j: c for j, c in p.items() if c}
    steps = 0
    while True:
        reducible = []
        for j in p:
            for ce, tail in rules.get(j[0], ()):
                if divides(ce, j[1]):
                    reducible.append((key(j), j, ce, tail))
                    break
        if not reducible:
            return p
        steps += 1
        if steps > MAX_REWRITES:
            raise _Diverged("rewriting did not terminate")
        _, j, ce, tail = max(reducible, key=lambda r: r[0])
        c = p.pop(j)
        shift = mono_div(j[1], ce)
        for (slot, e), a in tail.items():
            target = (slot, mono_mul(e, shift))
            s = p.get(target, 0) + c * a
            if s:
                p[target] = s
            else:
                p.pop(target, None)


def _rules_by_slot(rules):
    out = defaultdict(list)
    for (slot, ce), tail in rules:
        out[slot].append((ce, tail))
    return out


def _descending(rules, key):
    return all(key(j) < key(c) for c, tail in rules for j in tail)


# ---------------------------------------------------------------- linear algebra

def _prio(col, staircase):
    if staircase.contains(col):
        return (1, -sum(col[1]), col)
    return (0, col)


def dependency_degrees(rows, staircase):
    """Exact elimination that prefers non-staircase pivots.

    Returns the degrees of the pivots landing on staircase columns; their
    count up to degree d is dim(span(staircase members of degree <= d) meet
    row space).
    """
    pivots = {}
    found = []
    prio_cache = {}

    def prio(col):
        p = prio_cache.get(col)
        if p is None:
            p = prio_cache[col] = _prio(col, staircase)
        return p

    for row in rows:
        row = dict(row)
        while row:
            lead = min(row, key=prio)
            pv = pivots.get(lead)
            if pv is None:
                inv = 1 / row[lead]
                pivots[lead] = {j: c * inv for j, c in row.items()}
                if staircase.contains(lead):
                    found.append(sum(lead[1]))
                break
            c = row[lead]
            for j, a in pv.items():
                s = row.get(j, 0) - c * a
                if s:
                    row[j] = s
                else:
                    row.pop(j, None)
    return found


def macaulay_rows(relations, n, bound):
    """All monomial multiples of the relations with total degree <= bound."""
    rows = []
    for r in relations:
        if not r:
            continue
        d = max(sum(j[1]) for j in r)
        for mono in monomials_up_to(n, bound - d):
            rows.append({(slot, mono_mul(e, mono)): c for (slot, e), c in r.items()})
    return rows


def specialized_dimensions(sproblem, staircase, bound, side):
    """Per degree d <= bound: dimension of the image of the staircase members of
    degree <= d in the specialized quotient, truncated at degree ``bound``."""
    def q(rel):
        return {j: mpq(c.num.constant_value()) for j, c in rel.items()}

    alg = [q({(1, e): c for e, c in r.terms.items()}) for r in sproblem.algebra_relations]
    if side == "algebra":
        rels = alg
    else:
        rels = [q(r.terms) for r in sproblem.module_relations]
        rels += [{(slot, e): c for (_, e), c in r.items()}
                 for slot in range(1, sproblem.m + 1) for r in alg]
    deps = dependency_degrees(macaulay_rows(rels, sproblem.n, bound), staircase)
    return [staircase.count_up_to_degree(d) - sum(1 for x in deps if x <= d)
            for d in range(bound + 1)]


def verification_bound(problem, cert):
    corner_degs = [sum(c[1]) for c in cert.algebra_staircase.corners | cert.module_staircase.corners]
    return problem.max_degree() + max(corner_degs, default=0) + 2


# ---------------------------------------------------------------- checks

def _check_descent(cert, key):
    for side, st, rules in (("algebra", cert.algebra_staircase, cert.algebra_rules()),
                            ("module", cert.module_staircase, cert.module_rules())):
        corners = [c for c, _ in rules]
        if set(corners) != set(st.corners) or len(set(corners)) != len(corners):
            return False, f"{side} corner relations do not match the staircase corners"
        for a in corners:
            for b in corners:
                if a != b and a[0] == b[0] and divides(a[1], b[1]):
                    return False, f"{side} corners {a} and {b} are not an antichain"
        for c, tail in rules:
            for j, a in tail.items():
                if not key(j) < key(c):
                    return False, f"{side} tail index {j} is not below corner {c}"
                if not st.contains(j):
                    return False, f"{side} tail index {j} lies outside the staircase"
    return True, "tails strictly below their corners, corners form an antichain"


def _input_vectors(problem):
    alg = [{(1, e): _lift(c) for e, c in r.terms.items()} for r in problem.algebra_relations if r]
    mod = [{j: _lift(c) for j, c in r.terms.items()} for r in problem.module_relations if r]
    lifted = [{(slot, e): c for (_, e), c in a.items()}
              for slot in range(1, problem.m + 1) for a in alg]
    return alg, mod + lifted


def _lift(c):
    return c if isinstance(c, RatFunc) else RatFunc(c)


def _check_spanning(problem, cert, key):
    arules, mrules = cert.algebra_rules(), cert.module_rules()
    if not (_descending(arules, key) and _descending(mrules, key)):
        return False, "corner relations are not descending, rewriting is undefined"
    alg, mod = _input_vectors(problem)
    for side, inputs, rules in (("algebra", alg, arules), ("module", mod, mrules)):
        by_slot = _rules_by_slot(rules)
        for i, v in enumerate(inputs):
            try:
                rest = rewrite(v, by_slot, key)
            except _Diverged as exc:
                return False, f"{side} relation {i + 1}: {exc}"
            if rest:
                return False, f"{side} relation {i + 1} does not reduce to 0"
    return True, f"{len(alg)} algebra and {len(mod)} module relations reduce to 0"


def _check_closure(cert, key):
    """Every S-pair of corner relations rewrites to 0 (monic Groebner criterion)."""
    for side, rules in (("algebra", cert.algebra_rules()), ("module", cert.module_rules())):
        if not _descending(rules, key):
            return False, f"{side} corner relations are not descending"
        by_slot = _rules_by_slot(rules)
        for i, (ci, ti) in enumerate(rules):
            for cj, tj in rules[i + 1:]:
                if ci[0] != cj[0]:
                    continue
                lcm = mono_lcm(ci[1], cj[1])
                s = {}
                for tail, corner, sign in ((ti, ci, 1), (tj, cj, -1)):
                    shift = mono_div(lcm, corner[1])
                    for (slot, e), a in tail.items():
                        t = (slot, mono_mul(e, shift))
                        s[t] = s.get(t, 0) + (a if sign > 0 else -a)
                try:
                    rest = rewrite(s, by_slot, key)
                except _Diverged as exc:
                    return False, f"{side} S-pair {ci}, {cj}: {exc}"
                if rest:
                    return False, f"{side} S-pair of corners {ci} and {cj} does not reduce to 0"
    return True, "all S-pairs of corner relations reduce to 0"


def _check_denominators(cert):
    f = cert.witness
    for side, rules in (("algebra", cert.algebra_rules()), ("module", cert.module_rules())):
        for c, tail in rules:
            for j, a in tail.items():
                if f.is_zero() or not divides_power(a.den, f):
                    return False, f"{side} corner {c}: denominator does not divide a power of f"
    return True, "every denominator divides a power of f"


def verify(problem, cert, trials=5, seed=0, degree_bound=None):
    """Run every certificate check and collect a report."""
    from .certificate import problem_digest

    if trials < 1:
        raise ValueError("trials must be at least 1")
    if cert.problem_digest != problem_digest(problem):
        raise WrongProblem("certificate digest does not match the problem")
    key = index_key(cert.config.order)
    checks = []

    def run(name, fn):
        try:
            ok, detail = fn()
        except Exception as exc:  # a malformed certificate must fail, not crash
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        checks.append((name, ok, detail))
        return ok

    run("zero_witness", lambda: (density_witness(cert),
                                 "f is nonzero" if density_witness(cert) else "f = 0"))
    run("denominators", lambda: _check_denominators(cert))
    run("spanning", lambda: _check_spanning(problem, cert, key))
    run("descent_antichain", lambda: _check_descent(cert, key))
    run("closure", lambda: _check_closure(cert, key))

    points = []
    if density_witness(cert):
        try:
            points = sample_points(cert.witness, problem.k, trials, seed)
        except SamplingExhausted as exc:
            checks.append(("specialization", False, str(exc)))
    else:
        checks.append(("specialization", False, "skipped: no point of D(f) exists for f = 0"))

    if points:
        bound = degree_bound if degree_bound is not None else verification_bound(problem, cert)
        specialized = []

        def spec_check():
            for tau in points:
                sp = specialize(problem, tau, cert.witness)
                specialized.append(sp)
                other = solve(sp, SolveConfig(cert.config.order))
                if other.algebra_staircase != cert.algebra_staircase:
                    return False, f"algebra staircase differs at t = {tau}"
                if other.module_staircase != cert.module_staircase:
                    return False, f"module staircase differs at t = {tau}"
            return True, f"staircases agree at {len(points)} points"

        def dim_check():
            sps = specialized or [specialize(problem, tau, cert.witness) for tau in points]
            for tau, sp in zip(points, sps):
                for side, st in (("algebra", cert.algebra_staircase),
                                 ("module", cert.module_staircase)):
                    dims = specialized_dimensions(sp, st, bound, side)
                    counts = [st.count_up_to_degree(d) for d in range(bound + 1)]
                    if dims != counts:
                        d = next(i for i, (a, b) in enumerate(zip(dims, counts)) if a != b)
                        return False, (f"{side} dimension {dims[d]} != staircase count {counts[d]}"
                                       f" in degree <= {d} at t = {tau}")
            return True, f"staircase counts match specialized dimensions up to degree {bound}"

        run("specialization", spec_check)
        run("dimension", dim_check)

    passed = all(ok for _, ok, _ in checks)
    return VerifyReport(passed, checks, points)
