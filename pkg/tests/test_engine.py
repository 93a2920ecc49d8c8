import random

import pytest
import sympy

from gfl import dsl, engine, verify
from gfl.engine import CornerRelation, ProblemSpec, SolveConfig, solve
from gfl.errors import CapExceeded, StructuralError
from gfl.poly import AlgPoly, ModVector, ParamPoly, RatFunc, divides_power, index_key
from gfl.staircase import Staircase

from helpers import ADVERSARIAL, CORPUS, hand_problem
import randgen

t = ParamPoly.var(0, 1)
one = ParamPoly.const(1, 1)


def rf(p, q=None):
    return RatFunc(p, q)


def q(c):
    return RatFunc.const(c, 0)


# ---------------------------------------------------------------- hand instances

def test_sqrt2():
    c = solve(hand_problem("sqrt2"))
    assert c.witness.is_one()
    assert c.algebra_staircase == Staircase(1, 1, [(2,)])
    assert c.algebra_corners == (CornerRelation((2,), (((0,), q(2)),)),)
    assert c.module_staircase == Staircase(1, 1, [(1, (2,))])


def test_inverse_t():
    c = solve(hand_problem("inverse_t"))
    assert c.witness == t
    assert c.algebra_staircase.members_up_to(5) == [(1, (0,))]
    assert c.algebra_corners == (CornerRelation((1,), (((0,), rf(one, t)),)),)


def test_torsion_module_dies():
    c = solve(hand_problem("torsion"))
    assert c.witness == t
    assert c.module_staircase.count_up_to_degree(0) == 0
    assert c.module_corners == (CornerRelation((1, ()), ()),)


def test_echelon_nonunit_pivot():
    p = hand_problem("echelon_nonunit")
    for cert in (solve(p), engine.module_case_echelon(p)):
        assert cert.witness == t
        assert cert.module_staircase.members_up_to(0) == [(1, ())]
        assert cert.module_corners == (CornerRelation((2, ()), (((1, ()), rf(one, t)),)),)


def test_echelon_unit_pivot():
    p = hand_problem("echelon_unit")
    for cert in (solve(p), engine.module_case_echelon(p)):
        assert cert.witness.is_one()
        assert cert.module_corners == (CornerRelation((2, ()), (((1, ()), rf(t)),)),)


def test_free_module_without_relations():
    p = dsl.parse("params t; algebra; module v1;")
    c = engine.module_case_echelon(p)
    assert c.witness.is_one() and c.module_corners == ()
    assert c.module_staircase.count_up_to_degree(0) == 1


def test_agreement_examples():
    for name in ("torsion", "echelon_nonunit", "echelon_unit"):
        assert engine.agree_with_general(hand_problem(name))
    assert engine.agree_with_general(dsl.parse("params; algebra; module;"))


def test_agreement_random_three_generators():
    rng = random.Random(21)
    for _ in range(100):
        rels = []
        for _ in range(2):
            rels.append(ModVector({(s, ()): ParamPoly({(d,): rng.randint(-3, 3) for d in range(3)}, 1)
                                   for s in (1, 2, 3)}, ngens=3, nvars=0, nparams=1))
        p = ProblemSpec(("t",), (), ("v1", "v2", "v3"), (), tuple(rels))
        assert engine.agree_with_general(p)


def test_echelon_rejects_variables():
    with pytest.raises(StructuralError):
        engine.module_case_echelon(hand_problem("sqrt2"))


# ---------------------------------------------------------------- reduction

def _x(e, c=1):
    return AlgPoly({(e,): c}, nvars=1, nparams=0)


def test_reduce_examples():
    rules = solve(hand_problem("sqrt2")).algebra_corners
    assert engine.reduce_normal_form(_x(2), rules) == _x(0, 2)
    assert engine.reduce_normal_form(_x(3), rules) == _x(1, 2)
    fixed = _x(1, 5) + _x(0, 3)
    assert engine.reduce_normal_form(fixed, rules) == fixed


def test_reduce_rejects_duplicate_corners():
    r = CornerRelation((2,), ())
    with pytest.raises(StructuralError):
        engine.reduce_normal_form(_x(3), [r, r])


def test_reduce_rejects_non_antichain():
    with pytest.raises(StructuralError):
        engine.reduce_normal_form(_x(3), [CornerRelation((2,), ()), CornerRelation((3,), ())])


# ---------------------------------------------------------------- invariants

def _random_problems(count, seed):
    rng = random.Random(seed)
    return [randgen.random_problem(rng) for _ in range(count)]


def _scalar_problems():
    return _random_problems(40, 5)


def test_certificate_invariants_on_random_instances():
    for p in _scalar_problems():
        c = solve(p)
        key = index_key("lex")
        for st, rels in ((c.algebra_staircase, c.algebra_rules()),
                         (c.module_staircase, c.module_rules())):
            corners = [r for r, _ in rels]
            assert set(corners) == set(st.corners)
            for corner, tail in rels:
                for j, a in tail.items():
                    assert key(j) < key(corner)
                    assert st.contains(j)
                    assert divides_power(a.den, c.witness)


def test_spanning_and_idempotence():
    for p in _scalar_problems():
        c = solve(p)
        for r in p.algebra_relations:
            nf = engine.reduce_normal_form(r, c.algebra_corners)
            assert not nf
        for r in p.module_relations:
            nf = engine.reduce_normal_form(r, c.module_corners)
            assert not nf
        rng = random.Random(2)
        for _ in range(3):
            if p.m:
                v = randgen.random_modvector(rng, p.k, p.n, p.m, 3, 4)
                once = engine.reduce_normal_form(v, c.module_corners)
                assert engine.reduce_normal_form(once, c.module_corners) == once
                assert all(c.module_staircase.contains(j) for j in once.terms)


def _sympy_corners(relations, n, point=()):
    """Oracle: leading monomials of sympy's reduced lex basis over Q."""
    xs = sympy.symbols(f"x0:{n}")
    ts = sympy.symbols(f"t0:{len(point)}")
    exprs = []
    for r in relations:
        e = 0
        for mono, c in r.terms.items():
            coeff = sum(sympy.Rational(int(v.numerator), int(v.denominator))
                        * sympy.prod([tt ** k for tt, k in zip(ts, te)])
                        for te, v in c.num.terms.items())
            coeff = coeff / sum(sympy.Rational(int(v.numerator), int(v.denominator))
                                * sympy.prod([tt ** k for tt, k in zip(ts, te)])
                                for te, v in c.den.terms.items())
            e += coeff.subs(dict(zip(ts, point))) * sympy.prod([x ** k for x, k in zip(xs, mono)])
        exprs.append(sympy.expand(e))
    exprs = [e for e in exprs if e != 0]
    if not exprs:
        return set()
    g = sympy.groebner(exprs, *xs, order="lex")
    return {sympy.Poly(p, *xs).monoms(order="lex")[0] for p in g.exprs}


def test_algebra_staircase_matches_sympy():
    rng = random.Random(13)
    checked = 0
    for _ in range(40):
        p = randgen.random_problem(rng, max_k=1, max_n=2)
        if not p.n:
            continue
        c = solve(p)
        pts = verify.sample_points(c.witness, p.k, 2, seed=1)
        for tau in pts:
            mine = {e for _, e in c.algebra_staircase.corners}
            assert mine == _sympy_corners(p.algebra_relations, p.n, tau)
            checked += 1
    assert checked >= 20


def test_specialization_invariance():
    for p in _random_problems(30, 8):
        c = solve(p)
        for tau in verify.sample_points(c.witness, p.k, 3, seed=4):
            sc = solve(verify.specialize(p, tau, c.witness))
            assert sc.algebra_staircase == c.algebra_staircase
            assert sc.module_staircase == c.module_staircase


def test_grlex_order_is_supported():
    p = dsl.parse("params; algebra x, y / (x - y^2); module v / ();")
    lex = solve(p)
    gr = solve(p, SolveConfig("grlex"))
    assert {e for _, e in lex.algebra_staircase.corners} == {(1, 0)}
    assert {e for _, e in gr.algebra_staircase.corners} == {(0, 2)}
    assert verify.verify(p, gr).passed


def test_solve_config_validation():
    with pytest.raises(ValueError):
        SolveConfig("revlex")
    with pytest.raises(ValueError):
        SolveConfig(degree_cap=-1)


def test_corpus_within_default_cap():
    for path in CORPUS:
        solve(dsl.parse(path.read_text()))


def test_cap_exceeded_has_diagnostics():
    p = dsl.parse(ADVERSARIAL.read_text())
    with pytest.raises(CapExceeded) as info:
        solve(p)
    d = info.value.partial
    assert d["stage"] == "algebra" and d["cap"] == engine.default_cap(p) == 12
    assert d["degree"] > 12 and d["corners"]
    # with a larger cap the same input completes
    c = solve(p, SolveConfig(degree_cap=16))
    assert {e for _, e in c.algebra_staircase.corners} >= {(0, 0, 0, 0, 16)}


# ---------------------------------------------------------------- seeded bugs

def _buggy_normal_form(kind, original):
    def nf(p, rules, key):
        out = original(p, rules, key)
        if kind == "drop_term" and len(out) > 1:
            out = dict(out)
            out.pop(min(out, key=key))
        elif kind == "scale_tail" and len(out) > 1:
            lo = min(out, key=key)
            out = dict(out)
            out[lo] = out[lo] * 2
        elif kind == "skip" and out and len(rules) > 1:
            return {}
        return out
    return nf


@pytest.mark.parametrize("kind", ["drop_term", "scale_tail", "skip"])
def test_verify_catches_seeded_engine_bug(monkeypatch, kind):
    problems = [dsl.parse(path.read_text()) for path in CORPUS]
    honest = [solve(p) for p in problems]
    monkeypatch.setattr(engine, "_normal_form", _buggy_normal_form(kind, engine._normal_form))
    caught = 0
    for p, good in zip(problems, honest):
        bad = solve(p)
        if bad == good:
            continue
        # the bug stays active: verify must not lean on the engine's reduction
        assert not verify.verify(p, bad).passed
        caught += 1
    assert caught >= 1
