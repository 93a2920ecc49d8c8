import json
from dataclasses import replace

import pytest

from gfl import certificate, dsl
from gfl.certificate import build_presentation, deserialize, serialize, validate
from gfl.engine import CornerRelation, SolveConfig, solve
from gfl.errors import MalformedCertificate, ParseError
from gfl.poly import ParamPoly, RatFunc

from helpers import CORPUS, HAND, hand_problem

t = ParamPoly.var(0, 1)


def _json(cert):
    return json.loads(serialize(cert))


def _bytes(obj):
    return json.dumps(obj).encode()


def test_round_trip_corpus():
    for path in CORPUS:
        cert = solve(dsl.parse(path.read_text()))
        assert deserialize(serialize(cert)) == cert


def test_round_trip_grlex_and_cap():
    p = hand_problem("sqrt2")
    cert = solve(p, SolveConfig("grlex", 7))
    back = deserialize(serialize(cert))
    assert back == cert and back.config == SolveConfig("grlex", 7)


def test_serialization_is_deterministic():
    for name in HAND:
        p = hand_problem(name)
        assert serialize(solve(p)) == serialize(solve(p))


def test_field_order():
    obj = _json(solve(hand_problem("inverse_t")))
    assert list(obj) == ["format_version", "problem_digest", "witness_f", "algebra", "module",
                         "config", "names"]
    assert obj["config"] == {"order": "lex", "degree_cap": None}


def test_witness_rendering_rule():
    cert = replace(solve(hand_problem("inverse_t")), witness=t * (t + 1))
    assert _json(cert)["witness_f"] == "t^2 + t"


def test_relation_text():
    obj = _json(solve(hand_problem("inverse_t")))
    assert obj["algebra"]["relations"] == [
        {"corner": "x", "tail": [{"monomial": "1", "coeff": "(1)/(t)"}]}]
    obj = _json(solve(hand_problem("echelon_unit")))
    assert obj["module"]["relations"] == [
        {"corner": "v2", "tail": [{"monomial": "v1", "coeff": "t"}]}]


def test_zero_witness_rejected():
    obj = _json(solve(hand_problem("inverse_t")))
    obj["witness_f"] = "0"
    with pytest.raises(MalformedCertificate) as info:
        deserialize(_bytes(obj))
    assert info.value.invariant == "ZeroWitness"


def test_tail_outside_staircase_rejected():
    obj = _json(solve(dsl.parse("params; algebra x, y / (x^2, y^2); module v / ();")))
    rels = {r["corner"]: r for r in obj["algebra"]["relations"]}
    # y^2 lies below the corner x^2 in lex order but outside the staircase
    rels["x^2"]["tail"].append({"monomial": "y^2", "coeff": "1"})
    with pytest.raises(MalformedCertificate) as info:
        deserialize(_bytes(obj))
    assert info.value.invariant == "TailOutsideStaircase"


@pytest.mark.parametrize("mutate, invariant", [
    (lambda o: o["algebra"]["relations"].append(dict(o["algebra"]["relations"][0])),
     "DuplicateCorner"),
    (lambda o: o["algebra"]["corners"].append("x^3"), "CornersNotAntichain"),
    (lambda o: o["algebra"]["corners"].pop(), "CornerMismatch"),
    (lambda o: o["algebra"]["relations"][0]["tail"].append({"monomial": "x", "coeff": "0"}),
     "ZeroTailCoefficient"),
    (lambda o: o["algebra"]["relations"][0]["tail"].append({"monomial": "x^3", "coeff": "1"}),
     "TailNotBelowCorner"),
    (lambda o: o["algebra"]["relations"][0]["tail"].__setitem__(
        0, {"monomial": "1", "coeff": "(1)/(t + 3)"}), "DenominatorNotInWitness"),
])
def test_each_invariant_is_checked(mutate, invariant):
    p = dsl.parse("params t; algebra x / (t*x^2 - 1); module v / ();")
    obj = _json(solve(p))
    mutate(obj)
    with pytest.raises(MalformedCertificate) as info:
        deserialize(_bytes(obj))
    assert info.value.invariant == invariant


@pytest.mark.parametrize("text", [b"{", b"[]", b'{"format_version": 2}', b"\xff"])
def test_unreadable_bytes(text):
    with pytest.raises(ParseError):
        deserialize(text)


def test_json_error_location():
    with pytest.raises(ParseError) as info:
        deserialize(b'{\n  "a": 1,\n  oops\n}')
    assert (info.value.line, info.value.column) == (3, 3)


def test_presentation_of_sqrt2():
    pres = build_presentation(solve(hand_problem("sqrt2")))
    assert pres.render(()).splitlines()[0] == "B = A[X1]/(X1^2 - 2)"


def test_presentation_free():
    pres = build_presentation(solve(dsl.parse("params t; algebra x; module v1, v2;")))
    assert pres.algebra_relations == () and pres.module_relations == ()
    assert pres.render(("t",)) == "B = A[X1]/()\nM = B<V1, V2>/()"


def test_presentation_of_echelon():
    pres = build_presentation(solve(hand_problem("echelon_unit")))
    assert pres.render(("t",)).splitlines()[1] == "M = B<V1, V2>/(V2 - t*V1)"
    pres = build_presentation(solve(hand_problem("echelon_nonunit")))
    assert pres.render(("t",)).splitlines()[1] == "M = B<V1, V2>/(V2 - ((1)/(t))*V1)"


def test_presentation_count_law():
    for path in CORPUS:
        cert = solve(dsl.parse(path.read_text()))
        pres = build_presentation(cert)
        assert len(pres.algebra_relations) == len(cert.algebra_staircase.corners)
        assert len(pres.module_relations) == len(cert.module_staircase.corners)


def test_presentation_rejects_invalid():
    cert = solve(hand_problem("inverse_t"))
    with pytest.raises(MalformedCertificate):
        build_presentation(replace(cert, witness=ParamPoly({}, 1)))
    bad = replace(cert, algebra_corners=(CornerRelation((1,), (((0,), RatFunc(t)),)),) * 2)
    with pytest.raises(MalformedCertificate):
        validate(bad)
