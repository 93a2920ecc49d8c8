"""Certificates: the witness f, both staircases with their corner relations,
and the finite presentations they determine."""

import hashlib
import json
import re
from dataclasses import dataclass

from .engine import CornerRelation, SolveConfig
from .errors import MalformedCertificate, ParseError
from .poly import (AlgPoly, ModVector, ParamPoly, RatFunc, divides, divides_power,
                   index_key, monomial_text)
from .staircase import Staircase

FORMAT_VERSION = 1


def problem_digest(problem):
    from .dsl import format as format_problem

    return hashlib.sha256(format_problem(problem).encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class Certificate:
    witness: ParamPoly
    algebra_staircase: Staircase
    algebra_corners: tuple
    module_staircase: Staircase
    module_corners: tuple
    problem_digest: str
    config: SolveConfig
    names: tuple  # (param_names, var_names, gen_names)

    @property
    def param_names(self):
        return tuple(self.names[0])

    @property
    def var_names(self):
        return tuple(self.names[1])

    @property
    def gen_names(self):
        return tuple(self.names[2])

    def module_rules(self):
        """Corner relations as (module index, tail dict)."""
        return [(r.corner, dict(r.tail)) for r in self.module_corners]

    def algebra_rules(self):
        """Algebra corner relations lifted to slot 1 module indices."""
        return [((1, r.corner), {(1, e): a for e, a in r.tail}) for r in self.algebra_corners]


def _check(cond, invariant, detail=""):
    if not cond:
        raise MalformedCertificate(invariant, detail)


def validate(cert):
    """Raise MalformedCertificate naming the first violated invariant."""
    k = len(cert.param_names)
    n, m = len(cert.var_names), len(cert.gen_names)
    _check(isinstance(cert.witness, ParamPoly) and cert.witness.nvars == k, "ShapeMismatch",
           "witness is not an element of A")
    _check(not cert.witness.is_zero(), "ZeroWitness", "witness f is 0")
    _check(cert.algebra_staircase.shape == (1, n), "ShapeMismatch", "algebra staircase shape")
    _check(cert.module_staircase.shape == (m, n), "ShapeMismatch", "module staircase shape")
    key = index_key(cert.config.order)
    sides = (("algebra", cert.algebra_staircase, cert.algebra_rules()),
             ("module", cert.module_staircase, cert.module_rules()))
    for side, st, rules in sides:
        corners = [c for c, _ in rules]
        _check(len(set(corners)) == len(corners), "DuplicateCorner", side)
        for c in corners:
            _check(1 <= c[0] <= st.m and len(c[1]) == n, "ShapeMismatch", f"{side} corner {c!r}")
        for a in corners:
            for b in corners:
                _check(a == b or a[0] != b[0] or not divides(a[1], b[1]),
                       "CornersNotAntichain", f"{side} corners {a!r} and {b!r}")
        _check(set(corners) == set(st.corners), "CornerMismatch",
               f"{side} relations do not match the staircase corners")
        for c, tail in rules:
            for j, a in tail.items():
                _check(isinstance(a, RatFunc) and a.nvars == k, "ShapeMismatch",
                       f"{side} tail coefficient at {j!r}")
                _check(not a.is_zero(), "ZeroTailCoefficient", f"{side} corner {c!r}")
                _check(j[0] >= 1 and len(j[1]) == n, "ShapeMismatch", f"{side} tail index {j!r}")
                _check(key(j) < key(c), "TailNotBelowCorner", f"{side} corner {c!r}, index {j!r}")
                _check(st.contains(j), "TailOutsideStaircase", f"{side} corner {c!r}, index {j!r}")
                _check(divides_power(a.den, cert.witness), "DenominatorNotInWitness",
                       f"{side} corner {c!r}, index {j!r}")
    return cert


# ---------------------------------------------------------------- presentation

@dataclass(frozen=True)
class Presentation:
    """B = A[X1..Xn]/(algebra_relations), M = B<V1..Vm>/(module_relations) over A[f^-1]."""

    indeterminates: tuple
    algebra_relations: tuple
    generators: tuple
    module_relations: tuple

    def render(self, param_names):
        algebra = ", ".join(render_algpoly(p, param_names, self.indeterminates)
                            for p in self.algebra_relations)
        module = ", ".join(render_modvector(v, param_names, self.indeterminates, self.generators)
                           for v in self.module_relations)
        xs = ", ".join(self.indeterminates)
        vs = ", ".join(self.generators)
        ring = f"A[{xs}]" if xs else "A"
        b = f"B = {ring}/({algebra})" if algebra or xs else "B = A"
        m = f"M = B<{vs}>/({module})" if vs else "M = 0"
        return f"{b}\n{m}"


def build_presentation(cert):
    """One relation per corner on each side: corner minus its tail."""
    try:
        validate(cert)
    except MalformedCertificate:
        raise
    except Exception as exc:  # structurally broken input
        raise MalformedCertificate("Unreadable", str(exc)) from exc
    k, n, m = len(cert.param_names), len(cert.var_names), len(cert.gen_names)
    one = RatFunc.const(1, k)
    alg = []
    for r in cert.algebra_corners:
        terms = {r.corner: one}
        for e, a in r.tail:
            terms[e] = -a
        alg.append(AlgPoly(terms, nvars=n, nparams=k))
    mod = []
    for r in cert.module_corners:
        terms = {r.corner: one}
        for j, a in r.tail:
            terms[j] = -a
        mod.append(ModVector(terms, ngens=m, nvars=n, nparams=k))
    return Presentation(
        indeterminates=tuple(f"X{i}" for i in range(1, n + 1)),
        algebra_relations=tuple(alg),
        generators=tuple(f"V{i}" for i in range(1, m + 1)),
        module_relations=tuple(mod),
    )


def _scalar_text(c, param_names):
    if c.den.is_one():
        return c.num.render(param_names)
    return c.render(param_names)


def render_algpoly(p, param_names, var_names, order="lex"):
    """Readable text of a polynomial with Frac(A) coefficients."""
    parts = []
    for e, c in p.sorted_terms(order):
        mono = monomial_text(e, var_names)
        parts.append(_scaled(c, mono, param_names))
    return _join(parts)


def render_modvector(v, param_names, var_names, gen_names, order="lex"):
    parts = []
    for (slot, e), c in v.sorted_terms(order):
        mono = monomial_text(e, var_names)
        basis = gen_names[slot - 1] if mono == "1" else f"{mono}*{gen_names[slot - 1]}"
        parts.append(_scaled(c, basis, param_names))
    return _join(parts)


def _scaled(c, basis, param_names):
    if basis != "1" and c.num.leading()[1] < 0:
        return "-" + _scaled(-c, basis, param_names)
    text = _scalar_text(c, param_names)
    if basis == "1":
        return text
    if text == "1":
        return basis
    if text == "-1":
        return f"-{basis}"
    if len(c.num.terms) > 1 or not c.den.is_one():
        return f"({text})*{basis}"
    return f"{text}*{basis}"


def _join(parts):
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


# ---------------------------------------------------------------- serialization

def _module_index_text(j, var_names):
    mono = monomial_text(j[1], var_names)
    return f"v{j[0]}" if mono == "1" else f"v{j[0]}*{mono}"


def _relation_json(rel, fmt_index, param_names):
    return {
        "corner": fmt_index(rel.corner),
        "tail": [{"monomial": fmt_index(j), "coeff": a.render(param_names)} for j, a in rel.tail],
    }


def to_json(cert):
    params, xs, _ = cert.param_names, cert.var_names, cert.gen_names
    akey = index_key(cert.config.order)
    alg_fmt = lambda e: monomial_text(e, xs)
    mod_fmt = lambda j: _module_index_text(j, xs)
    arels = sorted(cert.algebra_corners, key=lambda r: akey((1, r.corner)), reverse=True)
    mrels = sorted(cert.module_corners, key=lambda r: akey(r.corner), reverse=True)
    return {
        "format_version": FORMAT_VERSION,
        "problem_digest": cert.problem_digest,
        "witness_f": cert.witness.render(params),
        "algebra": {
            "corners": [alg_fmt(r.corner) for r in arels],
            "relations": [_relation_json(r, alg_fmt, params) for r in arels],
        },
        "module": {
            "corners": [mod_fmt(r.corner) for r in mrels],
            "relations": [_relation_json(r, mod_fmt, params) for r in mrels],
        },
        "config": {"order": cert.config.order, "degree_cap": cert.config.degree_cap},
        "names": {"params": list(params), "variables": list(xs),
                  "generators": list(cert.gen_names)},
    }


def serialize(cert):
    """Canonical UTF-8 bytes of a certificate."""
    return (json.dumps(to_json(cert), indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def _schema(cond, what):
    if not cond:
        raise ParseError(f"certificate schema: {what}", 1, 1, kind="schema")


def _parse_monomial(text, var_names):
    text = text.strip()
    exps = [0] * len(var_names)
    if text == "1":
        return tuple(exps)
    for factor in text.split("*"):
        m = re.fullmatch(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\^\s*(\d+))?\s*", factor)
        _schema(m and m.group(1) in var_names, f"bad monomial {text!r}")
        exps[var_names.index(m.group(1))] += int(m.group(2) or 1)
    return tuple(exps)


def _parse_module_index(text, var_names, m):
    head, _, rest = text.strip().partition("*")
    mt = re.fullmatch(r"v(\d+)", head.strip())
    _schema(mt is not None, f"bad module index {text!r}")
    slot = int(mt.group(1))
    _schema(1 <= slot <= m, f"generator slot out of range in {text!r}")
    return (slot, _parse_monomial(rest if rest else "1", var_names))


def _parse_scalar(text, param_names):
    from .dsl import parse_param_poly

    text = text.strip()
    mt = re.fullmatch(r"\((.*)\)\s*/\s*\((.*)\)", text)
    if mt:
        num = parse_param_poly(mt.group(1), param_names)
        den = parse_param_poly(mt.group(2), param_names)
        if den.is_zero():
            raise ParseError(f"zero denominator in {text!r}", 1, 1)
        return RatFunc(num, den)
    return RatFunc(parse_param_poly(text, param_names))


def from_json(data):
    _schema(isinstance(data, dict), "top level must be an object")
    _schema(data.get("format_version") == FORMAT_VERSION, "unsupported format_version")
    for key in ("problem_digest", "witness_f", "algebra", "module", "config", "names"):
        _schema(key in data, f"missing field {key!r}")
    names = data["names"]
    _schema(isinstance(names, dict), "names must be an object")
    params = tuple(names.get("params", ()))
    xs = tuple(names.get("variables", ()))
    gens = tuple(names.get("generators", ()))
    n, m = len(xs), len(gens)
    config = data["config"]
    _schema(isinstance(config, dict) and config.get("order") in ("lex", "grlex"), "bad config")
    cap = config.get("degree_cap")
    _schema(cap is None or (isinstance(cap, int) and cap >= 0), "bad degree_cap")

    from .dsl import parse_param_poly

    witness_f = parse_param_poly(str(data["witness_f"]), params)

    def side(obj, parse_index):
        _schema(isinstance(obj, dict) and "corners" in obj and "relations" in obj,
                "side must have corners and relations")
        corners = [parse_index(c) for c in obj["corners"]]
        rels = []
        for r in obj["relations"]:
            _schema(isinstance(r, dict) and "corner" in r and "tail" in r, "bad relation")
            tail = []
            for t in r["tail"]:
                _schema(isinstance(t, dict) and "monomial" in t and "coeff" in t, "bad tail entry")
                tail.append((parse_index(t["monomial"]), _parse_scalar(t["coeff"], params)))
            rels.append(CornerRelation(parse_index(r["corner"]), tuple(tail)))
        return corners, rels

    acorners, arels = side(data["algebra"], lambda s: _parse_monomial(s, xs))
    mcorners, mrels = side(data["module"], lambda s: _parse_module_index(s, xs, m))
    # the listed corners must be exactly the staircase generators, antichain included
    for side_name, corners in (("algebra", [(1, c) for c in acorners]), ("module", mcorners)):
        for a in corners:
            for b in corners:
                _check(a == b or a[0] != b[0] or not divides(a[1], b[1]),
                       "CornersNotAntichain", f"{side_name} corners {a!r} and {b!r}")
    cert = Certificate(
        witness=witness_f,
        algebra_staircase=Staircase(1, n, [(1, c) for c in acorners]),
        algebra_corners=tuple(arels),
        module_staircase=Staircase(m, n, mcorners),
        module_corners=tuple(mrels),
        problem_digest=str(data["problem_digest"]),
        config=SolveConfig(config["order"], cap),
        names=(params, xs, gens),
    )
    return validate(cert)


def deserialize(data):
    """Parse certificate bytes and re-validate every invariant."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"certificate is not UTF-8: {exc}", 1, 1) from exc
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from exc
    return from_json(obj)
