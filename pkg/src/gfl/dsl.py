"""Problem description language (``.gfl`` files).

    params t;
    algebra x, y / (t*x - 1, y^2 - x);
    module v1, v2 / (x*v1 - t*v2);

``#`` starts a line comment.  Parameters, algebra variables and module
generators live in disjoint namespaces.
"""

import re
from dataclasses import dataclass

from .errors import ParseError
from .poly import AlgPoly, ModVector, ParamPoly, Rational, join_signed, monomial_text

KEYWORDS = ("params", "algebra", "module")

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<int>[0-9]+)
  | (?P<punct>[;,/()*^+\-])
""", re.VERBOSE)


@dataclass(frozen=True)
class SourceLocation:
    line: int
    column: int


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    loc: SourceLocation


def tokenize(text):
    tokens = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind != "ws":
            tokens.append(Token(kind, chunk, SourceLocation(line, col)))
        nl = chunk.count("\n")
        if nl:
            line += nl
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    tokens.append(Token("eof", "", SourceLocation(line, col)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0
        self.params = ()
        self.vars = ()
        self.gens = ()
        self.later_gens = set()

    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, message, tok=None, kind="syntax"):
        tok = tok or self.tok
        raise ParseError(message, tok.loc.line, tok.loc.column, kind)

    def _describe(self, tok):
        return "end of input" if tok.kind == "eof" else f"`{tok.text}`"

    def accept(self, text):
        if self.tok.kind in ("punct", "ident") and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            self.error(f"expected `{text}`, found {self._describe(self.tok)}")

    # -- declarations
    def ident_list(self, seen):
        names = []
        if self.tok.kind != "ident" or self.tok.text in KEYWORDS:
            return names
        while True:
            tok = self.tok
            if tok.kind != "ident" or tok.text in KEYWORDS:
                self.error(f"expected identifier, found {self._describe(tok)}")
            if tok.text in seen or tok.text in names:
                self.error(f"repeated declaration of `{tok.text}`", tok, "repeated_declaration")
            names.append(tok.text)
            self.i += 1
            if not self.accept(","):
                return names

    def _declared_generators(self):
        """Names after the ``module`` keyword, read ahead so that algebra
        relations can report a misplaced generator precisely."""
        toks = self.toks
        for i, tok in enumerate(toks):
            if tok.kind == "ident" and tok.text == "module":
                names, i = [], i + 1
                while toks[i].kind == "ident" and toks[i].text not in KEYWORDS:
                    names.append(toks[i].text)
                    if not (toks[i + 1].kind == "punct" and toks[i + 1].text == ","):
                        break
                    i += 2
                return set(names)
        return set()

    def problem(self):
        self.later_gens = self._declared_generators()
        self.expect("params")
        self.params = tuple(self.ident_list(set()))
        self.expect(";")

        self.expect("algebra")
        self.vars = tuple(self.ident_list(set(self.params)))
        algebra = []
        if self.accept("/"):
            self.expect("(")
            if not self.accept(")"):
                algebra.append(self.poly(vector=False))
                while self.accept(","):
                    algebra.append(self.poly(vector=False))
                self.expect(")")
        self.expect(";")

        self.expect("module")
        self.gens = tuple(self.ident_list(set(self.params) | set(self.vars)))
        module = []
        if self.accept("/"):
            self.expect("(")
            if not self.accept(")"):
                module.append(self.poly(vector=True))
                while self.accept(","):
                    module.append(self.poly(vector=True))
                self.expect(")")
        self.expect(";")
        if self.tok.kind != "eof":
            self.error(f"expected end of input, found {self._describe(self.tok)}")

        from .engine import ProblemSpec

        return ProblemSpec(self.params, self.vars, self.gens, tuple(algebra), tuple(module))

    # -- polynomials
    def poly(self, vector):
        """Signed sum of terms; returns a dict {key: {param_exps: Rational}} packed
        as AlgPoly or ModVector."""
        acc = {}
        sign = 1
        if self.accept("-"):
            sign = -1
        else:
            self.accept("+")
        while True:
            key, texps, c = self.term(vector)
            inner = acc.setdefault(key, {})
            inner[texps] = inner.get(texps, 0) + sign * c
            if self.accept("+"):
                sign = 1
            elif self.accept("-"):
                sign = -1
            else:
                break
        k, n = len(self.params), len(self.vars)
        terms = {key: ParamPoly(inner, k) for key, inner in acc.items()}
        if vector:
            return ModVector(terms, ngens=len(self.gens), nvars=n, nparams=k)
        return AlgPoly(terms, nvars=n, nparams=k)

    def term(self, vector):
        start = self.tok
        coeff = Rational(1)
        seen_any = False
        if self.tok.kind == "int":
            num = int(self.tok.text)
            self.i += 1
            den = 1
            if self.accept("/"):
                if self.tok.kind != "int":
                    self.error(f"expected positive integer, found {self._describe(self.tok)}")
                den = int(self.tok.text)
                if den == 0:
                    self.error("zero denominator in coefficient")
                self.i += 1
            coeff = Rational(num, den)
            seen_any = True
        texps = [0] * len(self.params)
        xexps = [0] * len(self.vars)
        slot = None
        while True:
            star = False
            if seen_any and self.tok.kind == "punct" and self.tok.text == "*":
                self.i += 1
                star = True
            tok = self.tok
            if tok.kind != "ident" or tok.text in KEYWORDS:
                if star:
                    self.error(f"expected identifier, found {self._describe(tok)}")
                break
            self.i += 1
            power = 1
            if self.accept("^"):
                if self.tok.kind != "int":
                    self.error(f"expected exponent, found {self._describe(self.tok)}")
                power = int(self.tok.text)
                self.i += 1
            name = tok.text
            if name in self.params:
                texps[self.params.index(name)] += power
            elif name in self.vars:
                xexps[self.vars.index(name)] += power
            elif name in self.gens:
                if not vector:
                    self.error(f"module generator `{name}` in an algebra relation", tok,
                               "generator_in_algebra_relation")
                if slot is not None or power != 1:
                    self.error("each term must contain exactly one module generator", tok,
                               "nonlinear_in_generators")
                slot = self.gens.index(name) + 1
            elif not vector and name in self.later_gens:
                self.error(f"module generator `{name}` in an algebra relation", tok,
                           "generator_in_algebra_relation")
            else:
                self.error(f"`{name}` undeclared", tok, "unknown_identifier")
            seen_any = True
        if not seen_any:
            self.error(f"expected term, found {self._describe(start)}", start)
        if vector and slot is None:
            self.error("term does not mention a module generator", start, "missing_generator")
        key = (slot, tuple(xexps)) if vector else tuple(xexps)
        return key, tuple(texps), coeff


def parse(text):
    """Parse problem text into a ProblemSpec."""
    return _Parser(text).problem()


def parse_param_poly(text, param_names):
    """Parse a polynomial in the parameters alone, e.g. ``t^2 + t``."""
    p = _Parser(text)
    p.params = tuple(param_names)
    poly = p.poly(vector=False)
    if p.tok.kind != "eof":
        p.error(f"expected end of input, found {p._describe(p.tok)}")
    if not poly.terms:
        return ParamPoly({}, len(param_names))
    return poly.terms[()].num


# ---------------------------------------------------------------- formatting

def _pieces(coeff, suffix, param_names):
    """(Rational, factor text) pieces of coeff * suffix, parameter terms descending."""
    out = []
    for texps, c in coeff.num.sorted_terms():
        factors = [f for f in (monomial_text(texps, param_names) if any(texps) else "", suffix)
                   if f]
        out.append((c / _den_value(coeff), "*".join(factors)))
    return out


def _den_value(coeff):
    if not coeff.den.is_constant():
        raise ValueError("problem relations must have polynomial coefficients")
    return coeff.den.constant_value()


def format_algpoly(p, param_names, var_names):
    pieces = []
    for e, c in p.sorted_terms("lex"):
        pieces += _pieces(c, monomial_text(e, var_names) if any(e) else "", param_names)
    return join_signed(pieces)


def format_modvector(v, param_names, var_names, gen_names):
    pieces = []
    for (slot, e), c in v.sorted_terms("lex"):
        mono = monomial_text(e, var_names) if any(e) else ""
        suffix = f"{mono}*{gen_names[slot - 1]}" if mono else gen_names[slot - 1]
        pieces += _pieces(c, suffix, param_names)
    return join_signed(pieces)


def format(problem):
    """Canonical single-line text; ``parse(format(p)) == p``."""
    ks, xs, vs = problem.param_names, problem.var_names, problem.gen_names
    decl = lambda kw, names: f"{kw} {', '.join(names)}" if names else kw
    alg = ", ".join(format_algpoly(p, ks, xs) for p in problem.algebra_relations)
    mod = ", ".join(format_modvector(v, ks, xs, vs) for v in problem.module_relations)
    return (f"{decl('params', ks)}; {decl('algebra', xs)} / ({alg}); "
            f"{decl('module', vs)} / ({mod});")
