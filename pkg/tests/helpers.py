"""Shared fixtures data: hand-checked instances, corpus paths, certificate mutations."""

import random
from dataclasses import replace
from pathlib import Path

from gfl import dsl
from gfl.engine import CornerRelation
from gfl.poly import ParamPoly, RatFunc, index_key
from gfl.staircase import Staircase

HERE = Path(__file__).parent
CORPUS = sorted((HERE / "corpus").glob("*.gfl"))
ADVERSARIAL = HERE / "corpus" / "adversarial" / "cap_chain.gfl"

# The five hand-solved instances: source text, witness text, algebra corners,
# module corners and the corner relations rendered as {corner: {index: coeff text}}.
HAND = {
    "sqrt2": "params; algebra x / (x^2 - 2); module v / ();",
    "inverse_t": "params t; algebra x / (t*x - 1); module v / ();",
    "torsion": "params t; algebra; module v1 / (t*v1);",
    "echelon_nonunit": "params t; algebra; module v1, v2 / (v1 - t*v2);",
    "echelon_unit": "params t; algebra; module v1, v2 / (t*v1 - v2);",
}


def hand_problem(name):
    return dsl.parse(HAND[name])


# ---------------------------------------------------------------- mutations

def _module_form(side, rel):
    """Relation corner and tail as module indices."""
    if side == "algebra":
        return (1, rel.corner), {(1, e): a for e, a in rel.tail}
    return rel.corner, dict(rel.tail)


def _back(side, corner, tail, key):
    if side == "algebra":
        items = sorted(((e, a) for (_, e), a in tail.items()), key=lambda kv: key((1, kv[0])),
                       reverse=True)
        return CornerRelation(corner[1], tuple(items))
    items = sorted(tail.items(), key=lambda kv: key(kv[0]), reverse=True)
    return CornerRelation(corner, tuple(items))


def mutation_pool(cert):
    """Every single-coefficient mutation of a certificate.

    Kinds: a tail coefficient moved by +1 or -1 (including coefficients that
    were zero at staircase indices below the corner), a corner swapped with a
    staircase index of the same slot, and the witness set to zero.
    """
    k = len(cert.param_names)
    key = index_key(cert.config.order)
    one = RatFunc.const(1, k)
    pool = [("witness_zero", replace(cert, witness=ParamPoly({}, k)))]
    for side in ("algebra", "module"):
        st = getattr(cert, f"{side}_staircase")
        rels = list(getattr(cert, f"{side}_corners"))
        for i, rel in enumerate(rels):
            corner, tail = _module_form(side, rel)
            deg = sum(corner[1])
            members = [j for j in st.members_up_to(max(deg, 1)) if j[0] == corner[0]]
            below = [j for j in members if key(j) < key(corner)]
            for j in sorted(set(tail) | set(below)):
                for delta in (one, -one):
                    new_tail = dict(tail)
                    c = new_tail.get(j, RatFunc.const(0, k)) + delta
                    if c:
                        new_tail[j] = c
                    else:
                        new_tail.pop(j)
                    new = rels[:i] + [_back(side, corner, new_tail, key)] + rels[i + 1:]
                    pool.append((f"{side}_tail{'+' if delta == one else '-'}1",
                                 replace(cert, **{f"{side}_corners": tuple(new)})))
            for j in members:
                new_tail = {a: b for a, b in tail.items() if a != j}
                new = rels[:i] + [_back(side, j, new_tail, key)] + rels[i + 1:]
                corners = (set(st.corners) - {corner}) | {j}
                pool.append((f"{side}_corner_swap",
                             replace(cert, **{f"{side}_corners": tuple(new),
                                              f"{side}_staircase": Staircase(st.m, st.n, corners)})))
    return pool


def sample_mutations(cert, count=20, seed=0):
    """``count`` mutations, without replacement when the pool is large enough."""
    pool = mutation_pool(cert)
    rng = random.Random(seed)
    if len(pool) >= count:
        return rng.sample(pool, count)
    return [rng.choice(pool) for _ in range(count)]
