"""``gfl`` command line: solve, verify, explain.

Exit codes: 0 success, 1 verification failed, 2 input error, 3 degree cap exceeded.
"""

import argparse
import json
import sys

from . import certificate, dsl, engine, verify
from .errors import CapExceeded, GflError, MalformedCertificate, ParseError, WrongProblem

OK, VERIFY_FAILED, INPUT_ERROR, CAP_EXCEEDED = 0, 1, 2, 3


def _read(path, binary=False):
    with open(path, "rb" if binary else "r", encoding=None if binary else "utf-8") as fh:
        return fh.read()


def _load_problem(path):
    return dsl.parse(_read(path))


def staircase_summary(cert):
    xs, gens = cert.var_names, cert.gen_names
    lines = [f"f = {cert.witness.render(cert.param_names)}"]
    acorners = sorted(cert.algebra_staircase.corners, reverse=True)
    mcorners = sorted(cert.module_staircase.corners, reverse=True)
    fin = lambda st: "finite" if st.is_finite() else "infinite"
    lines.append(f"algebra corners ({len(acorners)}, staircase {fin(cert.algebra_staircase)}): "
                 + (", ".join(certificate.monomial_text(c[1], xs) for c in acorners) or "none"))
    lines.append(f"module corners ({len(mcorners)}, staircase {fin(cert.module_staircase)}): "
                 + (", ".join(_module_label(c, xs, gens) for c in mcorners) or "none"))
    return "\n".join(lines)


def _module_label(j, xs, gens):
    mono = certificate.monomial_text(j[1], xs)
    return gens[j[0] - 1] if mono == "1" else f"{mono}*{gens[j[0] - 1]}"


def cmd_solve(args):
    try:
        problem = _load_problem(args.input)
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    cfg = engine.SolveConfig(order=args.order, degree_cap=args.cap)
    try:
        cert = engine.solve(problem, cfg)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        partial = exc.partial
        if partial:
            print(f"stage: {partial['stage']}", file=sys.stderr)
            print(f"corners so far: {len(partial['corners'])}", file=sys.stderr)
            print(f"witness so far: {partial['witness'].render(problem.param_names)}",
                  file=sys.stderr)
        return CAP_EXCEEDED
    data = certificate.serialize(cert)
    if args.output:
        try:
            with open(args.output, "wb") as fh:
                fh.write(data)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return INPUT_ERROR
    print(staircase_summary(cert))
    return OK


def cmd_verify(args):
    if args.trials < 1:
        print("error: --trials must be at least 1", file=sys.stderr)
        return INPUT_ERROR
    try:
        problem = _load_problem(args.input)
        cert = certificate.deserialize(_read(args.cert, binary=True))
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except MalformedCertificate as exc:
        print(f"certificate: FAIL — MalformedCertificate({exc.invariant}) {exc.detail}")
        return VERIFY_FAILED
    try:
        report = verify.verify(problem, cert, trials=args.trials, seed=args.seed)
    except WrongProblem as exc:
        print(f"problem_digest: FAIL — WrongProblem: {exc}")
        return VERIFY_FAILED
    print(report.render())
    print("verification " + ("passed" if report.passed else "FAILED"))
    return OK if report.passed else VERIFY_FAILED


def explain_text(cert):
    out = [staircase_summary(cert)]
    xs = cert.var_names
    sides = [("algebra", cert.algebra_staircase, [None])]
    sides.append(("module", cert.module_staircase, list(range(1, cert.module_staircase.m + 1))))
    for side, st, slots in sides:
        for slot in slots:
            label = side if slot is None else f"module slot {cert.gen_names[slot - 1]}"
            if st.n == 2:
                out.append(f"\n{label} staircase ({xs[0]} to the right, {xs[1]} up):")
                out.append(st.render_ascii(slot or 1))
            else:
                corners = sorted(c for c in st.corners if c[0] == (slot or 1))
                text = ", ".join(certificate.monomial_text(c[1], xs) for c in corners) or "none"
                out.append(f"\n{label} corners: {text}")
    pres = certificate.build_presentation(cert)
    out.append("\npresentation over A[1/f]:")
    out.append(pres.render(cert.param_names))
    return "\n".join(out)


def cmd_explain(args):
    try:
        raw = _read(args.path, binary=True)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    try:
        if raw.lstrip().startswith(b"{"):
            cert = certificate.deserialize(raw)
        else:
            cert = engine.solve(dsl.parse(raw.decode("utf-8")),
                                engine.SolveConfig(order=args.order, degree_cap=args.cap))
    except (ParseError, MalformedCertificate, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CAP_EXCEEDED
    print(explain_text(cert))
    return OK


def build_parser():
    parser = argparse.ArgumentParser(prog="gfl", description="Generic freeness certificates.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="compute a witness f and a staircase certificate")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.add_argument("--order", choices=["lex", "grlex"], default="lex")
    p.add_argument("--cap", type=int, default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a certificate against its problem")
    p.add_argument("input")
    p.add_argument("cert")
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("explain", help="render the staircases of a problem or certificate")
    p.add_argument("path")
    p.add_argument("--order", choices=["lex", "grlex"], default="lex")
    p.add_argument("--cap", type=int, default=None)
    p.set_defaults(func=cmd_explain)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else OK
    try:
        return args.func(args)
    except GflError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
