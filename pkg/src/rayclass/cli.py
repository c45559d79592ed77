"""Command-line interface: ``rayclass {field,bound,eval,verify,example}``.

Exit status is 0 on success, 1 when a verification fails and 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .bounds import (
    DEFAULT_SEED,
    certify_curve,
    certify_ffgg,
    certify_hkc_separation,
    certify_j_inequality,
    certify_normconstant,
    certify_siegel_bounds,
    generator_plan,
    n_min_bound,
)
from .classfield import hilbert_class_poly
from .cmfield import classify_prime, field_invariants
from .errors import RayClassError
from .ideals import (
    TorsionPoint,
    find_omega,
    ideal_multiply,
    integer_ideal,
    prime_ideal,
    unit_ideal,
)
from .modfun import (
    C_value,
    J_value,
    SiegelIndex,
    fricke_value,
    j_value,
    siegel_value,
    weber_x,
    y_squared,
)
from .numerics import context, default_digits
from .quadforms import QuadForm, enumerate_reduced, tau_of_form

SMALL_PRIMES = (2, 3, 5, 7, 11, 13)


class UsageError(RayClassError, ValueError):
    pass


# -- parsing helpers -----------------------------------------------------------------


def parse_omega(text: str) -> tuple[int, int, int]:
    """``"a,b/D"`` -> ``(a, b, D)`` meaning ``(a*tau_K + b)/D``."""
    try:
        head, D = text.split("/")
        a, b = head.split(",")
        return int(a), int(b), int(D)
    except ValueError:
        raise UsageError(f"--omega expects 'a,b/D', got {text!r}") from None


def parse_form(text: str) -> QuadForm:
    try:
        a, b, c = (int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"--form expects 'a,b,c', got {text!r}") from None
    return QuadForm(a, b, c)


def parse_ideal(F, text: str):
    """``"p:2;p:13;p:23:15;n:3"``: product of primes above p (optional root) and integers."""
    I = unit_ideal(F)
    for part in filter(None, (s.strip() for s in text.split(";"))):
        fields = part.split(":")
        try:
            if fields[0] == "p" and len(fields) in (2, 3):
                root = int(fields[2]) if len(fields) == 3 else None
                J = prime_ideal(F, int(fields[1]), root)
            elif fields[0] == "n" and len(fields) == 2:
                J = integer_ideal(F, int(fields[1]))
            else:
                raise ValueError
        except ValueError as exc:
            if isinstance(exc, RayClassError):
                raise
            raise UsageError(f"bad ideal factor {part!r}; use p:P, p:P:root or n:N") from None
        I = ideal_multiply(I, J)
    return I


def _point(args, ctx):
    given = [x is not None for x in (args.tau, args.tau_surd, args.form)]
    if sum(given) != 1:
        raise UsageError("give exactly one of --tau, --tau-surd, --form")
    if args.tau is not None:
        return ctx.number(args.tau), args.tau
    if args.tau_surd is not None:
        F = field_invariants(args.tau_surd)
        return F.tau, f"tau_K(d={args.tau_surd})"
    Q = parse_form(args.form)
    return tau_of_form(Q), f"tau_Q({Q})"


# -- output -------------------------------------------------------------------------


def _emit(args, results: dict, inputs: dict, text_lines: list[str]) -> None:
    if args.json:
        envelope = {
            "command": " ".join(args.argv),
            "inputs": inputs,
            "results": results,
            "digits": getattr(args, "digits", None),
        }
        print(json.dumps(envelope, indent=2, sort_keys=True, default=str))
    else:
        print("\n".join(text_lines))


def _cv_line(name: str, v, ctx) -> str:
    d = v.to_dict(ctx)
    im = d["im"]
    sign, im = ("-", im[1:]) if im.startswith("-") else ("+", im)
    return f"{name} = {d['re']} {sign} {im}*i  (err <= {d['err']})"


# -- commands -----------------------------------------------------------------------


def cmd_field(args) -> int:
    F = field_invariants(args.d)
    forms = enumerate_reduced(args.d)
    split = {p: classify_prime(F, p).value for p in SMALL_PRIMES}
    results = {
        "d": F.d,
        "b": F.b,
        "c": F.c,
        "tau": str(F.tau),
        "h": F.h,
        "forms": [[Q.a, Q.b, Q.c] for Q in forms],
        "splitting": split,
    }
    lines = [
        f"d_K = {F.d}   b_K = {F.b}   c_K = {F.c}   tau_K = {F.tau}",
        f"h_K = {F.h}",
        "reduced forms: " + ", ".join(f"({Q.a},{Q.b},{Q.c})" for Q in forms),
        "primes: " + ", ".join(f"{p} {k}" for p, k in split.items()),
    ]
    _emit(args, results, {"d": args.d}, lines)
    return 0


def _report_lines(r) -> list[str]:
    lines = [f"d_K = {r.d}   N_m = {r.Nm}", f"theorem: {r.theorem.value}"]
    if r.raw_bound is not None:
        lines.append(f"raw bound = {r.raw_bound}")
        lines.append(f"  numerator = {r.numerator}   denominator = {r.denominator}")
    lines.append(f"n_min = {r.n_min}")
    if r.ray_class_degree is not None:
        lines.append(f"[K_m : H_K] = {r.ray_class_degree}")
    lines += [f"note: {n}" for n in r.notes]
    return lines


def cmd_bound(args) -> int:
    F = field_invariants(args.d)
    if (args.nm is None) == (args.ideal is None):
        raise UsageError("give exactly one of --nm and --ideal")
    if args.ideal is not None:
        I = parse_ideal(F, args.ideal)
        report = generator_plan(F, I)
        inputs = {"d": args.d, "ideal": args.ideal, "hnf": str(I)}
    elif args.modulus_integer:
        report = generator_plan(F, integer_ideal(F, args.nm))
        inputs = {"d": args.d, "nm": args.nm, "modulus_integer": True}
    else:
        report = n_min_bound(F, args.nm)
        inputs = {"d": args.d, "nm": args.nm}
    _emit(args, report.to_dict(), inputs, _report_lines(report))
    return 0


EVAL_KINDS = ("j", "J", "C", "siegel", "fricke", "weber-x", "y2", "hilbert")


def cmd_eval(args) -> int:
    ctx = context(args.digits)
    if args.digits < 30 and args.kind == "hilbert":
        print(f"warning: {args.digits} digits may not suffice for class polynomials", file=sys.stderr)
    inputs = {"kind": args.kind}
    if args.kind == "hilbert":
        if args.d is None:
            raise UsageError("hilbert needs --d")
        coeffs = hilbert_class_poly(args.d, ctx)
        _emit(args, {"coefficients": [str(c) for c in coeffs]}, {"d": args.d}, [" ".join(map(str, coeffs))])
        return 0
    if args.kind in ("weber-x", "y2"):
        if args.d is None or args.omega is None:
            raise UsageError(f"{args.kind} needs --d and --omega")
        F = field_invariants(args.d)
        w = TorsionPoint.make(*parse_omega(args.omega))
        fn = weber_x if args.kind == "weber-x" else y_squared
        value = fn(F, args.n, w, ctx)
        inputs.update(d=args.d, n=args.n, omega=str(w))
    else:
        tau, label = _point(args, ctx)
        inputs["tau"] = label
        if args.kind in ("siegel", "fricke"):
            if args.v is None:
                raise UsageError(f"{args.kind} needs --v a,b")
            v = SiegelIndex.parse(args.v)
            inputs["v"] = str(v)
            value = (siegel_value if args.kind == "siegel" else fricke_value)(v, tau, ctx)
        else:
            value = {"j": j_value, "J": J_value, "C": C_value}[args.kind](tau, ctx)
    _emit(args, value.to_dict(ctx), inputs, [_cv_line(args.kind, value, ctx)])
    return 0


def cmd_verify(args) -> int:
    ctx = context(args.digits)
    claim = args.claim
    if claim == "j-inequality":
        cert = certify_j_inequality(args.d_from, args.d_to, ctx, workers=args.workers)
    elif claim == "siegel-bounds":
        cert = certify_siegel_bounds(args.N_max, args.samples, ctx, seed=args.seed, workers=args.workers)
    elif claim == "ffgg":
        cert = certify_ffgg(args.trials, ctx, seed=args.seed)
    elif claim == "normconstant":
        cert = certify_normconstant(args.N, args.points, ctx, seed=args.seed)
    elif claim == "curve":
        cert = certify_curve(args.samples, ctx, seed=args.seed)
    else:
        cert = certify_hkc_separation(args.d, args.n_max, ctx)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(cert.to_json() + "\n")
    lines = [
        f"{cert.claim}: {'PASS' if cert.passed else 'FAIL'}",
        f"  {cert.description}",
        f"  samples checked: {cert.samples_checked}   worst margin: {cert.worst_margin:.6g}",
    ]
    lines += [f"  {k}: {v}" for k, v in cert.details.items()]
    _emit(args, cert.to_dict(), {"claim": claim, "seed": cert.seed}, lines)
    return 0 if cert.passed else 1


def worked_example(digits: int = 30) -> dict:
    """The d = -20 example: three primes, their product, and the bound on n."""
    F = field_invariants(-20)
    p1, p2, p3 = prime_ideal(F, 2), prime_ideal(F, 13), prime_ideal(F, 23, 15)
    m = ideal_multiply(ideal_multiply(p1, p2), p3)
    report = generator_plan(F, m)
    omega = find_omega(F, m)
    split = {p: classify_prime(F, p).value for p in (2, 13, 23)}
    checks = {
        "splitting": split == {2: "ramified", 13: "inert", 23: "split"},
        "N_m": report.Nm == 598,
        "raw_bound": abs(float(report.raw_bound) - 2.286282) < 1e-4,
        "n_min": report.n_min == 3,
    }
    return {
        "d": F.d,
        "primes": {"p1": str(p1), "p2": str(p2), "p3": str(p3)},
        "p1_squared": str(ideal_multiply(p1, p1)),
        "modulus": str(m),
        "norm": m.norm,
        "splitting": split,
        "omega": str(omega),
        "report": report.to_dict(),
        "checks": checks,
    }


def cmd_example(args) -> int:
    out = worked_example(args.digits)
    r = out["report"]
    lines = [
        f"K = Q(sqrt(-5)), d_K = {out['d']}",
        "splitting: " + ", ".join(f"{p} {k}" for p, k in out["splitting"].items()),
        "p1 = {p1}   p2 = {p2}   p3 = {p3}".format(**out["primes"]),
        f"p1^2 = {out['p1_squared']}",
        f"m = p1 p2 p3 = {out['modulus']}   N(m) = {out['norm']}",
        f"N_m = {r['Nm']}   omega = {out['omega']}",
        f"theorem: {r['theorem']}   raw bound = {r['raw_bound']}   n_min = {r['n_min']}",
    ]
    lines += [f"check {k}: {'ok' if v else 'MISMATCH'}" for k, v in out["checks"].items()]
    _emit(args, out, {"example": args.name}, lines)
    return 0 if all(out["checks"].values()) else 1


# -- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rayclass", description="CM class field generators and their bounds")
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a single JSON object")
    common.add_argument("--digits", type=int, default=default_digits(), help="significant digits (default 30)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field", parents=[common], help="field invariants and reduced forms")
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("bound", parents=[common], help="the lower bound on n for a modulus")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--nm", type=int, help="least positive integer of the modulus")
    p.add_argument("--ideal", help="modulus as factors, e.g. 'p:2;p:13;p:23:15'")
    p.add_argument("--modulus-integer", action="store_true", help="treat --nm as the modulus N*O_K")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("eval", parents=[common], help="evaluate a modular quantity")
    p.add_argument("kind", choices=EVAL_KINDS)
    p.add_argument("--tau", help="complex point, e.g. 'i' or '0.5+1.2i'")
    p.add_argument("--tau-surd", type=int, metavar="D", help="tau_K of discriminant D")
    p.add_argument("--form", help="tau_Q of the form 'a,b,c'")
    p.add_argument("--v", help="Siegel index 'v1,v2' with rational entries")
    p.add_argument("--d", type=int)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--omega", help="torsion point 'a,b/D' meaning (a*tau_K+b)/D")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", parents=[common], help="run a numeric certificate")
    p.add_argument("claim", choices=("j-inequality", "siegel-bounds", "ffgg", "normconstant", "curve", "hkc"))
    p.add_argument("--from", dest="d_from", type=int, default=-300)
    p.add_argument("--to", dest="d_to", type=int, default=-15)
    p.add_argument("--N-max", dest="N_max", type=int, default=50)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--points", type=int, default=5)
    p.add_argument("--d", type=int, default=-15)
    p.add_argument("--n-max", dest="n_max", type=int, default=5)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="also write the certificate JSON to this file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("example", parents=[common], help="reproduce a worked example")
    p.add_argument("name", choices=("paper",))
    p.set_defaults(func=cmd_example)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = argv
    try:
        return args.func(args)
    except (RayClassError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
