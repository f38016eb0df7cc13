"""Command-line entry point.

Exit codes: 0 all checks passed, 1 a singular/contradicting finding was
produced (its witness is in the JSON output), 2 usage or precondition error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .errors import ChebError, PreconditionError

EXIT_OK, EXIT_FINDING, EXIT_USAGE = 0, 1, 2


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated integer list, got {text!r}")


def _emit(data: dict, out: Optional[str]) -> None:
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


# ---------------------------------------------------------------------------

def _default_layer_modulus(n: int) -> int:
    from .minor_verifier import theorem_b_hypothesis
    from .numtheory import factorize

    try:
        hyp = theorem_b_hypothesis(n)
        if hyp["applies"]:
            return hyp["r"]
    except PreconditionError:
        pass
    for q in sorted(factorize(n)):
        cof = n // q
        if cof % q and cof > 1:
            return q
    raise PreconditionError(f"n={n} has no coprime split; pass --r explicitly")


def cmd_minor_check(args) -> int:
    from .minor_verifier import CampaignSpec, run_campaign
    from .reports import default_progress_path

    if args.spec:
        data = json.loads(Path(args.spec).read_text())
        spec = CampaignSpec.from_json(data, max_class_size=args.max_class_size)
    else:
        if args.n is None:
            raise PreconditionError("--n is required (or --spec FILE)")
        r = args.r
        if args.mode == "layered" and r is None:
            r = _default_layer_modulus(args.n)
        spec = CampaignSpec(
            n=args.n, mode=args.mode, r=r, min_size=args.min_size, max_size=args.max_size,
            samples=args.samples, seed=args.seed, screen=args.screen != "off",
            I=tuple(args.I) if args.I else None, J=tuple(args.J) if args.J else None,
            max_class_size=args.max_class_size,
        )
    progress = default_progress_path(args.out, spec.hash)

    def tick(cursor, total):
        if args.verbose:
            _note(f"  {cursor}/{total}")

    report = run_campaign(spec, jobs=args.jobs, progress_path=str(progress), resume=args.resume, on_chunk=tick)
    _emit(report.to_json(), args.out)
    c = report.counts
    _note(f"minor-check n={spec.n} mode={spec.mode}: checked={c['checked']} nonsingular={c['nonsingular']} "
          f"singular={c['singular']} escalated={c['escalated']}")
    for f in report.singular_findings[:5]:
        _note(f"  singular: I={f['I']} J={f['J']} kernel={f['certificate']['witness'].get('kernel')}")
    return report.exit_code


def cmd_gamma(args) -> int:
    from .zhang_gamma import gamma_capital

    table = gamma_capital(args.r)
    _emit(table.to_json(), args.out)
    for n, g in sorted(table.gamma.items()):
        _note(f"  gamma_{n} = {g}  at {table.argmax[n]}")
    _note(f"Gamma_{args.r} = {table.Gamma_r}")
    return EXIT_OK


def cmd_zhang(args) -> int:
    from .zhang_gamma import zhang_verify

    report = zhang_verify(args.r, args.p, waive_gamma=args.waive_gamma)
    _emit(report.to_json(), args.out)
    _note(f"zhang r={args.r} p={args.p}: {report.checked} submatrices, {len(report.singular)} singular")
    return EXIT_FINDING if report.singular else EXIT_OK


def cmd_uncertainty(args) -> int:
    from .uncertainty import feasibility_search

    samples = None if args.exhaustive else args.samples
    res = feasibility_search(args.r, args.m, samples=samples, seed=args.seed, jobs=args.jobs,
                             max_class_size=args.max_class_size)
    _emit(res.to_json(), args.out)
    _note(res.statement())
    return EXIT_FINDING if res.witness is not None else EXIT_OK


def cmd_jacobi(args) -> int:
    from .complement import complement_duality, jacobi_check
    from .lcg import Lcg64

    rng = Lcg64(args.seed)
    trials = []
    failures = 0
    for _ in range(args.trials):
        n = args.n if args.n is not None else 2 + rng.below(11)
        k = 1 + rng.below(n - 1)
        I = rng.sample(list(range(n)), k)
        J = rng.sample(list(range(n)), k)
        jac = jacobi_check(n, I, J)
        dual = complement_duality(n, I, J)
        ok = jac.equal and dual.consistent and dual.formula_holds
        failures += not ok
        trials.append({"n": n, **jac.to_json(), "complement_consistent": dual.consistent,
                       "complement_formula": dual.formula_holds})
    _emit({"seed": str(args.seed), "rng": Lcg64.describe(args.seed), "trials": trials,
           "failures": failures}, args.out)
    _note(f"jacobi: {args.trials} trials, {failures} failures")
    return EXIT_FINDING if failures else EXIT_OK


def cmd_reduce(args) -> int:
    from .cyclotomic import cyclotomic_context, reduction_hom

    ctx = cyclotomic_context(args.n)
    a = ctx.parse(args.element)
    hom = reduction_hom(ctx, args.p)
    img = hom(a)
    _emit({"n": args.n, "p": args.p, "element": str(a), "target": hom.target.to_json(),
           "zeta_n_image": str(hom.zeta_image), "image": str(img), "image_json": img.to_json()}, args.out)
    _note(f"{a}  ->  {img}  in F_{args.p}[y]/Phi_{hom.m}(y)")
    return EXIT_OK


def cmd_norm(args) -> int:
    from .cyclotomic import cyclotomic_context

    a = cyclotomic_context(args.n).parse(args.element)
    nm = a.norm()
    _emit({"n": args.n, "element": str(a), "norm": str(nm)}, args.out)
    _note(f"N({a}) = {nm}")
    return EXIT_OK


def cmd_valuation(args) -> int:
    from .cyclotomic import cyc_valuation, cyclotomic_context

    a = cyclotomic_context(args.n).parse(args.element)
    v = cyc_valuation(a, args.p)
    _emit({"n": args.n, "p": args.p, "element": str(a), "valuation": v}, args.out)
    _note(f"v_(1 - zeta_{args.p})({a}) = {v}")
    return EXIT_OK


def cmd_crt(args) -> int:
    from .crt_index import CrtContext, CrtPair, decompose

    ctx = CrtContext.from_layer_modulus(args.n, args.r)
    out: dict = {"n": ctx.n, "r": ctx.r, "m": ctx.m}
    if args.i is not None:
        pair = ctx.split(args.i)
        out["split"] = {"i": args.i, "a": pair.a, "b": pair.b}
    if args.pair is not None:
        if len(args.pair) != 2:
            raise PreconditionError("--pair takes a,b")
        out["join"] = {"a": args.pair[0], "b": args.pair[1], "i": ctx.join(CrtPair(*args.pair))}
    if args.members is not None:
        s = decompose(ctx, args.members)
        out["set"] = {**s.to_json(), "layers": [list(layer) for layer in s.layers], "profile": list(s.profile)}
    if args.i is None and args.pair is None and args.members is None:
        out["table"] = [{"i": i, "a": ctx.split(i).a, "b": ctx.split(i).b} for i in range(ctx.n)]
    _emit(out, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chebminor", description="Exact verification of DFT-submatrix nonsingularity.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(fn=fn)
        p.add_argument("--out", help="write JSON here instead of standard output")
        return p

    p = add("minor-check", cmd_minor_check, "certify submatrices of the n-th DFT matrix")
    p.add_argument("--n", type=int)
    p.add_argument("--mode", choices=["all-square", "principal", "layered", "single-pair"], default="principal")
    p.add_argument("--r", type=int, help="layer modulus for --mode layered")
    p.add_argument("--I", type=_int_list)
    p.add_argument("--J", type=_int_list)
    p.add_argument("--min-size", type=int)
    p.add_argument("--max-size", type=int)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exhaustive", action="store_true", help="enumerate the whole class (default)")
    g.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--screen", choices=["auto", "off"], default="auto")
    p.add_argument("--resume", action="store_true")
    p.add_argument("--max-class-size", type=int, default=10**7)
    p.add_argument("--spec", help="campaign spec JSON file (overrides the flags above)")
    p.add_argument("-v", "--verbose", action="store_true")

    p = add("gamma", cmd_gamma, "table of gamma_n and Gamma_r")
    p.add_argument("--r", type=int, required=True)

    p = add("zhang", cmd_zhang, "all square submatrices of (omega^(ij)) over F_{p^(r-1)}")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--waive-gamma", action="store_true")

    p = add("uncertainty", cmd_uncertainty, "layered uncertainty principle on Z_r x Z_m")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exhaustive", action="store_true")
    g.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--max-class-size", type=int, default=10**7)

    p = add("jacobi", cmd_jacobi, "Jacobi complementary-minor identity on random trials")
    p.add_argument("--n", type=int, help="fixed n (default: random n in 2..12 per trial)")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=7)

    p = add("reduce", cmd_reduce, "image of an element of Z[zeta_n] modulo <1 - zeta_p>")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--element", required=True, help='e.g. "1 - z^3"')

    p = add("norm", cmd_norm, "field norm N_{Q(zeta_n)/Q}")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--element", required=True)

    p = add("valuation", cmd_valuation, "(1 - zeta_p)-adic valuation")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--element", required=True)

    p = add("crt", cmd_crt, "CRT split/join and layer decomposition")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--i", type=int)
    p.add_argument("--pair", type=_int_list)
    p.add_argument("--members", type=_int_list)
    return parser


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.fn(args)
    except (ChebError, ZeroDivisionError, ValueError) as exc:
        _note(f"error: {exc}")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_cli())
