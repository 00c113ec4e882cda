"""Command-line interface.

Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 input error, 3 inconclusive.
Lattice commands read JSON (a file given by --in, or standard input) and always
write JSON; the other commands print a short summary unless --json or --out is given.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .lattice import core
from .lattice import intmat as im
from .lattice.io import (
    SchemaError, decode_matrix, decode_vector, encode_matrix, encode_rational, isometry_from_json,
    isometry_to_json, lattice_from_json, sublattice_from_json, sublattice_to_json,
)

CLI_SCHEMA = "cyclic-cubics/cli/1"

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2, 3

SKIP_ALIASES = {
    "k3": ("k3_lines",),
    "triple": ("triple_lines",),
    "smooth": ("smooth_C", "smooth_Y"),
    "witt": ("witt",),
}


class InputError(ValueError):
    pass


# --------------------------------------------------------------------------
# helpers


def _read_json(path: str | None):
    try:
        text = sys.stdin.read() if path in (None, "-") else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc


def _emit(args, payload: dict, summary: list[str] | None = None) -> None:
    payload = {"schema": payload.get("schema", CLI_SCHEMA), **payload}
    text = json.dumps(payload, indent=2, sort_keys=False)
    if args.out:
        Path(args.out).write_text(text + "\n")
    if args.json or summary is None:
        print(text)
    elif summary:
        print("\n".join(summary))


def _field(d: dict, name: str):
    if not isinstance(d, dict) or name not in d:
        raise SchemaError(f"missing field {name!r}")
    return d[name]


# --------------------------------------------------------------------------
# lattice


def cmd_lattice(args) -> int:
    d = _read_json(args.input)
    op = args.op
    if op == "snf":
        M = decode_matrix(d.get("matrix", d.get("gram")) if isinstance(d, dict) else d)
        if not M:
            raise SchemaError("empty matrix")
        U, D, V = core.snf(M)
        _emit(args, {"command": "lattice snf", "U": encode_matrix(U), "D": encode_matrix(D),
                     "V": encode_matrix(V), "diagonal": [D[i][i] for i in range(min(len(D), len(D[0])))]})
        return EXIT_PASS
    if op == "disc":
        L = lattice_from_json(d)
        G = core.discriminant_group(L)
        _emit(args, {"command": "lattice disc", "factors": list(G.invariant_factors), "q": G.q_strings(),
                     "q_modulus": G.q_modulus, "order": G.order, "length": G.length,
                     "generators": [[encode_rational(x) for x in g] for g in G.generator_lifts]})
        return EXIT_PASS
    if op == "complement":
        C = core.orthogonal_complement(sublattice_from_json(d))
        _emit(args, {"command": "lattice complement", **sublattice_to_json(C),
                     "induced_gram": encode_matrix(C.gram)})
        return EXIT_PASS
    if op == "saturate":
        S, index = core.saturate(sublattice_from_json(d))
        _emit(args, {"command": "lattice saturate", **sublattice_to_json(S), "index": index})
        return EXIT_PASS
    if op == "reflect":
        L = lattice_from_json(d)
        v = decode_vector(_field(d, "vector"))
        if len(v) != L.rank:
            raise SchemaError("vector length does not match the lattice rank")
        r = core.reflection(L, v)
        _emit(args, {"command": "lattice reflect", **isometry_to_json(r)})
        return EXIT_PASS
    if op == "glue":
        M = lattice_from_json(d)
        S = core.Sublattice(M, decode_matrix(_field(d, "S")))
        T = core.Sublattice(M, decode_matrix(_field(d, "T")))
        phi_S = isometry_from_json({"gram": encode_matrix(S.gram), "matrix": _field(d, "phi_S")})
        phi_T = isometry_from_json({"gram": encode_matrix(T.gram), "matrix": _field(d, "phi_T")})
        res = core.glue_extends(M, S, T, phi_S, phi_T)
        _emit(args, {"command": "lattice glue", "extends": res.extends,
                     "matrix": None if res.isometry is None else encode_matrix(res.isometry.matrix),
                     "glue_group": [[[encode_rational(x) for x in a], [encode_rational(x) for x in b]]
                                    for a, b in res.glue_group]})
        return EXIT_PASS if res.extends else EXIT_FAIL
    raise AssertionError(op)


# --------------------------------------------------------------------------
# model


def _parse_root(text: str) -> list:
    text = text.strip()
    try:
        vals = json.loads(text) if text.startswith("[") else [int(t) for t in text.replace(",", " ").split()]
    except (json.JSONDecodeError, ValueError) as exc:
        raise InputError(f"cannot parse root coordinates {text!r}") from exc
    return decode_vector(vals)


def cmd_model(args) -> int:
    from .order3.model import build_reference_model, model_checks
    from .order3.roots import degenerate

    model = build_reference_model()
    if args.op == "build":
        checks = [{"name": n, "expected": str(e), "got": str(g), "pass": e == g} for n, e, g in model_checks(model)]
        ok = all(c["pass"] for c in checks)
        summary = [f"{'PASS' if c['pass'] else 'FAIL'}  {c['name']}" for c in checks]
        _emit(args, {**model.to_json(), "checks": checks, "pass": ok}, summary)
        return EXIT_PASS if ok else EXIT_FAIL
    report = degenerate(model, _parse_root(args.root), search_bound=args.search_bound)
    d = report.to_json()
    summary = [f"kind {report.delta.kind}, index [T:<6>+R] = {report.T_index}, "
               f"|det T| = {abs(im.det(report.T_delta.gram))}"]
    summary += [f"{'PASS' if c['pass'] else 'FAIL'}  {c['name']}" for c in report.checks]
    _emit(args, d, summary)
    return EXIT_PASS if report.passed else EXIT_FAIL


# --------------------------------------------------------------------------
# pfaffian


def _skip_stages(names: list) -> tuple:
    from .pfaffian.pipeline import STAGES

    out = []
    for n in names or []:
        if n in SKIP_ALIASES:
            out.extend(SKIP_ALIASES[n])
        elif n in STAGES:
            out.append(n)
        else:
            raise InputError(f"unknown stage {n!r}; choose from {sorted(SKIP_ALIASES) + list(STAGES)}")
    return tuple(out)


def _primes(args) -> dict:
    pr = {}
    if args.prime is not None:
        if args.mode == "gb":
            pr.update(triple=args.prime, k3=args.prime)
        else:
            pr.update(smooth=args.prime, triple=args.prime)
    for key in ("smooth", "triple", "k3"):
        v = getattr(args, f"{key}_prime")
        if v is not None:
            pr[key] = v
    return pr


def _bundle_summary(bundle) -> list[str]:
    lines = []
    for name, cert in bundle.stages:
        primes = ",".join(str(p) for p in cert.primes) or "-"
        lines.append(f"{'PASS' if cert.verdict else 'FAIL'}  {name:<18} {cert.method:<22} p={primes}")
    lines.extend(f"note: {n}" for n in bundle.notes[1:])
    if bundle.verdict:
        lines.append(f"all stages pass ({bundle.seconds:.1f} s)")
    elif bundle.failed_stage:
        lines.append(f"failed stage: {bundle.failed_stage}")
    return lines


def cmd_pfaffian(args) -> int:
    from .pfaffian import pipeline

    if args.op == "verify-appendix":
        text = None
        if args.dataset:
            try:
                text = Path(args.dataset).read_text()
            except OSError as exc:
                raise InputError(f"cannot read {args.dataset}: {exc}") from exc
        bundle = pipeline.verify_appendix(args.mode, _primes(args), _skip_stages(args.skip), text)
        _emit(args, bundle.to_json(), _bundle_summary(bundle))
        return EXIT_PASS if bundle.verdict else EXIT_FAIL
    if args.op == "search":
        flag, bundle = pipeline.search(args.seed, args.attempts, args.mode, _primes(args),
                                       _skip_stages(args.skip))
        _emit(args, bundle.to_json(), _bundle_summary(bundle))
        return EXIT_PASS if flag is not None else EXIT_INCONCLUSIVE
    if args.op == "recheck":
        same, fresh = pipeline.recheck(_read_json(args.input))
        _emit(args, {"command": "pfaffian recheck", "same_verdicts": same, "bundle": fresh.to_json()},
              [f"recomputed verdicts {'match' if same else 'DIFFER'}"] + _bundle_summary(fresh))
        return EXIT_PASS if same and fresh.verdict else EXIT_FAIL
    raise AssertionError(args.op)


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the full JSON result")
    common.add_argument("--out", metavar="PATH", help="also write the JSON result to PATH")

    parser = argparse.ArgumentParser(prog="cyclic-cubics", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="group", required=True)

    lat = sub.add_parser("lattice", help="integral lattice operations (JSON in, JSON out)")
    lsub = lat.add_subparsers(dest="op", required=True)
    for op, hlp in (("snf", "Smith normal form of {'matrix'} or {'gram'}"),
                    ("disc", "discriminant group of a lattice {'gram'}"),
                    ("complement", "orthogonal complement of {'gram', 'basis'}"),
                    ("saturate", "primitive closure of {'gram', 'basis'}"),
                    ("reflect", "reflection of {'gram'} in {'vector'}"),
                    ("glue", "extension of {'phi_S'} + {'phi_T'} across the glue of {'gram', 'S', 'T'}")):
        p = lsub.add_parser(op, parents=[common], help=hlp)
        p.add_argument("--in", dest="input", default="-", metavar="PATH", help="input JSON (default stdin)")
    lat.set_defaults(func=cmd_lattice)

    mod = sub.add_parser("model", help="the explicit order-3 lattice model")
    msub = mod.add_subparsers(dest="op", required=True)
    msub.add_parser("build", parents=[common], help="build and verify the model")
    deg = msub.add_parser("degenerate", parents=[common], help="degeneration data of a root")
    deg.add_argument("--root", required=True, help="22 coordinates in the S(-1) basis")
    deg.add_argument("--search-bound", type=int, default=3, help="entry bound for isometry witnesses")
    mod.set_defaults(func=cmd_model)

    pf = sub.add_parser("pfaffian", help="cyclic Pfaffian cubic fourfolds")
    psub = pf.add_subparsers(dest="op", required=True)
    chain = argparse.ArgumentParser(add_help=False)
    chain.add_argument("--mode", choices=("gb", "enum"), default="gb",
                       help="Groebner chart certificates (gb) or F_p point enumeration (enum)")
    chain.add_argument("--prime", type=int, help="gb: prime for both line stages; enum: prime for "
                       "smoothness and triple lines")
    chain.add_argument("--smooth-prime", type=int)
    chain.add_argument("--triple-prime", type=int)
    chain.add_argument("--k3-prime", type=int)
    chain.add_argument("--skip", action="append", metavar="STAGE",
                       help="skip a stage (k3, triple, smooth, witt or a full stage name); repeatable")
    va = psub.add_parser("verify-appendix", parents=[common, chain], help="certificate chain on the shipped flag")
    va.add_argument("--dataset", metavar="PATH", help="use this dataset file instead of the shipped one")
    se = psub.add_parser("search", parents=[common, chain], help="seeded search for a new flag")
    se.add_argument("--seed", type=int, default=0)
    se.add_argument("--attempts", type=int, default=3)
    rc = psub.add_parser("recheck", parents=[common], help="recompute a saved bundle and compare")
    rc.add_argument("--in", dest="input", default="-", metavar="PATH")
    pf.set_defaults(func=cmd_pfaffian)
    return parser


def main(argv: list[str] | None = None) -> int:
    from .order3.roots import NotARoot
    from .pfaffian.certify import BadPrime
    from .pfaffian.flag import DatasetCorrupt
    from .pfaffian.lines import EnumerationTooLarge

    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, SchemaError, core.LatticeError, NotARoot, DatasetCorrupt, BadPrime,
            EnumerationTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
