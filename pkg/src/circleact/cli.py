"""Command line front end.

Subcommands map one to one onto the library surface: check, conjugate,
certify, solve, decompose, sample, fuse, snake.  Input objects are read
from --input (or stdin), results are written as JSON to --output (or
stdout).  Subcommands compose: an output envelope carrying an object
("pair" from sample or conjugate, "product" from fuse) is accepted
wherever an object or pair document is expected.  Exit codes: 0 all
checks passed, 1 a check failed or a counterexample was found, 2
input/output or schema trouble (with a diagnostic naming the offending
JSON path, never a stack trace).

Identical invocations produce byte identical output except for the
"timestamp" field, which --reproducible suppresses.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .linalg import SchemaError, vector_from_json
from .coaction import (
    CertificateReport,
    CheckResult,
    ConjugatePair,
    LinearObject,
    check_conjugate_matrix,
    check_conjugate_raw,
    check_homomorphism,
    kac_vector,
)
from .certify import (
    AmbiguousSlot,
    ConstraintViolation,
    NotSimultaneouslyDiagonalizable,
    canonical_dual,
    certify_commutativity,
    certify_duality,
    classical_form,
    is_partial_isometry,
    polar_data,
)
from .category import DecompositionFailure, check_snake, decompose, tensor_product
from .solver import SolverConfig, sample_classical, solve


def _read_payload(path):
    try:
        if path is None:
            text = sys.stdin.read()
            where = "stdin"
        else:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
            where = path
    except OSError as exc:
        raise SchemaError(f"cannot read input: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{where}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc


def _unwrap(payload):
    """Accept another subcommand's output as input.

    A bare object/pair document passes through unchanged; an output
    envelope (recognized by its "kind" field) is unwrapped to the
    object it carries, so e.g. `sample --output pair.json` feeds
    directly into `certify --input pair.json`.
    """
    if isinstance(payload, dict) and "kind" in payload:
        for key in ("pair", "product"):
            if key in payload:
                return payload[key]
        raise SchemaError(
            f"input: a {payload['kind']!r} output carries no object to re-read"
        )
    return payload


def _write_payload(payload: dict, path, reproducible: bool) -> None:
    if not reproducible:
        payload = dict(payload)
        payload["timestamp"] = datetime.now(timezone.utc).isoformat()
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        try:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise SchemaError(f"cannot write output: {exc}") from exc


def _prefixed(prefix: str, report: CertificateReport):
    return tuple(
        CheckResult(f"{prefix}:{c.name}", c.residual, c.threshold) for c in report.checks
    )


def _cmd_check(args) -> tuple[dict, bool]:
    obj = LinearObject.from_json(_unwrap(_read_payload(args.input)), path="input")
    report = check_homomorphism(obj, args.tol)
    return {"kind": "check", "report": report.to_json()}, report.overall_pass


def _cmd_conjugate(args) -> tuple[dict, bool]:
    obj = LinearObject.from_json(_unwrap(_read_payload(args.input)), path="input")
    hom = check_homomorphism(obj, args.tol)
    if not hom.overall_pass:
        return {"kind": "conjugate", "report": hom.to_json()}, False
    pair = canonical_dual(obj, args.tol)
    matrix_report = check_conjugate_matrix(pair, args.tol)
    raw_report = check_conjugate_raw(pair, args.tol)
    payload = {
        "kind": "conjugate",
        "pair": pair.to_json(),
        "matrix_report": matrix_report.to_json(),
        "raw_report": raw_report.to_json(),
    }
    return payload, matrix_report.overall_pass and raw_report.overall_pass


def _cmd_certify(args) -> tuple[dict, bool]:
    pair = ConjugatePair.from_json(_unwrap(_read_payload(args.input)), path="input")
    tol = args.tol
    checks = []
    checks += _prefixed("hom", check_homomorphism(pair.object, tol))
    checks += _prefixed("dual", check_conjugate_matrix(pair, tol))
    checks += _prefixed("raw", check_conjugate_raw(pair, tol))
    stage_one = CertificateReport(tol, tuple(checks))
    payload: dict = {"kind": "certify"}
    if not stage_one.overall_pass:
        payload["report"] = stage_one.to_json()
        return payload, False

    for name, M in (("A", pair.object.A), ("B", pair.object.B), ("C", pair.C), ("D", pair.D)):
        _, res = is_partial_isometry(M, tol)
        checks.append(CheckResult(f"isometry:{name}", res, tol))
    checks += _prefixed("polar", polar_data(pair, tol).report)
    kac = kac_vector(pair.object.n)
    if np.linalg.norm(pair.s - kac) <= 1e-12 and np.linalg.norm(pair.t - kac) <= 1e-12:
        checks += _prefixed("canonical", certify_duality(pair, tol))
    else:
        payload["canonical_skipped"] = "non-standard pairing vectors"
    checks += _prefixed("comm", certify_commutativity(pair.object, tol))
    report = CertificateReport(tol, tuple(checks))
    payload["report"] = report.to_json()
    if not report.overall_pass:
        return payload, False

    try:
        classical = classical_form(pair.object, tol, seed=args.seed)
    except (NotSimultaneouslyDiagonalizable, AmbiguousSlot, ConstraintViolation) as exc:
        payload["error"] = str(exc)
        return payload, False
    payload["classical"] = classical.to_json()
    return payload, True


def _cmd_solve(args) -> tuple[dict, bool]:
    try:
        config = SolverConfig(
            n=args.n,
            restarts=args.restarts,
            max_iters=args.max_iters,
            residual_tol=args.residual_tol,
            grad_tol=args.grad_tol,
            step_init=args.step_init,
            seed=args.seed,
        )
    except ValueError as exc:
        raise SchemaError(f"config: {exc}") from exc
    run = solve(config)
    counterexamples = [
        o.start_index
        for o in run.outcomes
        if o.converged and o.commutativity > args.character_tol
    ]
    payload = {
        "kind": "solve",
        "run": run.to_json(),
        "character_tol": args.character_tol,
        "counterexamples": counterexamples,
    }
    return payload, not counterexamples


def _cmd_decompose(args) -> tuple[dict, bool]:
    obj = LinearObject.from_json(_unwrap(_read_payload(args.input)), path="input")
    try:
        dec = decompose(obj, args.tol, seed=args.seed)
    except DecompositionFailure as exc:
        return {"kind": "decompose", "error": str(exc)}, False
    return {"kind": "decompose", "decomposition": dec.to_json()}, True


def _cmd_sample(args) -> tuple[dict, bool]:
    pair = sample_classical(args.n, seed=args.seed)
    return {"kind": "sample", "pair": pair.to_json()}, True


def _cmd_fuse(args) -> tuple[dict, bool]:
    if args.inputs:
        if len(args.inputs) != 2:
            raise SchemaError("fuse expects exactly two input paths (or none for stdin)")
        left = LinearObject.from_json(_unwrap(_read_payload(args.inputs[0])), path="inputs[0]")
        right = LinearObject.from_json(_unwrap(_read_payload(args.inputs[1])), path="inputs[1]")
    else:
        payload_in = _read_payload(None)
        if not isinstance(payload_in, list) or len(payload_in) != 2:
            raise SchemaError("stdin: expected a JSON array of two objects")
        left = LinearObject.from_json(_unwrap(payload_in[0]), path="[0]")
        right = LinearObject.from_json(_unwrap(payload_in[1]), path="[1]")
    product = tensor_product(left, right)
    payload = {"kind": "fuse", "product": product.to_json()}
    try:
        dec = decompose(product, args.tol, seed=args.seed)
    except DecompositionFailure as exc:
        payload["error"] = str(exc)
        return payload, False
    payload["decomposition"] = dec.to_json()
    return payload, True


def _cmd_snake(args) -> tuple[dict, bool]:
    if args.input is None and args.n is not None:
        n = args.n
        s = t = kac_vector(n)
    else:
        payload_in = _read_payload(args.input)
        if not isinstance(payload_in, dict) or "n" not in payload_in:
            raise SchemaError("input: expected an object with an 'n' field")
        n = payload_in["n"]
        if not isinstance(n, int) or n < 1:
            raise SchemaError("input.n: expected a positive integer")
        s = (
            vector_from_json(payload_in["s"], path="input.s")
            if "s" in payload_in
            else kac_vector(n)
        )
        t = (
            vector_from_json(payload_in["t"], path="input.t")
            if "t" in payload_in
            else kac_vector(n)
        )
    report = check_snake(s, t, n, args.tol)
    return {"kind": "snake", "report": report.to_json()}, report.overall_pass


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="circleact",
        description="Certify, classify, and search finite dimensional circle coactions.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p, with_input=True):
        if with_input:
            p.add_argument("--input", help="input JSON path (default: stdin)")
        p.add_argument("--output", help="output JSON path (default: stdout)")
        p.add_argument(
            "--reproducible",
            action="store_true",
            help="suppress the timestamp field for byte-stable output",
        )

    def add_tol(p):
        p.add_argument("--tol", type=float, default=1e-9, help="check tolerance")

    def add_seed(p):
        p.add_argument("--seed", type=int, default=0, help="seed for any randomness")

    p = sub.add_parser("check", help="certify the homomorphism equations of an object")
    add_io(p)
    add_tol(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("conjugate", help="build and certify the canonical dual pair")
    add_io(p)
    add_tol(p)
    p.set_defaults(func=_cmd_conjugate)

    p = sub.add_parser("certify", help="run the full derivation chain on a pair")
    add_io(p)
    add_tol(p)
    add_seed(p)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("solve", help="multi-restart numerical search")
    add_io(p, with_input=False)
    p.add_argument("--n", type=int, required=True, help="fiber dimension")
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--max-iters", type=int, default=5000)
    p.add_argument("--residual-tol", type=float, default=1e-10)
    p.add_argument("--grad-tol", type=float, default=1e-12)
    p.add_argument("--step-init", type=float, default=1.0)
    p.add_argument(
        "--character-tol",
        type=float,
        default=1e-6,
        help="commutativity threshold above which a converged outcome counts as a counterexample",
    )
    add_seed(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("decompose", help="split an object into irreducible summands")
    add_io(p)
    add_tol(p)
    add_seed(p)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("sample", help="emit a known-good classical pair")
    add_io(p, with_input=False)
    p.add_argument("--n", type=int, required=True, help="fiber dimension")
    add_seed(p)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("fuse", help="tensor two objects and decompose the product")
    p.add_argument("inputs", nargs="*", help="two input JSON paths (default: stdin array)")
    add_io(p, with_input=False)
    add_tol(p)
    add_seed(p)
    p.set_defaults(func=_cmd_fuse)

    p = sub.add_parser("snake", help="certify the pairing conditions for s, t vectors")
    add_io(p)
    add_tol(p)
    p.add_argument("--n", type=int, help="dimension for standard vectors when no input is given")
    p.set_defaults(func=_cmd_snake)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        payload, passed = args.func(args)
        _write_payload(payload, args.output, args.reproducible)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, TypeError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0 if passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
