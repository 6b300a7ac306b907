"""Command line interface.

Exit codes: 0 success / feasible / found / all certified, 1 infeasible or not
all rows certified, 2 usage or input error, 3 realization not found.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from . import __version__
from . import formats
from .facets import FacetError, certify_row
from .feasibility import cached_extended_system, cached_system, check, check_extended
from .horn import GuardrailError, build_system
from .realize import OptimizerConfig, forward_sample, realize, verify_realization
from .schur import RectangleBound, make_partition, product_coefficient

EXIT_OK = 0
EXIT_NO = 1
EXIT_ERROR = 2
EXIT_NOT_FOUND = 3


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(data) -> str:
    return json.dumps(data, indent=2) + "\n"


def cmd_ineqs(args) -> int:
    system = build_system(args.n, args.m, args.r, allow_large=args.allow_large)
    if args.format == "json":
        text = formats.system_to_json(system, args.include_dagger)
    else:
        text = formats.system_to_text(system, args.include_dagger)
    _emit(text, args.output)
    return EXIT_OK


def cmd_check(args) -> int:
    inst = formats.read_instance(args.instance)
    verdict = check_extended(inst) if args.extended else check(inst)
    system = (cached_extended_system if args.extended else cached_system)(inst.n, inst.m, inst.r)
    if args.format == "json":
        _emit(_json(formats.verdict_to_dict(system, inst, verdict)), args.output)
    else:
        _emit(formats.verdict_to_text(system, inst, verdict), args.output)
    return EXIT_OK if verdict.feasible else EXIT_NO


def cmd_realize(args) -> int:
    inst = formats.read_instance(args.instance)
    cfg = OptimizerConfig(
        restarts=args.restarts,
        max_iterations=args.max_iterations,
        tolerance=args.tol,
        seed=args.seed,
    )
    result = realize(inst, cfg)
    verify_tol = args.verify_tol if args.verify_tol is not None else args.tol**0.5
    report = verify_realization(result.matrices, inst, verify_tol) if result.success else None
    _emit(_json(formats.realization_to_dict(result, report)), args.output)
    return EXIT_OK if result.success else EXIT_NOT_FOUND


def cmd_facets(args) -> int:
    system = build_system(args.n, args.m, args.r, allow_large=args.allow_large)
    for k, line in enumerate(args.extra_row or [], start=1):
        system.extra_rows.append(formats.extra_row(system, line, k))
    if not (args.r >= 1 and args.m >= 3):
        logging.getLogger(__name__).warning("minimality is only asserted for r >= 1 and m >= 3; reporting findings")
    certs = [certify_row(system, row.id) for row in system.rows()]
    if args.format == "json":
        _emit(_json(formats.certificates_to_dict(system, certs)), args.output)
    else:
        _emit(formats.certificates_to_text(system, certs), args.output)
    return EXIT_OK if all(c.certified for c in certs) else EXIT_NO


def _parse_partition(text: str):
    text = text.strip().strip("()")
    if not text:
        return ()
    return make_partition(int(x) for x in text.split(","))


def _parse_bound(text: str) -> RectangleBound:
    try:
        rows, cols = text.lower().split("x")
        return RectangleBound(int(rows), int(cols))
    except ValueError as exc:
        raise ValueError(f"bound must look like ROWSxCOLS, got {text!r}") from exc


def cmd_lr(args) -> int:
    lambdas = [_parse_partition(x) for x in args.lambdas]
    coeff = product_coefficient(lambdas, _parse_bound(args.bound), _parse_partition(args.target))
    if args.format == "json":
        _emit(_json({"coefficient": coeff}), args.output)
    else:
        _emit(f"{coeff}\n", args.output)
    return EXIT_OK


def cmd_forward_sample(args) -> int:
    rng = np.random.default_rng(np.random.SeedSequence(args.seed))
    os.makedirs(args.outdir, exist_ok=True)
    written = []
    for k in range(args.count):
        inst, mats = forward_sample(args.n, args.m, args.r, rng)
        base = os.path.join(args.outdir, f"sample_{k:04d}")
        with open(base + ".json", "w", encoding="utf-8") as fh:
            fh.write(formats.dumps_instance(inst))
        with open(base + ".matrices.json", "w", encoding="utf-8") as fh:
            fh.write(_json({"matrices": [formats._matrix_pairs(M) for M in mats]}))
        written.append(base + ".json")
    sys.stdout.write("\n".join(written) + "\n")
    return EXIT_OK


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectral-horn",
        description="Eigenvalue inequalities for Hermitian matrices with PSD sum of bounded rank.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def size_args(p):
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--m", type=int, required=True)
        p.add_argument("--r", type=int, required=True)
        p.add_argument("--allow-large", action="store_true", help="lift the desk-scale enumeration guardrail")

    def out_args(p, formats_=("text", "json")):
        p.add_argument("--format", choices=formats_, default=formats_[0])
        p.add_argument("--output", "-o", default=None)

    p = sub.add_parser("ineqs", help="emit the inequality system for (n, m, r)")
    size_args(p)
    p.add_argument("--include-dagger", action="store_true")
    out_args(p)
    p.set_defaults(func=cmd_ineqs)

    p = sub.add_parser("check", help="exact feasibility verdict for an instance file")
    p.add_argument("instance")
    p.add_argument("--extended", action="store_true", help="evaluate the S-indexed rows instead")
    out_args(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("realize", help="search for witness matrices")
    p.add_argument("instance")
    p.add_argument("--restarts", type=int, default=100)
    p.add_argument("--max-iterations", type=int, default=2000)
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--verify-tol", type=float, default=None, help="defaults to sqrt(--tol)")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("facets", help="certify every row of the system as a facet")
    size_args(p)
    p.add_argument("--extra-row", action="append", help="append a row in text format, e.g. 'major t=1 I1={2} I2={1} I3={1}'")
    out_args(p)
    p.set_defaults(func=cmd_facets)

    p = sub.add_parser("lr", help="coefficient of s_target in a product of Schur functions on a rectangle")
    p.add_argument("--lambdas", nargs="*", default=[], help="partitions as comma lists; '' for the empty partition")
    p.add_argument("--bound", required=True, help="ROWSxCOLS")
    p.add_argument("--target", required=True)
    out_args(p)
    p.set_defaults(func=cmd_lr)

    p = sub.add_parser("forward-sample", help="draw feasible instances from random matrices")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--outdir", required=True)
    p.set_defaults(func=cmd_forward_sample)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, GuardrailError, FacetError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR
