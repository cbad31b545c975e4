"""Command-line front end.

    hilbertclass hilbert -D -71 --modulus 107
    hilbertclass classgroup -D -71
    hilbertclass modpoly -l 3 --store

Exit codes: 0 success, 1 CRT/analytic mismatch, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import List, Optional

from .analytic import hilbert_analytic
from .crt_driver import Options, compute_hilbert, hilbert_mod_p, verify_against_oracle
from .modpoly import ModPolyCache, format_modpoly
from .primeselect import SPLIT_ONLY, WITH_TRIVIAL_INERT, is_probable_prime
from .quadform import class_number, enumerate_reduced, is_discriminant

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _discriminant(text: str) -> int:
    try:
        D = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not is_discriminant(D):
        raise argparse.ArgumentTypeError(f"{D} is not a negative discriminant (need D < 0, D = 0 or 1 mod 4)")
    return D


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hilbertclass", description="Hilbert class polynomials by the CRT method")
    parser.add_argument("-v", "--verbose", action="store_true", help="progress on stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    h = sub.add_parser("hilbert", help="compute H_D")
    h.add_argument("-D", type=_discriminant, required=True)
    h.add_argument("--method", choices=["crt", "analytic", "both"], default="crt")
    h.add_argument("--modulus", type=int, help="print H_D mod this prime only")
    h.add_argument("--output", choices=["text", "json"], default="text")
    h.add_argument("--cache-dir", help="modular polynomial cache (default $MODPOLY_CACHE)")
    h.add_argument("--seed", type=int, default=0)
    h.add_argument("--workers", type=_positive, default=1)
    h.add_argument("--v-max", type=_positive, default=16)
    h.add_argument("--split-only", action="store_true", help="skip the trivial inert primes")
    h.add_argument("--checkpoint", help="file of finished residues, appended to and resumed from")

    c = sub.add_parser("classgroup", help="list reduced forms of discriminant D")
    c.add_argument("-D", type=_discriminant, required=True)

    m = sub.add_parser("modpoly", help="print Phi_l in cache format")
    m.add_argument("-l", "--level", type=int, required=True)
    m.add_argument("--cache-dir")
    m.add_argument("--store", action="store_true", help="also write it to the cache directory")
    return parser


def _options(args) -> Options:
    return Options(seed=args.seed, workers=args.workers,
                   policy=SPLIT_ONLY if args.split_only else WITH_TRIVIAL_INERT,
                   v_max=args.v_max, cache_dir=args.cache_dir, checkpoint=args.checkpoint)


def cmd_hilbert(args, out) -> int:
    D = args.D
    opts = _options(args)
    cache = ModPolyCache(args.cache_dir)
    if args.modulus is not None:
        p = args.modulus
        if p < 2 or not is_probable_prime(p):
            print(f"error: modulus {p} is not prime", file=sys.stderr)
            return EXIT_USAGE
        if args.method == "analytic":
            res = hilbert_analytic(D).mod(p)
        else:
            res = hilbert_mod_p(D, p, opts, cache)
        if args.output == "json":
            print(json.dumps({"D": D, "p": p, "coeffs": list(res.coeffs)}), file=out)
        else:
            print(res, file=out)
        return EXIT_OK

    if args.method == "analytic":
        H = hilbert_analytic(D)
    else:
        H = compute_hilbert(D, opts, cache)
    print(H.to_json(D) if args.output == "json" else H, file=out)
    if args.method == "both":
        report = verify_against_oracle(D, H)
        print(report, file=sys.stderr)
        if not report.match:
            return EXIT_MISMATCH
    return EXIT_OK


def cmd_classgroup(args, out) -> int:
    forms = enumerate_reduced(args.D)
    print(f"h({args.D}) = {class_number(args.D)}", file=out)
    for f in forms:
        print(f, file=out)
    return EXIT_OK


def cmd_modpoly(args, out) -> int:
    ell = args.level
    if ell < 2 or not is_probable_prime(ell):
        print(f"error: level {ell} is not prime", file=sys.stderr)
        return EXIT_USAGE
    cache = ModPolyCache(args.cache_dir)
    if args.store and cache.directory is None:
        print("error: --store needs --cache-dir or $MODPOLY_CACHE", file=sys.stderr)
        return EXIT_USAGE
    phi = cache.get(ell)
    if args.store and not cache.path(ell).exists():
        cache.store(phi)
    out.write(format_modpoly(phi))
    return EXIT_OK


COMMANDS = {"hilbert": cmd_hilbert, "classgroup": cmd_classgroup, "modpoly": cmd_modpoly}


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args, out)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
