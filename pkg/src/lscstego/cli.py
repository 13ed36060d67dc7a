"""Command-line front end.

Commands: embed, extract, capacity, analyze, randomize, selftest.
Machine-readable output (JSON or raw bytes) goes to stdout or the
requested output file; diagnostics go to stderr. Exit codes: 0 success,
1 domain errors (capacity, thresholds, bad iteration count), 2 I/O and
parse errors.
"""

from __future__ import annotations

import argparse
import glob as globmod
import json
import string
import sys

from .embedding import (CapacityError, embed_in_image, extract_bits,
                        extract_from_image, randomize_lscs)
from .media import (PgmError, ThresholdError, byte_plane_significance,
                    parse_pgm, partition, write_pgm)
from .security import (chi_square_uniformity, check_stego_security,
                       lsb_chi_square_attack, monobit_test, runs_test)
from .strategy import DEFAULT_BBS_P, DEFAULT_BBS_Q, StegoKey, StrategyError

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_IO = 2


class KeyFormatError(ValueError):
    pass


def _parse_key(args) -> StegoKey:
    key_hex = args.key
    if not key_hex or len(key_hex) % 2 != 0 \
            or any(c not in string.hexdigits for c in key_hex) \
            or key_hex != key_hex.lower():
        raise KeyFormatError("key must be non-empty lowercase hex")
    return StegoKey(seed=bytes.fromhex(key_hex), generator=args.generator,
                    bbs_p=args.bbs_p, bbs_q=args.bbs_q, bbs_x0=args.bbs_x0)


def _read_image(path):
    with open(path, "rb") as fh:
        return parse_pgm(fh.read())


def _parse_lambda(value):
    if value == "auto":
        return None
    try:
        return int(value)
    except ValueError:
        raise StrategyError("lambda must be an integer or 'auto'") from None


def _cmd_embed(args):
    img = _read_image(args.input)
    with open(args.message, "rb") as fh:
        message = fh.read()
    key = _parse_key(args)
    stego = embed_in_image(img, byte_plane_significance(), args.low,
                           args.high, message, key,
                           lam=_parse_lambda(args.lam),
                           prerandomize=not args.no_prerandomize)
    with open(args.output, "wb") as fh:
        fh.write(write_pgm(stego, binary=not args.ascii))
    return EXIT_OK


def _cmd_extract(args):
    img = _read_image(args.input)
    data = extract_from_image(img, byte_plane_significance(), args.low,
                              args.high, args.length)
    if args.output:
        with open(args.output, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
    return EXIT_OK


def _cmd_capacity(args):
    img = _read_image(args.input)
    part = partition(byte_plane_significance(), img.bit_length,
                     args.low, args.high)
    n = len(part.lsc)
    print(json.dumps({"lsc_bits": n, "capacity_bytes": n // 8}))
    return EXIT_OK


def _cmd_randomize(args):
    img = _read_image(args.input)
    key = _parse_key(args)
    part = partition(byte_plane_significance(), img.bit_length,
                     args.low, args.high)
    out = randomize_lscs(img, part, key)
    with open(args.output, "wb") as fh:
        fh.write(write_pgm(out, binary=not args.ascii))
    return EXIT_OK


def _analyze_one(path, low, high, alpha):
    img = _read_image(path)
    part = partition(byte_plane_significance(), img.bit_length, low, high)
    bits = extract_bits(img, part.lsc)
    reports = [monobit_test(bits, alpha=alpha),
               runs_test(bits, alpha=alpha),
               chi_square_uniformity(bits, 2, alpha=alpha),
               lsb_chi_square_attack(img)]
    return {"file": path, "reports": [r.to_json_dict() for r in reports]}


def _cmd_analyze(args):
    if args.glob:
        paths = sorted(globmod.glob(args.glob))
        if not paths:
            raise FileNotFoundError("no files match %r" % args.glob)
    else:
        paths = [args.input]
    results = [_analyze_one(p, args.low, args.high, args.alpha)
               for p in paths]
    print(json.dumps({"results": results}))
    return EXIT_OK


def _cmd_selftest(args):
    cases = []
    all_uniform = True
    for n in range(1, args.max_n + 1):
        for p in range(1, min(n, 14 - n) + 1):
            res = check_stego_security(n, p,
                                       strategy_samples=args.strategies)
            all_uniform = all_uniform and res.uniform
            case = res.to_json_dict()
            case["p_width"] = p
            cases.append(case)
    print(json.dumps({"all_uniform": all_uniform, "cases": cases}))
    return EXIT_OK if all_uniform else EXIT_DOMAIN


def _add_threshold_args(sub):
    sub.add_argument("--m", dest="low", type=float, default=1.0,
                     help="low threshold: weights <= m are LSCs (default 1)")
    sub.add_argument("--M", dest="high", type=float, default=5.0,
                     help="high threshold: weights >= M are MSCs (default 5)")


def _add_key_args(sub):
    sub.add_argument("--key", required=True,
                     help="embedding key as lowercase hex")
    sub.add_argument("--generator", choices=("fast", "bbs"), default="fast")
    sub.add_argument("--bbs-p", type=int, default=DEFAULT_BBS_P)
    sub.add_argument("--bbs-q", type=int, default=DEFAULT_BBS_Q)
    sub.add_argument("--bbs-x0", type=int, default=0,
                     help="explicit BBS start state (0: derive from key)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lscstego",
        description="LSB-channel steganography toolkit with security "
                    "self-verification")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("embed", help="hide a message file in a PGM cover")
    sub.add_argument("--in", dest="input", required=True)
    sub.add_argument("--out", dest="output", required=True)
    sub.add_argument("--message", required=True)
    sub.add_argument("--lambda", dest="lam", default="auto",
                     help="iteration count (> message bits), or 'auto'")
    sub.add_argument("--no-prerandomize", action="store_true",
                     help="keep original LSC bits outside the message")
    sub.add_argument("--ascii", action="store_true",
                     help="write P2 instead of P5")
    _add_key_args(sub)
    _add_threshold_args(sub)
    sub.set_defaults(func=_cmd_embed)

    sub = subs.add_parser("extract", help="read a hidden message back")
    sub.add_argument("--in", dest="input", required=True)
    sub.add_argument("--out", dest="output", default=None,
                     help="write bytes here instead of stdout")
    sub.add_argument("--len", dest="length", type=int, required=True,
                     help="message length in bytes")
    sub.add_argument("--key", default=None,
                     help="accepted for interface symmetry; extraction "
                          "does not depend on the key")
    _add_threshold_args(sub)
    sub.set_defaults(func=_cmd_extract)

    sub = subs.add_parser("capacity", help="report LSC channel capacity")
    sub.add_argument("--in", dest="input", required=True)
    _add_threshold_args(sub)
    sub.set_defaults(func=_cmd_capacity)

    sub = subs.add_parser("randomize", help="randomize the LSC plane")
    sub.add_argument("--in", dest="input", required=True)
    sub.add_argument("--out", dest="output", required=True)
    sub.add_argument("--ascii", action="store_true")
    _add_key_args(sub)
    _add_threshold_args(sub)
    sub.set_defaults(func=_cmd_randomize)

    sub = subs.add_parser("analyze",
                          help="randomness battery + chi-square attack probe")
    sub.add_argument("--in", dest="input")
    sub.add_argument("--glob", default=None,
                     help="analyze every file matching this pattern")
    sub.add_argument("--alpha", type=float, default=0.01)
    _add_threshold_args(sub)
    sub.set_defaults(func=_cmd_analyze)

    sub = subs.add_parser("selftest",
                          help="exhaustively verify output uniformity")
    sub.add_argument("--max-n", dest="max_n", type=int, default=10)
    sub.add_argument("--strategies", type=int, default=5)
    sub.set_defaults(func=_cmd_selftest)

    return parser


def run_cli(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_IO if exc.code not in (0, None) else EXIT_OK
    if args.command == "analyze" and not args.glob and not args.input:
        print("error: analyze needs --in or --glob", file=sys.stderr)
        return EXIT_IO
    try:
        return args.func(args)
    except (CapacityError, ThresholdError, StrategyError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_DOMAIN
    except (PgmError, KeyFormatError, OSError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_IO


def main():
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
