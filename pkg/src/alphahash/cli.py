"""Command line interface.

Subcommands:

    hash    hash every position of a closed term (TSV: position, hash)
    dedup   report positions sharing a hash (TSV: hash, count, positions)
    check   randomized agreement sweep against the hash-free oracles
    bench   scaling benchmark over term families
    gen     emit a term from one of the generators

Exit codes: 0 success, 1 a check found a disagreement (or an internal
invariant failed), 2 bad input (syntax, sizes, arguments), 3 the term
was not closed.  The ALPHAHASH_SEED environment variable supplies the
default seed where a --seed flag is not given.
"""

from __future__ import annotations

import argparse
import os
import sys

from .bench import (
    FAMILIES,
    parse_sizes,
    rows_to_tsv,
    run_bench,
    summary_to_tsv,
)
from .crosscheck import run_check
from .errors import (
    AlphaHashError,
    NoTermOfSize,
    NotClosed,
    PositionInvalid,
    TermSyntaxError,
)
from .generators import (
    DEFAULT_SEED,
    gen_balanced,
    gen_linear,
    gen_random_closed,
)
from .globalize import globalize, globalize_naive
from .hashing import ExactHasher, FastHasher
from .syntax import parse_term, print_position, print_term
from .terms import from_pure, iter_positions

EXIT_OK = 0
EXIT_DISAGREEMENT = 1
EXIT_BAD_INPUT = 2
EXIT_NOT_CLOSED = 3


def _read_source(path):
    if path is None or path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _env_seed():
    raw = os.environ.get("ALPHAHASH_SEED")
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw, 0)
    except ValueError:
        raise ValueError("ALPHAHASH_SEED must be an integer, got %r" % raw)


def _globalized(args):
    pure = parse_term(_read_source(args.term))
    hasher = ExactHasher() if args.mode == "exact" else FastHasher()
    t = from_pure(pure, hasher)
    g = globalize_naive(t) if args.algo == "naive" else globalize(t)
    return g, hasher


def cmd_hash(args):
    g, hasher = _globalized(args)
    out = sys.stdout
    out.write("position\thash\n")
    for pos, sub in iter_positions(g):
        out.write("%s\t%s\n" % (print_position(pos), hasher.format(sub.hash)))
    return EXIT_OK


def cmd_dedup(args):
    g, hasher = _globalized(args)
    classes = {}
    order = []
    total = 0
    for pos, sub in iter_positions(g):
        total += 1
        bucket = classes.get(sub.hash)
        if bucket is None:
            classes[sub.hash] = bucket = []
            order.append(sub.hash)
        bucket.append(pos)
    out = sys.stdout
    out.write("hash\tcount\tpositions\n")
    duplicated = 0
    for hv in order:
        bucket = classes[hv]
        if len(bucket) < 2:
            continue
        duplicated += 1
        out.write(
            "%s\t%d\t%s\n"
            % (
                hasher.format(hv),
                len(bucket),
                " ".join(print_position(p) for p in bucket),
            )
        )
    ratio = 1.0 - len(order) / total if total else 0.0
    sys.stderr.write(
        "positions=%d classes=%d duplicated_classes=%d dedup_ratio=%.4f\n"
        % (total, len(order), duplicated, ratio)
    )
    return EXIT_OK


def cmd_check(args):
    seed = args.seed if args.seed is not None else _env_seed()

    def note(message):
        sys.stderr.write("disagreement: %s\n" % message)

    checked, failures = run_check(args.max_size, args.trials, seed, note)
    sys.stderr.write(
        "checked %d random terms up to size %d: %s\n"
        % (checked, args.max_size, "%d disagreements" % len(failures) if failures else "all agree")
    )
    return EXIT_DISAGREEMENT if failures else EXIT_OK


def cmd_bench(args):
    families = tuple(f.strip() for f in args.families.split(",") if f.strip())
    sizes = parse_sizes(args.sizes)
    seed = args.seed if args.seed is not None else _env_seed()

    def note(message):
        sys.stderr.write("note: %s\n" % message)

    rows, summary = run_bench(
        families, sizes, trials=args.trials, seed=seed, note=note
    )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(rows_to_tsv(rows))
        sys.stdout.write(summary_to_tsv(summary))
    else:
        sys.stdout.write(rows_to_tsv(rows))
        sys.stderr.write(summary_to_tsv(summary))
    return EXIT_OK


def cmd_gen(args):
    seed = args.seed if args.seed is not None else _env_seed()
    if args.family == "linear":
        pure = gen_linear(args.param)
    elif args.family == "balanced":
        pure = gen_balanced(args.param)
    else:
        pure = gen_random_closed(args.param, seed)
    sys.stdout.write(print_term(pure) + "\n")
    return EXIT_OK


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="alphahash",
        description="Hash the positions of a lambda term so equal hashes "
        "mean interchangeable subterms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_term_flags(p):
        p.add_argument(
            "term",
            nargs="?",
            default=None,
            help="file holding the term ('-' or omitted: stdin)",
        )
        p.add_argument(
            "--mode",
            choices=("fast", "exact"),
            default="fast",
            help="hash back-end: 64-bit mixing or an exact interning table",
        )
        p.add_argument(
            "--algo",
            choices=("naive", "efficient"),
            default="efficient",
            help="globalization algorithm",
        )

    p = sub.add_parser("hash", help="hash every position of a closed term")
    add_term_flags(p)
    p.set_defaults(func=cmd_hash)

    p = sub.add_parser("dedup", help="group positions sharing a hash")
    add_term_flags(p)
    p.set_defaults(func=cmd_dedup)

    p = sub.add_parser("check", help="compare hashes against hash-free oracles")
    p.add_argument("--max-size", type=int, default=10)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bench", help="scaling benchmark")
    p.add_argument("--families", default=",".join(FAMILIES))
    p.add_argument("--sizes", default="2^12..2^16")
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--out", default=None, help="write trial rows to this file")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="emit a generated term")
    p.add_argument(
        "--family", choices=("linear", "balanced", "random"), default="random"
    )
    p.add_argument(
        "--param",
        type=int,
        required=True,
        help="binder count (linear), depth (balanced), or size (random)",
    )
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NotClosed as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_NOT_CLOSED
    except (TermSyntaxError, PositionInvalid, NoTermOfSize, ValueError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_BAD_INPUT
    except OSError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_BAD_INPUT
    except AlphaHashError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_DISAGREEMENT


if __name__ == "__main__":
    sys.exit(main())
