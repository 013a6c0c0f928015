"""Command-line front end.

Exit codes: 0 success (or isomorphic), 1 not isomorphic, 2 any error.
All commands are deterministic given their inputs and the --seed value.
"""

import argparse
import random
import re
import sys
import time

from . import __version__
from .codec import SdnSequence, read_container, write_container
from .errors import SdnError
from .isomorphism import colored_isomorphic, rooted_isomorphic, unrooted_isomorphic
from .memory import account
from .ranking import build_dense_rank, build_rank
from .sorting import SortConfig, small_value_cap, sort
from .trees import parse_tree_text

_TOKEN = re.compile(r"\S+")


class _CliError(Exception):
    pass


def _parse_integers(text):
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        for m in _TOKEN.finditer(line):
            tok = m.group()
            if not tok.isdigit():
                raise _CliError(
                    f"line {lineno}, column {m.start() + 1}: malformed integer {tok!r}"
                )
            values.append(int(tok))
    return values


def _read_text(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def _load_container(path):
    with open(path, "rb") as f:
        return read_container(f)


def cmd_encode(args):
    values = _parse_integers(_read_text(args.input))
    seq = SdnSequence.from_values(values)
    with open(args.output, "wb") as f:
        write_container(seq, f)
    print(f"N={seq.write_cursor} k={seq.count}")
    return 0


def cmd_decode(args):
    seq = _load_container(args.input)
    out = sys.stdout if args.output == "-" else open(args.output, "w", encoding="utf-8")
    try:
        for _, v in seq.iterate():
            out.write(f"{v}\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_sort(args):
    seq = _load_container(args.input)
    cfg = SortConfig(args.lookup_bits)
    with account.measure() as m:
        result = sort(seq, cfg)
    with open(args.output, "wb") as f:
        write_container(result, f)
    print(f"N={result.write_cursor} k={result.count} peak_aux_bits={m.peak_bits}")
    return 0


def _resolve_queries(seq, indices):
    positions = {}
    for i, (pos, value) in enumerate(seq.iterate()):
        positions[i] = (pos, value)
    out = []
    for q in indices:
        if q not in positions:
            raise _CliError(f"query index {q} out of range (k={seq.count})")
        out.append(positions[q])
    return out


def _rank_command(args, builder):
    seq = _load_container(args.input)
    cfg = SortConfig(args.lookup_bits)
    if args.queries:
        indices = [int(t) for t in args.queries]
    else:
        indices = list(range(seq.count))
    structure = builder(seq, cfg)
    for pos, value in _resolve_queries(seq, indices):
        print(structure.rank(pos, value))
    return 0


def cmd_dense_rank(args):
    return _rank_command(args, build_dense_rank)


def cmd_rank(args):
    return _rank_command(args, build_rank)


def cmd_tree_iso(args):
    n1, edges1, root1, colors1 = parse_tree_text(_read_text(args.tree_a))
    n2, edges2, root2, colors2 = parse_tree_text(_read_text(args.tree_b))
    if args.colored:
        if colors1 is None or colors2 is None:
            raise _CliError("--colored requires a color line in both files")
        if args.rooted:
            verdict = colored_isomorphic(
                (n1, edges1, root1, colors1), (n2, edges2, root2, colors2), rooted=True
            )
        else:
            verdict = colored_isomorphic((n1, edges1, colors1), (n2, edges2, colors2))
    elif args.rooted:
        if root1 is None or root2 is None:
            raise _CliError("--rooted requires a root line in both files")
        verdict = rooted_isomorphic((n1, edges1, root1), (n2, edges2, root2))
    else:
        verdict = unrooted_isomorphic((n1, edges1), (n2, edges2))
    print("isomorphic" if verdict else "not-isomorphic")
    return 0 if verdict else 1


def _random_sequence(n_bits, rng, cfg):
    """Roughly n_bits of packed values mixing magnitudes below and above
    the small cap of the target container."""
    cap = small_value_cap(n_bits, cfg)
    seq = SdnSequence(n_bits)
    while True:
        roll = rng.random()
        if roll < 0.95:
            v = rng.randrange(0, 1 << rng.randrange(1, 14))
        elif roll < 0.99 or cap.bit_length() > 256:
            v = rng.randrange(0, 1 << 24)
        else:
            v = rng.randrange(cap + 1, cap * 2 + 2)
        if seq.write_cursor + 2 * v.bit_length() + 1 + 64 > n_bits:
            break
        seq.append(v)
    return seq


def _random_tree_edges(n, rng):
    return [(rng.randrange(i), i) for i in range(1, n)]


def _bench_rows(suite, sizes, seed, runs):
    rows = []
    cfg = SortConfig()
    # build the shared lookup tables outside the timed region
    from .bits import get_popcount_table, get_prefixsum_table

    get_popcount_table(cfg.half_frame_bits)
    get_prefixsum_table(cfg.half_frame_bits)
    for size in sizes:
        rng = random.Random(seed ^ size)
        times = []
        peak = 0
        result = ""
        if suite == "sort":
            seq = _random_sequence(size, rng, cfg)
            for _ in range(runs):
                with account.measure() as m:
                    t0 = time.perf_counter_ns()
                    out = sort(seq, cfg)
                    times.append(time.perf_counter_ns() - t0)
                peak = max(peak, m.peak_bits)
                del out
            rows.append(("sort", size, seq.count, _median(times), peak, "sorted"))
        elif suite == "rank":
            seq = _random_sequence(size, rng, cfg)
            for _ in range(runs):
                with account.measure() as m:
                    t0 = time.perf_counter_ns()
                    structure = build_rank(seq, cfg)
                    times.append(time.perf_counter_ns() - t0)
                peak = max(peak, m.peak_bits)
                del structure
            rows.append(("rank", size, seq.count, _median(times), peak, "built"))
        elif suite == "iso":
            edges = _random_tree_edges(size, rng)
            perm = list(range(size))
            rng.shuffle(perm)
            edges2 = [(perm[u], perm[v]) for u, v in edges]
            rng.shuffle(edges2)
            for _ in range(runs):
                with account.measure() as m:
                    t0 = time.perf_counter_ns()
                    verdict = unrooted_isomorphic((size, edges), (size, edges2))
                    times.append(time.perf_counter_ns() - t0)
                peak = max(peak, m.peak_bits)
            result = "isomorphic" if verdict else "not-isomorphic"
            rows.append(("iso", size, size, _median(times), peak, result))
        else:
            raise _CliError(f"unknown suite {suite!r}")
    return rows


def _median(values):
    values = sorted(values)
    return values[len(values) // 2]


def cmd_bench(args):
    rows = _bench_rows(args.suite, args.sizes, args.seed, args.runs)
    print("operation,N_or_n,k,wall_ns,peak_aux_bits,result")
    for row in rows:
        print(",".join(str(x) for x in row))
    for prev, cur in zip(rows, rows[1:]):
        if prev[3] > 0:
            print(f"# ratio {prev[1]}->{cur[1]}: {cur[3] / prev[3]:.2f}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sdn",
        description="Sorting, ranking and tree isomorphism over packed "
        "self-delimiting numbers.",
    )
    parser.add_argument("--version", action="version", version=f"sdn {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="pack whitespace-separated integers")
    p.add_argument("input", nargs="?", default="-", help="text file or - for stdin")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="print the values of a container")
    p.add_argument("input")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("sort", help="stable-sort a container")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--lookup-bits", type=int, default=32, dest="lookup_bits")
    p.set_defaults(func=cmd_sort)

    for name, fn in (("dense-rank", cmd_dense_rank), ("rank", cmd_rank)):
        p = sub.add_parser(name, help=f"answer {name} queries by sequence index")
        p.add_argument("input")
        p.add_argument("queries", nargs="*", help="indices into the sequence; default all")
        p.add_argument("--lookup-bits", type=int, default=32, dest="lookup_bits")
        p.set_defaults(func=fn)

    p = sub.add_parser("tree-iso", help="compare two tree files")
    p.add_argument("tree_a")
    p.add_argument("tree_b")
    p.add_argument("--rooted", action="store_true")
    p.add_argument("--colored", action="store_true")
    p.set_defaults(func=cmd_tree_iso)

    p = sub.add_parser("bench", help="timing/space rows as CSV")
    p.add_argument("--suite", choices=("sort", "rank", "iso"), required=True)
    p.add_argument("--sizes", type=int, nargs="+", required=True)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--runs", type=int, default=3)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (_CliError, SdnError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
