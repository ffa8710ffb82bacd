"""``matchkit`` command-line interface.

Exit codes: 0 yes / success, 1 definite no, 2 unknown (budget exceeded or
nothing to check), 64 usage, 65 invalid data, 66 I/O failure, 67 instance
too large for a brute-force oracle, 70 solver and oracle disagree, 71
certificate verification failed.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

from .exceptions import ForcedSetError, InstanceError, SizeLimitError, VerificationError
from .generators import gen_random_instance, gen_tightness_family
from .graph import Kind
from .io import (
    Solution,
    parse_context,
    parse_instance,
    parse_solution,
    serialize_context,
    serialize_instance,
    serialize_solution,
)
from .reductions import (
    AlternatingContext,
    DIRECTIONS,
    GadgetContext,
    lift_cycles_to_matching,
    project_matching_to_cycles,
    reduce,
)
from .solution import cycle_solution, cycles_from_sequences, matching_from_pairs, matching_solution, verify_solution
from .solve import BIPARTITE_BOUNDS, oracle_solve, solve
from .spm import METHODS

EXIT_YES = 0
EXIT_NO = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_IO = 66
EXIT_SIZE = 67
EXIT_DISAGREE = 70
EXIT_VERIFY = 71

STATUS_EXIT = {"yes": EXIT_YES, "no": EXIT_NO, "unknown": EXIT_UNKNOWN}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def _write(path: Optional[str], data: bytes) -> None:
    if path is None or path == "-":
        sys.stdout.write(data.decode())
        sys.stdout.flush()
        return
    with open(path, "wb") as fh:
        fh.write(data)


def _distinct(*paths: Optional[str]) -> None:
    real = [os.path.realpath(p) for p in paths if p not in (None, "-")]
    if len(set(real)) != len(real):
        raise UsageError("input and output paths must be distinct")


def _agree(kind: Kind, ours: Solution, theirs: Solution) -> bool:
    if ours.status == "unknown":
        return True
    if ours.status != theirs.status:
        return False
    # SOC certificates need not be a shortest odd cycle, so only status counts
    return ours.status != "yes" or kind is Kind.SOC or ours.weight == theirs.weight


def cmd_solve(args) -> int:
    _distinct(args.file, args.output)
    inst = parse_instance(_read(args.file))
    sol = solve(inst, args.budget, method=args.method, bipartite_bound=args.bipartite_bound)
    verify_solution(inst, sol)
    _write(args.output, serialize_solution(sol))
    if args.oracle:
        truth = oracle_solve(inst)
        if not _agree(inst.kind, sol, truth):
            print(f"oracle disagreement: solver says {sol.status} (w={sol.weight}), "
                  f"oracle says {truth.status} (w={truth.weight})", file=sys.stderr)
            return EXIT_DISAGREE
    return STATUS_EXIT[sol.status]


def cmd_reduce(args) -> int:
    _distinct(args.file, args.output, args.context)
    inst = parse_instance(_read(args.file))
    try:
        red = reduce(inst, args.to)
    except InstanceError as exc:
        if exc.code == "unsupported_pairing":
            raise UsageError(str(exc)) from exc
        raise
    comments = [f"resolved {red.resolved}"] if red.resolved else []
    _write(args.output, serialize_instance(red.instance, comments))
    _write(args.context, serialize_context(red.context))
    return EXIT_YES


def _target_kind(ctx) -> Kind:
    return next(b for (a, b), d in DIRECTIONS.items() if d == ctx.direction)


def lift_solution(ctx, reduced_sol: Solution) -> Solution:
    """Translate a solution of the reduced instance back to the source instance.

    The reduction is recomputed from the context's source instance and must
    reproduce the context exactly; the reduced certificate is checked
    against the reduced instance and the translated one against the source.
    """
    source = ctx.source
    red = reduce(source, _target_kind(ctx))
    if red.context != ctx:
        raise InstanceError("context does not match a fresh reduction of its source", "bad_context")
    if reduced_sol.status != "yes":
        return Solution(reduced_sol.status)
    verify_solution(red.instance, reduced_sol)
    if isinstance(ctx, AlternatingContext):
        if ctx.resolved == "yes":
            weight = sum(source.weights[e] for e in ctx.base_matching)
            out = matching_solution(source.graph, ctx.base_matching, weight)
        else:
            cycles = cycles_from_sequences(source.graph, reduced_sol.cycles)
            lifted = lift_cycles_to_matching(cycles, ctx)
            out = matching_solution(source.graph, lifted.matching, lifted.weight)
    else:
        assert isinstance(ctx, GadgetContext)
        matching = matching_from_pairs(ctx.gadget, reduced_sol.pairs)
        cycles = project_matching_to_cycles(matching, ctx)
        if source.kind is Kind.SOC:
            odd = [c for c in cycles if sum(source.weights[e] for e in c) % 2]
            if not odd:
                raise VerificationError("projected cycles contain no odd-weight cycle")
            cycles = type(cycles)((odd[0],))
        out = cycle_solution(source.graph, cycles, cycles.weight(source.weights))
    verify_solution(source, out)
    return out


def cmd_lift(args) -> int:
    _distinct(args.context, args.solution, args.output)
    ctx = parse_context(_read(args.context))
    sol = lift_solution(ctx, parse_solution(_read(args.solution)))
    _write(args.output, serialize_solution(sol))
    return STATUS_EXIT[sol.status]


def cmd_verify(args) -> int:
    inst = parse_instance(_read(args.file))
    sol = parse_solution(_read(args.solution))
    if sol.status == "yes":
        weight = verify_solution(inst, sol)
        print(f"verified: {inst.kind.value} certificate of weight {weight}", file=sys.stderr)
        return EXIT_YES
    if sol.status == "no":
        # a NO answer has no certificate; cross-check it by brute force when feasible
        truth = oracle_solve(inst)
        if truth.status == "yes":
            raise VerificationError("brute force finds a YES certificate")
        print("verified: brute force agrees there is no solution", file=sys.stderr)
        return EXIT_YES
    print("nothing to verify for an unknown answer", file=sys.stderr)
    return EXIT_UNKNOWN


def cmd_gen(args) -> int:
    if args.random is not None:
        n, m, wmin, wmax, kind, seed = args.random
        try:
            n, m, wmin, wmax, seed = int(n), int(m), int(wmin), int(wmax), int(seed)
            kind = Kind(kind.lower())
        except ValueError as exc:
            raise UsageError(f"bad --random arguments: {exc}") from exc
        try:
            inst = gen_random_instance(n, 0, (wmin, wmax), kind, seed, n_edges=m,
                                       rank_l=args.rank if kind is Kind.SPM else None)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        comments = [f"random n={n} m={m} w=[{wmin},{wmax}] kind={kind.value} seed={seed}"]
    else:
        if args.side is None:
            raise UsageError("--tightness needs --side bipartite|general")
        try:
            inst = gen_tightness_family(args.tightness, args.side)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        comments = [f"tightness l={args.tightness} side={args.side}"]
    _write(args.output, serialize_instance(inst, comments))
    return EXIT_YES


def cmd_oracle(args) -> int:
    _distinct(args.file, args.output)
    inst = parse_instance(_read(args.file))
    sol = oracle_solve(inst)
    _write(args.output, serialize_solution(sol))
    return STATUS_EXIT[sol.status]


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="matchkit", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("file")
    p.add_argument("--budget", type=_positive, default=8, help="highest rank to explore (default 8)")
    p.add_argument("--oracle", action="store_true", help="cross-check with the brute-force oracle")
    p.add_argument("--bipartite-bound", choices=BIPARTITE_BOUNDS, default="auto")
    p.add_argument("--method", choices=METHODS, default="chain")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("reduce", help="reduce to the equivalent problem")
    p.add_argument("file")
    p.add_argument("--to", required=True, choices=[k.value for k in Kind if k is not Kind.SPM])
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--context", required=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("lift", help="translate a reduced solution back")
    p.add_argument("--context", required=True)
    p.add_argument("--solution", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("verify", help="check a solution against an instance")
    p.add_argument("file")
    p.add_argument("--solution", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="generate an instance")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--random", nargs=6, metavar=("N", "M", "WMIN", "WMAX", "KIND", "SEED"))
    group.add_argument("--tightness", type=int, metavar="L")
    p.add_argument("--side", choices=("bipartite", "general"))
    p.add_argument("--rank", type=_positive, default=2, help="rank for random SPM instances")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("oracle", help="brute-force answer")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"matchkit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except VerificationError as exc:
        print(f"matchkit: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except SizeLimitError as exc:
        print(f"matchkit: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except (InstanceError, ForcedSetError) as exc:
        print(f"matchkit: invalid input: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"matchkit: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
