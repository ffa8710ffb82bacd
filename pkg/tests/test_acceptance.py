"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the verdict lines appear
even without ``-s``.
"""

from __future__ import annotations

import itertools
import random
import time
from functools import lru_cache

import pytest

from conftest import SQUARE, SQUARE_W, random_bipartite, random_graph
from matchkit import (
    CycleFound,
    DefiniteNo,
    Graph,
    Kind,
    WeightedInstance,
    cli,
    ecs_bruteforce,
    ecs_solve,
    enumerate_perfect_matchings,
    enumerate_simple_cycles,
    gen_random_instance,
    gen_tightness_family,
    is_bipartite,
    is_conservative,
    lift_cycles_to_matching,
    min_weight_pm_forced,
    oracle_solve,
    parse_solution,
    project_matching_to_cycles,
    reduce,
    reduce_ewpm_to_ecs,
    serialize_instance,
    soc_bruteforce,
    soc_solve,
    spm_ranks,
    spm_ranks_bruteforce,
    verify_solution,
)
from matchkit.cycles import cycle_set_weights, has_negative_cycle
from matchkit.matching import perfect_matching_weights
from matchkit.reductions import AlternatingContext
from matchkit.solution import cycle_solution, cycles_from_sequences, matching_from_pairs, matching_solution

SUITE_SIZE = 200


def report(capsys, number: int, title: str, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number:2d} ({title}): {detail}")
    assert ok, detail


def is_matching(graph: Graph, edges) -> bool:
    verts = [v for e in edges for v in graph.edges[e]]
    return len(verts) == len(set(verts))


# seeded suites ----------------------------------------------------------------

@lru_cache(maxsize=None)
def rank_suite() -> tuple[tuple[WeightedInstance, int], ...]:
    """General graphs on 4 to 10 vertices, weights 0..8, ranks 1..4."""
    out = []
    for seed in range(SUITE_SIZE):
        rng = random.Random(seed)
        n = rng.choice((4, 6, 8, 10, 4, 6, 8, 10, 5, 7, 9))
        g = random_graph(rng, n, rng.uniform(0.35, 0.9))
        w = tuple(rng.randint(0, 8) for _ in g.edges)
        out.append((WeightedInstance(g, w, "ewpm", 0), 1 + seed % 4))
    return tuple(out)


@lru_cache(maxsize=None)
def bipartite_suite() -> tuple[tuple[WeightedInstance, int], ...]:
    out = []
    for seed in range(SUITE_SIZE):
        rng = random.Random(10_000 + seed)
        n = rng.choice((4, 6, 8, 10))
        g = random_bipartite(rng, n, rng.uniform(0.4, 1.0))
        w = tuple(rng.randint(0, 8) for _ in g.edges)
        out.append((WeightedInstance(g, w, "ewpm", 0), 1 + seed % 4))
    return tuple(out)


@lru_cache(maxsize=None)
def source_suite(kind: str) -> tuple[WeightedInstance, ...]:
    """Seeded sources with at most 8 vertices for the reduction criteria.

    Matching kinds use dense-ish graphs with weights -4..8; cycle kinds use
    sparse graphs (at most n + 2 edges, which keeps the gadget small enough
    for exhaustive enumeration) with weights -2..6.
    """
    out = []
    for seed in range(SUITE_SIZE):
        rng = random.Random(f"{kind}-{seed}")
        if Kind(kind).is_matching_kind:
            n = rng.randint(2, 8)
            inst = gen_random_instance(n, rng.choice(("0.4", "0.6", "0.8")), (-4, 8), kind, seed)
        else:
            n = rng.randint(3, 8)
            m = rng.randint(n - 1, min(n + 2, n * (n - 1) // 2))
            inst = gen_random_instance(n, 0, (-2, 6), kind, seed, n_edges=m)
        out.append(inst)
    return tuple(out)


# criteria -----------------------------------------------------------------------

def test_criterion_01_bipartite_tightness_example(capsys):
    start = time.perf_counter()
    inst = WeightedInstance(SQUARE, SQUARE_W, "spm", 2, 2)
    pms = list(enumerate_perfect_matchings(SQUARE))
    weights = sorted(sum(SQUARE_W[e] for e in pm) for pm in pms)
    table = spm_ranks(inst, 2)
    ranks = [(e.rank, e.weight) for e in table]
    bounded = all(len(e.forced_set) <= 2 * (e.rank - 1) for e in table)
    singleton = any(min_weight_pm_forced(SQUARE, SQUARE_W, {e}).weight == 2 for e in range(SQUARE.m)
                    if min_weight_pm_forced(SQUARE, SQUARE_W, {e}) is not None)
    elapsed = time.perf_counter() - start
    ok = weights == [0, 2] and ranks == [(1, 0), (2, 2)] and bounded and singleton and elapsed < 1
    report(capsys, 1, "four-cycle ranks", ok,
           f"PM weights {weights}, ranks {ranks}, forced sets within bound {bounded}, "
           f"singleton reaches 2 {singleton}, {elapsed:.3f} s")


def test_criterion_02_general_tightness_example(capsys):
    start = time.perf_counter()
    inst = gen_tightness_family(2, "general")
    g, w = inst.graph, inst.weights
    weights = perfect_matching_weights(g, w)
    small = [f for size in (0, 1) for f in itertools.combinations(range(g.m), size)]
    small_min = {min_weight_pm_forced(g, w, f).weight for f in small}
    pairs = [f for f in itertools.combinations(range(g.m), 2) if is_matching(g, f)]
    pair_hits = sum(1 for f in pairs
                    if (res := min_weight_pm_forced(g, w, f)) is not None and res.weight == 3)
    elapsed = time.perf_counter() - start
    ok = (not is_bipartite(g)[0] and weights == [1, 3] and small_min == {1} and pair_hits > 0
          and elapsed < 5)
    report(capsys, 2, "two-triangle prism", ok,
           f"PM weights {weights}, forced minima over |F| <= 1: {sorted(small_min)}, "
           f"{pair_hits} forced pairs reach 3, {elapsed:.3f} s")


def _rank_check(suite, **kwargs):
    mismatches = 0
    for inst, l in suite:
        got = spm_ranks(inst, l, **kwargs).weights
        if got != spm_ranks_bruteforce(inst, l).weights:
            mismatches += 1
    return mismatches


def test_criterion_03_rank_oracle_equivalence(capsys):
    suite = rank_suite()
    start = time.perf_counter()
    by_method = {m: _rank_check(suite, method=m) for m in ("exhaustive", "chain")}
    elapsed = time.perf_counter() - start
    ok = len(suite) >= 200 and not any(by_method.values()) and elapsed < 120
    report(capsys, 3, "rank oracle equivalence", ok,
           f"{len(suite)} graphs, mismatches {by_method}, {elapsed:.1f} s")


def test_criterion_04_bipartite_bound(capsys):
    suite = bipartite_suite()
    start = time.perf_counter()
    assert all(is_bipartite(inst.graph)[0] for inst, _ in suite)
    mismatches = _rank_check(suite, bipartite_bound="on")
    bound_ok = all(len(e.forced_set) <= e.rank - 1
                   for inst, l in suite[:50] for e in spm_ranks(inst, l, bipartite_bound="on"))
    elapsed = time.perf_counter() - start
    ok = len(suite) >= 200 and mismatches == 0 and bound_ok and elapsed < 60
    report(capsys, 4, "bipartite forced-set bound", ok,
           f"{len(suite)} bipartite graphs, {mismatches} mismatches, sizes within l-1 {bound_ok}, "
           f"{elapsed:.1f} s")


def _second_rank_reachable(g: Graph, w, second: int, witness) -> bool:
    def hits(f) -> bool:
        res = min_weight_pm_forced(g, w, f)
        return res is not None and res.weight == second

    inside = sorted(witness)
    candidates = itertools.chain(
        ((e,) for e in inside), itertools.combinations(inside, 2),
        ((e,) for e in range(g.m)),
        (f for f in itertools.combinations(range(g.m), 2) if is_matching(g, f)))
    return any(hits(f) for f in candidates)


def test_criterion_05_second_rank_needs_two_edges(capsys):
    tested = counterexamples = 0
    for inst, _ in rank_suite() + bipartite_suite():
        table = spm_ranks_bruteforce(inst, 2)
        if len(table) < 2:
            continue
        tested += 1
        if not _second_rank_reachable(inst.graph, inst.weights, table[1].weight, table[1].witness):
            counterexamples += 1
    ok = tested > 0 and counterexamples == 0
    report(capsys, 5, "second rank from two forced edges", ok,
           f"{tested} graphs with two or more PM weights, {counterexamples} counterexamples")


def _alternates(cycle, matching) -> bool:
    flags = [e in matching for e in cycle]
    return len(cycle) % 2 == 0 and all(flags[i] != flags[i - 1] for i in range(len(cycle)))


def test_criterion_06_alternating_reweighting(capsys):
    sources = list(source_suite("ewpm")) + [inst.replace(target_k=2 * l) for inst, l in rank_suite()]
    non_conservative = violations = checked_cycles = reduced = 0
    for src in sources:
        red = reduce_ewpm_to_ecs(src)
        if not is_conservative(red.instance.graph, red.instance.weights):
            non_conservative += 1
        if red.resolved or src.n > 8:
            continue
        reduced += 1
        ctx = red.context
        bound = ctx.r - ctx.base_weight
        for cyc in enumerate_simple_cycles(src.graph):
            if sum(red.instance.weights[e] for e in cyc) <= bound:
                checked_cycles += 1
                violations += not _alternates(cyc, ctx.base_matching)
    ok = non_conservative == 0 and violations == 0 and reduced >= 100
    report(capsys, 6, "alternating reweighting", ok,
           f"{len(sources)} reductions, {non_conservative} non-conservative outputs, "
           f"{checked_cycles} cheap cycles on {reduced} unresolved sources, {violations} non-alternating")


def test_criterion_07_gadget_structure(capsys):
    sources = [inst for kind in ("ecs", "soc") for inst in source_suite(kind)]
    sources += [WeightedInstance(inst.graph, (1,) * inst.m, "ecs", 0) for inst, _ in rank_suite()]
    size_errors = canon_errors = 0
    for src in sources:
        red = reduce(src, Kind.EWPM if src.kind is Kind.ECS else Kind.BCPM)
        gad = red.instance.graph
        size_errors += (gad.n, gad.m) != (2 * src.n + 4 * src.m, src.n + 7 * src.m)
        canon = red.context.canonical_matching
        weight = sum(red.instance.weights[e] for e in canon)
        canon_errors += not (is_matching(gad, canon) and 2 * len(canon) == gad.n and weight == 0)
    ok = size_errors == 0 and canon_errors == 0
    report(capsys, 7, "gadget structure", ok,
           f"{len(sources)} gadgets, {size_errors} size mismatches, {canon_errors} bad canonical matchings")


def _translate(red, reduced_sol):
    """Certificate of the reduced instance -> checked certificate of the source."""
    src, ctx = red.context.source, red.context
    if isinstance(ctx, AlternatingContext):
        if ctx.resolved == "yes":
            matching = ctx.base_matching
            return matching_solution(src.graph, matching, sum(src.weights[e] for e in matching))
        lifted = lift_cycles_to_matching(cycles_from_sequences(src.graph, reduced_sol.cycles), ctx)
        return matching_solution(src.graph, lifted.matching, lifted.weight)
    cycles = project_matching_to_cycles(matching_from_pairs(ctx.gadget, reduced_sol.pairs), ctx)
    if src.kind is Kind.SOC:
        cycles = type(cycles)(tuple(c for c in cycles if sum(src.weights[e] for e in c) % 2)[:1])
    return cycle_solution(src.graph, cycles, cycles.weight(src.weights))


def test_criterion_08_decision_preservation(capsys):
    start = time.perf_counter()
    rows = []
    for kind, to in (("ewpm", "ecs"), ("bcpm", "soc"), ("ecs", "ewpm"), ("soc", "bcpm")):
        suite = source_suite(kind)
        disagree = bad_certs = yes = 0
        for src in suite:
            red = reduce(src, to)
            truth = oracle_solve(src)
            reduced = oracle_solve(red.instance, max_vertices=10**6)
            disagree += truth.status != reduced.status
            if reduced.status == "yes":
                yes += 1
                try:
                    verify_solution(src, _translate(red, reduced))
                except ValueError:
                    bad_certs += 1
        rows.append((f"{kind}->{to}", len(suite), yes, disagree, bad_certs))
    elapsed = time.perf_counter() - start
    ok = all(n >= 200 and d == 0 and b == 0 for _, n, _, d, b in rows) and elapsed < 300
    detail = "; ".join(f"{name}: {n} sources, {y} yes, {d} disagreements, {b} bad certificates"
                       for name, n, y, d, b in rows)
    report(capsys, 8, "decision preservation", ok, f"{detail}; {elapsed:.1f} s")


def test_criterion_09_conservativeness_checker(capsys):
    disagree = negative = 0
    for seed in range(SUITE_SIZE):
        rng = random.Random(f"conservative-{seed}")
        g = random_graph(rng, rng.randint(1, 8), rng.uniform(0.15, 0.7))
        w = tuple(rng.randint(-5, 5) for _ in g.edges)
        truth = has_negative_cycle(g, w)
        negative += truth
        disagree += is_conservative(g, w) == truth
    ok = disagree == 0
    report(capsys, 9, "conservativeness checker", ok,
           f"{SUITE_SIZE} graphs ({negative} with a negative cycle), {disagree} disagreements")


def test_criterion_10_cycle_pipelines(capsys):
    start = time.perf_counter()
    rows = []
    for kind, solver, brute in (("ecs", ecs_solve, ecs_bruteforce), ("soc", soc_solve, soc_bruteforce)):
        disagree = bad = found = 0
        for src in source_suite(kind):
            budget = sum(1 for x in cycle_set_weights(src.graph, src.weights) if x <= src.target_k) + 1
            out = solver(src, budget)
            truth = brute(src)
            disagree += not isinstance(out, (CycleFound, DefiniteNo))
            disagree += isinstance(out, CycleFound) != (truth is not None)
            if isinstance(out, CycleFound):
                found += 1
                try:
                    out.cycles.check(src.graph)
                    w = out.cycles.weight(src.weights)
                    if kind == "ecs":
                        good = w == out.weight == src.target_k
                    else:
                        good = len(out.cycles) == 1 and w == out.weight and w % 2 == 1 and w <= src.target_k
                except ValueError:
                    good = False
                bad += not good
        rows.append((kind, len(source_suite(kind)), found, disagree, bad))
    elapsed = time.perf_counter() - start
    ok = all(d == 0 and b == 0 for *_, d, b in rows)
    detail = "; ".join(f"{k}: {n} instances, {f} found, {d} disagreements, {b} bad certificates"
                       for k, n, f, d, b in rows)
    report(capsys, 10, "cycle pipelines", ok, f"{detail}; {elapsed:.1f} s")


def _cli(*argv) -> int:
    try:
        return cli.main([str(a) for a in argv])
    except SystemExit as exc:
        return exc.code


def _small_sources(kind: str, count: int) -> list[WeightedInstance]:
    out = []
    for seed in range(count):
        rng = random.Random(f"cli-{kind}-{seed}")
        n = rng.randint(2, 6) if Kind(kind).is_matching_kind else rng.randint(3, 6)
        m = rng.randint(min(n - 1, 1), min(n + 2, n * (n - 1) // 2))
        lo = -3 if Kind(kind).is_matching_kind else -1
        out.append(gen_random_instance(n, 0, (lo, 6), kind, seed, n_edges=m,
                                       rank_l=1 + seed % 3 if kind == "spm" else None))
    return out


def test_criterion_11_cli_end_to_end(tmp_path, capsys):
    start = time.perf_counter()
    mismatches = round_trips = 0
    for kind, to in (("ewpm", "ecs"), ("bcpm", "soc"), ("ecs", "ewpm"), ("soc", "bcpm")):
        for i, src in enumerate(_small_sources(kind, 30)):
            base = tmp_path / f"{kind}-{i}"
            files = {s: base.with_suffix(f".{s}") for s in ("src", "red", "ctx", "rsol", "lift", "dsol")}
            files["src"].write_bytes(serialize_instance(src))
            _cli("reduce", files["src"], "--to", to, "-o", files["red"], "--context", files["ctx"])
            _cli("solve", files["red"], "-o", files["rsol"])
            _cli("lift", "--context", files["ctx"], "--solution", files["rsol"], "-o", files["lift"])
            _cli("solve", files["src"], "-o", files["dsol"])
            lifted = parse_solution(files["lift"].read_bytes())
            direct = parse_solution(files["dsol"].read_bytes())
            round_trips += 1
            mismatches += (lifted.status, lifted.weight) != (direct.status, direct.weight)
    regression = [inst for kind in ("ewpm", "bcpm", "spm", "ecs", "soc") for inst in _small_sources(kind, 40)]
    codes = {}
    for i, inst in enumerate(regression):
        path = tmp_path / f"reg-{i}.txt"
        path.write_bytes(serialize_instance(inst))
        code = _cli("solve", path, "--oracle", "-o", tmp_path / f"reg-{i}.sol")
        codes[code] = codes.get(code, 0) + 1
    capsys.readouterr()
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and codes.get(cli.EXIT_DISAGREE, 0) == 0 and set(codes) <= {0, 1, 2}
    report(capsys, 11, "CLI end to end", ok,
           f"{round_trips} reduce/solve/lift round trips, {mismatches} mismatches; "
           f"{len(regression)} solve --oracle runs, exit codes {dict(sorted(codes.items()))}; {elapsed:.1f} s")


@pytest.mark.parametrize("kind", ["ewpm", "bcpm", "ecs", "soc"])
def test_suites_mix_yes_and_no(kind):
    statuses = {oracle_solve(src).status for src in source_suite(kind)}
    assert statuses == {"yes", "no"}
