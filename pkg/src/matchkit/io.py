"""Line-oriented text formats for instances, solutions and reduction contexts.

Instance files::

    c optional comment
    p <kind> <n> <m> <k> [<l>]
    e <u> <v> <w>            (exactly m lines, 1-based vertex ids)

Solution files::

    s yes|no|unknown
    w <weight>               (present iff yes)
    m <u> <v>                (one per matching edge) or
    k <v1> <v2> ... <vt>     (one per cycle, closed implicitly)

Context sidecars carry the source instance (``src`` lines), the direction,
the base matching and parameters, or the gadget maps; see
:func:`serialize_context`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .exceptions import InstanceError
from .graph import INT64_MAX, INT64_MIN, Graph, Kind, WeightedInstance
from .reductions import (
    DIRECTIONS,
    AlternatingContext,
    GadgetContext,
    ReductionContext,
    build_gadget,
)
from .utils.validation import validate_instance

Text = Union[bytes, str]

STATUSES = ("yes", "no", "unknown")


def _decode(text: Text) -> list[str]:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InstanceError(f"input is not UTF-8: {exc}", "malformed") from exc
    return text.splitlines()


def _int(token: str, what: str, lineno: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise InstanceError(f"line {lineno}: {what} {token!r} is not an integer", "malformed") from None
    if not INT64_MIN <= value <= INT64_MAX:
        raise InstanceError(f"line {lineno}: {what} {value} outside the signed 64-bit range", "overflow")
    return value


def _vertex(token: str, n: int, lineno: int) -> int:
    v = _int(token, "vertex id", lineno)
    if not 1 <= v <= n:
        raise InstanceError(f"line {lineno}: vertex id {v} outside 1..{n}", "bad_id")
    return v - 1


# instances -------------------------------------------------------------------

def _parse_instance_lines(lines: Iterable[tuple[int, str]], *, validate: bool = True) -> WeightedInstance:
    header = None
    edges: list[tuple[int, int]] = []
    weights: list[int] = []
    for lineno, line in lines:
        tokens = line.split()
        if not tokens or tokens[0] == "c":
            continue
        tag = tokens[0]
        if header is None:
            if tag != "p":
                raise InstanceError(f"line {lineno}: expected the problem line first", "malformed")
            header = _parse_problem(tokens, lineno)
            continue
        if tag == "p":
            raise InstanceError(f"line {lineno}: second problem line", "malformed")
        if tag != "e" or len(tokens) != 4:
            raise InstanceError(f"line {lineno}: expected 'e <u> <v> <w>'", "malformed")
        n = header[1]
        u = _vertex(tokens[1], n, lineno)
        v = _vertex(tokens[2], n, lineno)
        if u == v:
            raise InstanceError(f"line {lineno}: self-loop at vertex {u + 1}", "non_simple")
        edges.append((u, v))
        weights.append(_int(tokens[3], "weight", lineno))
    if header is None:
        raise InstanceError("missing problem line", "malformed")
    kind, n, m, k, l = header
    if len(edges) != m:
        raise InstanceError(f"problem line announces {m} edges, found {len(edges)}", "malformed")
    inst = WeightedInstance(Graph(n, tuple(edges)), tuple(weights), kind, k, l)
    if validate:
        validate_instance(inst)
    return inst


def _parse_problem(tokens: list[str], lineno: int):
    if len(tokens) < 2:
        raise InstanceError(f"line {lineno}: incomplete problem line", "malformed")
    try:
        kind = Kind(tokens[1].lower())
    except ValueError:
        raise InstanceError(f"line {lineno}: unknown problem kind {tokens[1]!r}", "malformed") from None
    want = 6 if kind is Kind.SPM else 5
    if len(tokens) != want:
        raise InstanceError(f"line {lineno}: a {kind.value} problem line has {want} fields", "malformed")
    n = _int(tokens[2], "vertex count", lineno)
    m = _int(tokens[3], "edge count", lineno)
    k = _int(tokens[4], "target", lineno)
    l = _int(tokens[5], "rank", lineno) if kind is Kind.SPM else None
    if n < 1:
        raise InstanceError(f"line {lineno}: vertex count must be positive", "malformed")
    if m < 0:
        raise InstanceError(f"line {lineno}: negative edge count", "malformed")
    if l is not None and l < 1:
        raise InstanceError(f"line {lineno}: rank must be positive", "missing_rank")
    return kind, n, m, k, l


def parse_instance(text: Text) -> WeightedInstance:
    """Parse and validate an instance file; edge order defines edge indices.

    Examples
    --------
    >>> inst = parse_instance(b"p ewpm 2 1 7\\ne 1 2 7")
    >>> inst.kind.value, inst.graph.edges, inst.weights, inst.target_k
    ('ewpm', ((0, 1),), (7,), 7)
    """
    return _parse_instance_lines(enumerate(_decode(text), start=1))


def _instance_lines(inst: WeightedInstance) -> list[str]:
    head = f"p {inst.kind.value} {inst.n} {inst.m} {inst.target_k}"
    if inst.kind is Kind.SPM:
        head += f" {inst.rank_l}"
    lines = [head]
    lines += [f"e {u + 1} {v + 1} {w}" for (u, v), w in zip(inst.graph.edges, inst.weights)]
    return lines


def serialize_instance(inst: WeightedInstance, comments: Iterable[str] = ()) -> bytes:
    """Instance file text; ``parse_instance`` of the result equals ``inst``."""
    lines = [f"c {c}" for c in comments] + _instance_lines(inst)
    return ("\n".join(lines) + "\n").encode()


def instance_comments(text: Text) -> list[str]:
    """The ``c`` comment payloads of a file, in order."""
    out = []
    for line in _decode(text):
        tokens = line.split(maxsplit=1)
        if tokens and tokens[0] == "c":
            out.append(tokens[1] if len(tokens) > 1 else "")
    return out


# solutions -------------------------------------------------------------------

@dataclass(frozen=True)
class Solution:
    """A solver answer with its certificate, in 0-based vertex ids.

    ``pairs`` holds matching edges as vertex pairs; ``cycles`` holds each
    cycle as its vertex sequence. Both are graph-independent so the text
    form round-trips exactly; see :mod:`matchkit.solution` for resolving
    them against a graph.
    """

    status: str
    weight: Optional[int] = None
    pairs: tuple[tuple[int, int], ...] = ()
    cycles: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if self.status not in STATUSES:
            raise InstanceError(f"unknown status {self.status!r}", "malformed")
        if (self.status == "yes") != (self.weight is not None):
            raise InstanceError("a weight is present exactly for yes answers", "malformed")
        if self.status != "yes" and (self.pairs or self.cycles):
            raise InstanceError("only yes answers carry a certificate", "malformed")
        if self.pairs and self.cycles:
            raise InstanceError("a solution holds matching edges or cycles, not both", "malformed")


def parse_solution(text: Text) -> Solution:
    status = None
    weight = None
    pairs: list[tuple[int, int]] = []
    cycles: list[tuple[int, ...]] = []
    for lineno, line in enumerate(_decode(text), start=1):
        tokens = line.split()
        if not tokens or tokens[0] == "c":
            continue
        tag, rest = tokens[0], tokens[1:]
        if tag == "s" and len(rest) == 1 and status is None:
            status = rest[0]
        elif tag == "w" and len(rest) == 1 and weight is None:
            weight = _int(rest[0], "weight", lineno)
        elif tag == "m" and len(rest) == 2:
            u, v = (_int(t, "vertex id", lineno) - 1 for t in rest)
            pairs.append((u, v))
        elif tag == "k" and len(rest) >= 1:
            cycles.append(tuple(_int(t, "vertex id", lineno) - 1 for t in rest))
        else:
            raise InstanceError(f"line {lineno}: unexpected solution line {line!r}", "malformed")
    if status is None:
        raise InstanceError("missing status line", "malformed")
    for u, v in pairs:
        if min(u, v) < 0:
            raise InstanceError("vertex ids are 1-based", "bad_id")
    return Solution(status, weight, tuple(pairs), tuple(cycles))


def serialize_solution(sol: Solution) -> bytes:
    lines = [f"s {sol.status}"]
    if sol.weight is not None:
        lines.append(f"w {sol.weight}")
    lines += [f"m {u + 1} {v + 1}" for u, v in sol.pairs]
    lines += ["k " + " ".join(str(v + 1) for v in cyc) for cyc in sol.cycles]
    return ("\n".join(lines) + "\n").encode()


# reduction contexts ------------------------------------------------------------

def serialize_context(ctx: ReductionContext) -> bytes:
    """Context sidecar text.

    Line order: ``dir``, the source instance as ``src`` lines, then either
    ``resolved`` / ``param shift|basew|r`` / ``base m`` (matching to cycles)
    or ``vmap`` / ``emap`` / ``base m`` (cycles to matching, gadget ids).
    """
    lines = [f"dir {ctx.direction}"]
    lines += ["src " + line for line in _instance_lines(ctx.source)]
    graph = ctx.source.graph
    if isinstance(ctx, AlternatingContext):
        if ctx.resolved is not None:
            lines.append(f"resolved {ctx.resolved}")
        lines.append(f"param shift {ctx.shift}")
        if ctx.base_weight is not None:
            lines.append(f"param basew {ctx.base_weight}")
        if ctx.r is not None:
            lines.append(f"param r {ctx.r}")
        for e in sorted(ctx.base_matching or ()):
            u, v = graph.edges[e]
            lines.append(f"base m {u + 1} {v + 1}")
    else:
        for v, (a, b) in enumerate(ctx.vertex_map):
            lines.append(f"vmap {v + 1} {a + 1} {b + 1}")
        for (u, v), em in zip(graph.edges, ctx.edge_map):
            lines.append(f"emap {u + 1} {v + 1} " + " ".join(str(x + 1) for x in em[:4]))
        for e in sorted(ctx.canonical_matching):
            a, b = ctx.gadget.edges[e]
            lines.append(f"base m {a + 1} {b + 1}")
    return ("\n".join(lines) + "\n").encode()


def parse_context(text: Text) -> ReductionContext:
    """Parse a context sidecar and check it against its embedded source instance.

    Raises :class:`InstanceError` (code ``bad_context``) when the maps or the
    base matching do not fit the source.
    """
    direction = None
    src: list[tuple[int, str]] = []
    params: dict[str, int] = {}
    resolved = None
    base: list[tuple[int, int]] = []
    vmap: list[tuple[int, int, int]] = []
    emap: list[tuple[int, ...]] = []
    for lineno, line in enumerate(_decode(text), start=1):
        tokens = line.split()
        if not tokens or tokens[0] == "c":
            continue
        tag = tokens[0]
        if tag == "dir" and len(tokens) == 2:
            direction = tokens[1]
        elif tag == "src":
            src.append((lineno, line.split(maxsplit=1)[1] if len(tokens) > 1 else ""))
        elif tag == "resolved" and len(tokens) == 2 and tokens[1] in ("yes", "no"):
            resolved = tokens[1]
        elif tag == "param" and len(tokens) == 3 and tokens[1] in ("shift", "basew", "r"):
            params[tokens[1]] = _int(tokens[2], tokens[1], lineno)
        elif tag == "base" and len(tokens) == 4 and tokens[1] == "m":
            base.append((_int(tokens[2], "vertex id", lineno) - 1, _int(tokens[3], "vertex id", lineno) - 1))
        elif tag == "vmap" and len(tokens) == 4:
            vmap.append(tuple(_int(t, "vertex id", lineno) - 1 for t in tokens[1:]))
        elif tag == "emap" and len(tokens) == 7:
            emap.append(tuple(_int(t, "vertex id", lineno) - 1 for t in tokens[1:]))
        else:
            raise InstanceError(f"line {lineno}: unexpected context line {line!r}", "malformed")
    if direction not in DIRECTIONS.values():
        raise InstanceError(f"missing or unknown direction {direction!r}", "bad_context")
    source = _parse_instance_lines(src)
    source_kind = next(a for (a, _), d in DIRECTIONS.items() if d == direction)
    if source.kind is not source_kind:
        raise InstanceError(f"source kind {source.kind.value} does not fit direction {direction}", "bad_context")
    if source.kind.is_matching_kind:
        return _alternating_context(direction, source, params, resolved, base)
    return _gadget_context(direction, source, vmap, emap, base)


def _edge_set(graph: Graph, pairs: list[tuple[int, int]]) -> frozenset[int]:
    out = set()
    for u, v in pairs:
        e = graph.edge_index(u, v)
        if e is None:
            raise InstanceError(f"base edge ({u + 1}, {v + 1}) is not in the graph", "bad_context")
        out.add(e)
    return frozenset(out)


def _alternating_context(direction, source, params, resolved, base) -> AlternatingContext:
    if "shift" not in params:
        raise InstanceError("context lacks 'param shift'", "bad_context")
    shift = params["shift"]
    base_matching = _edge_set(source.graph, base) if base else None
    base_weight = params.get("basew")
    r = params.get("r")
    if shift != -min(0, min(source.weights, default=0)):
        raise InstanceError("shift does not fit the source weights", "bad_context")
    if base_matching is not None:
        from .matching import verify_perfect_matching

        shifted = [w + shift for w in source.weights]
        weight = verify_perfect_matching(source.graph, shifted, base_matching)
        if weight is None or weight != base_weight:
            raise InstanceError("base matching does not fit the source instance", "bad_context")
    elif base_weight is not None:
        raise InstanceError("base weight without a base matching", "bad_context")
    if resolved is None and (base_matching is None or r is None):
        raise InstanceError("unresolved context needs a base matching and r", "bad_context")
    return AlternatingContext(direction, source, base_matching, base_weight, r, shift, resolved)


def _gadget_context(direction, source, vmap, emap, base) -> GadgetContext:
    gadget, _, vertex_map, edge_map, canonical = build_gadget(source.graph, source.weights)
    got_v = sorted(vmap)
    want_v = [(v, a, b) for v, (a, b) in enumerate(vertex_map)]
    got_e = sorted(emap)
    want_e = sorted((u, v) + em[:4] for (u, v), em in zip(source.graph.edges, edge_map))
    if got_v != want_v or got_e != want_e:
        raise InstanceError("gadget maps do not fit the source graph", "bad_context")
    if _edge_set(gadget, base) != canonical:
        raise InstanceError("canonical matching does not fit the gadget", "bad_context")
    return GadgetContext(direction, source, gadget, canonical, vertex_map, edge_map)


__all__ = [
    "Solution",
    "STATUSES",
    "instance_comments",
    "parse_context",
    "parse_instance",
    "parse_solution",
    "serialize_context",
    "serialize_instance",
    "serialize_solution",
]
