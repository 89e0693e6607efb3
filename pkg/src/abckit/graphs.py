"""Simple undirected graphs and the two greedy graph oracles.

The oracles are the deletion-order problem (repeatedly remove the
highest-degree vertex) and the lexicographically-first maximal independent
set, plus the degree-3 regularization gadget that reduces subcubic instances
to 3-regular ones without disturbing the greedy trace on original vertices.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .core import ParseError, PreconditionError


@dataclass(frozen=True)
class Graph:
    """A simple undirected graph on vertices ``1..num_vertices``.

    Edges are stored as sorted pairs ``(u, v)`` with ``u < v``; vertex labels
    double as the lexicographic order used by the greedy oracles.
    """

    num_vertices: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        if self.num_vertices < 1:
            raise ValueError("need at least one vertex")
        for u, v in self.edges:
            if not (1 <= u < v <= self.num_vertices):
                raise ValueError(f"bad edge ({u}, {v}) for {self.num_vertices} vertices")

    def vertices(self) -> range:
        return range(1, self.num_vertices + 1)

    def neighbors(self, v: int) -> frozenset[int]:
        return frozenset(b if a == v else a for a, b in self.edges if v in (a, b))

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {v: set() for v in self.vertices()}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def is_regular(self, degree: int) -> bool:
        adj = self.adjacency()
        return all(len(adj[v]) == degree for v in self.vertices())


def make_graph(num_vertices: int, edges) -> Graph:
    """Normalize arbitrary edge pairs into a :class:`Graph`."""
    normalized = set()
    for u, v in edges:
        if u == v:
            raise ValueError(f"self-loop at {u}")
        normalized.add((min(u, v), max(u, v)))
    return Graph(num_vertices=num_vertices, edges=frozenset(normalized))


def ovr_deletion_order(g: Graph) -> tuple[int, ...]:
    """Repeatedly delete the max-degree vertex (smallest label on ties).

    Degrees are recomputed against the surviving subgraph after every
    deletion; the result is a permutation of ``1..num_vertices``.
    """
    adj = g.adjacency()
    alive = set(g.vertices())
    order = []
    while alive:
        chosen = max(alive, key=lambda v: (len(adj[v]), -v))
        order.append(chosen)
        alive.remove(chosen)
        for u in adj[chosen]:
            adj[u].discard(chosen)
        adj[chosen].clear()
    return tuple(order)


def ovr_decide(g: Graph, v: int, k: int) -> bool:
    """Are at least ``k`` vertices still present right after ``v`` is deleted?"""
    if not 1 <= v <= g.num_vertices:
        raise PreconditionError(f"vertex {v} outside [1, {g.num_vertices}]")
    position = ovr_deletion_order(g).index(v) + 1
    return position <= g.num_vertices - k


def lfmis(g: Graph) -> set[int]:
    """Greedy maximal independent set by ascending label."""
    adj = g.adjacency()
    chosen: set[int] = set()
    blocked: set[int] = set()
    for v in g.vertices():
        if v not in blocked:
            chosen.add(v)
            blocked |= adj[v]
    return chosen


# The +1 gadget raises one host vertex's degree by one: a 5-cycle
# g1-g2-g3-g4-g5 with chords {g1,g3} and {g2,g4}.  Within the gadget g5 has
# degree 2 and is the attachment point; after attaching, every gadget vertex
# has degree 3.  Gadget labels come after all original labels, so the greedy
# independent-set trace over original vertices is untouched.
_GADGET_EDGES = ((1, 2), (2, 3), (3, 4), (4, 5), (1, 5), (1, 3), (2, 4))
_GADGET_SIZE = 5
_GADGET_ATTACH = 5


def regularize_to_3(g: Graph, v: int) -> tuple[Graph, int]:
    """Pad a subcubic graph to a 3-regular one; ``v`` keeps its label.

    Each degree-2 vertex receives one +1 gadget and each degree-1 vertex two;
    degree-0 vertices receive three.  Gadget vertices are labeled past the
    originals, hosts in ascending order.  A 3-regular input is returned as-is.
    """
    if not 1 <= v <= g.num_vertices:
        raise PreconditionError(f"vertex {v} outside [1, {g.num_vertices}]")
    adj = g.adjacency()
    deficits = {u: 3 - len(adj[u]) for u in g.vertices()}
    if any(d < 0 for d in deficits.values()):
        raise PreconditionError("input graph must have maximum degree 3")
    if all(d == 0 for d in deficits.values()):
        return g, v
    edges = set(g.edges)
    next_label = g.num_vertices
    for host in g.vertices():
        for _ in range(deficits[host]):
            base = next_label
            for a, b in _GADGET_EDGES:
                edges.add((base + a, base + b))
            edges.add((min(host, base + _GADGET_ATTACH), max(host, base + _GADGET_ATTACH)))
            next_label += _GADGET_SIZE
    padded = Graph(num_vertices=next_label, edges=frozenset(edges))
    assert padded.is_regular(3)
    return padded, v


# --- generation helpers -----------------------------------------------------


def all_graphs(num_vertices: int):
    """Every simple graph on ``1..num_vertices`` (raw edge-subset enumeration)."""
    pairs = list(itertools.combinations(range(1, num_vertices + 1), 2))
    for r in range(len(pairs) + 1):
        for subset in itertools.combinations(pairs, r):
            yield Graph(num_vertices=num_vertices, edges=frozenset(subset))


def random_graph(num_vertices: int, rng: random.Random, edge_prob: float = 0.5) -> Graph:
    edges = {
        pair
        for pair in itertools.combinations(range(1, num_vertices + 1), 2)
        if rng.random() < edge_prob
    }
    return Graph(num_vertices=num_vertices, edges=frozenset(edges))


def random_regular_graph(num_vertices: int, degree: int, rng: random.Random) -> Graph:
    """Uniform-ish regular graph via the pairing model with rejection.

    Each vertex contributes ``degree`` stubs; stubs are matched uniformly and
    the matching is rejected if it creates a loop or parallel edge.
    """
    if num_vertices * degree % 2:
        raise PreconditionError("num_vertices * degree must be even")
    if degree >= num_vertices:
        raise PreconditionError("degree must be below the vertex count")
    stubs = [v for v in range(1, num_vertices + 1) for _ in range(degree)]
    while True:
        rng.shuffle(stubs)
        edges = set()
        ok = True
        for i in range(0, len(stubs), 2):
            u, v = stubs[i], stubs[i + 1]
            if u == v or (min(u, v), max(u, v)) in edges:
                ok = False
                break
            edges.add((min(u, v), max(u, v)))
        if ok:
            return Graph(num_vertices=num_vertices, edges=frozenset(edges))


def random_subcubic_graph(num_vertices: int, rng: random.Random) -> Graph:
    """Random graph with maximum degree 3 (for regularization tests)."""
    pairs = list(itertools.combinations(range(1, num_vertices + 1), 2))
    rng.shuffle(pairs)
    degree = {v: 0 for v in range(1, num_vertices + 1)}
    edges = set()
    for u, v in pairs:
        if degree[u] < 3 and degree[v] < 3 and rng.random() < 0.6:
            edges.add((u, v))
            degree[u] += 1
            degree[v] += 1
    return Graph(num_vertices=num_vertices, edges=frozenset(edges))


# --- `graph 1` file format ---------------------------------------------------
#
# line 1: `graph 1`; line 2: `vertices: <m>`; line 3: `edges: <e>`;
# then e lines `u v` with 1 <= u < v <= m.

_GRAPH_MAGIC = "graph 1"


def parse_graph(text: str | bytes) -> Graph:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0].strip() != _GRAPH_MAGIC:
        raise ParseError(f"missing `{_GRAPH_MAGIC}` header", line=1)

    def header_int(idx: int, key: str) -> int:
        if idx >= len(lines) or not lines[idx].startswith(key + ":"):
            raise ParseError(f"expected `{key}: <int>`", line=idx + 1)
        try:
            return int(lines[idx].split(":", 1)[1].strip())
        except ValueError as exc:
            raise ParseError(f"non-integer value in `{key}:` header", line=idx + 1) from exc

    num_vertices = header_int(1, "vertices")
    num_edges = header_int(2, "edges")
    if num_vertices < 1:
        raise ParseError("vertex count must be positive", line=2)
    if len(lines) != 3 + num_edges:
        raise ParseError(f"expected {num_edges} edge lines, found {len(lines) - 3}", line=len(lines))
    edges = set()
    for offset, raw in enumerate(lines[3:]):
        lineno = 4 + offset
        tokens = raw.split()
        if len(tokens) != 2:
            raise ParseError(f"expected `u v`, got {raw!r}", line=lineno)
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError as exc:
            raise ParseError(f"non-integer endpoint in {raw!r}", line=lineno) from exc
        if not 1 <= u < v <= num_vertices:
            raise ParseError(f"edge ({u}, {v}) must satisfy 1 <= u < v <= {num_vertices}", line=lineno)
        if (u, v) in edges:
            raise ParseError(f"duplicate edge ({u}, {v})", line=lineno)
        edges.add((u, v))
    return Graph(num_vertices=num_vertices, edges=frozenset(edges))


def serialize_graph(g: Graph) -> str:
    lines = [_GRAPH_MAGIC, f"vertices: {g.num_vertices}", f"edges: {len(g.edges)}"]
    lines.extend(f"{u} {v}" for u, v in sorted(g.edges))
    return "\n".join(lines) + "\n"
