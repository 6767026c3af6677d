"""Directed graphs and the combinatorial algorithms the sum solvers rely on.

Vertex ids are opaque strings. Each graph assigns dense integer indices in
first-appearance order, so ``g.vertices[i]`` is the vertex with index ``i``
and vectors "over V" are arrays aligned with ``g.vertices``.
"""

from __future__ import annotations

import heapq
import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import ParseError, ValidationError

__all__ = [
    "Digraph",
    "WeightedDigraph",
    "SccDecomposition",
    "parse_graph",
    "read_graph",
    "scc",
    "final_strong_components",
    "girth",
    "shortest_cycle",
    "is_strongly_connected",
    "check_automorphism",
    "induced_subgraph",
    "bfs_distances_to",
]


@dataclass(frozen=True)
class Digraph:
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    allow_loops: bool = False
    index: dict = field(init=False, repr=False, compare=False)
    succ: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        vertices = tuple(str(v) for v in self.vertices)
        edges = tuple((str(a), str(b)) for a, b in self.edges)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        index = {}
        for v in vertices:
            if v in index:
                raise ValidationError(f"duplicate vertex {v!r}")
            index[v] = len(index)
        seen = set()
        succ = [[] for _ in vertices]
        for a, b in edges:
            if a not in index or b not in index:
                raise ValidationError(f"edge ({a!r}, {b!r}) uses an unknown vertex")
            if a == b and not self.allow_loops:
                raise ValidationError(f"self-loop at {a!r} not allowed")
            if (a, b) in seen:
                raise ValidationError(f"duplicate edge ({a!r}, {b!r})")
            seen.add((a, b))
            succ[index[a]].append(index[b])
        object.__setattr__(self, "index", index)
        object.__setattr__(self, "succ", tuple(tuple(s) for s in succ))

    @classmethod
    def from_edges(cls, edges: Iterable, vertices: Iterable | None = None, allow_loops=False):
        """Build a graph; vertices default to first appearance order in ``edges``."""
        edges = [(str(a), str(b)) for a, b in edges]
        order = [str(v) for v in vertices] if vertices is not None else []
        known = set(order)
        for a, b in edges:
            for v in (a, b):
                if v not in known:
                    known.add(v)
                    order.append(v)
        return cls(tuple(order), tuple(edges), allow_loops)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def base(self) -> "Digraph":
        return self

    def out_neighbors(self, v: str) -> list[str]:
        return [self.vertices[j] for j in self.succ[self.index[str(v)]]]

    def edge_index_pairs(self) -> list[tuple[int, int]]:
        return [(self.index[a], self.index[b]) for a, b in self.edges]

    def out_degrees(self) -> list[int]:
        return [len(s) for s in self.succ]


@dataclass(frozen=True)
class WeightedDigraph:
    """A digraph with a strictly positive weight on every edge."""

    base: Digraph
    weights: tuple[float, ...]

    def __post_init__(self):
        weights = tuple(float(w) for w in self.weights)
        if len(weights) != len(self.base.edges):
            raise ValidationError("one weight per edge required")
        for (a, b), w in zip(self.base.edges, weights):
            if not (w > 0 and math.isfinite(w)):
                raise ValidationError(f"weight on ({a!r}, {b!r}) must be positive, got {w}")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_weighted_edges(cls, triples: Iterable, vertices=None, allow_loops=False):
        triples = list(triples)
        base = Digraph.from_edges([(a, b) for a, b, _ in triples], vertices, allow_loops)
        return cls(base, tuple(w for _, _, w in triples))

    @classmethod
    def unit(cls, g: Digraph) -> "WeightedDigraph":
        return cls(g, (1.0,) * len(g.edges))

    vertices = property(lambda self: self.base.vertices)
    edges = property(lambda self: self.base.edges)
    index = property(lambda self: self.base.index)
    succ = property(lambda self: self.base.succ)
    n = property(lambda self: self.base.n)
    allow_loops = property(lambda self: self.base.allow_loops)

    def out_neighbors(self, v):
        return self.base.out_neighbors(v)

    def edge_index_pairs(self):
        return self.base.edge_index_pairs()

    def out_degrees(self):
        return self.base.out_degrees()

    def weight_map(self) -> dict[tuple[str, str], float]:
        return dict(zip(self.base.edges, self.weights))


def _as_base(g) -> Digraph:
    return g.base


# ---------------------------------------------------------------------------
# parsing


def parse_graph(text: str, format: str = "edge-list"):
    """Parse ``text`` as an edge list or JSON document.

    Returns a plain :class:`Digraph` when no edge carries a weight, otherwise a
    :class:`WeightedDigraph` with omitted weights defaulting to 1.
    """
    if format == "json":
        return _parse_json(text)
    if format != "edge-list":
        raise ValidationError(f"unknown graph format {format!r}")
    triples = []
    weighted = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ParseError(f"expected 'FROM TO [WEIGHT]', got {raw.strip()!r}", lineno)
        w = 1.0
        if len(parts) == 3:
            weighted = True
            try:
                w = float(parts[2])
            except ValueError:
                raise ParseError(f"bad weight {parts[2]!r}", lineno) from None
            if not (w > 0 and math.isfinite(w)):
                raise ValidationError(f"line {lineno}: weight must be positive, got {parts[2]}")
        triples.append((parts[0], parts[1], w))
    return _assemble(None, triples, weighted)


def _parse_json(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(doc, dict) or "edges" not in doc:
        raise ParseError("JSON graph must be an object with an 'edges' list")
    vertices = doc.get("vertices")
    triples = []
    weighted = False
    for i, e in enumerate(doc["edges"]):
        if not isinstance(e, dict) or "from" not in e or "to" not in e:
            raise ParseError(f"edge #{i} needs 'from' and 'to'")
        w = e.get("weight")
        if w is None:
            w = 1.0
        else:
            weighted = True
            if isinstance(w, bool) or not isinstance(w, (int, float)):
                raise ParseError(f"edge #{i}: weight must be a number")
            if not (w > 0 and math.isfinite(w)):
                raise ValidationError(f"edge #{i}: weight must be positive, got {w}")
        triples.append((str(e["from"]), str(e["to"]), float(w)))
    if vertices is not None:
        known = {str(v) for v in vertices}
        for a, b, _ in triples:
            if a not in known or b not in known:
                raise ValidationError(f"edge ({a!r}, {b!r}) uses a vertex missing from 'vertices'")
    return _assemble(vertices, triples, weighted)


def _assemble(vertices, triples, weighted):
    if weighted:
        return WeightedDigraph.from_weighted_edges(triples, vertices)
    return Digraph.from_edges([(a, b) for a, b, _ in triples], vertices)


def read_graph(path: str):
    """Read a graph file; ``.json`` files (or text starting with '{') are JSON."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    fmt = "json" if path.endswith(".json") or text.lstrip().startswith("{") else "edge-list"
    return parse_graph(text, fmt)


# ---------------------------------------------------------------------------
# strong components


@dataclass(frozen=True)
class SccDecomposition:
    """Strong components listed in a topological order of the condensation.

    Components are tuples of vertex ids (graph order). ``condensation`` has
    vertex ids ``"0"``, ``"1"``, ... matching positions in ``components``;
    every condensation edge goes from a lower to a higher position.
    """

    components: tuple[tuple[str, ...], ...]
    condensation: Digraph
    final: tuple[bool, ...]
    component_of: dict

    def final_components(self) -> list[tuple[str, ...]]:
        return [c for c, f in zip(self.components, self.final) if f]


def _tarjan(n, succ):
    """Iterative Tarjan; returns a component label per vertex index."""
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack = []
    label = [-1] * n
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            for j in range(i, len(succ[v])):
                w = succ[v][j]
                if index[w] == -1:
                    work.append((v, j + 1))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    label[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return label, ncomp


def scc(g) -> SccDecomposition:
    g = _as_base(g)
    n = g.n
    label, ncomp = _tarjan(n, g.succ)
    members = [[] for _ in range(ncomp)]
    for v in range(n):
        members[label[v]].append(v)
    cedges = set()
    for a in range(n):
        for b in g.succ[a]:
            if label[a] != label[b]:
                cedges.add((label[a], label[b]))
    # Kahn's algorithm, ties broken by smallest member index for determinism
    indeg = [0] * ncomp
    out = [[] for _ in range(ncomp)]
    for a, b in cedges:
        indeg[b] += 1
        out[a].append(b)
    heap = [(members[c][0], c) for c in range(ncomp) if indeg[c] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, c = heapq.heappop(heap)
        order.append(c)
        for d in out[c]:
            indeg[d] -= 1
            if indeg[d] == 0:
                heapq.heappush(heap, (members[d][0], d))
    pos = {c: i for i, c in enumerate(order)}
    components = tuple(tuple(g.vertices[v] for v in members[c]) for c in order)
    cond_edges = sorted((pos[a], pos[b]) for a, b in cedges)
    condensation = Digraph(
        tuple(str(i) for i in range(ncomp)),
        tuple((str(a), str(b)) for a, b in cond_edges),
    )
    has_out = [False] * ncomp
    for a, _ in cond_edges:
        has_out[a] = True
    component_of = {v: pos[label[g.index[v]]] for v in g.vertices}
    return SccDecomposition(components, condensation, tuple(not h for h in has_out), component_of)


def final_strong_components(g) -> list[tuple[str, ...]]:
    return scc(g).final_components()


def is_strongly_connected(g) -> bool:
    g = _as_base(g)
    return g.n > 0 and len(scc(g).components) == 1


def induced_subgraph(g, vertices: Iterable[str]) -> Digraph:
    """Subgraph on ``vertices``, keeping the parent's vertex order."""
    g = _as_base(g)
    keep = set(str(v) for v in vertices)
    verts = tuple(v for v in g.vertices if v in keep)
    edges = tuple((a, b) for a, b in g.edges if a in keep and b in keep)
    return Digraph(verts, edges, g.allow_loops)


# ---------------------------------------------------------------------------
# girth


def _bfs(succ, s, allowed=None):
    dist = {s: 0}
    parent = {s: None}
    q = deque([s])
    while q:
        u = q.popleft()
        for w in sorted(succ[u]):
            if w in dist or (allowed is not None and w not in allowed):
                continue
            dist[w] = dist[u] + 1
            parent[w] = u
            q.append(w)
    return dist, parent


def girth(g) -> int | None:
    """Length of the shortest directed cycle, or ``None`` for an acyclic graph.

    One BFS per vertex: the shortest cycle through ``s`` closes along an edge
    ``u -> s`` from the BFS layer of ``u``.
    """
    g = _as_base(g)
    pred = [[] for _ in range(g.n)]
    for a, b in g.edge_index_pairs():
        pred[b].append(a)
    best = None
    for s in range(g.n):
        dist, _ = _bfs(g.succ, s)
        for u in pred[s]:
            if u in dist:
                length = dist[u] + 1
                if best is None or length < best:
                    best = length
    return best


def shortest_cycle(g) -> list[str] | None:
    """A shortest cycle as a vertex list, lexicographically smallest by vertex index.

    The cycle is written starting from its minimal-index vertex.
    """
    g = _as_base(g)
    glen = girth(g)
    if glen is None:
        return None
    for s in range(g.n):
        allowed = set(range(s, g.n))
        dist, parent = _bfs(g.succ, s, allowed)
        best = None
        for u, d in dist.items():
            if d == glen - 1 and s in g.succ[u]:
                path = []
                w = u
                while w is not None:
                    path.append(w)
                    w = parent[w]
                path.reverse()
                if best is None or path < best:
                    best = path
        if best is not None:
            return [g.vertices[i] for i in best]
    return None  # pragma: no cover


def bfs_distances_to(g, targets: Iterable[str]) -> dict[str, int]:
    """Directed distance from each vertex to the target set (reverse BFS)."""
    g = _as_base(g)
    pred = [[] for _ in range(g.n)]
    for a, b in g.edge_index_pairs():
        pred[b].append(a)
    dist = {}
    q = deque()
    for t in targets:
        i = g.index[str(t)]
        if i not in dist:
            dist[i] = 0
            q.append(i)
    while q:
        u = q.popleft()
        for w in pred[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                q.append(w)
    return {g.vertices[i]: d for i, d in dist.items()}


# ---------------------------------------------------------------------------
# automorphisms


def check_automorphism(g, perm: Mapping[str, str] | Sequence[str]) -> bool:
    """True iff ``perm`` maps edges onto edges with identical weights.

    ``perm`` is a mapping between vertex ids, or a sequence giving the image
    of each vertex in graph order.
    """
    if not isinstance(perm, Mapping):
        perm = dict(zip(g.vertices, perm))
        if len(perm) != g.n:
            raise ValidationError("permutation length does not match vertex count")
    perm = {str(k): str(v) for k, v in perm.items()}
    vs = set(g.vertices)
    if set(perm) != vs or set(perm.values()) != vs or len(set(perm.values())) != len(vs):
        raise ValidationError("permutation is not a bijection on the vertex set")
    if isinstance(g, WeightedDigraph):
        wmap = g.weight_map()
    else:
        wmap = {e: 1.0 for e in g.edges}
    for (a, b), w in wmap.items():
        image = (perm[a], perm[b])
        if wmap.get(image) != w:
            return False
    return True
