"""Finite undirected multigraphs as incidence structures.

A graph is (V, E, Inc) with Inc ⊆ E × V; every edge has either 2 endpoints or
none (loops are rejected, isolated "phantom" edges are representable). Ids are
arbitrary hashable values ordered by `util.ordkey`; all derived sequences are
emitted in that order so downstream constructions stay deterministic.
"""

from __future__ import annotations

import json
from collections import deque

from .errors import InvalidGraphError
from .util import ordkey, osorted


class Graph:
    __slots__ = ("vertices", "edges", "ends", "_inc", "_hash")

    def __init__(self, vertices, edges):
        """Build a graph from vertex ids and a mapping edge id -> endpoints.

        `edges` maps each edge id to an iterable of 0 or 2 distinct vertex
        ids; endpoints must be declared vertices.
        """
        self.vertices = tuple(osorted(set(vertices)))
        vset = set(self.vertices)
        ends = {}
        for e in osorted(edges):
            pts = frozenset(edges[e])
            if len(pts) == 1:
                raise InvalidGraphError(f"edge {e!r} is a loop")
            if len(pts) not in (0, 2):
                raise InvalidGraphError(f"edge {e!r} must have 0 or 2 endpoints")
            if not pts <= vset:
                raise InvalidGraphError(f"edge {e!r} has undeclared endpoint")
            ends[e] = pts
        self.edges = tuple(osorted(ends))
        self.ends = ends
        inc = {v: [] for v in self.vertices}
        for e in self.edges:
            for v in osorted(ends[e]):
                inc[v].append(e)
        self._inc = {v: tuple(es) for v, es in inc.items()}
        self._hash = hash((self.vertices, tuple((e, self.ends[e]) for e in self.edges)))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return (isinstance(other, Graph) and self.vertices == other.vertices
                and self.edges == other.edges and self.ends == other.ends)

    def __repr__(self):
        return f"Graph(|V|={len(self.vertices)}, |E|={len(self.edges)})"

    def incident_edges(self, v):
        return self._inc[v]

    def degree(self, v):
        return len(self._inc[v])

    def max_degree(self):
        return max((self.degree(v) for v in self.vertices), default=0)

    def neighbors(self, v):
        out = set()
        for e in self._inc[v]:
            out |= self.ends[e]
        out.discard(v)
        return frozenset(out)

    def incidence(self):
        """The incidence relation as a frozenset of (edge, vertex) pairs."""
        return frozenset((e, v) for e in self.edges for v in self.ends[e])


def is_connected(g: Graph) -> bool:
    """True for the empty graph and any graph with one BFS component.

    Phantom (endpointless) edges do not affect connectivity.
    """
    if not g.vertices:
        return True
    seen = {g.vertices[0]}
    queue = deque(seen)
    while queue:
        v = queue.popleft()
        for u in g.neighbors(v):
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return len(seen) == len(g.vertices)


def diameter(g: Graph):
    """Max over vertex pairs of BFS distance; inf if disconnected, 0 if |V| <= 1."""
    if len(g.vertices) <= 1:
        return 0
    best = 0
    for src in g.vertices:
        dist = {src: 0}
        queue = deque([src])
        while queue:
            v = queue.popleft()
            for u in g.neighbors(v):
                if u not in dist:
                    dist[u] = dist[v] + 1
                    queue.append(u)
        if len(dist) < len(g.vertices):
            return float("inf")
        best = max(best, max(dist.values()))
    return best


def _edge_profile(g: Graph):
    """Multiset of endpoint sets: {endpoints -> multiplicity}; key None for phantom edges."""
    prof = {}
    for e in g.edges:
        key = g.ends[e] if g.ends[e] else None
        prof[key] = prof.get(key, 0) + 1
    return prof


def is_isomorphic(g: Graph, h: Graph):
    """Exhaustive isomorphism test; returns a vertex bijection or None.

    Multigraph-aware: a vertex bijection works iff endpoint-pair multiplicities
    match (parallel edges are interchangeable). Intended for small graphs.
    """
    if len(g.vertices) != len(h.vertices) or len(g.edges) != len(h.edges):
        return None
    if sorted(g.degree(v) for v in g.vertices) != sorted(h.degree(v) for v in h.vertices):
        return None
    gprof = _edge_profile(g)
    hprof = _edge_profile(h)
    if gprof.get(None, 0) != hprof.get(None, 0):
        return None

    gs = osorted(g.vertices)
    hs = list(h.vertices)

    def extend(i, mapping, used):
        if i == len(gs):
            return dict(mapping)
        v = gs[i]
        for u in hs:
            if u in used or h.degree(u) != g.degree(v):
                continue
            ok = True
            for w, uw in mapping.items():
                need = gprof.get(frozenset((v, w)), 0)
                have = hprof.get(frozenset((u, uw)), 0)
                if need != have:
                    ok = False
                    break
            if ok:
                mapping[v] = u
                used.add(u)
                got = extend(i + 1, mapping, used)
                if got is not None:
                    return got
                del mapping[v]
                used.discard(u)
        return None

    return extend(0, {}, set())


def is_subgraph(h: Graph, g: Graph) -> bool:
    """True iff h's vertices/edges/incidence are literally contained in g's."""
    return (set(h.vertices) <= set(g.vertices)
            and set(h.edges) <= set(g.edges)
            and all(h.ends[e] == g.ends[e] for e in h.edges))


def all_subgraphs(g: Graph):
    """Yield every subgraph (V' ⊆ V with all edges whose endpoints fit, chosen freely)."""
    from itertools import combinations

    vs = list(g.vertices)
    for k in range(len(vs) + 1):
        for vsel in combinations(vs, k):
            vset = set(vsel)
            eligible = [e for e in g.edges if g.ends[e] <= vset]
            for m in range(len(eligible) + 1):
                for esel in combinations(eligible, m):
                    yield Graph(vsel, {e: g.ends[e] for e in esel})


def embeds_as_subgraph(h: Graph, g: Graph):
    """Injective vertex map sending h onto a subgraph of g, or None.

    Brute force with multiplicity checks; desk scale only.
    """
    if len(h.vertices) > len(g.vertices) or len(h.edges) > len(g.edges):
        return None
    hprof = _edge_profile(h)
    gprof = _edge_profile(g)
    if hprof.get(None, 0) > gprof.get(None, 0):
        return None
    hs = osorted(h.vertices)
    gs = list(g.vertices)

    def extend(i, mapping, used):
        if i == len(hs):
            return dict(mapping)
        v = hs[i]
        for u in gs:
            if u in used or g.degree(u) < h.degree(v):
                continue
            ok = True
            for w, uw in mapping.items():
                if hprof.get(frozenset((v, w)), 0) > gprof.get(frozenset((u, uw)), 0):
                    ok = False
                    break
            if ok:
                mapping[v] = u
                used.add(u)
                got = extend(i + 1, mapping, used)
                if got is not None:
                    return got
                del mapping[v]
                used.discard(u)
        return None

    return extend(0, {}, set())


def graph_to_json(g: Graph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [{"id": e, "ends": osorted(g.ends[e])} for e in g.edges],
    }


def graph_from_json(obj) -> Graph:
    try:
        vertices = obj["vertices"]
        edges = {rec["id"]: rec["ends"] for rec in obj["edges"]}
    except (KeyError, TypeError) as exc:
        raise InvalidGraphError(f"malformed graph object: {exc}") from exc
    if len(edges) != len(obj["edges"]):
        raise InvalidGraphError("duplicate edge id")
    return Graph(vertices, edges)


def load_graph(path) -> Graph:
    """Load a graph from a .json file or an edge-list text file.

    Edge-list lines are `u v` pairs; blank lines and `#` comments are skipped;
    tokens that look like integers are read as integers. Edge ids are e0, e1,
    ... in line order. A line with a single token declares an isolated vertex.
    """
    text = open(path, "r", encoding="utf-8").read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return graph_from_json(json.loads(text))
    vertices = []
    edges = {}
    n = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        toks = [int(t) if t.lstrip("-").isdigit() else t for t in toks]
        if len(toks) == 1:
            vertices.append(toks[0])
        elif len(toks) == 2:
            vertices.extend(toks)
            edges[f"e{n}"] = toks
            n += 1
        else:
            raise InvalidGraphError(f"line {lineno}: expected 'u v', got {line!r}")
    return Graph(vertices, edges)
