"""Supergraph decision procedure with witness reconstruction.

Answers: does the input graph have a supergraph of treewidth at most t
satisfying a closed CMSO formula? The pipeline is

    compile(phi, t+1) -> sub-decomposition closure -> intersect with the
    decompositions-of-G automaton -> emptiness,

working internally with t+1 bag labels so accepted terms have width at
most t. On a YES, witness reconstruction reruns the product over
(sub-bag, super-bag) pair symbols: the first projection of an accepted
pair term is a decomposition of (an isomorphic copy of) G, the second a
decomposition of the witness supergraph, and the shared positions give
the subgraph embedding for free.

Compiled formulas and their closures are input-graph independent and are
cached per process; the automata are immutable, so concurrent solves may
share them.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .all_decomps import build_all_decompositions
from .cmso.ast import free_vars
from .cmso.compile import compile as compile_formula
from .cmso.evaluate import eval_direct
from .cmso.generators import gen_diam, gen_vertex_cover
from .decomp import (bag_alphabet, decode_graph, decomposition_to_json,
                     is_sub_decomposition, width)
from .errors import CmsoKindError, NotConnectedError, SupertwError
from .graph import Graph, embeds_as_subgraph, graph_to_json, is_connected
from .subdecomp import pair_alphabet, sub_closure, sub_closure_paired
from .terms import map_symbols
from .tree_automata import (TreeAutomaton, accepts, extract_witness,
                            intersect, intersection_nonempty, reduce_bisim,
                            trim)
from .util import Budget, osorted

# compile(gen_diam(1), 4) alone processes a few 10^7 transitions, so the
# solver's default meter is roomier than the library-wide Budget default
DEFAULT_MAX_TRANSITIONS = 10 ** 8

EVAL_RECHECK_VERTICES = 8

_PHI_CACHE = {}
_SUB_CACHE = {}


def clear_caches():
    """Drop cached compiled-formula automata (mainly for tests)."""
    _PHI_CACHE.clear()
    _SUB_CACHE.clear()


@dataclass
class Witness:
    """A verified (phi,t)-supergraph: the graph, a concrete decomposition
    of it, and an injective vertex map embedding the input as a subgraph."""
    graph: Graph
    decomposition: object  # Term over the bag alphabet
    embedding: dict

    def to_json(self):
        return {
            "graph": graph_to_json(self.graph),
            "decomposition": decomposition_to_json(self.decomposition),
            "embedding": [[v, u] for v, u in self.embedding.items()],
        }


@dataclass
class SupergraphVerdict:
    answer: bool
    witness: Witness | None
    stats: dict

    def to_json(self):
        return {
            "answer": self.answer,
            "witness": self.witness.to_json() if self.witness else None,
            "stats": self.stats,
        }


def simple_automaton(t: int) -> TreeAutomaton:
    """Deterministic bag automaton for terms that decode to simple graphs.

    State: the set of label pairs {s, s'} whose two live components already
    have an edge between them. A second edge on a live pair would decode to
    a parallel edge, so no transition exists there (every reachable state is
    accepting; rejection is run failure). At most 2^C(t,2) states.
    """
    alphabet = tuple(osorted(bag_alphabet(t)))

    def step(child_states, sym):
        keep = [frozenset(p for p in e if p <= sym.B) for e in child_states]
        if len(keep) == 2 and keep[0] & keep[1]:
            return None  # both subterms put an edge on the same live pair
        merged = set()
        for k in keep:
            merged |= k
        if sym.b:
            if sym.b in merged:
                return None
            merged.add(sym.b)
        return frozenset(merged)

    transitions = []
    seen = {}
    order = []

    def discover(children, sym):
        q = step(children, sym)
        if q is None:
            return
        transitions.append((children, sym, q))
        if q not in seen:
            seen[q] = True
            order.append(q)

    for sym in alphabet:
        discover((), sym)
    frontier = 0
    while frontier < len(order):
        q = order[frontier]
        frontier += 1
        for sym in alphabet:
            discover((q,), sym)
            for other in order[:frontier]:
                discover((q, other), sym)
                if other != q:
                    discover((other, q), sym)
    return TreeAutomaton.raw(alphabet, tuple(order), frozenset(order),
                             tuple(transitions))


def lift_to_pairs(aut: TreeAutomaton, t: int) -> TreeAutomaton:
    """Reread a plain-bag automaton over pair symbols through the sub slot.

    Accepts a pair term iff its first projection is accepted by `aut`;
    states and final states are shared.
    """
    pairs = pair_alphabet(t)
    expected = tuple(osorted(bag_alphabet(t)))
    if aut.alphabet != expected:
        raise SupertwError("lift_to_pairs needs the full t-bag alphabet")
    by_sub = {}
    for p in pairs:
        by_sub.setdefault(p.sub, []).append(p)
    transitions = []
    for children, sym, q in aut.transitions:
        for p in by_sub.get(sym, ()):
            transitions.append((children, p, q))
    return TreeAutomaton.raw(pairs, aut.states, aut.final, tuple(transitions))


def _phi_automaton(phi, t1, simple, budget):
    """Reduced automaton for phi at t1 labels, optionally conjoined with
    the simplicity automaton (conjunction of languages = intersection)."""
    key = (phi, t1, simple)
    got = _PHI_CACHE.get(key)
    if got is None:
        aut = compile_formula(phi, t1, budget)
        if simple:
            aut = reduce_bisim(trim(intersect(aut, simple_automaton(t1), budget)))
        _PHI_CACHE[key] = got = aut
    return got


def _sub_automaton(phi, t1, simple, paired, budget):
    key = (phi, t1, simple, paired)
    got = _SUB_CACHE.get(key)
    if got is None:
        aut = _phi_automaton(phi, t1, simple, budget)
        closed = sub_closure_paired(aut, budget) if paired else sub_closure(aut, budget)
        _SUB_CACHE[key] = got = reduce_bisim(closed)
    return got


def _stage(stats, name, t0, aut=None, cached=None):
    entry = {"seconds": round(time.monotonic() - t0, 3)}
    if aut is not None:
        entry["states"] = len(aut.states)
        entry["transitions"] = len(aut.transitions)
    if cached is not None:
        entry["cached"] = cached
    stats[name] = entry


def _relabel(gprime: Graph):
    """Replace decoded tuple ids by u0../e0.. so the witness serializes and
    round-trips through JSON; returns (graph, old-vertex -> new-vertex)."""
    vmap = {v: f"u{i}" for i, v in enumerate(osorted(gprime.vertices))}
    edges = {}
    for i, e in enumerate(osorted(gprime.edges)):
        ends = gprime.ends[e]
        edges[f"e{i}"] = frozenset(vmap[x] for x in ends) if ends else frozenset()
    return Graph(vmap.values(), edges), vmap


def _reconstruct(g, phi, t1, a_g, phi_aut, sp, budget, simple, stats):
    """Extract, decode and re-verify a witness from the paired product."""
    t0 = time.monotonic()
    lifted = lift_to_pairs(a_g, t1)
    prod = trim(intersect(lifted, sp, budget))
    wterm = extract_witness(prod)
    _stage(stats, "paired_product", t0, prod)
    if wterm is None:
        raise SupertwError("paired product empty despite nonempty plain product")

    tsub = map_symbols(lambda p: p.sub, wterm)
    tsup = map_symbols(lambda p: p.sup, wterm)
    gsub = decode_graph(tsub)
    gprime = decode_graph(tsup)

    # re-verification, independent of the construction above
    if width(tsup) > t1 - 1:
        raise SupertwError("witness decomposition exceeds the width bound")
    if not is_sub_decomposition(tsub, tsup):
        raise SupertwError("witness projections are not sub-related")
    if not accepts(phi_aut, tsup):
        raise SupertwError("witness decomposition rejected by the formula automaton")
    emb0 = embeds_as_subgraph(g, gsub)
    if emb0 is None:
        raise SupertwError("first projection does not embed the input graph")
    if len(gprime.vertices) <= EVAL_RECHECK_VERTICES:
        if not eval_direct(phi, gprime):
            raise SupertwError("witness graph fails the direct evaluator")
        if simple and _has_parallel_edges(gprime):
            raise SupertwError("witness graph is not simple")

    relabeled, vmap = _relabel(gprime)
    embedding = {v: vmap[emb0[v]] for v in osorted(g.vertices)}
    # gsub's vertices and edges are literally gprime's (shared positions)
    if embeds_as_subgraph(g, relabeled) is None:
        raise SupertwError("embedding re-check failed after relabeling")
    return Witness(relabeled, tsup, embedding)


def _has_parallel_edges(g: Graph) -> bool:
    seen = set()
    for e in g.edges:
        ends = g.ends[e]
        if ends in seen:
            return True
        seen.add(ends)
    return False


def _decide(g, phi, t, simple, budget, want_witness):
    if t < 1:
        raise ValueError("treewidth bound must be at least 1")
    if free_vars(phi):
        raise CmsoKindError("supergraph solving needs a closed formula")
    if not is_connected(g):
        raise NotConnectedError("input graph must be connected")
    if budget is None:
        budget = Budget(DEFAULT_MAX_TRANSITIONS)
    t1 = t + 1
    stats = {"t": t, "labels": t1}

    t0 = time.monotonic()
    cached = (phi, t1, simple) in _PHI_CACHE
    phi_aut = _phi_automaton(phi, t1, simple, budget)
    _stage(stats, "compile", t0, phi_aut, cached=cached)

    t0 = time.monotonic()
    cached = (phi, t1, simple, False) in _SUB_CACHE
    sub_aut = _sub_automaton(phi, t1, simple, False, budget)
    _stage(stats, "sub_closure", t0, sub_aut, cached=cached)

    t0 = time.monotonic()
    a_g = build_all_decompositions(g, t1, budget)
    _stage(stats, "decompositions", t0, a_g)

    t0 = time.monotonic()
    answer = intersection_nonempty(a_g, sub_aut, budget)
    _stage(stats, "emptiness", t0)
    stats["answer"] = answer

    witness = None
    if answer and want_witness:
        sp = _sub_automaton(phi, t1, simple, True, budget)
        witness = _reconstruct(g, phi, t1, a_g, phi_aut, sp, budget,
                               simple, stats)
        stats["witness"] = {
            "vertices": len(witness.graph.vertices),
            "edges": len(witness.graph.edges),
        }
    return SupergraphVerdict(answer, witness, stats)


def has_supergraph(g: Graph, phi, t: int, *, budget: Budget | None = None,
                   want_witness: bool = False) -> SupergraphVerdict:
    """Decide whether g has a supergraph of treewidth <= t satisfying phi.

    phi must be a closed formula and g connected. The verdict's stats map
    carries per-stage state/transition counts and timings; with
    want_witness a verified witness supergraph is attached on YES.
    """
    return _decide(g, phi, t, False, budget, want_witness)


def witness_supergraph(g: Graph, phi, t: int, *, budget: Budget | None = None):
    """(supergraph, its concrete decomposition) on YES, None on NO."""
    verdict = _decide(g, phi, t, False, budget, True)
    if not verdict.answer:
        return None
    return verdict.witness.graph, verdict.witness.decomposition


def preset_formula(preset):
    """Formula for a named problem: {"diam": d} or {"vertex_cover": k}."""
    if not isinstance(preset, dict) or len(preset) != 1:
        raise ValueError("preset must be {'diam': d} or {'vertex_cover': k}")
    (name, value), = preset.items()
    if name == "diam":
        return gen_diam(value)
    if name == "vertex_cover":
        return gen_vertex_cover(value)
    raise ValueError(f"unknown preset {name!r}")


def solve_named(g: Graph, preset, t: int, *, budget: Budget | None = None,
                want_witness: bool = False) -> SupergraphVerdict:
    """has_supergraph for a named problem, restricted to simple witnesses.

    The diameter / vertex-cover readings assume simple graphs, so the
    preset formula is conjoined with a no-parallel-edges condition
    (realized as an automaton intersection, which is the same language as
    compiling the conjunction).
    """
    phi = preset_formula(preset)
    return _decide(g, phi, t, True, budget, want_witness)
