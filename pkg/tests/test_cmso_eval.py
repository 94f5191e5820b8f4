import pytest

from supertw.cmso import (Var, VarKind, eval_direct, even_order, gen_diam,
                          gen_vertex_cover, no_isolated_vertex, parse_formula,
                          simple_graph, some_vertex)
from supertw.errors import CmsoKindError, SizeLimitError
from supertw.graph import Graph, diameter

from corpus import (complete, connected_small_corpus, cycle, multi_edge, path,
                    single_vertex, star)


def brute_vertex_cover(g, k):
    from itertools import combinations
    two_ended = [e for e in g.edges if g.ends[e]]
    for cover in combinations(g.vertices, min(k, len(g.vertices))):
        cset = set(cover)
        if all(g.ends[e] & cset for e in two_ended):
            return True
    return k >= len(g.vertices) and not two_ended


def test_atoms_on_triangle():
    g = cycle(3)
    x = Var("x", VarKind.VERTEX)
    y = Var("y", VarKind.EDGE)
    A = Var("A", VarKind.VERTEX_SET)
    phi = parse_formula("exists v x. exists e y. inc(x, y)")
    assert eval_direct(phi, g)
    assert eval_direct(parse_formula("forall v u. forall v w. u = w"), g) is False
    assert eval_direct(parse_formula("exists vs A. card(3, 0, A) and (forall v z. z in A)"), g)
    # free variables via assignment
    from supertw.cmso import Inc
    assert eval_direct(Inc(x, y), g, {x: 0, y: "e0"}) in (True, False)
    from supertw.cmso import MemV
    assert eval_direct(MemV(x, A), g, {x: 1, A: [0, 1]})
    assert not eval_direct(MemV(x, A), g, {x: 2, A: [0, 1]})


def test_unbound_free_variable_raises():
    g = path(2)
    phi = parse_formula("exists v x. x = x").body  # strip binder: x free
    with pytest.raises(CmsoKindError):
        eval_direct(phi, g)


def test_so_limit():
    g = path(17)
    with pytest.raises(SizeLimitError):
        eval_direct(even_order(), g)


def test_some_vertex():
    assert eval_direct(some_vertex(), single_vertex())
    assert not eval_direct(some_vertex(), Graph([], []))


def test_no_isolated_vertex():
    assert eval_direct(no_isolated_vertex(), path(3))
    # a phantom edge does not rescue anything, but neither does it hurt
    assert eval_direct(no_isolated_vertex(), Graph([0, 1], {"e0": (0, 1), "x": ()}))
    lonely = Graph([0, 1, 2], {"e0": (0, 1)})
    assert not eval_direct(no_isolated_vertex(), lonely)
    assert eval_direct(no_isolated_vertex(), Graph([], []))


def test_even_order():
    for n in range(1, 7):
        assert eval_direct(even_order(), path(n)) == (n % 2 == 0)
    assert eval_direct(even_order(), Graph([], []))


def test_simple_graph_formula():
    assert eval_direct(simple_graph(), cycle(4))
    assert not eval_direct(simple_graph(), multi_edge(2))
    assert eval_direct(simple_graph(), single_vertex())
    # cycle of length 2 is a multigraph: two parallel edges
    assert not eval_direct(simple_graph(), Graph([0, 1], {"a": (0, 1), "b": (1, 0)}))


def test_gen_diam_matches_diameter_oracle():
    for name, g in connected_small_corpus():
        diam = diameter(g)
        for d in range(0, 4):
            expect = diam <= d
            got = eval_direct(gen_diam(d), g)
            assert got == expect, (name, d, diam)


def test_gen_diam_star_and_complete():
    assert eval_direct(gen_diam(2), star(4))
    assert not eval_direct(gen_diam(1), star(4))
    assert eval_direct(gen_diam(1), complete(4))
    assert eval_direct(gen_diam(0), single_vertex())
    assert not eval_direct(gen_diam(0), path(2))


def test_gen_vertex_cover_matches_brute_force():
    for name, g in connected_small_corpus():
        for k in range(0, 4):
            expect = brute_vertex_cover(g, k)
            got = eval_direct(gen_vertex_cover(k), g)
            assert got == expect, (name, k)


def test_vertex_cover_zero():
    assert eval_direct(gen_vertex_cover(0), single_vertex())
    assert not eval_direct(gen_vertex_cover(0), path(2))


def test_connectivity_formula():
    # a graph is connected iff every set containing some vertex and closed
    # under adjacency contains all vertices
    src = """
    forall vs A.
      ((exists v x. x in A)
       and (forall v u. forall v w.
              (u in A and (exists e y. inc(u, y) and inc(w, y))) -> w in A))
      -> (forall v z. z in A)
    """
    phi = parse_formula(src)
    assert eval_direct(phi, path(4))
    two = Graph([0, 1, 2], {"e0": (0, 1)})
    assert not eval_direct(phi, two)


def test_evaluation_ignores_phantom_edges_for_inc():
    g = Graph([0, 1], {"e0": (0, 1), "ph": ()})
    phi = parse_formula("forall e y. exists v x. inc(x, y)")
    assert not eval_direct(phi, g)  # phantom edge has no incident vertex
    assert eval_direct(parse_formula("exists e y. forall v x. not inc(x, y)"), g)
