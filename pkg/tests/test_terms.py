from hypothesis import given, settings, strategies as st

from supertw.terms import ROOT, enumerate_terms, map_symbols, term


def test_leaf_positions():
    t = term("a")
    assert t.positions() == [ROOT]
    assert t.symbol_at(ROOT) == "a"
    assert t.depth == 1 and t.size == 1


def test_positions_example():
    t = term("a", term("b"), term("c", term("d")))
    assert t.positions() == ["", "1", "2", "21"]
    assert t.symbol_at("21") == "d"
    assert t.symbol_at("2") == "c"


def test_hash_consing_identity():
    t1 = term("f", term("a"), term("b"))
    t2 = term("f", term("a"), term("b"))
    assert t1 is t2
    assert len({t1, t2}) == 1


def test_enumerate_singleton_alphabet():
    got = list(enumerate_terms(["a"], 2))
    assert got == [term("a"), term("a", term("a")), term("a", term("a"), term("a"))]


def test_enumerate_count_two_symbols_depth_two():
    # 2 leaves, 2*2 unary, 2*4 binary
    got = list(enumerate_terms(["a", "b"], 2))
    assert len(got) == 14
    assert len(set(got)) == 14


def test_enumerate_children_first():
    seen = set()
    for t in enumerate_terms(["a", "b"], 3):
        for c in t.children:
            assert c in seen
        seen.add(t)


def test_map_symbols():
    t = term("a", term("b"), term("c", term("d")))
    u = map_symbols(str.upper, t)
    assert u.positions() == t.positions()
    assert [u.symbol_at(p) for p in u.positions()] == ["A", "B", "C", "D"]


terms_st = st.deferred(
    lambda: st.one_of(
        st.sampled_from(["a", "b", "c"]).map(term),
        st.tuples(st.sampled_from(["a", "b"]), terms_st).map(lambda x: term(*x)),
        st.tuples(st.sampled_from(["a", "b"]), terms_st, terms_st).map(lambda x: term(*x)),
    )
)


@given(terms_st)
@settings(max_examples=200)
def test_positions_prefix_closed(t):
    pos = set(t.positions())
    for p in pos:
        assert p[:-1] in pos or p == ROOT
    assert len(pos) == t.size


@given(terms_st)
@settings(max_examples=200)
def test_map_symbols_preserves_shape(t):
    u = map_symbols(lambda s: (s, s), t)
    assert u.positions() == t.positions()
    for p in t.positions():
        assert u.symbol_at(p) == (t.symbol_at(p), t.symbol_at(p))
