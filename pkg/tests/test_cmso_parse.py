import pytest

from supertw.cmso import (And, Card, Exists, Forall, Iff, Implies, Inc, MemE,
                          MemV, Not, Or, TrueF, Var, VarEq, VarKind,
                          free_vars, parse_formula, to_text)
from supertw.cmso.ast import standardize, substitute
from supertw.errors import CmsoKindError, CmsoSyntaxError


def V(n):
    return Var(n, VarKind.VERTEX)


def E(n):
    return Var(n, VarKind.EDGE)


def test_parse_atoms():
    phi = parse_formula("exists v x. x = x")
    assert phi == Exists(V("x"), VarEq(V("x"), V("x")))

    phi = parse_formula("exists v x. exists vs A. x in A")
    assert phi == Exists(V("x"), Exists(Var("A", VarKind.VERTEX_SET),
                                        MemV(V("x"), Var("A", VarKind.VERTEX_SET))))

    phi = parse_formula("exists e y. exists es B. y in B")
    inner = MemE(E("y"), Var("B", VarKind.EDGE_SET))
    assert phi == Exists(E("y"), Exists(Var("B", VarKind.EDGE_SET), inner))

    phi = parse_formula("exists v x. exists e y. inc(x, y)")
    assert phi == Exists(V("x"), Exists(E("y"), Inc(V("x"), E("y"))))

    phi = parse_formula("exists vs A. card(2, 0, A)")
    assert phi == Exists(Var("A", VarKind.VERTEX_SET),
                         Card(0, 2, Var("A", VarKind.VERTEX_SET)))


def test_parse_precedence():
    # not > and > or > -> > <->
    phi = parse_formula("true and false or true")
    assert phi == Or(And(TrueF(), parse_formula("false")), TrueF())

    phi = parse_formula("not true and false")
    assert phi == And(Not(TrueF()), parse_formula("false"))

    phi = parse_formula("true -> false -> true")
    assert isinstance(phi, Implies) and isinstance(phi.right, Implies)

    phi = parse_formula("true <-> false -> true")
    assert isinstance(phi, Iff) and isinstance(phi.right, Implies)

    phi = parse_formula("(true or false) and true")
    assert isinstance(phi, And) and isinstance(phi.left, Or)


def test_quantifier_body_extends_right():
    phi = parse_formula("exists v x. x = x and not x = x")
    assert isinstance(phi, Exists)
    assert isinstance(phi.body, And)

    phi = parse_formula("true and (exists v x. x = x) or false")
    assert isinstance(phi, Or)


def test_shadowing_rebinds_kind():
    phi = parse_formula("exists v x. exists e x. exists es B. x in B")
    assert isinstance(phi.body, Exists)
    assert phi.body.var == E("x")
    inner = phi.body.body.body
    assert inner == MemE(E("x"), Var("B", VarKind.EDGE_SET))


def test_unbound_variable_rejected():
    with pytest.raises(CmsoSyntaxError) as exc:
        parse_formula("x = x")
    assert "unbound" in str(exc.value)
    assert exc.value.line == 1

    with pytest.raises(CmsoSyntaxError):
        parse_formula("exists v x. inc(x, y)")


def test_kind_errors_have_location():
    with pytest.raises(CmsoSyntaxError):
        parse_formula("exists v x. exists v y. inc(x, y)")  # y not an edge
    with pytest.raises(CmsoSyntaxError):
        parse_formula("exists v x. exists e y. x = y")
    with pytest.raises(CmsoSyntaxError):
        parse_formula("exists v x. exists vs A. A in x")


def test_syntax_errors():
    for bad in ["", "exists x. true", "true and", "(true", "card(1, 0, A)",
                "exists vs A. card(2, 5, A)", "true true"]:
        with pytest.raises(CmsoSyntaxError):
            parse_formula(bad)


def test_error_location_multiline():
    with pytest.raises(CmsoSyntaxError) as exc:
        parse_formula("exists v x.\n  x = zz")
    assert exc.value.line == 2


def test_comments_and_whitespace():
    phi = parse_formula("# leading comment\nexists v x.  # binder\n  x = x\n")
    assert phi == Exists(V("x"), VarEq(V("x"), V("x")))


def test_ast_kind_validation():
    with pytest.raises(CmsoKindError):
        VarEq(V("x"), E("y"))
    with pytest.raises(CmsoKindError):
        MemV(E("y"), Var("A", VarKind.VERTEX_SET))
    with pytest.raises(CmsoKindError):
        Inc(E("y"), E("z"))
    with pytest.raises(CmsoKindError):
        Card(0, 1, Var("A", VarKind.VERTEX_SET))
    with pytest.raises(CmsoKindError):
        Card(2, 2, Var("A", VarKind.VERTEX_SET))
    with pytest.raises(CmsoKindError):
        Card(0, 2, V("x"))


def test_free_vars():
    phi = parse_formula("exists v x. x = x")
    assert free_vars(phi) == frozenset()
    body = And(VarEq(V("x"), V("y")), Exists(V("y"), VarEq(V("y"), V("y"))))
    assert free_vars(body) == frozenset({V("x"), V("y")})


def test_substitute_respects_shadowing():
    inner = Exists(V("x"), VarEq(V("x"), V("z")))
    phi = And(VarEq(V("x"), V("x")), inner)
    out = substitute(phi, V("x"), V("w"))
    assert out.left == VarEq(V("w"), V("w"))
    assert out.right == inner  # bound x untouched


def test_standardize_fresh_names():
    phi = parse_formula("(exists v x. x = x) and (exists v x. x = x)")
    std = standardize(phi)
    assert std.left.var != std.right.var
    assert free_vars(std) == frozenset()


def test_to_text_round_trip():
    sources = [
        "exists v x. x = x",
        "forall v x. exists e y. inc(x, y)",
        "exists vs A. card(2, 0, A) and (forall v x. x in A)",
        "true -> false -> true",
        "not (true or false)",
        "forall e y1. forall e y2. (forall v x. inc(x, y1) <-> inc(x, y2)) -> y1 = y2",
    ]
    for src in sources:
        phi = parse_formula(src)
        again = parse_formula(to_text(phi))
        assert again == phi, src
