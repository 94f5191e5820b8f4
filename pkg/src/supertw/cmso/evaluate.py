"""Direct evaluation of CMSO formulas on a graph.

Brute-force semantics by recursion over the formula: first-order
quantifiers range over vertices/edges, set quantifiers over all subsets.
Exponential in the number of set quantifiers, so only usable on small
graphs; it serves as the ground-truth reference for the automaton
pipeline.
"""

from __future__ import annotations

from itertools import chain, combinations

from ..errors import CmsoKindError, SizeLimitError
from .ast import (And, Card, Exists, FalseF, Forall, Iff, Implies, Inc, MemE,
                  MemV, Not, Or, TrueF, VarEq, VarKind)

SO_DOMAIN_LIMIT = 16


def _subsets(items):
    return chain.from_iterable(combinations(items, k) for k in range(len(items) + 1))


def eval_direct(phi, g, assignment=None) -> bool:
    """Evaluate phi on graph g under a (possibly empty) assignment.

    assignment maps Var to a vertex id, an edge id, or an iterable of
    ids for set variables.  Free variables must all be assigned.
    """
    env = {}
    if assignment:
        for var, val in assignment.items():
            env[var] = frozenset(val) if var.kind.is_set else val
    return _eval(phi, g, env)


def _domain(g, kind):
    if kind in (VarKind.VERTEX, VarKind.VERTEX_SET):
        return g.vertices
    return g.edges


def _eval(phi, g, env):
    if isinstance(phi, TrueF):
        return True
    if isinstance(phi, FalseF):
        return False
    if isinstance(phi, VarEq):
        return _value(phi.left, env) == _value(phi.right, env)
    if isinstance(phi, (MemV, MemE)):
        return _value(phi.elem, env) in _value(phi.container, env)
    if isinstance(phi, Inc):
        return _value(phi.vertex, env) in g.ends[_value(phi.edge, env)]
    if isinstance(phi, Card):
        return len(_value(phi.setvar, env)) % phi.r == phi.a
    if isinstance(phi, Not):
        return not _eval(phi.body, g, env)
    if isinstance(phi, And):
        return _eval(phi.left, g, env) and _eval(phi.right, g, env)
    if isinstance(phi, Or):
        return _eval(phi.left, g, env) or _eval(phi.right, g, env)
    if isinstance(phi, Implies):
        return (not _eval(phi.left, g, env)) or _eval(phi.right, g, env)
    if isinstance(phi, Iff):
        return _eval(phi.left, g, env) == _eval(phi.right, g, env)
    if isinstance(phi, (Exists, Forall)):
        domain = _domain(g, phi.var.kind)
        if phi.var.kind.is_set:
            if len(domain) > SO_DOMAIN_LIMIT:
                raise SizeLimitError(
                    f"set quantifier over {len(domain)} elements exceeds "
                    f"direct-evaluation limit {SO_DOMAIN_LIMIT}")
            values = (frozenset(s) for s in _subsets(domain))
        else:
            values = iter(domain)
        saved = env.get(phi.var, _MISSING)
        want = isinstance(phi, Exists)
        result = not want
        for val in values:
            env[phi.var] = val
            if _eval(phi.body, g, env) == want:
                result = want
                break
        if saved is _MISSING:
            env.pop(phi.var, None)
        else:
            env[phi.var] = saved
        return result
    raise CmsoKindError(f"not a formula: {phi!r}")


class _Missing:
    pass


_MISSING = _Missing()


def _value(var, env):
    try:
        return env[var]
    except KeyError:
        raise CmsoKindError(f"unbound variable {var!r} during evaluation")
