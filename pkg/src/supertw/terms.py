"""Hash-consed terms over an unranked alphabet with arities 0, 1, 2.

A term is a finite ordered tree whose nodes carry alphabet symbols. Positions
are strings over {"1", "2"}: the root is "" and position p + str(j) is the
j-th child of the node at p. Terms are interned, so structural equality is
object identity and terms can live in sets and dict keys at O(1).
"""

from __future__ import annotations

from .errors import InvalidPositionError
from .util import ordkey

ROOT = ""

_intern: dict = {}
_next_uid = 0


class Term:
    __slots__ = ("symbol", "children", "uid", "depth", "size", "_hash", "__weakref__")

    def __init__(self, symbol, children, uid):
        self.symbol = symbol
        self.children = children
        self.uid = uid
        self.depth = 1 + max((c.depth for c in children), default=0)
        self.size = 1 + sum(c.size for c in children)
        self._hash = hash((symbol, tuple(c.uid for c in children)))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other

    def __repr__(self):
        if not self.children:
            return f"{self.symbol!r}"
        inner = ",".join(repr(c) for c in self.children)
        return f"{self.symbol!r}({inner})"

    def sort_key(self):
        return (self.depth, self.size, ordkey(self.symbol),
                tuple(c.sort_key() for c in self.children))

    def positions(self):
        """All positions of the term, in preorder (root first)."""
        out = [ROOT]
        stack = [(self, ROOT)]
        while stack:
            node, pos = stack.pop()
            for j, c in enumerate(node.children, start=1):
                cp = pos + str(j)
                out.append(cp)
                stack.append((c, cp))
        out.sort()
        return out

    def subterm(self, pos):
        node = self
        for ch in pos:
            j = int(ch)
            if j < 1 or j > len(node.children):
                raise InvalidPositionError(f"no position {pos!r} in term")
            node = node.children[j - 1]
        return node

    def symbol_at(self, pos):
        return self.subterm(pos).symbol


def term(symbol, *children):
    """Intern and return the term symbol(children...). Arity must be <= 2."""
    global _next_uid
    if len(children) > 2:
        raise ValueError("terms have arity at most 2")
    for c in children:
        if not isinstance(c, Term):
            raise TypeError(f"child is not a Term: {c!r}")
    key = (symbol, tuple(c.uid for c in children))
    t = _intern.get(key)
    if t is None:
        t = Term(symbol, tuple(children), _next_uid)
        _next_uid += 1
        _intern[key] = t
    return t


def map_symbols(f, t: Term) -> Term:
    """Apply f to every symbol, preserving the tree shape.

    Shared subterms are rewritten once (memoized on term identity).
    """
    cache: dict = {}

    def go(node):
        got = cache.get(node)
        if got is None:
            got = term(f(node.symbol), *[go(c) for c in node.children])
            cache[node] = got
        return got

    return go(t)


def enumerate_terms(alphabet, max_depth):
    """Yield every term over `alphabet` of depth <= max_depth, exactly once.

    Level by level: all terms of exact depth 1 (in alphabet order), then depth
    2, and so on; children are always emitted before their parents, which lets
    callers fold over the stream compositionally.
    """
    alphabet = list(dict.fromkeys(alphabet))
    prior: list[Term] = []   # depth < d
    level: list[Term] = []   # depth == d
    for d in range(1, max_depth + 1):
        new = []
        if d == 1:
            for a in alphabet:
                new.append(term(a))
        else:
            below = prior + level  # depth <= d-1, in emission order
            for a in alphabet:
                for t1 in level:
                    new.append(term(a, t1))
                for t1 in below:
                    for t2 in below:
                        if max(t1.depth, t2.depth) == d - 1:
                            new.append(term(a, t1, t2))
        prior = prior + level
        level = new
        yield from new
