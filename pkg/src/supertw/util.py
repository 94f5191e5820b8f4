"""Ordering and budget helpers used by every construction.

Everything in this package that emits or iterates collections does so in a
deterministic order so that two runs on the same input produce byte-identical
artifacts, regardless of PYTHONHASHSEED. `ordkey` supplies a total order
across the mixed id types we use (ints, strings, tuples, frozensets, and the
symbol dataclasses, which expose a `sort_key()`).
"""

from __future__ import annotations

import time

from .errors import ResourceExceededError


def ordkey(x):
    """Total-order key for heterogeneous, hashable values."""
    if x is None:
        return (0,)
    if isinstance(x, bool):
        return (1, x)
    if isinstance(x, int):
        return (2, x)
    if isinstance(x, str):
        return (3, x)
    if isinstance(x, tuple):
        return (4, tuple(ordkey(e) for e in x))
    if isinstance(x, (frozenset, set)):
        return (5, tuple(sorted(ordkey(e) for e in x)))
    sk = getattr(x, "sort_key", None)
    if sk is not None:
        return (6, type(x).__name__, sk())
    return (7, type(x).__name__, repr(x))


def osorted(xs):
    return sorted(xs, key=ordkey)


DEFAULT_MAX_TRANSITIONS = 10_000_000


class Budget:
    """Mutable resource meter threaded through automaton constructions.

    Counts transitions materialized across a whole pipeline run and enforces
    an optional wall-clock deadline. Constructions call `spend(n, stage)`;
    exceeding either limit raises ResourceExceededError.
    """

    def __init__(self, max_transitions=DEFAULT_MAX_TRANSITIONS, timeout_secs=None):
        self.max_transitions = max_transitions
        self.deadline = None if timeout_secs is None else time.monotonic() + timeout_secs
        self.used = 0

    def spend(self, n, stage):
        self.used += n
        if self.max_transitions is not None and self.used > self.max_transitions:
            raise ResourceExceededError(
                f"{stage}: transition budget exceeded ({self.used} > {self.max_transitions})",
                stage=stage, count=self.used, limit=self.max_transitions)
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise ResourceExceededError(f"{stage}: deadline exceeded", stage=stage)

    def check_time(self, stage):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise ResourceExceededError(f"{stage}: deadline exceeded", stage=stage)
