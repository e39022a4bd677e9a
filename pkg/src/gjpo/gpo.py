"""Greedy prefer-opposite generation and its inverse.

From the current state ``c`` the generator prefers the successor whose new
bit is the complement of ``f(c)`` and falls back to ``f(c)`` itself when the
preferred state was already visited.  It stops on returning to the initial
state.  A set of *forced* states turns this into the graph-joining variant:
when the plain FSR successor is a forced state it is taken unconditionally
and removed from the set.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .core import (
    FeedbackFunction,
    PeriodicSequence,
    RegisterState,
    as_state_int,
    nonlinear_complexity,
)
from .errors import ComplexityTooLow, LeafInitialState, NonPeriodicRun, NonStandardFunction
from .stategraph import build_state_graph

COMPLETED = "completed"
NON_PERIODIC = "non-periodic-guard"


@dataclass
class GpoRun:
    function: FeedbackFunction
    initial: int
    visited: bytearray
    states: list  # visit order, starting with the initial state
    status: str
    forced_taken: list = field(default_factory=list)
    forced_left: set = field(default_factory=set)

    @property
    def output(self):
        shift = self.function.order - 1
        return [s >> shift for s in self.states]

    def sequence(self):
        return PeriodicSequence(self.output, declared_order=self.function.order)


def run_greedy(f, u, forced=(), max_steps=None):
    """Run the generator without any precondition checks.

    Stops after ``max_steps`` transitions (default 2^(n+1)) with status
    ``NON_PERIODIC`` if the initial state was not revisited.
    """
    n = f.order
    mask = (1 << n) - 1
    table = f.table
    u = as_state_int(u, n)
    pending = set(forced)
    taken = []
    visited = bytearray(1 << n)
    visited[u] = 1
    states = [u]
    c = u
    limit = (1 << (n + 1)) if max_steps is None else max_steps
    status = NON_PERIODIC
    for _ in range(limit):
        y = table[c]
        base = (c << 1) & mask
        nxt = base | y
        if pending and nxt in pending:
            pending.discard(nxt)
            taken.append(nxt)
            c = nxt
        else:
            preferred = nxt ^ 1
            c = nxt if visited[preferred] else preferred
        if c == u:
            status = COMPLETED
            break
        visited[c] = 1
        states.append(c)
    return GpoRun(f, u, visited, states, status, taken, pending)


def is_leaf_state(f, v):
    """O(1) leaf test for standard f: v has a predecessor iff g(v_0..v_{n-2}) == v_{n-1}."""
    return f.table[v >> 1] != (v & 1)


def gpo_generate(f, u):
    if not f.is_standard():
        raise NonStandardFunction("feedback function depends on x0; use gpo_unchecked")
    v = as_state_int(u, f.order)
    if is_leaf_state(f, v):
        raise LeafInitialState(f"initial state {RegisterState(f.order, v)} is a leaf")
    run = run_greedy(f, v)
    if run.status != COMPLETED:  # pragma: no cover - excluded by the leaf guard
        raise NonPeriodicRun(f"run from {RegisterState(f.order, v)} did not return")
    return run.sequence()


def gpo_unchecked(f, u, max_steps=None):
    """Accepts any f (standard or not) and any u; inspect ``status`` on the result."""
    return run_greedy(f, u, max_steps=max_steps)


def gpo_guarantees_de_bruijn(f, u, graph=None):
    if not f.is_standard():
        raise NonStandardFunction("criterion only holds for standard functions")
    g = build_state_graph(f) if graph is None else graph
    return len(g.components) == 1 and g.on_cycle(as_state_int(u, f.order))


def _window_counts(s, k):
    return Counter(s.windows(k))


def initial_state_candidates(s):
    """All n-windows of s whose leading (n-1)-window occurs twice per period."""
    n = nonlinear_complexity(s)
    if n < 2:
        raise ComplexityTooLow(f"nonlinear complexity {n} < 2")
    twice = {w for w, c in _window_counts(s, n - 1).items() if c == 2}
    found = {w for w in s.windows(n) if (w >> 1) in twice}
    return [RegisterState(n, w) for w in sorted(found)]


def reverse_engineer(s, fill=0):
    """Standard f and initial state u such that the greedy run on (f, u) prints s.

    The smallest (n-1)-window that occurs twice is taken, with its first
    occurrence as the start of u.  Windows that never occur get ``fill``.
    """
    n = nonlinear_complexity(s)
    if n < 2:
        raise ComplexityTooLow(f"nonlinear complexity {n} < 2")
    counts = _window_counts(s, n - 1)
    anchor = min(w for w, c in counts.items() if c == 2)
    start = next(i for i, w in enumerate(s.windows(n - 1)) if w == anchor)
    r = s.rotate(start)
    bits = r.bits
    N = len(bits)

    u = 0
    for i in range(n):
        u = (u << 1) | bits[i % N]

    g = [None] * (1 << (n - 1))
    g[anchor] = u & 1
    windows = list(r.windows(n - 1))
    for i in range(1, N):
        w = windows[i]
        if w == anchor:
            continue
        nxt = bits[(i + n - 1) % N]
        value = nxt if g[w] is not None else 1 - nxt
        if g[w] is not None and g[w] != value:  # pragma: no cover - n-windows are unique
            raise AssertionError("inconsistent window assignment")
        g[w] = value
    g = [fill if b is None else b for b in g]
    return FeedbackFunction.from_standard_part(g, n), RegisterState(n, u)
