"""Feedback functions, register states and periodic binary sequences.

Bit convention: an n-bit state ``s_0 s_1 ... s_{n-1}`` is stored as the
integer whose most significant bit is ``s_0``.  Variable ``x_i`` of a
feedback function therefore reads bit ``n-1-i`` of the state integer, and
the truth table is indexed by that integer.  The FSR successor of ``v`` is
``((v << 1) & mask) | f(v)``.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from .config import get_max_order
from .errors import DimensionError, OrderLimitError, ParseError


def check_order(n, max_order=None):
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"order must be a positive integer, got {n!r}")
    limit = get_max_order() if max_order is None else max_order
    if n > limit:
        raise OrderLimitError(f"order {n} exceeds the configured maximum {limit}")
    return int(n)


def state_str(v, n):
    return format(v, f"0{n}b")


@dataclass(frozen=True, order=True)
class RegisterState:
    order: int
    bits: int

    def __post_init__(self):
        if self.order < 1 or not 0 <= self.bits < (1 << self.order):
            raise ValueError(f"state {self.bits} does not fit in {self.order} bits")

    @classmethod
    def from_str(cls, text):
        text = text.strip()
        if not text or set(text) - {"0", "1"}:
            raise ParseError(f"not a bit string: {text!r}")
        return cls(len(text), int(text, 2))

    def __str__(self):
        return state_str(self.bits, self.order)

    def __getitem__(self, i):
        """``s_i``, counted from the left."""
        if not 0 <= i < self.order:
            raise IndexError(i)
        return (self.bits >> (self.order - 1 - i)) & 1

    def companion(self):
        return RegisterState(self.order, self.bits ^ 1)

    def conjugate(self):
        return RegisterState(self.order, self.bits ^ (1 << (self.order - 1)))

    def shift_in(self, bit):
        mask = (1 << self.order) - 1
        return RegisterState(self.order, ((self.bits << 1) & mask) | (bit & 1))


def as_state_int(state, n):
    """Accept a RegisterState, a bit string or an int and return the state integer."""
    if isinstance(state, RegisterState):
        if state.order != n:
            raise DimensionError(f"state of order {state.order} given to an order-{n} function")
        return state.bits
    if isinstance(state, str):
        return as_state_int(RegisterState.from_str(state), n)
    v = int(state)
    if not 0 <= v < (1 << n):
        raise DimensionError(f"state {v} out of range for order {n}")
    return v


Monomial = frozenset  # set of variable indices; the empty monomial is the constant 1


def anf_table(monomials, n):
    """Truth table (uint8 array of length 2^n) of a XOR of monomials."""
    v = np.arange(1 << n, dtype=np.int64)
    table = np.zeros(1 << n, dtype=np.uint8)
    for mono in monomials:
        mask = 0
        for i in mono:
            if not 0 <= i < n:
                raise ParseError(f"variable x{i} out of range for order {n}")
            mask |= 1 << (n - 1 - i)
        table ^= ((v & mask) == mask).astype(np.uint8)
    return table


def format_anf(monomials):
    if not monomials:
        return "0"
    terms = sorted(monomials, key=lambda m: (len(m), sorted(m)))
    return " + ".join("1" if not m else "*".join(f"x{i}" for i in sorted(m)) for m in terms)


@dataclass(frozen=True)
class FeedbackFunction:
    """Boolean function of ``order`` variables stored as a 2^n truth table.

    ``anf`` is an optional algebraic normal form (a frozenset of monomials)
    kept for display; the table is authoritative.
    """

    order: int
    table: bytes
    anf: frozenset | None = field(default=None, compare=False)
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.table) != 1 << self.order:
            raise DimensionError(
                f"truth table has {len(self.table)} entries, expected 2^{self.order}"
            )
        if any(b > 1 for b in self.table):
            raise ValueError("truth table entries must be 0 or 1")

    @classmethod
    def from_table(cls, table, order=None, name=None):
        table = bytes(int(b) for b in table) if not isinstance(table, bytes) else table
        if order is None:
            order = max(len(table).bit_length() - 1, 0)
        return cls(order, table, name=name)

    @classmethod
    def from_anf(cls, monomials, order, name=None):
        order = check_order(order)
        # duplicate monomials cancel over GF(2)
        reduced = set()
        for mono in monomials:
            reduced ^= {Monomial(mono)}
        anf = frozenset(reduced)
        return cls(order, anf_table(anf, order).tobytes(), anf=anf, name=name)

    @classmethod
    def constant(cls, order, bit=0):
        return cls.from_anf([Monomial()] if bit else [], order)

    @classmethod
    def from_standard_part(cls, g_table, order):
        """Standard function ``f(x_0, ..., x_{n-1}) = g(x_1, ..., x_{n-1})`` from g's table."""
        g = bytes(g_table)
        if len(g) != 1 << (order - 1):
            raise DimensionError("g needs 2^(n-1) entries")
        return cls(order, g + g)

    def __call__(self, state):
        return self.table[as_state_int(state, self.order)]

    def __str__(self):
        if self.name:
            return self.name
        if self.anf is not None:
            return format_anf(self.anf)
        return f"<table {self.digest()[:12]}>"

    def successor(self, v):
        return ((v << 1) & ((1 << self.order) - 1)) | self.table[v]

    def as_array(self):
        return np.frombuffer(self.table, dtype=np.uint8)

    def is_standard(self):
        half = 1 << (self.order - 1)
        return self.table[:half] == self.table[half:]

    def is_nonsingular(self):
        half = 1 << (self.order - 1)
        return all(a != b for a, b in zip(self.table[:half], self.table[half:]))

    def lift(self, n, name=None):
        """``F(x_0..x_{n-1}) = self(x_{n-m}..x_{n-1})``: the last m variables are the low bits."""
        m = self.order
        n = check_order(n)
        if n < m:
            raise DimensionError(f"cannot lift order {m} to smaller order {n}")
        low = (1 << m) - 1
        base = self.table
        table = bytes(base[v & low] for v in range(1 << n))
        anf = None
        if self.anf is not None:
            anf = frozenset(Monomial(i + n - m for i in mono) for mono in self.anf)
        return FeedbackFunction(n, table, anf=anf, name=name)

    def digest(self):
        return hashlib.sha256(self.table).hexdigest()

    def table_bits(self):
        return "".join("01"[b] for b in self.table)


def evaluate(f, s):
    """Feedback bit ``f(s_0, ..., s_{n-1})``."""
    return f.table[as_state_int(s, f.order)]


def fsr_successor(f, s):
    v = as_state_int(s, f.order)
    return RegisterState(f.order, f.successor(v))


_FACTOR = re.compile(r"x(\d+)")


def parse_anf(text):
    """Parse ``term ('+' term)*`` into a list of monomials (duplicates kept)."""
    if not text or not text.strip():
        raise ParseError("empty function spec")
    monomials = []
    for term in text.split("+"):
        term = term.strip()
        if term == "0":
            continue
        if term == "1":
            monomials.append(Monomial())
            continue
        if not term:
            raise ParseError(f"empty term in {text!r}")
        indices = []
        for factor in term.split("*"):
            factor = factor.strip()
            m = _FACTOR.fullmatch(factor)
            if m is None:
                raise ParseError(f"bad factor {factor!r} in {text!r}")
            indices.append(int(m.group(1)))
        monomials.append(Monomial(indices))
    return monomials


def parse_function(spec, n):
    """ANF expression over ``x0..x{n-1}`` or a named family spec, materialized at order n."""
    n = check_order(n)
    text = spec.strip()
    if text and text[0] not in "x01":
        from .families import parse_family_spec

        return parse_family_spec(text, n)
    monomials = parse_anf(text)
    for mono in monomials:
        for i in mono:
            if i >= n:
                raise ParseError(f"variable x{i} out of range for order {n}")
    return FeedbackFunction.from_anf(monomials, n)


def _least_period(bits):
    n = len(bits)
    pi = [0] * n
    k = 0
    for i in range(1, n):
        while k and bits[i] != bits[k]:
            k = pi[k - 1]
        if bits[i] == bits[k]:
            k += 1
        pi[i] = k
    p = n - pi[-1]
    return p if n % p == 0 else n


def least_rotation(bits):
    """Start index of the lexicographically least rotation (Booth's algorithm)."""
    s = list(bits) * 2
    fail = [-1] * len(s)
    k = 0
    for j in range(1, len(s)):
        sj = s[j]
        i = fail[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = fail[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            fail[j - k] = -1
        else:
            fail[j - k] = i + 1
    return k


class PeriodicSequence:
    """One period of a binary periodic sequence, always reduced to its least period."""

    __slots__ = ("bits", "declared_order")

    def __init__(self, bits: str | Iterable[int], declared_order: int | None = None):
        if isinstance(bits, str):
            text = "".join(bits.split())
            if set(text) - {"0", "1"}:
                raise ParseError(f"not a bit string: {bits!r}")
            seq = tuple(int(c) for c in text)
        else:
            seq = tuple(int(b) for b in bits)
            if any(b not in (0, 1) for b in seq):
                raise ValueError("sequence entries must be 0 or 1")
        if not seq:
            raise ValueError("a periodic sequence needs at least one bit")
        self.bits = seq[: _least_period(seq)]
        self.declared_order = declared_order

    @property
    def period(self):
        return len(self.bits)

    def __len__(self):
        return len(self.bits)

    def __eq__(self, other):
        if not isinstance(other, PeriodicSequence):
            return NotImplemented
        return self.bits == other.bits

    def __hash__(self):
        return hash(self.bits)

    def __str__(self):
        return "".join("01"[b] for b in self.bits)

    def __repr__(self):
        return f"PeriodicSequence({str(self)!r})"

    def rotate(self, k):
        k %= self.period
        return PeriodicSequence(self.bits[k:] + self.bits[:k], self.declared_order)

    def canonical(self):
        return self.rotate(least_rotation(self.bits))

    def shift_equivalent(self, other):
        return self.period == other.period and self.canonical().bits == other.canonical().bits

    def windows(self, k) -> Iterator[int]:
        """Cyclic length-k windows as integers, starting at positions 0..N-1."""
        bits = self.bits
        N = len(bits)
        mask = (1 << k) - 1
        v = 0
        for i in range(k):
            v = (v << 1) | bits[i % N]
        for i in range(N):
            yield v
            v = ((v << 1) | bits[(i + k) % N]) & mask

    def to_json(self):
        out = {"bits": str(self)}
        if self.declared_order is not None:
            out = {"n": self.declared_order, **out}
        return out

    @classmethod
    def from_json(cls, obj):
        return cls(obj["bits"], obj.get("n"))


def rotation_canonical(s):
    return s.canonical()


def _next_bit_determined(s, k):
    seen = {}
    nxt = s.bits[k % s.period :] + s.bits[: k % s.period]
    for w, b in zip(s.windows(k), nxt):
        if seen.setdefault(w, b) != b:
            return False
    return True


def nonlinear_complexity(s):
    """Least k such that every cyclic k-window of s determines the following bit.

    For a periodic sequence this is the length of the shortest FSR producing
    it: a k-stage register exists exactly when the window-to-next-bit map is
    well defined, and that map is the register's feedback on the windows that
    occur.
    """
    if _next_bit_determined(s, 0):
        return 0
    lo, hi = 0, 1
    while not _next_bit_determined(s, hi):
        lo, hi = hi, min(2 * hi, s.period)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _next_bit_determined(s, mid):
            hi = mid
        else:
            lo = mid
    return hi


def is_de_bruijn(s, n):
    if n < 1 or s.period != 1 << n:
        return False
    return len(set(s.windows(n))) == 1 << n
