"""Named feedback-function families and their cycle-structure predicates."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .core import FeedbackFunction, Monomial, check_order, parse_anf, state_str
from .errors import FamilyParameterError, NonsingularRequired, ParseError
from .graphjoin import UGraph
from .stategraph import build_state_graph

# Order-4 function whose plain FSR run from 0000 is the de Bruijn sequence 0000100110101111.
DEBRUIJN4_BASE = "1 + x0 + x2 + x3 + x1*x2 + x1*x3 + x2*x3 + x1*x2*x3"

KINDS = (
    "zero",
    "one",
    "prefer-same",
    "prefer-opposite",
    "product",
    "gproduct",
    "lift",
    "debruijn4-lift",
    "example4",
    "example6",
)


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    n: int
    indices: tuple = ()  # (k, l) for product, (k_1, ..., k_t) for gproduct
    base: str | None = None  # ANF of the base function for lift
    base_order: int | None = None
    params: dict = field(default_factory=dict, compare=False)

    def label(self):
        if self.kind == "product":
            return f"product:{self.indices[0]},{self.indices[1]}"
        if self.kind == "gproduct":
            return "gproduct:" + ",".join(map(str, self.indices))
        if self.kind == "lift":
            return f"lift:{self.base}@{self.base_order}"
        return self.kind


def _check_indices(ks, n, kind):
    if not ks or any(not 0 < k < n for k in ks) or list(ks) != sorted(set(ks)):
        raise FamilyParameterError(f"{kind} needs 0 < k_1 < ... < k_t < n={n}, got {ks}")


def materialize(spec):
    n = check_order(spec.n)
    kind = spec.kind
    last = n - 1
    if kind == "zero":
        monos = []
    elif kind == "one":
        monos = [()]
    elif kind == "prefer-same":
        monos = [(last,), ()]
    elif kind == "prefer-opposite":
        monos = [(last,)]
    elif kind in ("product", "gproduct"):
        ks = tuple(spec.indices)
        if kind == "product" and len(ks) != 2:
            raise FamilyParameterError("product needs exactly two indices k,l")
        _check_indices(ks, n, kind)
        monos = [tuple(range(1, n)), ks]
    elif kind == "example4":
        if n != 4:
            raise FamilyParameterError("example4 is defined for n=4 only")
        monos = [(1,), (2, 3)]
    elif kind == "example6":
        if n < 4:
            raise FamilyParameterError("example6 needs n >= 4")
        monos = [(n - 3, n - 2), (n - 3, n - 1), (n - 2, n - 1)]
    elif kind in ("lift", "debruijn4-lift"):
        base_text = DEBRUIJN4_BASE if kind == "debruijn4-lift" else spec.base
        m = 4 if kind == "debruijn4-lift" else spec.base_order
        if base_text is None or m is None:
            raise FamilyParameterError("lift needs a base function and its order")
        if not 1 <= m < n:
            raise FamilyParameterError(f"lift needs base order m < n, got m={m}, n={n}")
        base = FeedbackFunction.from_anf(parse_anf(base_text), m)
        return base.lift(n, name=spec.label())
    else:
        raise FamilyParameterError(f"unknown family {kind!r}")
    f = FeedbackFunction.from_anf([Monomial(m) for m in monos], n, name=spec.label())
    assert f.is_standard()
    return f


def parse_family_spec(text, n):
    """``zero``, ``one``, ``prefer-same``, ``prefer-opposite``, ``product:k,l``,
    ``gproduct:k1,k2,...``, ``lift:<anf>@m``, ``debruijn4-lift``, ``example4``, ``example6``."""
    text = text.strip()
    kind, _, arg = text.partition(":")
    kind = kind.strip()
    if kind not in KINDS:
        raise ParseError(f"unknown function spec {text!r}")
    if kind in ("product", "gproduct"):
        try:
            ks = tuple(int(x) for x in arg.split(","))
        except ValueError:
            raise ParseError(f"bad indices in {text!r}") from None
        return materialize(FamilySpec(kind, n, indices=ks))
    if kind == "lift":
        base, sep, m = arg.rpartition("@")
        if not sep or not m.strip().isdigit():
            raise ParseError(f"lift spec must look like lift:<anf>@m, got {text!r}")
        base = base.strip().strip("\"'")
        parse_anf(base)
        return materialize(FamilySpec(kind, n, base=base, base_order=int(m)))
    if arg:
        raise ParseError(f"{kind} takes no parameters")
    return materialize(FamilySpec(kind, n))


def product_unique_loop(n, k, l):
    if not 0 < k < l < n:
        raise FamilyParameterError(f"need 0 < k < l < n, got n={n}, k={k}, l={l}")
    return math.gcd(n - k, l - k) == 1


def generalized_product_unique_loop(n, ks):
    ks = tuple(ks)
    _check_indices(ks, n, "gproduct")
    return math.gcd(n - ks[0], *(k - ks[0] for k in ks[1:])) == 1


def _require_nonsingular(h):
    if not h.is_nonsingular():
        raise NonsingularRequired("base function must have the form x0 + g(x1, ..., x_{m-1})")


def cycle_sequence(cycle, m):
    """Bits s_0 of the states along a cycle: the periodic sequence the cycle carries."""
    return "".join(str(v >> (m - 1)) for v in cycle)


def companion_pairs(h):
    """Companion pairs (v, v^1), v even, whose states lie on distinct cycles of nonsingular h."""
    _require_nonsingular(h)
    g = build_state_graph(h)
    comp = g.component_id
    return [(v, v ^ 1) for v in range(0, 1 << h.order, 2) if comp[v] != comp[v ^ 1]]


def adjacency_multigraph(h):
    """Cycles of nonsingular h joined by one edge per shared companion pair."""
    g = build_state_graph(h)
    comp = g.component_id
    edges = tuple(sorted(tuple(sorted((comp[a], comp[b]))) for a, b in companion_pairs(h)))
    return UGraph(len(g.components), edges)


@dataclass
class LiftCorrespondence:
    base_order: int
    order: int
    pairs: list  # (base cycle id, lifted component id)
    base_cycles: list  # cycle sequences of the base graph, by base cycle id
    tree_sizes: dict  # lifted cycle state -> states whose path enters the cycle there
    leaf_counts: dict
    leaf_shape_ok: bool

    @property
    def ok(self):
        want_size = 1 << (self.order - self.base_order)
        want_leaves = want_size // 2
        return (
            len({c for _, c in self.pairs}) == len(self.pairs)
            and all(s == want_size for s in self.tree_sizes.values())
            and all(c == want_leaves for c in self.leaf_counts.values())
            and self.leaf_shape_ok
        )

    def to_json(self):
        return {
            "base_order": self.base_order,
            "order": self.order,
            "pairs": [
                {"base_cycle": self.base_cycles[i], "component": c} for i, c in self.pairs
            ],
            "ok": self.ok,
        }


def base_cycles_of_lift(h, n):
    """Match each cycle of nonsingular h with the component of its lift that projects onto it."""
    _require_nonsingular(h)
    m = h.order
    if not m < n:
        raise FamilyParameterError(f"lift needs m < n, got m={m}, n={n}")
    gh = build_state_graph(h)
    F = h.lift(n)
    gf = build_state_graph(F)
    low = (1 << m) - 1

    pairs = []
    for comp in gf.components:
        base_id = gh.component_id[comp.cycle[0] & low]
        pairs.append((base_id, comp.id))
    pairs.sort()

    entry = gf.cycle_entry()
    sizes = {c: 0 for comp in gf.components for c in comp.cycle}
    leaves = dict.fromkeys(sizes, 0)
    shape_ok = True
    for v in range(1 << n):
        r = entry[v]
        sizes[r] += 1
        if gf.indegree[v] == 0:
            leaves[r] += 1
            # last m bits of a leaf are the first m bits of its root
            shape_ok &= (v & low) == (r >> (n - m))
    return LiftCorrespondence(
        base_order=m,
        order=n,
        pairs=pairs,
        base_cycles=[cycle_sequence(c.cycle, m) for c in gh.components],
        tree_sizes=sizes,
        leaf_counts=leaves,
        leaf_shape_ok=shape_ok,
    )


def describe_cycles(g):
    return [[state_str(v, g.order) for v in c.cycle] for c in g.components]
