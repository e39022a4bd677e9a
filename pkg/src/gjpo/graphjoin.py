"""Joining the components of a standard FSR's state graph.

A preference companion pair (PCP) from component i to component j is a
cycle state ``w`` of i whose companion ``w ^ 1`` is a leaf of j.  The PCPs
form a directed multigraph on components (the PAG).  Choosing one outgoing
PCP for every component except a root, such that all paths lead to the
root, gives a rooted spanning tree; forcing the tree's ``w`` states during
the greedy run makes the output a de Bruijn sequence.
"""

from __future__ import annotations

import itertools
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

from .core import as_state_int, state_str
from .errors import InitialStateOffRootCycle, InvalidTree, NonStandardFunction, NoRootedTrees
from .gpo import COMPLETED, run_greedy
from .stategraph import build_state_graph


@dataclass(frozen=True, order=True)
class Pcp:
    from_component: int
    to_component: int
    w: int
    order: int = field(compare=False)

    @property
    def companion(self):
        return self.w ^ 1

    def __str__(self):
        n = self.order
        return f"({state_str(self.w, n)},{state_str(self.companion, n)})_{self.from_component},{self.to_component}"

    def to_json(self):
        return {
            "w": state_str(self.w, self.order),
            "companion": state_str(self.companion, self.order),
            "from": self.from_component,
            "to": self.to_component,
        }


class Pag:
    """Preference adjacency graph: ``K[(i, j)]`` lists the PCPs from i to j, sorted by w."""

    def __init__(self, graph, K):
        self.graph = graph
        self.t = len(graph.components)
        self.K = K

    @property
    def edges(self):
        return [p for key in sorted(self.K) for p in self.K[key]]

    def multiplicity(self, i, j):
        return len(self.K.get((i, j), ()))

    def pcp_at(self, w):
        """The PCP labelled by state w (bit string or int)."""
        v = as_state_int(w, self.graph.order)
        for p in self.edges:
            if p.w == v:
                return p
        raise KeyError(f"{w} is not the cycle state of any PCP")

    def __len__(self):
        return sum(len(v) for v in self.K.values())


def find_pcps(g):
    K = {}
    comp = g.component_id
    for c in g.components:
        for w in sorted(c.cycle):
            leaf = w ^ 1
            j = comp[leaf]
            if j != c.id and g.indegree[leaf] == 0:
                K.setdefault((c.id, j), []).append(Pcp(c.id, j, w, g.order))
    return Pag(g, K)


class UGraph(NamedTuple):
    """Undirected multigraph; ``edges`` may repeat a pair for parallel edges."""

    num_vertices: int
    edges: tuple


def simplified_graph(p):
    pairs = {tuple(sorted(key)) for key in p.K}
    return UGraph(p.t, tuple(sorted(pairs)))


def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _connects_all(t, edges):
    parent = list(range(t))
    merged = 0
    for a, b in edges:
        ra, rb = _find(parent, a), _find(parent, b)
        if ra != rb:
            parent[ra] = rb
            merged += 1
    return merged == t - 1


def spanning_trees(H):
    """All spanning trees of H as sorted tuples of edge indices into ``H.edges``.

    Include/exclude recursion over the edges in order: an edge is included
    (contracted) when it joins two different blocks, and excluded (deleted)
    only when the remaining edges can still connect the graph, so every leaf
    of the recursion is a tree.
    """
    t, edges = H.num_vertices, list(H.edges)
    if t == 0:
        return []
    if not _connects_all(t, edges):
        return []
    out = []

    def rec(i, chosen, parent):
        if len(chosen) == t - 1:
            out.append(tuple(chosen))
            return
        if i == len(edges):
            return
        a, b = edges[i]
        ra, rb = _find(parent, a), _find(parent, b)
        if ra != rb:
            joined = parent[:]
            joined[ra] = rb
            rec(i + 1, chosen + [i], joined)
        rest = [edges[k] for k in chosen] + edges[i + 1 :]
        if _connects_all(t, rest):
            rec(i + 1, chosen, parent)

    rec(0, [], list(range(t)))
    return out


def laplacian(H):
    t = H.num_vertices
    L = [[0] * t for _ in range(t)]
    for a, b in H.edges:
        if a == b:
            continue
        L[a][a] += 1
        L[b][b] += 1
        L[a][b] -= 1
        L[b][a] -= 1
    return L


def integer_det(M):
    """Exact determinant of an integer matrix (fraction-free Bareiss elimination)."""
    M = [[int(x) for x in row] for row in M]
    n = len(M)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if M[r][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[-1][-1]


def count_spanning_trees_kirchhoff(graph_or_laplacian):
    """Cofactor (0, 0) of the Laplacian; accepts a UGraph or the matrix itself."""
    if isinstance(graph_or_laplacian, UGraph):
        L = laplacian(graph_or_laplacian)
    else:
        L = [list(row) for row in graph_or_laplacian]
    if len(L) <= 1:
        return 1
    return integer_det([row[1:] for row in L[1:]])


@dataclass(frozen=True)
class RootedSpanningTree:
    root: int
    edges: tuple  # one Pcp per non-root component, sorted by from_component

    @property
    def forced_states(self):
        return frozenset(p.w for p in self.edges)

    def to_json(self):
        return {"root": self.root, "edges": [p.to_json() for p in self.edges]}


def _orient(t, tree_edges, root):
    adj = {v: [] for v in range(t)}
    for a, b in tree_edges:
        adj[a].append(b)
        adj[b].append(a)
    parent = {root: None}
    stack = [root]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in parent:
                parent[w] = v
                stack.append(w)
    return parent


def rooted_spanning_trees(p, root=None):
    """Every anti-arborescence of the PAG, sorted by (root, forced states).

    ``root`` restricts the result to trees rooted at that component.

    Instead of trying all 2^(t-1) edge directions of each spanning tree of
    the simplified graph, the direction of every edge is fixed by the root;
    only the PCP choices along those directions are multiplied out.
    """
    H = simplified_graph(p)
    out = []
    for tree in spanning_trees(H):
        tree_edges = [H.edges[k] for k in tree]
        for r in range(p.t) if root is None else (root,):
            parent = _orient(p.t, tree_edges, r)
            choices = [p.K.get((v, parent[v]), []) for v in range(p.t) if v != r]
            if any(not c for c in choices):
                continue
            for combo in itertools.product(*choices):
                out.append(RootedSpanningTree(r, tuple(combo)))
    out.sort(key=lambda r: (r.root, tuple(e.w for e in r.edges)))
    return out


def validate_tree(p, tree):
    known = set(p.edges)
    out_edge = {}
    for e in tree.edges:
        if e not in known:
            raise InvalidTree(f"{e} is not a PCP of this state graph")
        if e.from_component in out_edge:
            raise InvalidTree(f"component {e.from_component} has more than one outgoing edge")
        out_edge[e.from_component] = e.to_component
    if not 0 <= tree.root < p.t:
        raise InvalidTree(f"no component {tree.root}")
    if tree.root in out_edge:
        raise InvalidTree("the root must have no outgoing edge")
    missing = set(range(p.t)) - set(out_edge) - {tree.root}
    if missing:
        raise InvalidTree(f"components {sorted(missing)} have no outgoing edge")
    for v in range(p.t):
        seen = set()
        while v != tree.root:
            if v in seen:
                raise InvalidTree("tree edges contain a directed cycle")
            seen.add(v)
            v = out_edge[v]


def gjpo_run(f, tree, u, pag=None):
    if not f.is_standard():
        raise NonStandardFunction("graph joining needs a standard feedback function")
    if pag is None:
        pag = find_pcps(build_state_graph(f))
    validate_tree(pag, tree)
    v = as_state_int(u, f.order)
    g = pag.graph
    if not g.on_cycle(v) or g.component_id[v] != tree.root:
        raise InitialStateOffRootCycle(
            f"{state_str(v, f.order)} is not on the cycle of root component {tree.root}"
        )
    return run_greedy(f, v, forced=tree.forced_states)


def gjpo_generate(f, tree, u, pag=None):
    run = gjpo_run(f, tree, u, pag)
    if run.status != COMPLETED or run.forced_left:  # pragma: no cover - guaranteed by a valid tree
        raise AssertionError("graph-joining run did not complete")
    return run.sequence()


def _run_batch(f, jobs):
    counts = Counter()
    for cycle, forced in jobs:
        for u in cycle:
            run = run_greedy(f, u, forced=forced)
            if run.status != COMPLETED or run.forced_left:  # pragma: no cover
                raise AssertionError("graph-joining run did not complete")
            counts[str(run.sequence().canonical())] += 1
    return counts


@dataclass
class Enumeration:
    order: int
    components: int
    pcps: list
    spanning_trees: int
    rooted_trees: int
    runs: int
    counts: Counter  # canonical bit string -> multiplicity

    @property
    def distinct(self):
        return len(self.counts)

    def histogram(self):
        return dict(sorted(Counter(self.counts.values()).items()))

    def to_json(self, emit_sequences=False):
        out = {
            "n": self.order,
            "components": self.components,
            "pcps": [p.to_json() for p in self.pcps],
            "spanning_trees": self.spanning_trees,
            "rooted_trees": self.rooted_trees,
            "runs": self.runs,
            "distinct": self.distinct,
            "histogram": {str(k): v for k, v in self.histogram().items()},
        }
        if emit_sequences:
            out["sequences"] = [
                {"bits": s, "multiplicity": self.counts[s]} for s in sorted(self.counts)
            ]
        return out


def enumerate_outputs(f, jobs=1, root=None):
    """Run every (rooted tree, root-cycle state) pair and tally canonical outputs.

    ``root`` limits the runs to trees rooted at one component.
    """
    if not f.is_standard():
        raise NonStandardFunction("graph joining needs a standard feedback function")
    g = build_state_graph(f)
    pag = find_pcps(g)
    trees = rooted_spanning_trees(pag, root)
    if not trees:
        where = "" if root is None else f" at root {root}"
        raise NoRootedTrees(f"no rooted spanning tree{where} joins the {pag.t} components")
    work = [(g.components[r.root].cycle, r.forced_states) for r in trees]
    runs = sum(len(c) for c, _ in work)
    if jobs <= 1 or len(work) < 2:
        counts = _run_batch(f, work)
    else:
        chunks = [work[i::jobs] for i in range(jobs)]
        counts = Counter()
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_run_batch, [f] * len(chunks), chunks):
                counts.update(part)
    return Enumeration(
        order=f.order,
        components=pag.t,
        pcps=pag.edges,
        spanning_trees=len(spanning_trees(simplified_graph(pag))),
        rooted_trees=len(trees),
        runs=runs,
        counts=Counter(dict(sorted(counts.items()))),
    )
