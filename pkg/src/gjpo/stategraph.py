"""Functional state graph of a feedback shift register.

Each of the 2^n states has exactly one successor, so the graph splits into
components that each hold one cycle (possibly a loop) with in-trees hanging
off it.  Components are numbered by the smallest state they contain and each
cycle is listed from its smallest state, following the edges.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import check_order, state_str


@dataclass(frozen=True)
class Component:
    id: int
    cycle: tuple  # successor[cycle[k]] == cycle[k + 1 mod len]
    size: int


class StateGraph:
    def __init__(self, order, successor, component_id, components, indegree):
        self.order = order
        self.successor = successor
        self.component_id = component_id
        self.components = components
        self.indegree = indegree
        self._leaves = {}
        self._on_cycle = None
        self._entry = None

    @property
    def num_states(self):
        return 1 << self.order

    def __len__(self):
        return len(self.components)

    def is_leaf(self, v):
        return self.indegree[v] == 0

    def on_cycle(self, v):
        if self._on_cycle is None:
            flags = bytearray(self.num_states)
            for comp in self.components:
                for c in comp.cycle:
                    flags[c] = 1
            self._on_cycle = flags
        return bool(self._on_cycle[v])

    def leaves(self, cid):
        if not 0 <= cid < len(self.components):
            raise IndexError(f"no component {cid}")
        if cid not in self._leaves:
            comp_ids = self.component_id
            deg = self.indegree
            self._leaves[cid] = [
                v for v in range(self.num_states) if deg[v] == 0 and comp_ids[v] == cid
            ]
        return self._leaves[cid]

    def cycle_entry(self):
        """For every state, the cycle state where its forward path first meets the cycle."""
        if self._entry is None:
            entry = [-1] * self.num_states
            for comp in self.components:
                for c in comp.cycle:
                    entry[c] = c
            succ = self.successor
            for v in range(self.num_states):
                path = []
                w = v
                while entry[w] < 0:
                    path.append(w)
                    w = succ[w]
                for p in path:
                    entry[p] = entry[w]
            self._entry = entry
        return self._entry

    def children(self, v):
        """Children of v: the states whose successor is v."""
        n = self.order
        cands = (v >> 1, (v >> 1) | (1 << (n - 1)))
        return [c for c in dict.fromkeys(cands) if self.successor[c] == v]

    def to_json(self):
        n = self.order
        return {
            "n": n,
            "components": [
                {
                    "cycle": [state_str(c, n) for c in comp.cycle],
                    "size": comp.size,
                    "leaves": [state_str(v, n) for v in self.leaves(comp.id)],
                }
                for comp in self.components
            ],
        }


def build_state_graph(f, max_order=None):
    n = check_order(f.order, max_order)
    N = 1 << n
    states = np.arange(N, dtype=np.int64)
    succ_arr = ((states << 1) & (N - 1)) | f.as_array()
    indegree = np.bincount(succ_arr, minlength=N).tolist()
    succ = succ_arr.tolist()

    # three colours: -2 unseen, -1 on the current walk, >=0 component id
    comp = [-2] * N
    cycles = []
    for start in range(N):
        if comp[start] != -2:
            continue
        path = []
        v = start
        while comp[v] == -2:
            comp[v] = -1
            path.append(v)
            v = succ[v]
        if comp[v] == -1:
            cid = len(cycles)
            k = path.index(v)
            cyc = path[k:]
            low = cyc.index(min(cyc))
            cycles.append(tuple(cyc[low:] + cyc[:low]))
        else:
            cid = comp[v]
        for p in path:
            comp[p] = cid
    sizes = np.bincount(np.asarray(comp), minlength=len(cycles)).tolist()
    components = [Component(i, cycles[i], sizes[i]) for i in range(len(cycles))]
    return StateGraph(n, succ, comp, components, indegree)


def leaves_of(g, component):
    return list(g.leaves(component))


def unique_cycle_check(g):
    return len(g.components) == 1


def export_dot(g, labels=True, name="G"):
    """DOT digraph with one cluster per component; cycle states are filled."""
    n = g.order
    lines = [f"digraph {name} {{", "  node [shape=box, style=rounded];"]
    members = [[] for _ in g.components]
    for v in range(g.num_states):
        members[g.component_id[v]].append(v)
    for comp in g.components:
        cyc = set(comp.cycle)
        lines.append(f"  subgraph cluster_{comp.id} {{")
        lines.append(f'    label="G{comp.id}";')
        for v in members[comp.id]:
            attrs = []
            if labels:
                attrs.append(f'label="{state_str(v, n)}"')
            if v in cyc:
                attrs.append('style="rounded,filled"')
                attrs.append("fillcolor=lightgray")
            lines.append(f"    s{v} [{', '.join(attrs)}];" if attrs else f"    s{v};")
        lines.append("  }")
    for v in range(g.num_states):
        lines.append(f"  s{v} -> s{g.successor[v]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
