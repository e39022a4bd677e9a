"""PCPs, spanning trees, rooted trees and graph-joining generation."""

import itertools
import random
from collections import Counter

import pytest

from gjpo.core import FeedbackFunction, PeriodicSequence, is_de_bruijn, parse_function
from gjpo.errors import InitialStateOffRootCycle, InvalidTree, NonStandardFunction, NoRootedTrees
from gjpo.families import FamilySpec, materialize
from gjpo.graphjoin import (
    Pcp,
    RootedSpanningTree,
    UGraph,
    count_spanning_trees_kirchhoff,
    enumerate_outputs,
    find_pcps,
    gjpo_generate,
    gjpo_run,
    integer_det,
    laplacian,
    rooted_spanning_trees,
    simplified_graph,
    spanning_trees,
    validate_tree,
)
from gjpo.stategraph import build_state_graph

import oracles

X1_X2X3 = "x1 + x2*x3"
SUM4 = "x1 + x2 + x3 + x4"

# (from, to, w) with this package's component numbering: G0 = (0), G1 = (00011),
# G2 = (00101), G3 = (01111)
SUM4_JOINING_PAIRS = {
    (0, 1, "00000"),
    (1, 0, "10001"),
    (1, 2, "00011"),
    (1, 2, "11000"),
    (2, 1, "01001"),
    (2, 1, "10010"),
    (1, 3, "00110"),
    (1, 3, "01100"),
    (3, 1, "10111"),
    (3, 1, "11101"),
    (2, 3, "01010"),
    (3, 2, "11011"),
}


def pag_of(spec, n):
    return find_pcps(build_state_graph(parse_function(spec, n)))


def as_triples(pag):
    n = pag.graph.order
    return {(p.from_component, p.to_component, format(p.w, f"0{n}b")) for p in pag.edges}


# --- PCPs ------------------------------------------------------------------


def test_lifted_sum_pcps():
    pag = pag_of(SUM4, 5)
    assert len(pag) == 12
    assert as_triples(pag) == SUM4_JOINING_PAIRS
    assert as_triples(pag) == oracles.brute_pcps(oracles.anf_function([(1,), (2,), (3,), (4,)]), 5)
    k12 = [(format(p.w, "05b"), format(p.companion, "05b")) for p in pag.K[(1, 2)]]
    assert k12 == [("00011", "00010"), ("11000", "11001")]


def test_x1_x2x3_pcps():
    pag = pag_of(X1_X2X3, 4)
    assert as_triples(pag) == {
        (0, 1, "0000"),
        (1, 0, "1001"),
        (1, 2, "0010"),
        (1, 2, "0100"),
        (2, 1, "1011"),
        (2, 1, "1101"),
    }
    p = pag.pcp_at("0100")
    assert format(p.companion, "04b") == "0101"
    assert p.to_json() == {"w": "0100", "companion": "0101", "from": 1, "to": 2}
    with pytest.raises(KeyError):
        pag.pcp_at("1110")


@pytest.mark.parametrize("n", [4, 5, 6])
def test_majority_has_no_pcps(n):
    pag = find_pcps(build_state_graph(materialize(FamilySpec("example6", n))))
    assert len(pag) == 0
    H = simplified_graph(pag)
    assert H.edges == () and H.num_vertices == len(pag.graph.components)
    assert spanning_trees(H) == []
    assert rooted_spanning_trees(pag) == []


def test_pcps_match_oracle_on_random_functions():
    rng = random.Random(4)
    for _ in range(40):
        n = rng.randint(2, 6)
        g_part = [rng.randint(0, 1) for _ in range(2 ** (n - 1))]
        f = FeedbackFunction.from_standard_part(g_part, n)
        ref = oracles.table_function(f.table_bits(), n)
        assert as_triples(find_pcps(build_state_graph(f))) == oracles.brute_pcps(ref, n)


# --- undirected trees ------------------------------------------------------


def test_simplified_graph_shapes():
    assert simplified_graph(pag_of(SUM4, 5)).edges == ((0, 1), (1, 2), (1, 3), (2, 3))
    assert simplified_graph(pag_of(X1_X2X3, 4)).edges == ((0, 1), (1, 2))
    single = simplified_graph(pag_of("0", 4))
    assert single == UGraph(1, ())


def test_spanning_tree_examples():
    assert len(spanning_trees(UGraph(4, ((0, 1), (1, 2), (1, 2), (1, 3), (1, 3), (2, 3))))) == 8
    assert len(spanning_trees(UGraph(3, ((0, 1), (1, 2))))) == 1
    assert spanning_trees(UGraph(3, ((0, 1),))) == []
    assert spanning_trees(UGraph(1, ())) == [()]


def test_kirchhoff_examples():
    printed = [[1, -1, 0, 0], [-1, 5, -2, -2], [0, -2, 3, -1], [0, -2, -1, 3]]
    assert count_spanning_trees_kirchhoff(printed) == 8
    assert count_spanning_trees_kirchhoff(UGraph(1, ())) == 1
    for k in range(1, 6):
        assert count_spanning_trees_kirchhoff(UGraph(2, ((0, 1),) * k)) == k
    assert laplacian(UGraph(4, ((0, 1), (1, 2), (1, 2), (1, 3), (1, 3), (2, 3)))) == printed


def test_integer_det():
    assert integer_det([]) == 1
    assert integer_det([[0, 1], [1, 0]]) == -1
    assert integer_det([[2, 0, 0], [0, 3, 0], [0, 0, 4]]) == 24
    assert integer_det([[1, 2], [2, 4]]) == 0
    assert integer_det([[0, 0, 1], [0, 2, 0], [3, 0, 0]]) == -6


def random_multigraph(rng, t, m):
    return UGraph(t, tuple(tuple(sorted(rng.sample(range(t), 2))) for _ in range(m)))


def brute_spanning_trees(H):
    t = H.num_vertices
    out = []
    for combo in itertools.combinations(range(len(H.edges)), t - 1):
        parent = list(range(t))

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        ok = True
        for k in combo:
            a, b = map(find, H.edges[k])
            if a == b:
                ok = False
                break
            parent[a] = b
        if ok:
            out.append(combo)
    return out


def test_spanning_trees_match_brute_force_and_kirchhoff():
    rng = random.Random(8)
    for _ in range(60):
        t = rng.randint(2, 6)
        H = random_multigraph(rng, t, rng.randint(0, 9))
        trees = spanning_trees(H)
        assert sorted(trees) == sorted(brute_spanning_trees(H))
        assert len(set(trees)) == len(trees)
        assert len(trees) == count_spanning_trees_kirchhoff(H)


# --- rooted trees ----------------------------------------------------------


def rooted_as_sets(trees, n):
    return {(r.root, frozenset(format(p.w, f"0{n}b") for p in r.edges)) for r in trees}


def test_lifted_sum_rooted_tree_count():
    trees = rooted_spanning_trees(pag_of(SUM4, 5))
    assert len(trees) == 32
    assert Counter(t.root for t in trees) == {0: 8, 1: 8, 2: 8, 3: 8}


def test_x1_x2x3_rooted_trees():
    pag = pag_of(X1_X2X3, 4)
    trees = rooted_spanning_trees(pag)
    assert len(trees) == 6
    at_big_cycle = rooted_spanning_trees(pag, root=2)
    assert len(at_big_cycle) == 2
    assert [sorted(format(p.w, "04b") for p in t.edges) for t in at_big_cycle] == [
        ["0000", "0010"],
        ["0000", "0100"],
    ]


def test_rooted_trees_match_literal_enumeration():
    rng = random.Random(12)
    checked = 0
    for _ in range(200):
        n = rng.randint(3, 6)
        f = FeedbackFunction.from_standard_part([rng.randint(0, 1) for _ in range(2 ** (n - 1))], n)
        pag = find_pcps(build_state_graph(f))
        if pag.t < 2:
            continue
        checked += 1
        ref = oracles.brute_rooted_trees(oracles.brute_pcps(oracles.table_function(f.table_bits(), n), n), pag.t)
        got = rooted_spanning_trees(pag)
        assert rooted_as_sets(got, n) == ref
        assert len(got) == len(ref)
        for tree in got:
            validate_tree(pag, tree)
    assert checked > 50


def test_rooted_tree_order_is_deterministic():
    pag = pag_of(SUM4, 5)
    trees = rooted_spanning_trees(pag)
    keys = [(t.root, tuple(p.w for p in t.edges)) for t in trees]
    assert keys == sorted(keys)
    assert trees == rooted_spanning_trees(pag_of(SUM4, 5))


def test_two_edges_from_one_component_rejected():
    pag = pag_of(X1_X2X3, 4)
    both_from_g1 = RootedSpanningTree(2, (pag.pcp_at("0100"), pag.pcp_at("1001")))
    with pytest.raises(InvalidTree):
        validate_tree(pag, both_from_g1)
    with pytest.raises(InvalidTree):
        gjpo_generate(parse_function(X1_X2X3, 4), both_from_g1, "1110", pag)


def test_invalid_tree_variants():
    pag = pag_of(X1_X2X3, 4)
    a, b = pag.pcp_at("0000"), pag.pcp_at("0100")
    with pytest.raises(InvalidTree):
        validate_tree(pag, RootedSpanningTree(2, (a,)))  # component 1 left out
    with pytest.raises(InvalidTree):
        validate_tree(pag, RootedSpanningTree(1, (a, b)))  # root has an outgoing edge
    with pytest.raises(InvalidTree):
        validate_tree(pag, RootedSpanningTree(7, (a, b)))
    with pytest.raises(InvalidTree):
        validate_tree(pag, RootedSpanningTree(2, (a, Pcp(1, 2, 0b0110, 4))))
    cyc = RootedSpanningTree(2, (pag.pcp_at("0000"), pag.pcp_at("1001")))
    with pytest.raises(InvalidTree):
        validate_tree(pag, cyc)


# --- graph-joining generation ---------------------------------------------


def test_x1_x2x3_known_sequences():
    f = parse_function(X1_X2X3, 4)
    pag = find_pcps(build_state_graph(f))
    t0010, t0100 = rooted_spanning_trees(pag, root=2)
    assert str(gjpo_generate(f, t0100, "1110", pag)) == "1110000110100101"
    assert str(gjpo_generate(f, t0100, "1101", pag)) == "1101000011001011"
    assert str(gjpo_generate(f, t0100, "1011", pag)) == "1011000011110100"
    assert str(gjpo_generate(f, t0010, "1011", pag)) == "1011000010100111"
    assert str(gjpo_generate(f, t0010, "1110", pag)) == "1110000101001101"


def test_gjpo_rejects_bad_seed_and_function():
    f = parse_function(X1_X2X3, 4)
    pag = find_pcps(build_state_graph(f))
    tree = rooted_spanning_trees(pag, root=2)[0]
    with pytest.raises(InitialStateOffRootCycle):
        gjpo_generate(f, tree, "0110", pag)  # leaf
    with pytest.raises(InitialStateOffRootCycle):
        gjpo_generate(f, tree, "0100", pag)  # cycle of another component
    with pytest.raises(NonStandardFunction):
        gjpo_generate(parse_function("x0 + x1", 4), tree, "1110")


def test_prefer_opposite_matches_literal_algorithm():
    for n in range(3, 9):
        f = materialize(FamilySpec("prefer-opposite", n))
        pag = find_pcps(build_state_graph(f))
        ones = (1 << n) - 1
        tree = next(t for t in rooted_spanning_trees(pag, root=0) if t.forced_states == {ones})
        out = gjpo_generate(f, tree, "0" * n, pag)
        assert str(out) == oracles.literal_prefer_opposite(n)
        assert is_de_bruijn(out, n)


def test_gjpo_matches_literal_loop_with_forced_states():
    rng = random.Random(21)
    for _ in range(80):
        n = rng.randint(3, 7)
        f = FeedbackFunction.from_standard_part([rng.randint(0, 1) for _ in range(2 ** (n - 1))], n)
        pag = find_pcps(build_state_graph(f))
        trees = rooted_spanning_trees(pag)
        if not trees:
            continue
        tree = rng.choice(trees)
        u = rng.choice(pag.graph.components[tree.root].cycle)
        ref = oracles.table_function(f.table_bits(), n)
        forced = [oracles.bits_of(format(w, f"0{n}b")) for w in tree.forced_states]
        expected = oracles.literal_gpo(ref, oracles.bits_of(format(u, f"0{n}b")), forced)
        out = gjpo_generate(f, tree, u, pag)
        assert str(out) == expected
        assert is_de_bruijn(out, n)


def test_forced_states_consumed_once():
    f = parse_function(SUM4, 5)
    pag = find_pcps(build_state_graph(f))
    for tree in rooted_spanning_trees(pag):
        for u in pag.graph.components[tree.root].cycle:
            run = gjpo_run(f, tree, u, pag)
            assert not run.forced_left
            assert sorted(run.forced_taken) == sorted(tree.forced_states)
            assert len(run.states) == 32


def test_distinct_trees_give_distinct_sequences_for_fixed_seed():
    f = parse_function(SUM4, 5)
    pag = find_pcps(build_state_graph(f))
    for root in range(pag.t):
        trees = rooted_spanning_trees(pag, root)
        for u in pag.graph.components[root].cycle:
            outs = {str(gjpo_generate(f, t, u, pag).canonical()) for t in trees}
            assert len(outs) == len(trees)


# --- enumeration -----------------------------------------------------------


def test_lifted_sum_enumeration():
    result = enumerate_outputs(parse_function(SUM4, 5))
    assert result.runs == 128 and result.distinct == 96
    assert result.histogram() == {1: 70, 2: 23, 3: 1, 4: 1, 5: 1}
    printed = {
        "00000100101111101010001101100111",
        "00000100011101010011011001011111",
        "00000101110001111101010011011001",
    }
    mult = {str(PeriodicSequence(s).canonical()): result.counts[str(PeriodicSequence(s).canonical())] for s in printed}
    assert set(mult.values()) == {3, 4, 5}
    assert all(is_de_bruijn(PeriodicSequence(s), 5) for s in result.counts)


def test_x1_x2x3_enumeration():
    f = parse_function(X1_X2X3, 4)
    full = enumerate_outputs(f)
    assert (full.rooted_trees, full.runs, full.distinct) == (6, 16, 10)
    g = build_state_graph(f)
    big = enumerate_outputs(f, root=g.component_id[0b1110])
    assert (big.rooted_trees, big.runs, big.distinct) == (2, 8, 6)


def test_majority_enumeration_fails():
    with pytest.raises(NoRootedTrees):
        enumerate_outputs(materialize(FamilySpec("example6", 4)))


def test_parallel_merge_is_identical():
    f = parse_function(SUM4, 5)
    serial = enumerate_outputs(f, jobs=1)
    parallel = enumerate_outputs(f, jobs=3)
    assert serial.counts == parallel.counts
    assert list(serial.counts) == list(parallel.counts)
    assert serial.to_json(True) == parallel.to_json(True)


def test_single_component_enumeration():
    result = enumerate_outputs(FeedbackFunction.constant(4))
    assert result.rooted_trees == 1 and result.runs == 1
    assert list(result.counts) == [str(PeriodicSequence("0000111101100101").canonical())]
