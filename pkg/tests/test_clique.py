import random

import pytest

from idnc.clique import (
    CliqueResult,
    brute_force_clique,
    exact_weight,
    max_weight_clique_exact,
    max_weight_clique_greedy,
)
from idnc.graph import IdncGraph, Vertex, build_graph, delivery_weight_exact
from idnc.instances import random_state


def make_graph(weights, edges):
    verts = tuple(Vertex(i + 1, 1, w) for i, w in enumerate(weights))
    adj = [0] * len(weights)
    for i, j in edges:
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    return IdncGraph(1, verts, tuple(adj))


def complete_graph(k):
    return make_graph([1.0 + i for i in range(k)], [(i, j) for i in range(k) for j in range(i + 1, k)])


def enumerate_best(graph):
    """Slow reference: every clique, exact weights, lexicographic tie-break."""
    best = None
    n = len(graph)
    for mask in range(1 << n):
        idx = tuple(i for i in range(n) if mask >> i & 1)
        if not graph.is_clique(idx):
            continue
        w = sum(graph.vertices[i].weight for i in idx)
        if best is None or w > best[0] + 1e-12 or (abs(w - best[0]) <= 1e-12 and idx < best[1]):
            best = (w, idx)
    return best


@pytest.mark.parametrize("solve", [max_weight_clique_exact, brute_force_clique])
def test_toy(toy, solve):
    g = build_graph(toy)
    r = solve(g)
    assert r.keys(g) == [(1, 3), (2, 2), (3, 2)]
    assert r.total_weight == 8
    assert r.exact


@pytest.mark.parametrize("solve", [max_weight_clique_exact, brute_force_clique])
def test_edgeless(solve):
    r = solve(make_graph([3.0, 5.0, 1.0], []))
    assert r.vertices == (1,)
    assert r.total_weight == 5


@pytest.mark.parametrize("solve", [max_weight_clique_exact, brute_force_clique, max_weight_clique_greedy])
def test_complete(solve):
    r = solve(complete_graph(6))
    assert r.vertices == tuple(range(6))


def test_greedy_toy(toy):
    g = build_graph(toy)
    r = max_weight_clique_greedy(g)
    assert r.keys(g) == [(1, 3), (2, 1)]
    assert r.total_weight == 6
    assert not r.exact


def test_greedy_trivial():
    assert max_weight_clique_greedy(make_graph([], [])) == CliqueResult((), 0, exact=True)
    r = max_weight_clique_greedy(make_graph([2.5], []))
    assert r.vertices == (0,) and r.exact


def test_empty_graph_exact():
    r = max_weight_clique_exact(make_graph([], []))
    assert r.vertices == () and r.total_weight == 0 and r.exact


def test_brute_force_limit():
    with pytest.raises(ValueError):
        brute_force_clique(make_graph([1.0] * 21, []))


def test_tie_break_is_lexicographic():
    # {0,3} and {1,2} both weigh 4; {0,3} is lexicographically smaller
    g = make_graph([2.0, 2.0, 2.0, 2.0], [(0, 3), (1, 2)])
    assert max_weight_clique_exact(g).vertices == (0, 3)
    assert brute_force_clique(g).vertices == (0, 3)
    # greedy seeds with the lexicographically larger optimum {2, 3}
    g = make_graph([1.0, 3.0, 3.5, 0.5], [(0, 1), (2, 3), (0, 3)])
    assert max_weight_clique_greedy(g).vertices == (2, 3)
    assert max_weight_clique_exact(g).vertices == (0, 1)


def test_budget_exhaustion_is_flagged():
    rng = random.Random(5)
    s = random_state(rng, max_users=8, max_messages=8)
    while len(build_graph(s)) < 30:
        s = random_state(rng, max_users=8, max_messages=8)
    g = build_graph(s)
    r = max_weight_clique_exact(g, budget=1)
    assert not r.exact
    assert g.is_clique(r.vertices)
    assert r.total_weight >= max_weight_clique_greedy(g).total_weight


def test_exact_matches_enumeration():
    rng = random.Random(1)
    for _ in range(200):
        s = random_state(rng, max_users=4, max_messages=3, max_prob=0.5)
        g = build_graph(s)
        w, idx = enumerate_best(g) or (0.0, ())
        r = max_weight_clique_exact(g, budget=None)
        assert r.vertices == idx
        assert r.total_weight == pytest.approx(w, rel=1e-12)


def test_oracle_agreement():
    rng = random.Random(2)
    done = 0
    while done < 500:
        s = random_state(rng, max_prob=0.5)
        g = build_graph(s)
        if len(g) > 15:
            continue
        done += 1
        a = max_weight_clique_exact(g, budget=None)
        b = brute_force_clique(g)
        exact_of = lambda v: delivery_weight_exact(s.users[v.user_id - 1], v.message, s.num_messages)
        assert exact_weight(g, a.vertices, exact_of) == exact_weight(g, b.vertices, exact_of)
        assert a.vertices == b.vertices


def test_greedy_dominance_and_maximality():
    rng = random.Random(4)
    for _ in range(300):
        s = random_state(rng, max_users=5, max_messages=6, max_prob=0.5)
        g = build_graph(s)
        greedy = max_weight_clique_greedy(g)
        exact = max_weight_clique_exact(g, budget=None)
        assert greedy.total_weight <= exact.total_weight + 1e-9
        if len(g):
            assert greedy.total_weight >= max(g.weights)
        for r in (greedy, exact):
            assert g.is_clique(r.vertices)
            common = (1 << len(g)) - 1
            for i in r.vertices:
                common &= g.adjacency[i]
            assert common == 0, "clique is not maximal"


def test_scale_invariance():
    rng = random.Random(9)
    for _ in range(200):
        s = random_state(rng, max_users=4, max_messages=5, max_prob=0.5)
        g = build_graph(s)
        scaled = g.reweighted([3.7 * w for w in g.weights])
        assert max_weight_clique_exact(g, None).vertices == max_weight_clique_exact(scaled, None).vertices
