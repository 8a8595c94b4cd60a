"""Maximum-weight clique search on :class:`~idnc.graph.IdncGraph`.

Ties between cliques of equal weight (relative tolerance ``TIE_RTOL``) are
broken towards the lexicographically smallest sorted vertex-index tuple.
Vertex indices follow the graph's user-major, message-minor order, so this is
the smallest set under ``(user_id, message)`` ordering.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graph import IdncGraph

TIE_RTOL = 1e-12
DEFAULT_BUDGET = 200_000
BRUTE_FORCE_LIMIT = 20


@dataclass(frozen=True)
class CliqueResult:
    vertices: tuple[int, ...]
    total_weight: float
    exact: bool
    expansions: int = 0

    def keys(self, graph: IdncGraph) -> list[tuple[int, int]]:
        return [graph.vertices[i].key for i in self.vertices]


def _tol(w: float) -> float:
    return TIE_RTOL * max(abs(w), 1.0)


def _weight(graph: IdncGraph, vertices) -> float:
    return sum(graph.vertices[i].weight for i in sorted(vertices))


def exact_weight(graph: IdncGraph, vertices, weight_of) -> Fraction:
    """Sum ``weight_of(vertex)`` exactly, e.g. with Fraction-valued weights."""
    return sum((Fraction(weight_of(graph.vertices[i])) for i in vertices), Fraction(0))


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _color_groups(graph: IdncGraph) -> list[tuple[int, list[int]]]:
    """Partition vertices into independent sets, one per user when valid.

    Each group is ``(mask, indices sorted by non-increasing weight)``; a clique
    takes at most one vertex per group, which gives the pruning bound.
    """
    by_user: dict[int, list[int]] = {}
    for i, v in enumerate(graph.vertices):
        by_user.setdefault(v.user_id, []).append(i)
    groups = list(by_user.values())
    if any(graph.adjacency[i] & sum(1 << j for j in g) for g in groups for i in g):
        groups = [[i] for i in range(len(graph))]
    out = []
    for g in groups:
        mask = sum(1 << i for i in g)
        order = sorted(g, key=lambda i: (-graph.vertices[i].weight, i))
        out.append((mask, order))
    return out


def max_weight_clique_greedy(graph: IdncGraph) -> CliqueResult:
    """Repeatedly take the heaviest candidate and shrink to its neighbourhood."""
    weights = graph.weights
    cand = (1 << len(graph)) - 1
    chosen = []
    while cand:
        v = max(_bits(cand), key=lambda i: (weights[i], -i))
        chosen.append(v)
        cand &= graph.adjacency[v]
    chosen.sort()
    return CliqueResult(tuple(chosen), _weight(graph, chosen), exact=len(graph) <= 1)


def max_weight_clique_exact(graph: IdncGraph, budget: int | None = DEFAULT_BUDGET) -> CliqueResult:
    """Branch and bound over cliques in lexicographic vertex order.

    The incumbent is seeded with the greedy clique.  Each node's bound adds,
    for every colour group, the heaviest candidate left in it.  ``budget`` caps
    the number of vertex inclusions; when it runs out the incumbent is
    returned with ``exact=False``.
    """
    n = len(graph)
    if n == 0:
        return CliqueResult((), 0.0, exact=True)
    weights = graph.weights
    adj = graph.adjacency
    groups = _color_groups(graph)

    seed = max_weight_clique_greedy(graph)
    best_set = list(seed.vertices)
    best_w = seed.total_weight
    # Until the DFS itself reaches the seed's weight, lexicographically smaller
    # ties may still be out there, so only strictly worse branches are pruned.
    tie_mode = True
    expansions = 0
    exhausted = False

    def bound(cand: int) -> float:
        total = 0.0
        for mask, order in groups:
            if cand & mask:
                for i in order:
                    if cand >> i & 1:
                        total += weights[i]
                        break
        return total

    def expand(cand: int, current: list[int], cur_w: float) -> None:
        nonlocal best_set, best_w, tie_mode, expansions, exhausted
        while cand:
            if exhausted:
                return
            reach = cur_w + bound(cand)
            if tie_mode:
                if reach < best_w - _tol(best_w):
                    return
            elif reach <= best_w + _tol(best_w):
                return
            if budget is not None and expansions >= budget:
                exhausted = True
                return
            expansions += 1
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            new_set = current + [v]
            new_w = cur_w + weights[v]
            if new_w > best_w + _tol(best_w) or (tie_mode and new_w >= best_w - _tol(best_w)):
                best_set, best_w, tie_mode = new_set, new_w, False
            expand(cand & adj[v], new_set, new_w)

    expand((1 << n) - 1, [], 0.0)
    best_set.sort()
    return CliqueResult(tuple(best_set), _weight(graph, best_set), not exhausted, expansions)


def brute_force_clique(graph: IdncGraph) -> CliqueResult:
    """Enumerate all ``2^|V|`` vertex subsets; the reference optimum."""
    n = len(graph)
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force limited to {BRUTE_FORCE_LIMIT} vertices, graph has {n}")
    size = 1 << n
    is_clique = np.zeros(size, dtype=bool)
    total = np.zeros(size, dtype=np.float64)
    is_clique[0] = True
    for i, v in enumerate(graph.vertices):
        lo = 1 << i
        lower = np.arange(lo, dtype=np.int64)
        nbrs = graph.adjacency[i] & (lo - 1)
        is_clique[lo:2 * lo] = is_clique[:lo] & ((lower & nbrs) == lower)
        total[lo:2 * lo] = total[:lo] + v.weight
    total[~is_clique] = -np.inf
    top = total.max()
    ties = np.flatnonzero(total >= top - _tol(top))
    best = min(tuple(_bits(int(s))) for s in ties)
    return CliqueResult(best, _weight(graph, best), exact=True)
