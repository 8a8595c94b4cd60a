"""Per-slot combination selectors.

Every selector maps a :class:`~idnc.model.SystemState` to a non-empty set of
message ids.  All are deterministic given the state; round robin carries a
cursor that its caller owns.

``ssp-h-standin`` and ``completion-standin`` are stand-ins for published
heuristics whose internals are not reproduced here.  They follow the
behaviour those heuristics are known for (first-wanted bias and order-blind
completion targeting respectively) and nothing more.
"""

from __future__ import annotations

from fractions import Fraction
from functools import partial
from itertools import combinations
from typing import Callable

from .clique import DEFAULT_BUDGET, max_weight_clique_exact
from .graph import (
    IdncGraph,
    WeightFn,
    build_graph,
    clique_to_combination,
    delivery_weight,
    unit_weight,
)
from .metrics import delay_increment
from .model import SystemState, UserState, first_wanted

ORACLE_MAX_MESSAGES = 12

Selector = Callable[[SystemState], frozenset]


def _require_incomplete(state: SystemState) -> None:
    if state.complete:
        raise ValueError("no incomplete user to serve")


def clique_select(
    state: SystemState,
    weight: WeightFn,
    budget: int | None = DEFAULT_BUDGET,
    graph: IdncGraph | None = None,
) -> frozenset[int]:
    _require_incomplete(state)
    if graph is None:
        graph = build_graph(state, weight)
    assert len(graph) > 0
    result = max_weight_clique_exact(graph, budget)
    kappa, _ = clique_to_combination(graph, result.vertices)
    return kappa


def min_adt_select(state: SystemState, budget: int | None = DEFAULT_BUDGET) -> frozenset[int]:
    """Max-weight clique under vertex weight ``(M - m + 1) / (1 - p_u)``."""
    return clique_select(state, delivery_weight, budget)


def max_clique_select(state: SystemState, budget: int | None = DEFAULT_BUDGET) -> frozenset[int]:
    """Serve as many users as possible with some new message."""
    return clique_select(state, unit_weight, budget)


def completion_weight(u: UserState, m: int, num_messages: int) -> float:
    return len(u.wants) / (1.0 - u.erasure_prob)


def completion_heuristic_select(
    state: SystemState, budget: int | None = DEFAULT_BUDGET
) -> frozenset[int]:
    """Stand-in completion-time heuristic: favour users missing the most messages.

    The weight depends on the user only, so message order never matters.
    """
    return clique_select(state, completion_weight, budget)


def first_wanted_select(state: SystemState, budget: int | None = DEFAULT_BUDGET) -> frozenset[int]:
    """Stand-in for SSP-H: only each user's first wanted message is eligible."""
    _require_incomplete(state)
    full = build_graph(state, delivery_weight)
    heads = {u.user_id: first_wanted(u) for u in state.users}
    keep = [i for i, v in enumerate(full.vertices) if heads[v.user_id] == v.message]
    return clique_select(state, delivery_weight, budget, graph=full.subgraph(keep))


def round_robin_select(state: SystemState, cursor: int = 1) -> tuple[frozenset[int], int]:
    """Uncoded control: next message at or after ``cursor`` (cyclically) that someone wants.

    Returns the combination and the cursor for the following slot.
    """
    _require_incomplete(state)
    M = state.num_messages
    wanted = set().union(*(u.wants for u in state.users))
    for offset in range(M):
        m = (cursor - 1 + offset) % M + 1
        if m in wanted:
            return frozenset({m}), m % M + 1
    raise AssertionError("incomplete state with nothing wanted")


def slot_objective(state: SystemState, kappa, weight_exact: bool = True):
    """Sum over incomplete users of delay increment / (1 - p_u), assuming reception."""
    total = Fraction(0) if weight_exact else 0.0
    for u in state.users:
        if u.complete:
            continue
        d = delay_increment(u, kappa, received=True)
        if weight_exact:
            total += Fraction(d) / (1 - Fraction(u.erasure_prob))
        else:
            total += d / (1.0 - u.erasure_prob)
    return total


def exhaustive_optimal_select(state: SystemState) -> tuple[list[frozenset[int]], Fraction]:
    """Enumerate every non-empty combination; return all minimisers and the minimum.

    The objective is evaluated exactly with :class:`~fractions.Fraction`.
    """
    _require_incomplete(state)
    M = state.num_messages
    if M > ORACLE_MAX_MESSAGES:
        raise ValueError(f"exhaustive search limited to M <= {ORACLE_MAX_MESSAGES}, got {M}")
    best: Fraction | None = None
    argmin: list[frozenset[int]] = []
    for size in range(1, M + 1):
        for combo in combinations(range(1, M + 1), size):
            kappa = frozenset(combo)
            score = slot_objective(state, kappa)
            if best is None or score < best:
                best, argmin = score, [kappa]
            elif score == best:
                argmin.append(kappa)
    return argmin, best


def oracle_select(state: SystemState) -> frozenset[int]:
    argmin, _ = exhaustive_optimal_select(state)
    return min(argmin, key=lambda k: (len(k), sorted(k)))


class RoundRobin:
    def __init__(self) -> None:
        self.cursor = 1

    def __call__(self, state: SystemState) -> frozenset[int]:
        kappa, self.cursor = round_robin_select(state, self.cursor)
        return kappa


class ScheduleReplay:
    """Plays a fixed list of combinations; not part of the registry."""

    def __init__(self, schedule) -> None:
        self.schedule = [frozenset(k) for k in schedule]
        self.position = 0

    def __call__(self, state: SystemState) -> frozenset[int]:
        if self.position >= len(self.schedule):
            raise IndexError("fixed schedule exhausted before completion")
        kappa = self.schedule[self.position]
        self.position += 1
        return kappa


def _budgeted(fn) -> Callable[[int | None], Selector]:
    return lambda budget: partial(fn, budget=budget)


POLICIES: dict[str, Callable[[int | None], Selector]] = {
    "min-adt": _budgeted(min_adt_select),
    "max-clique": _budgeted(max_clique_select),
    "completion-standin": _budgeted(completion_heuristic_select),
    "ssp-h-standin": _budgeted(first_wanted_select),
    "round-robin": lambda budget: RoundRobin(),
    "oracle": lambda budget: oracle_select,
}


def make_policy(name: str, budget: int | None = DEFAULT_BUDGET) -> Selector:
    """Fresh selector for one episode."""
    try:
        factory = POLICIES[name]
    except KeyError:
        raise KeyError(f"unknown policy {name!r}; known: {', '.join(POLICIES)}") from None
    return factory(budget)
