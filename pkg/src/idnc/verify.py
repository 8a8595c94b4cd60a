"""Executable self-checks run by ``idnc verify``."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .clique import brute_force_clique, exact_weight, max_weight_clique_exact
from .graph import WeightFn, build_graph, delivery_weight, delivery_weight_exact
from .harness import ExperimentConfig, run_monte_carlo
from .instances import random_completing_schedule, random_state
from .metrics import delivery_time_identity_check, min_delivery_time
from .model import new_system, replay
from .policy import clique_select, exhaustive_optimal_select, slot_objective

TOY_HAS = [{1, 2}, {3}, {1, 3, 4}]
TOY_SCHEDULES = {
    "2+3,4,1": ([{2, 3}, {4}, {1}], 9),
    "2+3,1,4": ([{2, 3}, {1}, {4}], 7),
    "1,2+3,4": ([{1}, {2, 3}, {4}], 10),
}


@dataclass
class Check:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def toy_instance(probs=(0.0, 0.0, 0.0)):
    return new_system(4, TOY_HAS, list(probs))


def check_toy_replay() -> Check:
    got = {}
    for label, (schedule, _) in TOY_SCHEDULES.items():
        final = replay(toy_instance(), schedule)
        got[label] = (sum(u.delivery_time for u in final.users), final.slot if final.complete else None)
    ok = all(got[k] == (want, 3) for k, (_, want) in TOY_SCHEDULES.items())
    return Check("toy-replay", ok, ", ".join(f"{k} -> T={t}, C={c}" for k, (t, c) in got.items()))


def check_min_delivery(seed: int = 0, trials: int = 200) -> Check:
    bad = [M for M in range(1, 51) if min_delivery_time(M, range(1, M + 1)) != M * (M - 1) // 2]
    rng = random.Random(seed)
    for _ in range(trials):
        M = rng.randint(1, 12)
        wants = sorted(rng.sample(range(1, M + 1), rng.randint(1, M)))
        state = new_system(M, [set(range(1, M + 1)) - set(wants)], [0.0])
        replayed = replay(state, [{w} for w in wants]).users[0].delivery_time
        if replayed != min_delivery_time(M, wants):
            bad.append((M, tuple(wants)))
    return Check("min-delivery", not bad, f"{50 + trials} cases, {len(bad)} mismatches")


def check_delay_identity(seed: int = 0, trials: int = 1000) -> Check:
    rng = random.Random(seed)
    failures = 0
    for _ in range(trials):
        state = random_state(rng)
        schedule = random_completing_schedule(rng, state)
        for T, W, D in delivery_time_identity_check(state, schedule):
            failures += T != W + D
    return Check("delay-identity", failures == 0, f"{trials} schedules, {failures} user mismatches")


def check_clique_equivalence(
    seed: int = 0, trials: int = 300, weight: WeightFn = delivery_weight
) -> Check:
    rng = random.Random(seed)
    failures = 0
    for _ in range(trials):
        state = random_state(rng, max_prob=0.5)
        kappa = clique_select(state, weight, budget=None)
        argmin, best = exhaustive_optimal_select(state)
        if kappa not in argmin or slot_objective(state, kappa) != best:
            failures += 1
    return Check("clique-vs-exhaustive", failures == 0, f"{trials} states, {failures} mismatches")


def check_clique_oracle(seed: int = 0, trials: int = 500, max_vertices: int = 15) -> Check:
    rng = random.Random(seed)
    failures = done = 0
    while done < trials:
        state = random_state(rng, max_prob=0.5)
        graph = build_graph(state)
        if len(graph) > max_vertices:
            continue
        done += 1
        a = max_weight_clique_exact(graph, budget=None)
        b = brute_force_clique(graph)
        exact_of = lambda v: delivery_weight_exact(state.users[v.user_id - 1], v.message, state.num_messages)
        if not a.exact or exact_weight(graph, a.vertices, exact_of) != exact_weight(graph, b.vertices, exact_of):
            failures += 1
    return Check("clique-oracle", failures == 0, f"{trials} graphs, {failures} mismatches")


def check_erasure_free_sweep() -> Check:
    config = ExperimentConfig(
        iterations=3,
        policies=("min-adt", "max-clique", "completion-standin", "ssp-h-standin", "round-robin"),
        scenario={"M": 6, "has": [[], [2], [1, 3], [5, 6]], "p": [0.0] * 4},
    )
    truncated = sum(s.truncated for s in run_monte_carlo(config))
    return Check("erasure-free-truncation", truncated == 0, f"{truncated} truncated episodes")


def run_all(weight: WeightFn = delivery_weight) -> list[Check]:
    return [
        check_toy_replay(),
        check_min_delivery(),
        check_delay_identity(),
        check_clique_equivalence(weight=weight),
        check_clique_oracle(),
        check_erasure_free_sweep(),
    ]
