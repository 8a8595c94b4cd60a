"""Random small instances and schedules for self-checks and tests."""

from __future__ import annotations

import random

from .model import SystemState, new_system, step


def random_state(
    rng: random.Random,
    max_users: int = 4,
    max_messages: int = 5,
    max_prob: float = 0.0,
    ensure_incomplete: bool = True,
) -> SystemState:
    U = rng.randint(1, max_users)
    M = rng.randint(1, max_messages)
    has = [{m for m in range(1, M + 1) if rng.random() < 0.5} for _ in range(U)]
    if ensure_incomplete and all(len(h) == M for h in has):
        has[rng.randrange(U)].discard(rng.randint(1, M))
    probs = [rng.uniform(0.0, max_prob) if max_prob > 0 else 0.0 for _ in range(U)]
    return new_system(M, has, probs)


def random_completing_schedule(
    rng: random.Random, state: SystemState, max_len: int = 200
) -> list[frozenset[int]]:
    """Random combinations until every user completes (erasure-free).

    Every third pick is forced to be a single message someone still wants so
    the schedule always terminates.
    """
    M = state.num_messages
    clear = [False] * state.num_users
    schedule = []
    while not state.complete:
        if len(schedule) >= max_len:
            raise RuntimeError("schedule did not complete")
        if rng.random() < 1 / 3:
            wanted = sorted(set().union(*(u.wants for u in state.users)))
            kappa = frozenset({rng.choice(wanted)})
        else:
            kappa = frozenset(m for m in range(1, M + 1) if rng.random() < 0.4) or frozenset(
                {rng.randint(1, M)}
            )
        schedule.append(kappa)
        state = step(state, kappa, clear)
    return schedule
