"""Broadcast state machine for ordered messages under instantly decodable coding.

Messages are numbered ``1..M`` and must reach each user's application in
order.  A user's *Has* set holds every message it has decoded; its *Wants*
set is the complement and is never stored.  The *Delivered* set is the
longest prefix ``{1..j}`` contained in the Has set.

Delivery time is booked after a slot's reception has been applied: an
incomplete user pays one unit per message that is still undelivered once the
slot is over, so the slot that completes a user costs nothing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence


class ScenarioError(ValueError):
    """Raised for malformed system descriptions."""


def combination(*messages: int) -> frozenset[int]:
    if not messages:
        raise ValueError("a combination needs at least one message")
    return frozenset(messages)


@dataclass(frozen=True)
class UserState:
    user_id: int
    num_messages: int
    has: frozenset[int]
    erasure_prob: float
    cum_delay: int = 0
    delivery_time: int = 0

    @property
    def wants(self) -> tuple[int, ...]:
        return tuple(m for m in range(1, self.num_messages + 1) if m not in self.has)

    @property
    def complete(self) -> bool:
        return len(self.has) == self.num_messages

    @property
    def delivered_count(self) -> int:
        first = first_wanted(self)
        return self.num_messages if first is None else first - 1

    @property
    def undelivered(self) -> int:
        return self.num_messages - self.delivered_count


@dataclass(frozen=True)
class SystemState:
    num_messages: int
    users: tuple[UserState, ...]
    slot: int = 0

    @property
    def num_users(self) -> int:
        return len(self.users)

    @property
    def complete(self) -> bool:
        return all(u.complete for u in self.users)

    @property
    def erasure_probs(self) -> tuple[float, ...]:
        return tuple(u.erasure_prob for u in self.users)

    def incomplete_users(self) -> list[UserState]:
        return [u for u in self.users if not u.complete]

    def to_dict(self) -> dict:
        return {
            "M": self.num_messages,
            "has": [sorted(u.has) for u in self.users],
            "p": [u.erasure_prob for u in self.users],
        }

    @classmethod
    def from_dict(cls, data: dict) -> SystemState:
        try:
            return new_system(int(data["M"]), data["has"], data["p"])
        except (KeyError, TypeError) as exc:
            raise ScenarioError(f"bad scenario record: {exc}") from exc


def new_system(
    num_messages: int,
    has_sets: Sequence[Iterable[int]],
    erasure_probs: Sequence[float],
) -> SystemState:
    if num_messages < 1:
        raise ScenarioError("need at least one message")
    if len(has_sets) != len(erasure_probs):
        raise ScenarioError(
            f"{len(has_sets)} has-sets but {len(erasure_probs)} erasure probabilities"
        )
    if not has_sets:
        raise ScenarioError("need at least one user")
    users = []
    for idx, (has, p) in enumerate(zip(has_sets, erasure_probs), start=1):
        has = frozenset(int(m) for m in has)
        bad = [m for m in has if not 1 <= m <= num_messages]
        if bad:
            raise ScenarioError(f"user {idx}: message ids {sorted(bad)} outside 1..{num_messages}")
        p = float(p)
        if not 0.0 <= p < 1.0:
            raise ScenarioError(f"user {idx}: erasure probability {p} not in [0, 1)")
        users.append(UserState(idx, num_messages, has, p))
    return SystemState(num_messages, tuple(users))


def first_wanted(u: UserState) -> int | None:
    for m in range(1, u.num_messages + 1):
        if m not in u.has:
            return m
    return None


def kth_wanted(u: UserState, k: int) -> int:
    wants = u.wants
    if not 1 <= k <= len(wants):
        raise IndexError(f"user {u.user_id} has {len(wants)} wanted messages, asked for #{k}")
    return wants[k - 1]


def is_instantly_decodable(u: UserState, kappa: Iterable[int]) -> tuple[bool, int | None]:
    """Return ``(True, m)`` when ``kappa`` carries exactly one message ``m`` that ``u`` lacks."""
    unknown = [m for m in kappa if m not in u.has]
    if len(unknown) != 1:
        return False, None
    m = unknown[0]
    assert all(x in u.has for x in kappa if x != m)
    return True, m


def apply_reception(u: UserState, kappa: Iterable[int]) -> UserState:
    """Apply a non-erased reception of ``kappa`` to an incomplete user."""
    if u.complete:
        raise ValueError(f"user {u.user_id} is already complete")
    kappa = frozenset(kappa)
    head = first_wanted(u)
    ok, m = is_instantly_decodable(u, kappa)
    if ok:
        has = u.has | {m}
        delay = m - head
    else:
        has = u.has
        delay = u.num_messages - head + 1
    updated = replace(u, has=has, cum_delay=u.cum_delay + delay)
    return replace(updated, delivery_time=updated.delivery_time + updated.undelivered)


def step(state: SystemState, kappa: Iterable[int], erased: Sequence[bool]) -> SystemState:
    """Advance one slot: broadcast ``kappa``; ``erased[i]`` marks a loss at user ``i+1``."""
    if len(erased) != state.num_users:
        raise ValueError(f"expected {state.num_users} erasure flags, got {len(erased)}")
    kappa = frozenset(kappa)
    users = []
    for u, lost in zip(state.users, erased):
        if u.complete:
            users.append(u)
        elif lost:
            users.append(replace(u, delivery_time=u.delivery_time + u.undelivered))
        else:
            users.append(apply_reception(u, kappa))
    return SystemState(state.num_messages, tuple(users), state.slot + 1)


def replay(state: SystemState, schedule: Iterable[Iterable[int]]) -> SystemState:
    """Erasure-free replay of a fixed schedule."""
    clear = [False] * state.num_users
    for kappa in schedule:
        state = step(state, kappa, clear)
    return state


def load_scenario(path: str | Path) -> SystemState:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ScenarioError(f"{path}: {exc}") from exc
    return SystemState.from_dict(data)


def save_scenario(state: SystemState, path: str | Path) -> None:
    Path(path).write_text(json.dumps(state.to_dict(), indent=2) + "\n")
