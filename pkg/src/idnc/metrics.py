"""Closed-form delivery-time and delivery-delay quantities."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .model import SystemState, UserState, first_wanted, is_instantly_decodable, step


def min_delivery_time(num_messages: int, wants: Sequence[int]) -> int:
    """Delivery time of the in-order sequential schedule over ``wants``.

    Sending the wanted messages one at a time in increasing order, the slot
    delivering ``w_k`` leaves ``M - w_{k+1} + 1`` messages undelivered, and the
    last slot leaves none.  For a full Wants set this is ``M(M-1)/2``.
    """
    wants = sorted(wants)
    return sum(num_messages - w + 1 for w in wants[1:])


def delay_increment(u: UserState, kappa: Iterable[int], received: bool = True) -> int:
    if u.complete or not received:
        return 0
    head = first_wanted(u)
    ok, m = is_instantly_decodable(u, kappa)
    if ok:
        return m - head
    return u.num_messages - head + 1


def anticipated_delivery_time(u: UserState, min_delivery: int, exact: bool = False):
    """Anticipated delivery time ``(W + D) / (1 - p)``.

    With ``exact=True`` the result is a :class:`~fractions.Fraction` built from
    the exact binary value of ``p``.
    """
    if exact:
        return Fraction(min_delivery + u.cum_delay) / (1 - Fraction(u.erasure_prob))
    return (min_delivery + u.cum_delay) / (1.0 - u.erasure_prob)


def overall_delivery_time(delivery_times: Iterable[int]) -> int:
    return sum(delivery_times)


@dataclass
class DelayLedger:
    """Per-user delay bookkeeping for one episode.

    ``min_delivery`` is frozen at construction from each user's initial Wants
    set; ``anticipated`` is derived on every access.
    """

    min_delivery: list[int]
    erasure_probs: list[float]
    cum_delay: list[int]
    realized_delivery: list[int]

    @classmethod
    def start(cls, state: SystemState) -> DelayLedger:
        return cls(
            min_delivery=[min_delivery_time(state.num_messages, u.wants) for u in state.users],
            erasure_probs=[u.erasure_prob for u in state.users],
            cum_delay=[u.cum_delay for u in state.users],
            realized_delivery=[u.delivery_time for u in state.users],
        )

    def update(self, state: SystemState) -> None:
        self.cum_delay = [u.cum_delay for u in state.users]
        self.realized_delivery = [u.delivery_time for u in state.users]

    @property
    def anticipated(self) -> list[float]:
        return [
            (w + d) / (1.0 - p)
            for w, d, p in zip(self.min_delivery, self.cum_delay, self.erasure_probs)
        ]


class IncompleteScheduleError(ValueError):
    """The schedule leaves some user incomplete, so the identity cannot be checked."""

    def __init__(self, user_ids: list[int]):
        super().__init__(f"schedule does not complete users {user_ids}")
        self.user_ids = user_ids


def delivery_time_identity_check(
    state: SystemState, schedule: Iterable[Iterable[int]]
) -> list[tuple[int, int, int]]:
    """Replay ``schedule`` without erasures; return ``(T, W, D)`` per user.

    ``T`` is the realized delivery time, ``W`` the minimum delivery time of the
    user's initial Wants set and ``D`` the accumulated delivery delay.  For every
    completing schedule ``T == W + D``.
    """
    base = [min_delivery_time(state.num_messages, u.wants) for u in state.users]
    t0 = [u.delivery_time for u in state.users]
    d0 = [u.cum_delay for u in state.users]
    clear = [False] * state.num_users
    for kappa in schedule:
        state = step(state, kappa, clear)
    stuck = [u.user_id for u in state.users if not u.complete]
    if stuck:
        raise IncompleteScheduleError(stuck)
    return [
        (u.delivery_time - t, w, u.cum_delay - d)
        for u, w, t, d in zip(state.users, base, t0, d0)
    ]
