"""IDNC graph: one vertex per (user, wanted message), edges where a two-message
XOR is instantly decodable for both endpoints."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .model import SystemState, UserState, is_instantly_decodable

WeightFn = Callable[[UserState, int, int], float]


def delivery_weight(u: UserState, m: int, num_messages: int) -> float:
    """Vertex weight ``(M - m + 1) / (1 - p_u)`` used by the Min-ADT policy."""
    return (num_messages - m + 1) / (1.0 - u.erasure_prob)


def delivery_weight_exact(u: UserState, m: int, num_messages: int) -> Fraction:
    return Fraction(num_messages - m + 1) / (1 - Fraction(u.erasure_prob))


def unit_weight(u: UserState, m: int, num_messages: int) -> float:
    return 1.0


@dataclass(frozen=True)
class Vertex:
    user_id: int
    message: int
    weight: float

    @property
    def key(self) -> tuple[int, int]:
        return (self.user_id, self.message)


@dataclass(frozen=True)
class IdncGraph:
    """Vertices in user-major, message-minor order with bitmask adjacency.

    ``adjacency[i]`` is an int whose bit ``j`` is set iff vertices ``i`` and
    ``j`` are adjacent.
    """

    num_messages: int
    vertices: tuple[Vertex, ...]
    adjacency: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def weights(self) -> list[float]:
        return [v.weight for v in self.vertices]

    def adjacent(self, i: int, j: int) -> bool:
        return bool(self.adjacency[i] >> j & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [
            (i, j)
            for i in range(len(self.vertices))
            for j in range(i + 1, len(self.vertices))
            if self.adjacent(i, j)
        ]

    def index_of(self, user_id: int, message: int) -> int:
        for i, v in enumerate(self.vertices):
            if v.key == (user_id, message):
                return i
        raise KeyError((user_id, message))

    def is_clique(self, indices: Iterable[int]) -> bool:
        idx = list(indices)
        return all(self.adjacent(a, b) for k, a in enumerate(idx) for b in idx[k + 1:])

    def reweighted(self, weights: Iterable[float]) -> IdncGraph:
        vertices = tuple(
            Vertex(v.user_id, v.message, w) for v, w in zip(self.vertices, weights, strict=True)
        )
        return IdncGraph(self.num_messages, vertices, self.adjacency)

    def subgraph(self, keep: Iterable[int]) -> IdncGraph:
        keep = sorted(set(keep))
        remap = {old: new for new, old in enumerate(keep)}
        adjacency = []
        for old in keep:
            mask = 0
            for other in keep:
                if self.adjacent(old, other):
                    mask |= 1 << remap[other]
            adjacency.append(mask)
        return IdncGraph(self.num_messages, tuple(self.vertices[i] for i in keep), tuple(adjacency))

    def to_dot(self) -> str:
        lines = ["graph idnc {"]
        for i, v in enumerate(self.vertices):
            lines.append(f'  v{i} [label="u{v.user_id}_m{v.message} w={v.weight:g}"];')
        for i, j in self.edges():
            lines.append(f"  v{i} -- v{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_graph(state: SystemState, weight: WeightFn = delivery_weight) -> IdncGraph:
    M = state.num_messages
    users = {u.user_id: u for u in state.users}
    vertices = [
        Vertex(u.user_id, m, weight(u, m, M))
        for u in state.users
        if not u.complete
        for m in u.wants
    ]
    n = len(vertices)
    adjacency = [0] * n
    for i in range(n):
        a = vertices[i]
        has_a = users[a.user_id].has
        for j in range(i + 1, n):
            b = vertices[j]
            if a.user_id == b.user_id:
                continue
            if a.message == b.message or (a.message in users[b.user_id].has and b.message in has_a):
                adjacency[i] |= 1 << j
                adjacency[j] |= 1 << i
    return IdncGraph(M, tuple(vertices), tuple(adjacency))


def clique_to_combination(
    graph: IdncGraph, clique: Iterable[int], state: SystemState | None = None
) -> tuple[frozenset[int], frozenset[int]]:
    """Map a clique (vertex indices) to its XOR combination and targeted users.

    When ``state`` is given, every targeted user is checked to decode exactly
    its clique message.
    """
    clique = list(clique)
    if not graph.is_clique(clique):
        raise ValueError(f"vertices {clique} do not form a clique")
    kappa = frozenset(graph.vertices[i].message for i in clique)
    targets = frozenset(graph.vertices[i].user_id for i in clique)
    if state is not None:
        users = {u.user_id: u for u in state.users}
        for i in clique:
            v = graph.vertices[i]
            ok, m = is_instantly_decodable(users[v.user_id], kappa)
            assert ok and m == v.message, f"user {v.user_id} cannot decode {v.message} from {set(kappa)}"
    return kappa, targets
