"""Independent Bernoulli erasure channel with per-episode reproducible streams."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import SystemState

RNG_NAME = "numpy.random.PCG64 seeded by SeedSequence(master_seed, spawn_key=(episode_index,))"

HETEROGENEOUS_HALF_WIDTH = 0.15
PROB_CLIP = (0.01, 0.9)
ERASURE_MODES = ("homogeneous", "heterogeneous")


@dataclass(frozen=True)
class SeedSpec:
    master_seed: int
    episode_index: int

    def streams(self) -> "EpisodeStreams":
        root = np.random.SeedSequence(self.master_seed, spawn_key=(self.episode_index,))
        probs, initial, erasures = root.spawn(3)
        return EpisodeStreams(
            probs=np.random.Generator(np.random.PCG64(probs)),
            initial=np.random.Generator(np.random.PCG64(initial)),
            erasures=np.random.Generator(np.random.PCG64(erasures)),
        )


@dataclass
class EpisodeStreams:
    """Separate generators so that policy choices never shift the erasure draws."""

    probs: np.random.Generator
    initial: np.random.Generator
    erasures: np.random.Generator


def draw_erasures(state: SystemState, stream: np.random.Generator) -> list[bool]:
    # One uniform per user per slot, completed users included, so slot t uses
    # the same draws whatever the policy did before.
    draws = stream.random(state.num_users)
    return [bool(x < u.erasure_prob) for x, u in zip(draws, state.users)]


def sample_erasure_probs(
    num_users: int, mean_prob: float, mode: str, stream: np.random.Generator
) -> list[float]:
    if not 0.0 < mean_prob <= 0.9:
        raise ValueError(f"average erasure probability {mean_prob} outside (0, 0.9]")
    if mode == "homogeneous":
        return [float(mean_prob)] * num_users
    if mode == "heterogeneous":
        lo, hi = mean_prob - HETEROGENEOUS_HALF_WIDTH, mean_prob + HETEROGENEOUS_HALF_WIDTH
        raw = stream.uniform(lo, hi, size=num_users)
        return [float(x) for x in np.clip(raw, *PROB_CLIP)]
    raise ValueError(f"unknown erasure mode {mode!r}; expected one of {ERASURE_MODES}")
