"""Episode runner, Monte Carlo summaries and parameter sweeps."""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .channel import ERASURE_MODES, RNG_NAME, SeedSpec, draw_erasures, sample_erasure_probs
from .clique import DEFAULT_BUDGET
from .model import ScenarioError, SystemState, new_system, step
from .policy import POLICIES, Selector, make_policy

CSV_COLUMNS = (
    "axis",
    "axis_value",
    "policy",
    "mean_delivery",
    "ci_delivery",
    "mean_completion",
    "ci_completion",
    "episodes",
    "truncated",
)
AXES = ("U", "M", "P")
INITIAL_MODES = ("empty", "uncoded")
Z_95 = 1.959963984540054


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    """One simulated setting.

    ``initial="empty"`` starts every user with an empty Has set;
    ``"uncoded"`` first sends each message once, uncoded, through the channel
    and starts from whatever survived (those slots are not counted).  A
    ``scenario`` (``{"M", "has", "p"}``) pins the starting state and overrides
    ``U``, ``M``, ``P`` and ``initial``.
    """

    U: int = 10
    M: int = 10
    P: float = 0.25
    erasure_mode: str = "heterogeneous"
    policies: tuple[str, ...] = ("min-adt", "max-clique", "completion-standin", "ssp-h-standin")
    iterations: int = 100
    seed: int = 0
    slot_cap: int | None = None
    initial: str = "empty"
    budget: int | None = DEFAULT_BUDGET
    scenario: dict | None = None

    def __post_init__(self) -> None:
        if self.scenario is not None:
            state = SystemState.from_dict(self.scenario)
            object.__setattr__(self, "U", state.num_users)
            object.__setattr__(self, "M", state.num_messages)
        object.__setattr__(self, "policies", tuple(self.policies))
        self.validate()

    def validate(self) -> None:
        if self.U < 1 or self.M < 1:
            raise ConfigError(f"need U >= 1 and M >= 1, got U={self.U}, M={self.M}")
        if self.iterations < 1:
            raise ConfigError(f"iterations must be >= 1, got {self.iterations}")
        if self.slot_cap is not None and self.slot_cap < self.M:
            raise ConfigError(f"slot_cap {self.slot_cap} smaller than M={self.M}")
        if self.erasure_mode not in ERASURE_MODES:
            raise ConfigError(f"erasure_mode must be one of {ERASURE_MODES}")
        if self.initial not in INITIAL_MODES:
            raise ConfigError(f"initial must be one of {INITIAL_MODES}")
        if self.scenario is None and not 0.0 < self.P <= 0.9:
            raise ConfigError(f"P={self.P} outside (0, 0.9]")
        unknown = [p for p in self.policies if p not in POLICIES]
        if unknown or not self.policies:
            raise ConfigError(f"unknown policies {unknown}; known: {', '.join(POLICIES)}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["policies"] = list(self.policies)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentConfig:
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown config keys {sorted(extra)}")
        try:
            return cls(**data)
        except (TypeError, ScenarioError) as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def load(cls, path: str | Path) -> ExperimentConfig:
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: expected a JSON object")
        return cls.from_dict(data)


PRESETS = {
    "paper-scale": ExperimentConfig(U=30, M=30, P=0.25, iterations=200),
    "small": ExperimentConfig(U=10, M=10, P=0.25, iterations=500),
    "tiny": ExperimentConfig(U=4, M=5, P=0.25, iterations=50),
}


@dataclass
class RunRecord:
    policy: str
    seed: int
    episode_index: int
    overall_delivery_time: int
    completion_time: int | None
    delivery_times: list[int]
    delays: list[int]
    slots: int
    truncated: bool
    erasure_probs: list[float] = field(default_factory=list)
    trace: list[dict] | None = None


def initial_state(config: ExperimentConfig, episode_index: int) -> SystemState:
    streams = SeedSpec(config.seed, episode_index).streams()
    return _initial_state(config, streams)


def _initial_state(config: ExperimentConfig, streams) -> SystemState:
    if config.scenario is not None:
        return SystemState.from_dict(config.scenario)
    probs = sample_erasure_probs(config.U, config.P, config.erasure_mode, streams.probs)
    if config.initial == "empty":
        has = [()] * config.U
    else:
        draws = streams.initial.random((config.U, config.M))
        has = [
            [m + 1 for m in range(config.M) if draws[u, m] >= probs[u]] for u in range(config.U)
        ]
    return new_system(config.M, has, probs)


def default_slot_cap(num_messages: int, erasure_probs: Sequence[float]) -> int:
    return math.ceil(20 * num_messages / (1.0 - max(erasure_probs)))


def run_episode(
    config: ExperimentConfig,
    policy: str | Selector,
    episode_index: int,
    trace: bool = False,
) -> RunRecord:
    """Run one episode; ``policy`` is a registry name or a ready selector."""
    streams = SeedSpec(config.seed, episode_index).streams()
    state = _initial_state(config, streams)
    if isinstance(policy, str):
        select = make_policy(policy, config.budget)
    else:
        select, policy = policy, type(policy).__name__
    cap = config.slot_cap or default_slot_cap(state.num_messages, state.erasure_probs)
    steps: list[dict] | None = [] if trace else None
    while not state.complete and state.slot < cap:
        kappa = select(state)
        erased = draw_erasures(state, streams.erasures)
        before = [u.delivery_time for u in state.users]
        state = step(state, kappa, erased)
        if steps is not None:
            steps.append(
                {
                    "slot": state.slot,
                    "combination": sorted(kappa),
                    "erased": erased,
                    "delivery_increments": [
                        u.delivery_time - b for u, b in zip(state.users, before)
                    ],
                }
            )
    done = state.complete
    return RunRecord(
        policy=policy,
        seed=config.seed,
        episode_index=episode_index,
        overall_delivery_time=sum(u.delivery_time for u in state.users),
        completion_time=state.slot if done else None,
        delivery_times=[u.delivery_time for u in state.users],
        delays=[u.cum_delay for u in state.users],
        slots=state.slot,
        truncated=not done,
        erasure_probs=list(state.erasure_probs),
        trace=steps,
    )


def _threads() -> int:
    cpus = os.cpu_count() or 1
    try:
        cap = int(os.environ.get("IDNC_THREADS", cpus))
    except ValueError:
        cap = cpus
    return max(1, min(cap, cpus))


def _run_batch(args: tuple[ExperimentConfig, str, Sequence[int]]) -> list[RunRecord]:
    config, policy, indices = args
    return [run_episode(config, policy, i) for i in indices]


def run_episodes(
    config: ExperimentConfig, policy: str, workers: int | None = None
) -> list[RunRecord]:
    """All ``config.iterations`` episodes of one policy, ordered by episode index.

    ``workers`` defaults to the CPU count capped by ``IDNC_THREADS``.
    """
    indices = list(range(config.iterations))
    workers = workers or _threads()
    if workers == 1 or len(indices) < 2 * workers:
        return _run_batch((config, policy, indices))
    chunks = [indices[k::workers] for k in range(workers)]
    with ProcessPoolExecutor(workers) as pool:
        parts = list(pool.map(_run_batch, [(config, policy, c) for c in chunks]))
    records = [r for part in parts for r in part]
    return sorted(records, key=lambda r: r.episode_index)


@dataclass
class Summary:
    policy: str
    mean_delivery: float
    ci_delivery: float
    mean_completion: float
    ci_completion: float
    episodes: int
    truncated: int


def mean_ci(values: Sequence[float]) -> tuple[float, float]:
    """Mean and 95% normal-approximation half-width."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return math.nan, math.nan
    if arr.size == 1:
        return float(arr[0]), 0.0
    return float(arr.mean()), float(Z_95 * arr.std(ddof=1) / math.sqrt(arr.size))


def summarize(policy: str, records: Sequence[RunRecord]) -> Summary:
    kept = [r for r in records if not r.truncated]
    md, cd = mean_ci([r.overall_delivery_time for r in kept])
    mc, cc = mean_ci([r.completion_time for r in kept])
    return Summary(policy, md, cd, mc, cc, len(kept), len(records) - len(kept))


def run_monte_carlo(config: ExperimentConfig) -> list[Summary]:
    """Per-policy summaries; episode ``i`` sees the same erasure draws under every policy."""
    return [summarize(p, run_episodes(config, p)) for p in config.policies]


def _with_axis(config: ExperimentConfig, axis: str, value) -> ExperimentConfig:
    if axis == "U":
        return replace(config, U=int(value))
    if axis == "M":
        return replace(config, M=int(value))
    if axis == "P":
        return replace(config, P=float(value))
    raise ConfigError(f"axis must be one of {AXES}, got {axis!r}")


def sweep(config: ExperimentConfig, axis: str, values: Sequence) -> list[dict]:
    if not values:
        raise ConfigError("sweep needs at least one axis value")
    if axis not in AXES:
        raise ConfigError(f"axis must be one of {AXES}, got {axis!r}")
    if config.scenario is not None:
        raise ConfigError("cannot sweep a fixed scenario")
    rows = []
    for value in values:
        for s in run_monte_carlo(_with_axis(config, axis, value)):
            rows.append({"axis": axis, "axis_value": value, **asdict(s)})
    return rows


def emit_csv(rows: Sequence[dict], path: str | Path) -> None:
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
            writer.writeheader()
            for row in rows:
                writer.writerow({k: row[k] for k in CSV_COLUMNS})
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


def read_csv(path: str | Path) -> list[dict]:
    ints = {"episodes", "truncated"}
    floats = {"mean_delivery", "ci_delivery", "mean_completion", "ci_completion"}
    rows = []
    with Path(path).open(newline="") as fh:
        for raw in csv.DictReader(fh):
            row: dict = dict(raw)
            for k in ints:
                row[k] = int(row[k])
            for k in floats:
                row[k] = float(row[k])
            row["axis_value"] = float(row["axis_value"]) if row["axis"] == "P" else int(row["axis_value"])
            rows.append(row)
    return rows


def manifest(config: ExperimentConfig, **extra) -> dict:
    return {
        "config": config.to_dict(),
        "seed": config.seed,
        "code_version": __version__,
        "rng": RNG_NAME,
        **extra,
    }


def write_manifest(path: str | Path, config: ExperimentConfig, **extra) -> None:
    Path(path).write_text(json.dumps(manifest(config, **extra), indent=2) + "\n")
