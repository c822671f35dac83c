"""Planning-strategy execution loops and the random-sampling solver.

Three ways to drive an agent through an episode:

* in_advance  -- one timing vector from the initial scene, executed open-loop
* on_the_fly  -- one discrete choice (slot or no-op) per control step
* combined    -- timing vector re-planned after each executed earliest action

Agents are pure query->response objects. Timing vectors hold six values in
[0, 1]; value u maps to execution time floor(u*150)/10 seconds on the 0.1 s
grid, and exactly 1.0 is the sentinel for "never execute this slot".
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .env import ActionSpace, Episode, EpisodeRecord, NOOP, action_space_for
from .errors import MalformedResponse
from .games import load_scene
from .physics import CONTROL_STEPS, GameId, MAX_ACTIONS, Scene
from .physics.world import simulate_schedule

SENTINEL = 1.0
GRID = CONTROL_STEPS  # 150 grid times per episode


def clamp_vector(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=np.float64)
    if v.shape != (MAX_ACTIONS,):
        raise MalformedResponse(f"timing vector must have shape (6,), got {v.shape}")
    if not np.all(np.isfinite(v)):
        raise MalformedResponse("timing vector has non-finite entries")
    return np.clip(v, 0.0, 1.0)

def timing_to_step(u: float) -> int | None:
    """Grid step for a normalized timing, or None for the sentinel."""
    if u >= SENTINEL:
        return None
    return int(np.floor(u * GRID))


def step_to_timing(step: int) -> float:
    """Center-of-cell inverse of timing_to_step; exact on the grid."""
    if not 0 <= step < GRID:
        raise ValueError(f"step must be 0..{GRID - 1}, got {step}")
    return (step + 0.5) / GRID


def vector_to_schedule(vec: np.ndarray, space: ActionSpace) -> list[tuple[int, int]]:
    """(step, slot) entries for occupied, non-sentinel slots, sorted by
    ascending time with ties broken by ascending slot index."""
    entries = []
    for slot in range(MAX_ACTIONS):
        if space.slot_ids[slot] is None:
            continue
        step = timing_to_step(vec[slot])
        if step is not None:
            entries.append((step, slot))
    entries.sort()
    return entries


class Agent:
    """Base agent; subclasses implement plan() and/or act()."""

    tag = "agent"

    def plan(self, observation: np.ndarray, space: ActionSpace) -> np.ndarray:
        raise NotImplementedError

    def act(self, observation: np.ndarray, space: ActionSpace) -> np.ndarray:
        raise NotImplementedError


class ConstantAgent(Agent):
    """Always answers the same timing vector (stationary policy)."""

    tag = "constant"

    def __init__(self, vector):
        self.vector = clamp_vector(vector)

    def plan(self, observation, space):
        return self.vector


class ScriptedPlanAgent(Agent):
    """Replays a list of timing vectors, one per query; repeats the last."""

    tag = "scripted-plan"

    def __init__(self, vectors):
        self.vectors = [clamp_vector(v) for v in vectors]
        self.cursor = 0

    def plan(self, observation, space):
        v = self.vectors[min(self.cursor, len(self.vectors) - 1)]
        self.cursor += 1
        return v


class ScriptedStepAgent(Agent):
    """Emits a fixed per-step choice sequence as one-hot distributions."""

    tag = "scripted-step"

    def __init__(self, choices):
        self.choices = list(choices)
        self.cursor = 0

    def act(self, observation, space):
        choice = self.choices[self.cursor] if self.cursor < len(self.choices) else NOOP
        self.cursor += 1
        dist = np.zeros(MAX_ACTIONS + 1)
        dist[choice] = 1.0
        return dist


class NoOpAgent(Agent):
    tag = "noop"

    def plan(self, observation, space):
        return np.full(MAX_ACTIONS, SENTINEL)

    def act(self, observation, space):
        dist = np.zeros(MAX_ACTIONS + 1)
        dist[NOOP] = 1.0
        return dist


class RandomAgent(Agent):
    """In-advance random baseline.

    Each slot independently is the sentinel with probability 1/2, otherwise a
    uniform draw over the 150 grid times. Deterministic given the seed.
    """

    tag = "random"

    def __init__(self, seed: int):
        self.rng = np.random.Generator(np.random.PCG64(seed))

    def plan(self, observation, space):
        vec = np.empty(MAX_ACTIONS)
        for i in range(MAX_ACTIONS):
            if self.rng.random() < 0.5:
                vec[i] = SENTINEL
            else:
                vec[i] = step_to_timing(int(self.rng.integers(0, GRID)))
        return vec


def random_agent(seed: int) -> RandomAgent:
    return RandomAgent(seed)


class OracleAgent(Agent):
    """Plays a scene's first reference solution as a timing vector."""

    tag = "oracle"

    def __init__(self, scene: Scene, solution: int = 0):
        space = action_space_for(scene)
        vec = np.full(MAX_ACTIONS, SENTINEL)
        slot_of = {sid: i for i, sid in enumerate(space.slot_ids) if sid is not None}
        for action in scene.reference_solutions[solution].actions:
            vec[slot_of[action.body_id]] = step_to_timing(action.step)
        self.vector = vec

    def plan(self, observation, space):
        return self.vector


@dataclass
class RunResult:
    record: EpisodeRecord
    strategy: str
    agent: str
    eliminated_order: tuple[str, ...] = ()  # body ids, in elimination order

    @property
    def success(self) -> bool:
        return self.record.success

    @property
    def final_reward(self) -> float:
        return self.record.final_reward


def _episode(game: GameId | str, seed, strategy: str, agent: Agent) -> Episode:
    scene = load_scene(game)
    return Episode(scene, seed=seed, strategy=strategy, agent=agent.tag)


def run_in_advance(agent: Agent, game: GameId | str, seed: int | None = None) -> RunResult:
    """Query once on the initial observation, then execute open-loop."""
    ep = _episode(game, seed, "in_advance", agent)
    vec = clamp_vector(agent.plan(ep.observation(), ep.action_space))
    ep.queries = 1
    ep.run_schedule(vector_to_schedule(vec, ep.action_space))
    return RunResult(
        record=ep.record, strategy="in_advance", agent=agent.tag,
        eliminated_order=tuple(b for b, _ in ep.world.eliminated),
    )


def _validate_distribution(dist) -> np.ndarray:
    d = np.asarray(dist, dtype=np.float64)
    if d.shape != (MAX_ACTIONS + 1,):
        raise MalformedResponse(f"distribution must have shape (7,), got {d.shape}")
    if not np.all(np.isfinite(d)) or np.any(d < 0):
        raise MalformedResponse("distribution entries must be finite and non-negative")
    if abs(d.sum() - 1.0) > 1e-9:
        raise MalformedResponse(f"distribution sums to {d.sum()!r}, not 1")
    return d


def run_on_the_fly(
    agent: Agent,
    game: GameId | str,
    seed: int | None = None,
    mode: str = "argmax",
) -> RunResult:
    """One query per control step; argmax evaluation or seeded sampling."""
    ep = _episode(game, seed, "on_the_fly", agent)
    rng = np.random.Generator(np.random.PCG64(seed or 0)) if mode == "sample" else None
    obs = ep.observation()
    while not ep.done:
        dist = _validate_distribution(agent.act(obs, ep.action_space))
        ep.queries += 1
        if mode == "argmax":
            choice = int(np.argmax(dist))  # ties resolve to the lowest index
        elif mode == "sample":
            choice = int(rng.choice(MAX_ACTIONS + 1, p=dist / dist.sum()))
        else:
            raise ValueError(f"unknown mode {mode!r}")
        outcome = ep.step(choice if choice != NOOP else NOOP)
        obs = outcome.observation
    return RunResult(
        record=ep.record, strategy="on_the_fly", agent=agent.tag,
        eliminated_order=tuple(b for b, _ in ep.world.eliminated),
    )


def run_combined(agent: Agent, game: GameId | str, seed: int | None = None) -> RunResult:
    """Plan, wait for the earliest pending action, execute, re-plan.

    A stationary policy reproduces run_in_advance exactly. If a re-plan puts
    the earliest action in the past, it executes at the current step.
    """
    ep = _episode(game, seed, "combined", agent)
    obs = ep.observation()
    while not ep.done:
        vec = clamp_vector(agent.plan(obs, ep.action_space))
        ep.queries += 1
        pending = []
        for step, slot in vector_to_schedule(vec, ep.action_space):
            body_id = ep.action_space.slot_ids[slot]
            if ep.world.alive[ep.world.body_index(body_id)]:
                pending.append((step, slot))
        if not pending:
            break  # all-sentinel (or nothing left to do): coast to the end
        step_target, slot = pending[0]
        target = max(step_target, ep.world.step_count)
        while not ep.done and ep.world.step_count < target:
            ep.advance()
        if ep.done:
            break
        ep.queue_action(slot)
        obs = ep.observation()
    while not ep.done:
        ep.advance()
    return RunResult(
        record=ep.record, strategy="combined", agent=agent.tag,
        eliminated_order=tuple(b for b, _ in ep.world.eliminated),
    )


RUNNERS = {
    "in_advance": run_in_advance,
    "on_the_fly": run_on_the_fly,
    "combined": run_combined,
}


@dataclass
class SampledSequence:
    timings: tuple[int, ...]  # grid step per occupied slot, -1 = never
    success: bool
    reward: float

    def timing_vector(self) -> list[float]:
        return [SENTINEL if t < 0 else step_to_timing(t) for t in self.timings]


@dataclass
class SampleResult:
    game: str
    target_distinct: int
    solutions: list[SampledSequence] = field(default_factory=list)
    failures: list[SampledSequence] = field(default_factory=list)
    iterations_used: int = 0
    exhausted: bool = False


def sample_solutions(
    game: GameId | str,
    target_distinct: int,
    budget: int,
    seed: int,
    keep_failures: int | None = None,
) -> SampleResult:
    """Draw random timing vectors until `target_distinct` distinct successful
    sequences are found or the budget runs out.

    Distinctness is exact tuple equality of the grid timings over occupied
    slots. iterations_used is the difficulty statistic: the larger it is, the
    harder the game is to solve by blind sampling.
    """
    if target_distinct < 1:
        raise ValueError("target_distinct must be >= 1")
    scene = load_scene(game)
    space = action_space_for(scene)
    occupied = [i for i in range(MAX_ACTIONS) if space.slot_ids[i] is not None]
    if keep_failures is None:
        keep_failures = target_distinct
    rng = np.random.Generator(np.random.PCG64(seed))
    result = SampleResult(game=str(scene.game_id), target_distinct=target_distinct)
    seen: set[tuple[int, ...]] = set()
    for it in range(budget):
        steps = np.empty(MAX_ACTIONS, np.int64)
        for i in range(MAX_ACTIONS):
            if rng.random() < 0.5:
                steps[i] = -1
            else:
                steps[i] = rng.integers(0, GRID)
        key = tuple(int(steps[i]) for i in occupied)
        schedule = [(int(steps[i]), space.slot_ids[i]) for i in occupied if steps[i] >= 0]
        n_steps, success, elims = simulate_schedule(scene, schedule)
        reward_tenths = (10000 if success else 0) - 100 * elims - n_steps
        seq = SampledSequence(timings=key, success=success, reward=reward_tenths / 10.0)
        result.iterations_used = it + 1
        if success:
            if key not in seen:
                seen.add(key)
                result.solutions.append(seq)
                if len(result.solutions) >= target_distinct:
                    return result
        elif len(result.failures) < keep_failures:
            result.failures.append(seq)
    result.exhausted = True
    return result


def export_samples(path, result: SampleResult) -> None:
    """JSON-lines dataset: {game_id, timing_vector, success, reward}."""
    import json

    with open(path, "a", encoding="utf-8") as f:
        for seq in list(result.solutions) + list(result.failures):
            f.write(
                json.dumps(
                    {
                        "game_id": result.game,
                        "timing_vector": seq.timing_vector(),
                        "success": seq.success,
                        "reward": seq.reward,
                    }
                )
                + "\n"
            )
