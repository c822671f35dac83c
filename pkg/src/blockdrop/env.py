"""Episode state machine: observations, actions, rewards, records, replay.

Rewards follow the scoring rule: -1 per second of play (accrued as -0.1 per
control step), -10 per gray block eliminated, +1000 on success. Accounting is
done in integer tenths so the reward identity

    final_reward = 1000*success - 10*eliminations - 0.1*steps

holds exactly, with no float drift, over any episode.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AlreadyEliminated,
    DigestMismatch,
    EpisodeOver,
    NotEliminable,
    UnknownBody,
)
from .games import load_scene
from .physics import (
    CONTROL_STEPS,
    GameId,
    MAX_ACTIONS,
    ROLE_BLACK,
    ROLE_GRAY,
    Scene,
    World,
)
from .physics.types import Ball
from .physics.world import RUNNING

NOOP = 6  # discrete action index meaning "do nothing this step"

OBS_ROWS = 12
OBS_COLS = 9


@dataclass(frozen=True)
class ActionSpace:
    """Six elimination slots bound to the scene's gray blocks, in scene order.

    Unoccupied slots are padding and carry the sentinel position (-1, -1).
    """

    slot_ids: tuple[str | None, ...]  # length 6, None = padding
    positions: tuple[tuple[float, float], ...]

    @property
    def occupied(self) -> int:
        return sum(1 for s in self.slot_ids if s is not None)

    def as_matrix(self) -> np.ndarray:
        return np.array(self.positions, dtype=np.float64)


def action_space_for(scene: Scene) -> ActionSpace:
    ids: list[str | None] = []
    pos: list[tuple[float, float]] = []
    for b in scene.bodies:
        if b.role == ROLE_GRAY:
            ids.append(b.id)
            if isinstance(b.shape, Ball):
                pos.append(b.shape.center)
            else:
                a, bb = b.shape.a, b.shape.b
                pos.append(((a[0] + bb[0]) / 2.0, (a[1] + bb[1]) / 2.0))
    while len(ids) < MAX_ACTIONS:
        ids.append(None)
        pos.append((-1.0, -1.0))
    return ActionSpace(slot_ids=tuple(ids), positions=tuple(pos))


def encode_observation(world: World) -> np.ndarray:
    """12x9 matrix; row i encodes body i in scene order.

    Columns: [ax, ay, bx, by, radius, eliminable, fixed, jointed, springed].
    Balls duplicate their center into both endpoint pairs. Eliminated bodies
    and rows past the body count are all zeros.
    """
    obs = np.zeros((OBS_ROWS, OBS_COLS), dtype=np.float64)
    pk = world._pack
    springed = set()
    for k in range(len(pk.sa)):
        springed.add(int(pk.sa[k]))
        if pk.sb[k] >= 0:
            springed.add(int(pk.sb[k]))
    for i, body in enumerate(world.scene.bodies):
        if not world.alive[i]:
            continue
        if isinstance(body.shape, Ball):
            x, y = world.px[i], world.py[i]
            obs[i, 0:4] = (x, y, x, y)
            obs[i, 4] = body.shape.radius
        else:
            ax, ay, bx, by = world.bar_endpoints(i)
            obs[i, 0:4] = (ax, ay, bx, by)
            obs[i, 4] = body.shape.thickness / 2.0
        obs[i, 5] = 1.0 if body.role == ROLE_GRAY else 0.0
        obs[i, 6] = 1.0 if body.role in (ROLE_GRAY, ROLE_BLACK) else 0.0
        obs[i, 7] = 1.0 if pk.mob[i] == 2 else 0.0
        obs[i, 8] = 1.0 if i in springed else 0.0
    return obs


@dataclass
class StepOutcome:
    observation: np.ndarray
    reward: float
    done: bool
    info: dict


@dataclass
class EpisodeRecord:
    """Replayable event log for one episode."""

    game: str
    seed: int | None = None
    strategy: str = ""
    agent: str = ""
    actions: list[tuple[int, int]] = field(default_factory=list)  # (step, slot)
    step_rewards_tenths: list[int] = field(default_factory=list)
    final_reward_tenths: int = 0
    success: bool = False
    digests: list[str] = field(default_factory=list)  # initial + one per step

    @property
    def final_reward(self) -> float:
        return self.final_reward_tenths / 10.0

    def to_json(self) -> str:
        return json.dumps(
            {
                "game": self.game,
                "seed": self.seed,
                "strategy": self.strategy,
                "agent": self.agent,
                "actions": [list(a) for a in self.actions],
                "step_rewards_tenths": self.step_rewards_tenths,
                "final_reward_tenths": self.final_reward_tenths,
                "final_reward": self.final_reward,
                "success": self.success,
                "digests": self.digests,
            }
        )

    @classmethod
    def from_json(cls, line: str) -> "EpisodeRecord":
        d = json.loads(line)
        return cls(
            game=d["game"],
            seed=d.get("seed"),
            strategy=d.get("strategy", ""),
            agent=d.get("agent", ""),
            actions=[(int(a[0]), int(a[1])) for a in d["actions"]],
            step_rewards_tenths=[int(r) for r in d["step_rewards_tenths"]],
            final_reward_tenths=int(d["final_reward_tenths"]),
            success=bool(d["success"]),
            digests=list(d["digests"]),
        )


class Episode:
    """One live episode over a World, with reward accounting and recording."""

    def __init__(self, scene: Scene, seed: int | None = None, strategy: str = "", agent: str = ""):
        self.scene = scene
        self.world = World(scene)
        self.action_space = action_space_for(scene)
        self._slot_index = {
            sid: i for i, sid in enumerate(self.action_space.slot_ids) if sid is not None
        }
        self.record = EpisodeRecord(
            game=str(scene.game_id), seed=seed, strategy=strategy, agent=agent
        )
        self.record.digests.append(self.world.state_hex())
        self._pending_elims = 0
        self._pending_invalid = False
        self.eliminations = 0
        self.invalid_actions = 0
        self.queries = 0  # harnesses count agent queries here

    # -- queries ---------------------------------------------------------------

    @property
    def done(self) -> bool:
        return self.world.status != RUNNING

    @property
    def success(self) -> bool:
        return self.world.status == "success"

    @property
    def final_reward(self) -> float:
        return self.record.final_reward_tenths / 10.0

    def observation(self) -> np.ndarray:
        return encode_observation(self.world)

    def slot_of(self, body_id: str) -> int:
        try:
            return self._slot_index[body_id]
        except KeyError:
            raise UnknownBody(f"{body_id!r} is not an elimination slot") from None

    # -- actions ---------------------------------------------------------------

    def queue_action(self, slot: int) -> bool:
        """Request eliminating the block in `slot` before the next step.

        Returns True if a block was actually eliminated. Padding slots and
        already-eliminated targets count as invalid actions: they consume
        nothing but the step and carry no elimination penalty.
        """
        if self.done:
            raise EpisodeOver("episode is over")
        if not (0 <= slot < MAX_ACTIONS):
            raise ValueError(f"slot must be 0..5, got {slot}")
        self.record.actions.append((self.world.step_count, slot))
        body_id = self.action_space.slot_ids[slot]
        if body_id is None:
            self._pending_invalid = True
            self.invalid_actions += 1
            return False
        try:
            self.world.eliminate(body_id)
        except (NotEliminable, AlreadyEliminated, UnknownBody):
            self._pending_invalid = True
            self.invalid_actions += 1
            return False
        self._pending_elims += 1
        self.eliminations += 1
        return True

    def advance(self) -> StepOutcome:
        """Advance one control step and settle this step's reward."""
        if self.done:
            raise EpisodeOver("episode is over")
        was_success = self.world.status == "success"
        self.world.step(self.scene.physics.control_dt)
        success_now = self.world.status == "success" and not was_success
        tenths = -1 - 100 * self._pending_elims + (10000 if success_now else 0)
        self.record.step_rewards_tenths.append(tenths)
        self.record.final_reward_tenths += tenths
        self.record.digests.append(self.world.state_hex())
        invalid = self._pending_invalid
        self._pending_elims = 0
        self._pending_invalid = False
        if self.done:
            self.record.success = self.success
        return StepOutcome(
            observation=self.observation(),
            reward=tenths / 10.0,
            done=self.done,
            info={
                "success": self.success,
                "eliminations": self.eliminations,
                "t": self.world.t,
                "invalid_action": invalid,
            },
        )

    def step(self, action: int | None) -> StepOutcome:
        """Gym-style step: one action (slot index or NOOP/None), one tick."""
        if self.done:
            raise EpisodeOver("episode is over")
        if action is not None and action != NOOP:
            self.queue_action(int(action))
        return self.advance()

    def run_schedule(self, entries: list[tuple[int, int]]) -> None:
        """Run to completion, applying (step, slot) eliminations on time."""
        pending = sorted(entries)
        i = 0
        while not self.done:
            step = self.world.step_count
            while i < len(pending) and pending[i][0] <= step:
                self.queue_action(pending[i][1])
                i += 1
            self.advance()


def reset(game: GameId | str) -> tuple[np.ndarray, Episode]:
    """Fresh episode for a roster game: (initial observation, handle)."""
    scene = load_scene(game)
    ep = Episode(scene)
    return ep.observation(), ep


def replay(record: EpisodeRecord):
    """Re-execute a record, yielding StepOutcomes; raises DigestMismatch."""
    scene = load_scene(record.game)
    ep = Episode(scene, seed=record.seed)
    if record.digests and ep.record.digests[0] != record.digests[0]:
        raise DigestMismatch(0, record.digests[0], ep.record.digests[0])
    by_step: dict[int, list[int]] = {}
    for step, slot in record.actions:
        by_step.setdefault(step, []).append(slot)
    step_idx = 0
    while not ep.done:
        for slot in by_step.get(step_idx, ()):
            ep.queue_action(slot)
        outcome = ep.advance()
        step_idx += 1
        if step_idx < len(record.digests):
            expected = record.digests[step_idx]
            got = ep.record.digests[step_idx]
            if got != expected:
                raise DigestMismatch(step_idx, expected, got)
        else:
            raise DigestMismatch(step_idx, "<none>", ep.record.digests[-1])
        yield outcome
    if len(ep.record.digests) != len(record.digests):
        raise DigestMismatch(len(record.digests), "<length mismatch>", "<length mismatch>")


def write_records(path, records) -> None:
    with open(path, "a", encoding="utf-8") as f:
        for r in records:
            f.write(r.to_json() + "\n")


def read_records(path) -> list[EpisodeRecord]:
    out = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                out.append(EpisodeRecord.from_json(line))
    return out
