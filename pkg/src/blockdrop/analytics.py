"""Aggregate evaluation, sampling-based difficulty, failure attribution."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NoFailures
from .games import list_games, load_scene
from .strategies import RUNNERS, Agent, RunResult, sample_solutions


def derive_seed(*key: int) -> int:
    """Stable child seed from integer coordinates (seed, game, attempt)."""
    return int(np.random.SeedSequence(list(key)).generate_state(1)[0])


@dataclass
class GameScore:
    game: str
    attempt_rewards: list[float]
    solved: bool

    @property
    def best_reward(self) -> float:
        return max(self.attempt_rewards)


@dataclass
class SplitReport:
    split: str
    strategy: str
    agent: str
    attempts_per_game: int
    seed: int
    games: list[GameScore] = field(default_factory=list)

    @property
    def mean_reward(self) -> float:
        return float(np.mean([g.best_reward for g in self.games]))

    @property
    def success_rate(self) -> float:
        solved = sum(1 for g in self.games if g.solved)
        return 100.0 * solved / len(self.games)

    def to_dict(self) -> dict:
        return {
            "split": self.split,
            "strategy": self.strategy,
            "agent": self.agent,
            "attempts_per_game": self.attempts_per_game,
            "seed": self.seed,
            "mean_reward": round(self.mean_reward, 4),
            "success_rate": round(self.success_rate, 4),
            "games": {
                g.game: {
                    "best_reward": g.best_reward,
                    "solved": g.solved,
                    "attempts": g.attempt_rewards,
                }
                for g in self.games
            },
        }


def evaluate(
    agent_factory,
    strategy: str,
    split: str,
    attempts_per_game: int = 5,
    seed: int = 0,
) -> SplitReport:
    """Run every game in a split attempts_per_game times; score best-of.

    agent_factory(game_id, attempt_seed) -> Agent builds a fresh agent per
    attempt; attempt seeds derive deterministically from (seed, game, attempt).
    """
    if attempts_per_game < 1:
        raise ValueError("attempts_per_game must be >= 1")
    runner = RUNNERS[strategy]
    report = SplitReport(
        split=split,
        strategy=strategy,
        agent="",
        attempts_per_game=attempts_per_game,
        seed=seed,
    )
    for gi, gid in enumerate(list_games(split)):
        rewards = []
        solved = False
        for attempt in range(attempts_per_game):
            attempt_seed = derive_seed(seed, gi, attempt)
            agent = agent_factory(gid, attempt_seed)
            if not report.agent:
                report.agent = agent.tag
            result: RunResult = runner(agent, gid, seed=attempt_seed)
            rewards.append(result.final_reward)
            solved = solved or result.success
        report.games.append(GameScore(game=gid.name, attempt_rewards=rewards, solved=solved))
    return report


DIFFICULTY_BUDGET = 5_000_000  # per-game sampling cap; hits report as censored


@dataclass
class DifficultyEntry:
    game: str
    iterations: int
    found: int
    censored: bool


def difficulty_profile(
    games,
    target_distinct: int = 50,
    seed: int = 0,
    budget: int = DIFFICULTY_BUDGET,
) -> dict[str, DifficultyEntry]:
    """Iterations of random sampling needed per game to collect
    target_distinct distinct successful sequences; more iterations = harder."""
    profile: dict[str, DifficultyEntry] = {}
    for gi, game in enumerate(games):
        scene = load_scene(game)
        res = sample_solutions(
            scene.game_id,
            target_distinct=target_distinct,
            budget=budget,
            seed=derive_seed(seed, gi),
        )
        profile[scene.game_id.name] = DifficultyEntry(
            game=scene.game_id.name,
            iterations=res.iterations_used,
            found=len(res.solutions),
            censored=res.exhausted,
        )
    return profile


@dataclass
class FailureAttribution:
    total: int
    sn: int    # games solved
    ron: int   # games played in the oracle's elimination order
    sron: int  # solved and in oracle order
    p_timing: float  # P(failure came from timing | failure)
    p_order: float   # P(failure came from order  | failure)


def attribute_failures(results: dict, oracle_orders: dict) -> FailureAttribution:
    """Split failures into wrong-timing-with-right-order vs wrong-order.

    results: game -> {"solved": bool, "order": sequence of eliminated ids}
    oracle_orders: game -> the scene's canonical elimination order

    P(T|F) = (RON - SRON) / (Total - SN); P(O|F) = 1 - P(T|F).
    """
    total = len(results)
    if total == 0:
        raise ValueError("no results to attribute")
    sn = ron = sron = 0
    for game in results:
        entry = results[game]
        solved = bool(entry["solved"])
        right_order = tuple(entry["order"]) == tuple(oracle_orders[game])
        if solved:
            sn += 1
        if right_order:
            ron += 1
        if solved and right_order:
            sron += 1
    if total == sn:
        raise NoFailures("every game was solved; failure attribution is undefined")
    p_timing = (ron - sron) / (total - sn)
    return FailureAttribution(
        total=total, sn=sn, ron=ron, sron=sron,
        p_timing=p_timing, p_order=1.0 - p_timing,
    )


def results_from_runs(runs: dict[str, RunResult]) -> dict:
    """Adapt per-game RunResults into attribute_failures input."""
    return {
        game: {"solved": r.success, "order": tuple(r.eliminated_order)}
        for game, r in runs.items()
    }


def oracle_orders_for(split: str) -> dict:
    return {gid.name: load_scene(gid).canonical_order for gid in list_games(split)}
