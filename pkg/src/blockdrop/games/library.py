"""Loading, listing, and verifying the 40 shipped game scenes.

Scene geometry lives in one JSON file per game under data/. Files are
versioned (format_version) and carry a physics header freezing the constants
the shipped reward numbers depend on; edit a scene and its reference rewards
move with it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from ..errors import SceneInvalid, UnknownGame
from ..physics.types import (
    Ball,
    Bar,
    Body,
    GameId,
    Goal,
    Joint,
    PhysicsParams,
    ReferenceSolution,
    Scene,
    Spring,
    TimedAction,
)

FORMAT_VERSION = 1

SPLITS = ("basic", "noisy", "compositional", "multi_ball")

ROSTER: dict[str, tuple[str, ...]] = {
    "basic": (
        "angle", "direction", "fill", "hinder", "hole",
        "impulse", "pendulum", "seesaw", "spring", "support",
    ),
    "noisy": (
        "noisy_angle", "noisy_direction", "noisy_fill", "noisy_hinder", "noisy_hole",
        "noisy_impulse", "noisy_pendulum", "noisy_seesaw", "noisy_spring", "noisy_support",
    ),
    "compositional": (
        "activated_pendulum", "hinder_fill", "impulse_pendulum", "impulse_spring",
        "more_step_hole", "seesaw_angle", "spring_flick", "support_direction",
        "support_hinder", "support_hole",
    ),
    "multi_ball": (
        "multi_ball_angle", "multi_ball_fill", "multi_ball_hinder", "multi_ball_hole",
        "multi_ball_lever", "multi_ball_pendulum", "multi_ball_redirect",
        "multi_ball_spring", "multi_ball_spring_flick", "multi_ball_stack",
    ),
}

_NAME_TO_SPLIT = {name: split for split, names in ROSTER.items() for name in names}

_scene_cache: dict[str, Scene] = {}


def list_games(split: str | None = None) -> list[GameId]:
    if split is not None:
        if split not in ROSTER:
            raise UnknownGame(f"unknown split {split!r}")
        return [GameId(split, n) for n in ROSTER[split]]
    return [GameId(s, n) for s in SPLITS for n in ROSTER[s]]


def resolve_game(game: GameId | str) -> GameId:
    if isinstance(game, GameId):
        if _NAME_TO_SPLIT.get(game.name) != game.split:
            raise UnknownGame(f"unknown game {game}")
        return game
    name = game.split("/")[-1]
    split = _NAME_TO_SPLIT.get(name)
    if split is None:
        raise UnknownGame(f"unknown game {game!r}")
    return GameId(split, name)


def load_scene(game: GameId | str) -> Scene:
    gid = resolve_game(game)
    cached = _scene_cache.get(gid.name)
    if cached is not None:
        return cached
    path = resources.files("blockdrop.games").joinpath(f"data/{gid.name}.json")
    try:
        raw = path.read_text()
    except FileNotFoundError:
        raise UnknownGame(f"scene file missing for {gid}") from None
    scene = scene_from_dict(json.loads(raw))
    if scene.game_id != gid:
        raise SceneInvalid(f"{path}: file claims {scene.game_id}, expected {gid}")
    _scene_cache[gid.name] = scene
    return scene


def scene_from_dict(d: dict) -> Scene:
    if d.get("format_version") != FORMAT_VERSION:
        raise SceneInvalid(f"unsupported format_version {d.get('format_version')!r}")
    g = d["game"]
    gid = GameId(g["split"], g["name"])
    ph = d.get("physics", {})
    physics = PhysicsParams(
        gravity=float(ph.get("gravity", 900.0)),
        restitution=float(ph.get("restitution", 0.1)),
        friction=float(ph.get("friction", 0.5)),
        density=float(ph.get("density", 1.0)),
        control_dt=float(ph.get("control_dt", 0.1)),
        substeps=int(ph.get("substeps", 10)),
        solver_iterations=int(ph.get("solver_iterations", 8)),
        baumgarte=float(ph.get("baumgarte", 0.2)),
        slop=float(ph.get("slop", 0.5)),
    )
    bodies = []
    for bd in d["bodies"]:
        sh = bd["shape"]
        if sh["type"] == "ball":
            shape: Ball | Bar = Ball(center=tuple(sh["center"]), radius=float(sh["radius"]))
        elif sh["type"] == "bar":
            shape = Bar(
                a=tuple(sh["a"]),
                b=tuple(sh["b"]),
                thickness=float(sh["thickness"]),
                tip_radius=float(sh.get("tip_radius", 0.0)),
            )
        else:
            raise SceneInvalid(f"{gid}: unknown shape type {sh['type']!r}")
        bodies.append(
            Body(id=bd["id"], role=bd["role"], shape=shape, distractor=bool(bd.get("distractor", False)))
        )
    joints = tuple(Joint(body=j["body"], pivot=tuple(j["pivot"])) for j in d.get("joints", ()))
    springs = tuple(
        Spring(
            body_a=s["body_a"],
            point_a=tuple(s["point_a"]),
            body_b=s.get("body_b"),
            point_b=tuple(s["point_b"] if s.get("body_b") is not None else s["anchor"]),
            rest_length=float(s["rest_length"]),
            stiffness=float(s["stiffness"]),
            damping=float(s.get("damping", 0.0)),
        )
        for s in d.get("springs", ())
    )
    gl = d["goal"]
    goal = Goal(x0=float(gl["x"][0]), x1=float(gl["x"][1]), y0=float(gl["y"][0]), y1=float(gl["y"][1]))
    solutions = tuple(
        ReferenceSolution(
            actions=tuple(TimedAction(body_id=a[0], t=float(a[1])) for a in sol["actions"]),
            label=sol.get("label", ""),
        )
        for sol in d.get("reference_solutions", ())
    )
    scene = Scene(
        game_id=gid,
        physics=physics,
        bodies=tuple(bodies),
        joints=joints,
        springs=springs,
        goal=goal,
        reference_solutions=solutions,
        canonical_order=tuple(d.get("canonical_order", ())),
        max_actions=int(d.get("max_actions", 6)),
        timing_sensitive=d.get("timing_sensitive"),
        order_sensitive=d.get("order_sensitive"),
        notes=d.get("notes", ""),
    )
    scene.validate()
    _validate_split_rules(scene)
    return scene


def _validate_split_rules(scene: Scene) -> None:
    split = scene.game_id.split
    if split not in SPLITS:
        raise SceneInvalid(f"{scene.game_id}: unknown split")
    grays = [b for b in scene.bodies if b.role == "gray"]
    if split == "basic" and len(grays) > 6:
        raise SceneInvalid(f"{scene.game_id}: basic scenes cap at 6 gray blocks")
    if split != "noisy":
        for b in scene.bodies:
            if b.distractor:
                raise SceneInvalid(f"{scene.game_id}: distractors only belong in noisy scenes")
    else:
        if not any(b.distractor for b in scene.bodies):
            raise SceneInvalid(f"{scene.game_id}: noisy scene has no tagged distractors")
        for b in scene.bodies:
            if b.distractor and b.role != "gray":
                raise SceneInvalid(f"{scene.game_id}: distractor {b.id} must be gray")


def basic_counterpart(noisy_name: str) -> str:
    if not noisy_name.startswith("noisy_"):
        raise UnknownGame(f"{noisy_name!r} is not a noisy game")
    return noisy_name[len("noisy_"):]


def strip_distractors(scene: Scene) -> tuple[tuple[Body, ...], tuple[Joint, ...], tuple[Spring, ...], Goal]:
    """Non-distractor geometry, for the noisy/basic pairing invariant."""
    bodies = tuple(b for b in scene.bodies if not b.distractor)
    return bodies, scene.joints, scene.springs, scene.goal


@dataclass
class SolutionReport:
    label: str
    success: bool
    final_reward: float
    eliminations: int
    steps: int


@dataclass
class SceneReport:
    game_id: GameId
    solutions: list[SolutionReport]

    @property
    def all_ok(self) -> bool:
        return all(s.success for s in self.solutions)


def verify_reference_solutions(scene: Scene) -> SceneReport:
    """Simulate every shipped reference solution and report the outcomes."""
    from ..env import Episode  # local import; env depends on this module

    reports = []
    for sol in scene.reference_solutions:
        ep = Episode(scene)
        ep.run_schedule([(a.step, ep.slot_of(a.body_id)) for a in sol.actions])
        reports.append(
            SolutionReport(
                label=sol.label,
                success=ep.success,
                final_reward=ep.final_reward,
                eliminations=ep.eliminations,
                steps=ep.world.step_count,
            )
        )
    return SceneReport(game_id=scene.game_id, solutions=reports)
