"""Scene-level domain types: shapes, bodies, joints, springs, goal region.

These describe a game before simulation. The mutable simulation state lives
in World (see world.py), which packs everything into flat arrays for the
kernels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import SceneInvalid

ROLE_GRAY = "gray"
ROLE_BLACK = "black"
ROLE_BLUE = "blue"
ROLE_RED = "red_ball"
ROLES = (ROLE_GRAY, ROLE_BLACK, ROLE_BLUE, ROLE_RED)

# role semantics: (dynamic, eliminable)
_ROLE_TRAITS = {
    ROLE_GRAY: (False, True),
    ROLE_BLACK: (False, False),
    ROLE_BLUE: (True, False),
    ROLE_RED: (True, False),
}

MAX_BODIES = 12
MAX_ACTIONS = 6
EPISODE_SECONDS = 15.0
CONTROL_DT = 0.1
CONTROL_STEPS = 150


@dataclass(frozen=True)
class Ball:
    center: tuple[float, float]
    radius: float


@dataclass(frozen=True)
class Bar:
    a: tuple[float, float]
    b: tuple[float, float]
    thickness: float
    tip_radius: float = 0.0  # rigid disc at endpoint b (pendulum bobs)

    @property
    def length(self) -> float:
        return math.hypot(self.b[0] - self.a[0], self.b[1] - self.a[1])


@dataclass(frozen=True)
class Body:
    id: str
    role: str
    shape: Ball | Bar
    distractor: bool = False

    @property
    def dynamic(self) -> bool:
        return _ROLE_TRAITS[self.role][0]

    @property
    def eliminable(self) -> bool:
        return _ROLE_TRAITS[self.role][1]

    def validate(self) -> None:
        if self.role not in ROLES:
            raise SceneInvalid(f"body {self.id}: unknown role {self.role!r}")
        if self.role == ROLE_RED and not isinstance(self.shape, Ball):
            raise SceneInvalid(f"body {self.id}: red bodies must be balls")
        if isinstance(self.shape, Ball):
            if not (self.shape.radius > 0):
                raise SceneInvalid(f"body {self.id}: radius must be positive")
        else:
            if not (self.shape.thickness > 0):
                raise SceneInvalid(f"body {self.id}: thickness must be positive")
            if self.shape.length < 1e-9:
                raise SceneInvalid(f"body {self.id}: zero-length bar")
        for v in _flat_coords(self.shape):
            if not math.isfinite(v):
                raise SceneInvalid(f"body {self.id}: non-finite coordinate")


def _flat_coords(shape: Ball | Bar):
    if isinstance(shape, Ball):
        return (*shape.center, shape.radius)
    return (*shape.a, *shape.b, shape.thickness, shape.tip_radius)


@dataclass(frozen=True)
class Joint:
    """Pin joint: the body rotates about a fixed world pivot."""

    body: str
    pivot: tuple[float, float]


@dataclass(frozen=True)
class Spring:
    """Damped spring between a body point and another body point or anchor.

    Attachment points are given in world coordinates at load time and follow
    the body afterwards.
    """

    body_a: str
    point_a: tuple[float, float]
    body_b: str | None  # None -> world anchor
    point_b: tuple[float, float]
    rest_length: float
    stiffness: float
    damping: float

    def validate(self) -> None:
        if not (self.rest_length > 0):
            raise SceneInvalid("spring rest_length must be > 0")
        if not (self.stiffness > 0):
            raise SceneInvalid("spring stiffness must be > 0")
        if self.damping < 0:
            raise SceneInvalid("spring damping must be >= 0")


@dataclass(frozen=True)
class Goal:
    """Axis-aligned sensor; success once every red ball center has entered."""

    x0: float
    x1: float
    y0: float
    y1: float

    def contains(self, x: float, y: float) -> bool:
        return self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1


@dataclass(frozen=True)
class PhysicsParams:
    gravity: float = 900.0  # px/s^2, +y is down
    restitution: float = 0.1
    friction: float = 0.5
    density: float = 1.0
    control_dt: float = CONTROL_DT
    substeps: int = 10
    solver_iterations: int = 8
    baumgarte: float = 0.2
    slop: float = 0.5

    @property
    def sub_dt(self) -> float:
        return self.control_dt / self.substeps


@dataclass(frozen=True)
class TimedAction:
    body_id: str
    t: float  # seconds, on the 0.1 s grid, within [0, 15)

    @property
    def step(self) -> int:
        return int(round(self.t * 10))


@dataclass(frozen=True)
class ReferenceSolution:
    actions: tuple[TimedAction, ...]
    label: str = ""


@dataclass(frozen=True)
class GameId:
    split: str
    name: str

    def __str__(self) -> str:
        return f"{self.split}/{self.name}"


@dataclass(frozen=True)
class Scene:
    game_id: GameId
    physics: PhysicsParams
    bodies: tuple[Body, ...]
    joints: tuple[Joint, ...]
    springs: tuple[Spring, ...]
    goal: Goal
    reference_solutions: tuple[ReferenceSolution, ...]
    canonical_order: tuple[str, ...] = ()
    max_actions: int = MAX_ACTIONS
    timing_sensitive: dict | None = None
    order_sensitive: dict | None = None
    notes: str = ""
    extras: dict = field(default_factory=dict)

    def body(self, body_id: str) -> Body:
        for b in self.bodies:
            if b.id == body_id:
                return b
        raise KeyError(body_id)

    @property
    def gray_ids(self) -> tuple[str, ...]:
        return tuple(b.id for b in self.bodies if b.role == ROLE_GRAY)

    @property
    def red_ids(self) -> tuple[str, ...]:
        return tuple(b.id for b in self.bodies if b.role == ROLE_RED)

    def validate(self) -> None:
        if len(self.bodies) > MAX_BODIES:
            raise SceneInvalid(f"{self.game_id}: {len(self.bodies)} bodies exceeds {MAX_BODIES}")
        ids = [b.id for b in self.bodies]
        if len(set(ids)) != len(ids):
            raise SceneInvalid(f"{self.game_id}: duplicate body ids")
        for b in self.bodies:
            b.validate()
        if not self.red_ids:
            raise SceneInvalid(f"{self.game_id}: needs at least one red ball")
        if self.game_id.split == "multi_ball" and len(self.red_ids) < 2:
            raise SceneInvalid(f"{self.game_id}: multi-ball scenes need >= 2 red balls")
        if len(self.gray_ids) > self.max_actions:
            raise SceneInvalid(f"{self.game_id}: more gray blocks than action slots")
        id_set = set(ids)
        jointed = set()
        for j in self.joints:
            if j.body not in id_set:
                raise SceneInvalid(f"{self.game_id}: joint references unknown body {j.body}")
            if j.body in jointed:
                raise SceneInvalid(f"{self.game_id}: body {j.body} has two joints")
            body = self.body(j.body)
            if not body.dynamic:
                raise SceneInvalid(f"{self.game_id}: joint on static body {j.body}")
            if not _pivot_on_geometry(body, j.pivot):
                raise SceneInvalid(f"{self.game_id}: pivot not on body {j.body}")
            jointed.add(j.body)
        for s in self.springs:
            s.validate()
            if s.body_a not in id_set:
                raise SceneInvalid(f"{self.game_id}: spring references unknown body {s.body_a}")
            if s.body_b is not None and s.body_b not in id_set:
                raise SceneInvalid(f"{self.game_id}: spring references unknown body {s.body_b}")
            if not self.body(s.body_a).dynamic and (
                s.body_b is None or not self.body(s.body_b).dynamic
            ):
                raise SceneInvalid(f"{self.game_id}: spring connects no dynamic body")
        if not (self.goal.x0 < self.goal.x1 and self.goal.y0 < self.goal.y1):
            raise SceneInvalid(f"{self.game_id}: degenerate goal region")
        if not self.reference_solutions:
            raise SceneInvalid(f"{self.game_id}: needs at least one reference solution")
        grays = set(self.gray_ids)
        for sol in self.reference_solutions:
            seen = set()
            for a in sol.actions:
                if a.body_id not in grays:
                    raise SceneInvalid(f"{self.game_id}: reference acts on non-gray {a.body_id}")
                if a.body_id in seen:
                    raise SceneInvalid(f"{self.game_id}: reference eliminates {a.body_id} twice")
                seen.add(a.body_id)
                if not (0.0 <= a.t < EPISODE_SECONDS):
                    raise SceneInvalid(f"{self.game_id}: action time {a.t} outside [0, 15)")
                if abs(a.t * 10 - round(a.t * 10)) > 1e-9:
                    raise SceneInvalid(f"{self.game_id}: action time {a.t} off the 0.1 s grid")
        for oid in self.canonical_order:
            if oid not in grays:
                raise SceneInvalid(f"{self.game_id}: canonical order names non-gray {oid}")


def _pivot_on_geometry(body: Body, pivot: tuple[float, float]) -> bool:
    px_, py_ = pivot
    s = body.shape
    if isinstance(s, Ball):
        return math.hypot(px_ - s.center[0], py_ - s.center[1]) <= s.radius + 1e-6
    ax, ay = s.a
    bx, by = s.b
    dx, dy = bx - ax, by - ay
    dd = dx * dx + dy * dy
    t = 0.0 if dd < 1e-12 else max(0.0, min(1.0, ((px_ - ax) * dx + (py_ - ay) * dy) / dd))
    qx, qy = ax + dx * t, ay + dy * t
    return math.hypot(px_ - qx, py_ - qy) <= s.thickness / 2 + max(s.tip_radius, 0.0) + 1e-6
