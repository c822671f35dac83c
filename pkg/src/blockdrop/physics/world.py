"""Mutable simulation state and the deterministic stepping loop."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from ..errors import AlreadyEliminated, EpisodeOver, NotEliminable, UnknownBody
from . import kernels
from .types import (
    Ball,
    Bar,
    CONTROL_STEPS,
    ROLE_GRAY,
    ROLE_RED,
    Scene,
)

RUNNING = "running"
SUCCESS = "success"
TIMEOUT = "timeout"

_QUANTUM = 1e-6  # fixed-point grid for state digests, px


@dataclass
class _ScenePack:
    """Per-scene immutable arrays plus the initial mutable state."""

    kind: np.ndarray
    mob: np.ndarray
    is_red: np.ndarray
    rad: np.ndarray
    tiprad: np.ndarray
    ea: np.ndarray
    eb: np.ndarray
    mass: np.ndarray
    inv_m: np.ndarray
    inv_i: np.ndarray
    pvx: np.ndarray
    pvy: np.ndarray
    prx0: np.ndarray
    pry0: np.ndarray
    pang0: np.ndarray
    px0: np.ndarray
    py0: np.ndarray
    ang0: np.ndarray
    sa: np.ndarray
    sb: np.ndarray
    sax: np.ndarray
    say: np.ndarray
    sbx: np.ndarray
    sby: np.ndarray
    srest: np.ndarray
    sk: np.ndarray
    sc: np.ndarray
    ids: tuple[str, ...]
    index: dict[str, int]
    roles: tuple[str, ...]


def _mass_properties(shape: Ball | Bar, density: float):
    """Returns (mass, I_com, com_xy, angle, ea, eb).

    For bars the pose point is the center of mass, which sits off the
    geometric middle when a tip disc is present; ea/eb are the signed axis
    offsets from the pose point to endpoints a and b.
    """
    if isinstance(shape, Ball):
        m = density * math.pi * shape.radius**2
        i_com = 0.5 * m * shape.radius**2
        return m, i_com, shape.center, 0.0, 0.0, 0.0
    ax, ay = shape.a
    bx, by = shape.b
    length = shape.length
    ang = math.atan2(by - ay, bx - ax)
    m_bar = density * length * shape.thickness
    i_bar = m_bar * (length**2 + shape.thickness**2) / 12.0
    if shape.tip_radius > 0:
        m_tip = density * math.pi * shape.tip_radius**2
        m = m_bar + m_tip
        s_com = (m_bar * length / 2.0 + m_tip * length) / m
        i_com = (
            i_bar
            + m_bar * (length / 2.0 - s_com) ** 2
            + 0.5 * m_tip * shape.tip_radius**2
            + m_tip * (length - s_com) ** 2
        )
    else:
        m = m_bar
        s_com = length / 2.0
        i_com = i_bar
    ux, uy = (bx - ax) / length, (by - ay) / length
    com = (ax + ux * s_com, ay + uy * s_com)
    return m, i_com, com, ang, -s_com, length - s_com


# keyed by id() with the scene kept alive in the value, else a recycled id
# could hand a fresh scene some dead scene's arrays
_pack_cache: dict[int, tuple[Scene, _ScenePack]] = {}


def pack_scene(scene: Scene) -> _ScenePack:
    hit = _pack_cache.get(id(scene))
    if hit is not None and hit[0] is scene:
        return hit[1]
    n = len(scene.bodies)
    p = scene.physics
    kind = np.zeros(n, np.int64)
    mob = np.zeros(n, np.int64)
    is_red = np.zeros(n, np.bool_)
    rad = np.zeros(n, np.float64)
    tiprad = np.zeros(n, np.float64)
    ea = np.zeros(n, np.float64)
    eb = np.zeros(n, np.float64)
    mass = np.zeros(n, np.float64)
    inv_m = np.zeros(n, np.float64)
    inv_i = np.zeros(n, np.float64)
    pvx = np.zeros(n, np.float64)
    pvy = np.zeros(n, np.float64)
    prx0 = np.zeros(n, np.float64)
    pry0 = np.zeros(n, np.float64)
    pang0 = np.zeros(n, np.float64)
    px0 = np.zeros(n, np.float64)
    py0 = np.zeros(n, np.float64)
    ang0 = np.zeros(n, np.float64)

    jointed = {j.body: j for j in scene.joints}
    index = {b.id: i for i, b in enumerate(scene.bodies)}

    for i, b in enumerate(scene.bodies):
        m, i_com, com, ang_, ea_, eb_ = _mass_properties(b.shape, p.density)
        px0[i], py0[i] = com
        ang0[i] = ang_
        mass[i] = m
        if isinstance(b.shape, Ball):
            kind[i] = kernels.KIND_BALL
            rad[i] = b.shape.radius
        else:
            kind[i] = kernels.KIND_BAR
            rad[i] = b.shape.thickness / 2.0
            tiprad[i] = b.shape.tip_radius
            ea[i], eb[i] = ea_, eb_
        if b.role == ROLE_RED:
            is_red[i] = True
        if not b.dynamic:
            mob[i] = kernels.MOB_STATIC
        elif b.id in jointed:
            mob[i] = kernels.MOB_PINNED
            jx, jy = jointed[b.id].pivot
            pvx[i], pvy[i] = jx, jy
            prx0[i], pry0[i] = com[0] - jx, com[1] - jy
            pang0[i] = ang_
            d2 = prx0[i] ** 2 + pry0[i] ** 2
            inv_i[i] = 1.0 / (i_com + m * d2)
        else:
            mob[i] = kernels.MOB_FREE
            inv_m[i] = 1.0 / m
            inv_i[i] = 1.0 / i_com

    ns = len(scene.springs)
    sa = np.zeros(ns, np.int64)
    sb = np.zeros(ns, np.int64)
    sax = np.zeros(ns, np.float64)
    say = np.zeros(ns, np.float64)
    sbx = np.zeros(ns, np.float64)
    sby = np.zeros(ns, np.float64)
    srest = np.zeros(ns, np.float64)
    sk = np.zeros(ns, np.float64)
    sc = np.zeros(ns, np.float64)
    for k, s in enumerate(scene.springs):
        ia = index[s.body_a]
        sa[k] = ia
        # world attach -> body-local at load pose
        ca, sn = math.cos(-ang0[ia]), math.sin(-ang0[ia])
        dx, dy = s.point_a[0] - px0[ia], s.point_a[1] - py0[ia]
        sax[k] = ca * dx - sn * dy
        say[k] = sn * dx + ca * dy
        if s.body_b is None:
            sb[k] = -1
            sbx[k], sby[k] = s.point_b
        else:
            ib = index[s.body_b]
            sb[k] = ib
            cb, snb = math.cos(-ang0[ib]), math.sin(-ang0[ib])
            dx, dy = s.point_b[0] - px0[ib], s.point_b[1] - py0[ib]
            sbx[k] = cb * dx - snb * dy
            sby[k] = snb * dx + cb * dy
        srest[k] = s.rest_length
        sk[k] = s.stiffness
        sc[k] = s.damping

    pack = _ScenePack(
        kind=kind, mob=mob, is_red=is_red, rad=rad, tiprad=tiprad, ea=ea, eb=eb,
        mass=mass, inv_m=inv_m, inv_i=inv_i, pvx=pvx, pvy=pvy,
        prx0=prx0, pry0=pry0, pang0=pang0, px0=px0, py0=py0, ang0=ang0,
        sa=sa, sb=sb, sax=sax, say=say, sbx=sbx, sby=sby, srest=srest, sk=sk, sc=sc,
        ids=tuple(b.id for b in scene.bodies),
        index=index,
        roles=tuple(b.role for b in scene.bodies),
    )
    _pack_cache[id(scene)] = (scene, pack)
    return pack


class World:
    """Mutable world: body poses/velocities, elapsed time, elimination log.

    Deterministic by construction: fixed iteration order everywhere, no
    wall-clock or RNG input.
    """

    def __init__(self, scene: Scene):
        self.scene = scene
        self._pack = pack_scene(scene)
        n = len(scene.bodies)
        self.px = self._pack.px0.copy()
        self.py = self._pack.py0.copy()
        self.ang = self._pack.ang0.copy()
        self.vx = np.zeros(n, np.float64)
        self.vy = np.zeros(n, np.float64)
        self.w = np.zeros(n, np.float64)
        self.alive = np.ones(n, np.bool_)
        self.in_goal = np.zeros(n, np.bool_)
        self.step_count = 0
        self.status = RUNNING
        self.eliminated: list[tuple[str, int]] = []  # (body id, control step)

    # -- queries ------------------------------------------------------------

    @property
    def t(self) -> float:
        return self.step_count / 10.0

    def body_index(self, body_id: str) -> int:
        try:
            return self._pack.index[body_id]
        except KeyError:
            raise UnknownBody(f"no body {body_id!r}") from None

    def goal_reached(self) -> bool:
        done = bool(kernels.all_red_in_goal(self._pack.is_red, self.in_goal))
        if done and self.status == RUNNING:
            self.status = SUCCESS
        return done

    def bar_endpoints(self, i: int) -> tuple[float, float, float, float]:
        c, s = math.cos(self.ang[i]), math.sin(self.ang[i])
        pk = self._pack
        return (
            self.px[i] + c * pk.ea[i],
            self.py[i] + s * pk.ea[i],
            self.px[i] + c * pk.eb[i],
            self.py[i] + s * pk.eb[i],
        )

    # -- interventions --------------------------------------------------------

    def eliminate(self, body_id: str) -> None:
        if self.status != RUNNING:
            raise EpisodeOver(f"cannot eliminate in status {self.status}")
        i = self.body_index(body_id)
        role = self._pack.roles[i]
        if role != ROLE_GRAY:
            raise NotEliminable(f"body {body_id!r} has role {role}")
        if not self.alive[i]:
            raise AlreadyEliminated(f"body {body_id!r} already eliminated")
        self.alive[i] = False
        self.eliminated.append((body_id, self.step_count))

    def step(self, control_dt: float = 0.1) -> None:
        if self.status != RUNNING:
            raise EpisodeOver(f"cannot step a world in status {self.status}")
        p = self.scene.physics
        if abs(control_dt - p.control_dt) > 1e-12:
            raise ValueError(f"control_dt must be {p.control_dt}, got {control_dt}")
        pk = self._pack
        kernels.control_step(
            pk.kind, pk.mob, pk.is_red, pk.rad, pk.tiprad, pk.ea, pk.eb,
            pk.mass, pk.inv_m, pk.inv_i,
            pk.pvx, pk.pvy, pk.prx0, pk.pry0, pk.pang0,
            self.px, self.py, self.ang, self.vx, self.vy, self.w,
            self.alive, self.in_goal,
            pk.sa, pk.sb, pk.sax, pk.say, pk.sbx, pk.sby, pk.srest, pk.sk, pk.sc,
            self.scene.goal.x0, self.scene.goal.x1, self.scene.goal.y0, self.scene.goal.y1,
            p.gravity, p.restitution, p.friction, p.baumgarte, p.slop,
            p.sub_dt, p.substeps, p.solver_iterations,
        )
        self.step_count += 1
        if kernels.all_red_in_goal(pk.is_red, self.in_goal):
            self.status = SUCCESS
        elif self.step_count >= CONTROL_STEPS:
            self.status = TIMEOUT

    # -- digests ----------------------------------------------------------------

    def state_hash(self) -> int:
        """64-bit digest over quantized poses/velocities and the elimination log."""
        h = hashlib.blake2b(digest_size=8)
        h.update(self.step_count.to_bytes(4, "little"))
        h.update(self.alive.astype(np.uint8).tobytes())
        h.update(self.in_goal.astype(np.uint8).tobytes())
        for arr in (self.px, self.py, self.ang, self.vx, self.vy, self.w):
            h.update(np.rint(arr / _QUANTUM).astype(np.int64).tobytes())
        for body_id, step in self.eliminated:
            h.update(self._pack.index[body_id].to_bytes(2, "little"))
            h.update(step.to_bytes(4, "little"))
        return int.from_bytes(h.digest(), "little")

    def state_hex(self) -> str:
        return f"{self.state_hash():016x}"


def simulate_schedule(scene: Scene, schedule: list[tuple[int, str]]) -> tuple[int, bool, int]:
    """Fast path: run one episode on fresh state with (step, body_id) actions.

    Returns (steps_elapsed, success, eliminations). Bit-identical to driving
    a World step by step with the same eliminations.
    """
    pk = pack_scene(scene)
    n = len(pk.ids)
    entries = sorted((s, pk.index[b]) for s, b in schedule)
    sched_step = np.array([e[0] for e in entries], np.int64)
    sched_body = np.array([e[1] for e in entries], np.int64)
    p = scene.physics
    steps, success, elims = kernels.run_episode(
        pk.kind, pk.mob, pk.is_red, pk.rad, pk.tiprad, pk.ea, pk.eb,
        pk.mass, pk.inv_m, pk.inv_i,
        pk.pvx, pk.pvy, pk.prx0, pk.pry0, pk.pang0,
        pk.px0.copy(), pk.py0.copy(), pk.ang0.copy(),
        np.zeros(n, np.float64), np.zeros(n, np.float64), np.zeros(n, np.float64),
        np.ones(n, np.bool_), np.zeros(n, np.bool_),
        pk.sa, pk.sb, pk.sax, pk.say, pk.sbx, pk.sby, pk.srest, pk.sk, pk.sc,
        scene.goal.x0, scene.goal.x1, scene.goal.y0, scene.goal.y1,
        p.gravity, p.restitution, p.friction, p.baumgarte, p.slop,
        p.sub_dt, p.substeps, p.solver_iterations,
        sched_step, sched_body, CONTROL_STEPS,
    )
    return int(steps), bool(success), int(elims)
