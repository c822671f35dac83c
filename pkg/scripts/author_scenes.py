#!/usr/bin/env python3
"""Scene authoring workbench.

Builds the 40 game scenes from parametric geometry, verifies every reference
solution by simulation, and freezes the results into
src/blockdrop/games/data/*.json.

Usage:
  python3 scripts/author_scenes.py build            # write all scene files
  python3 scripts/author_scenes.py check [name...]  # verify without writing
  python3 scripts/author_scenes.py scan NAME SLOT_ID [--actions id:t,...]
                                                    # sweep one action's time
  python3 scripts/author_scenes.py trace NAME --actions id:t,... [--watch id,...]
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from blockdrop.games.library import scene_from_dict  # noqa: E402
from blockdrop.physics.world import World, simulate_schedule  # noqa: E402

DATA_DIR = Path(__file__).resolve().parents[1] / "src" / "blockdrop" / "games" / "data"

PHYSICS = {
    "gravity": 900.0,
    "restitution": 0.1,
    "friction": 0.5,
    "density": 1.0,
    "control_dt": 0.1,
    "substeps": 10,
    "solver_iterations": 8,
    "baumgarte": 0.2,
    "slop": 0.5,
}


# ---------------------------------------------------------------- helpers


def bar(bid, role, a, b, t=10.0, tip=0.0, distractor=False):
    d = {
        "id": bid,
        "role": role,
        "shape": {"type": "bar", "a": list(a), "b": list(b), "thickness": t},
    }
    if tip:
        d["shape"]["tip_radius"] = tip
    if distractor:
        d["distractor"] = True
    return d


def ball(bid, role, c, r=15.0, distractor=False):
    d = {"id": bid, "role": role, "shape": {"type": "ball", "center": list(c), "radius": r}}
    if distractor:
        d["distractor"] = True
    return d


def unit(a, b):
    dx, dy = b[0] - a[0], b[1] - a[1]
    ln = math.hypot(dx, dy)
    return dx / ln, dy / ln


def on_bar(a, b, s, lift):
    """Point at arc-length s from endpoint a, lifted `lift` px along the
    upward (negative-y) normal of bar ab."""
    ux, uy = unit(a, b)
    nx, ny = -uy, ux
    if ny > 0:
        nx, ny = -nx, -ny
    return a[0] + ux * s + nx * lift, a[1] + uy * s + ny * lift


def rest_on(a, b, s, ball_r=15.0, bar_t=10.0):
    return on_bar(a, b, s, bar_t / 2.0 + ball_r)


def stopper_on(bid, a, b, s, t=10.0, h=30.0, role="gray"):
    """Perpendicular block on a bar's upper surface at arc-length s."""
    base = on_bar(a, b, s, 5.0)
    top = on_bar(a, b, s, 5.0 + h)
    return bar(bid, role, base, top, t)


def wedged_ball(bid, a, b, s_stop, ball_r=15.0, stop_t=10.0, role="red_ball"):
    """Ball resting on bar ab, wedged just uphill of a stopper at s_stop."""
    s = s_stop - stop_t / 2.0 - ball_r - 0.5
    return ball(bid, role, rest_on(a, b, s, ball_r), ball_r)


def floor_with_hole(x0, x1, y=570.0, t=20.0):
    """Floor bars leaving a physical gap [x0, x1] at surface level, plus the
    goal sensor spanning it. Capsule端 caps stick out by t/2, hence the inset."""
    h = t / 2.0
    bodies = [
        bar("floor_l", "black", (-h, y), (x0 - h, y), t),
        bar("floor_r", "black", (x1 + h, y), (600 + h, y), t),
    ]
    goal = {"x": [x0, x1], "y": [y + 6, y + 140]}
    return bodies, goal


def scene_dict(split, name, bodies, goal, refs, order=None, joints=(), springs=(), **extra):
    d = {
        "format_version": 1,
        "game": {"split": split, "name": name},
        "physics": dict(PHYSICS),
        "bodies": bodies,
        "joints": list(joints),
        "springs": list(springs),
        "goal": goal,
        "max_actions": 6,
        "reference_solutions": refs,
        "canonical_order": order if order is not None else [a[0] for a in refs[0]["actions"]],
        "notes": "geometry re-authored at 600x600; positions are estimates",
    }
    d.update(extra)
    return d


def ref(actions, label=""):
    return {"label": label, "actions": [[bid, t] for bid, t in actions]}


# ---------------------------------------------------------------- probing


def simulate(sd, actions):
    """(success, steps, elims, reward) for dict scene + [(id, t), ...]."""
    scene = scene_from_dict(sd)
    schedule = [(int(round(t * 10)), bid) for bid, t in actions]
    steps, success, elims = simulate_schedule(scene, schedule)
    reward = ((10000 if success else 0) - 100 * elims - steps) / 10.0
    return success, steps, elims, reward


def trace(sd, actions, watch=None, every=5, until=150):
    scene = scene_from_dict(sd)
    w = World(scene)
    sched = sorted((int(round(t * 10)), bid) for bid, t in actions)
    idx = {b.id: i for i, b in enumerate(scene.bodies)}
    watch = watch or [b.id for b in scene.bodies if b.role in ("red_ball", "blue")]
    si = 0
    for k in range(until):
        while si < len(sched) and sched[si][0] <= k:
            w.eliminate(sched[si][1])
            print(f"t={k/10:5.1f}  eliminate {sched[si][1]}")
            si += 1
        w.step(0.1)
        if k % every == 0 or w.status != "running":
            parts = []
            for bid in watch:
                i = idx[bid]
                parts.append(
                    f"{bid}=({w.px[i]:6.1f},{w.py[i]:6.1f} v{w.vx[i]:+7.1f},{w.vy[i]:+7.1f})"
                )
            flags = "".join("G" if w.in_goal[idx[b]] else "." for b in scene.red_ids)
            print(f"t={w.t:5.1f} [{flags}] " + "  ".join(parts))
        if w.status != "running":
            print(f"status={w.status} steps={w.step_count}")
            break


def scan(sd, base_actions, vary_id, lo=0, hi=150, actions_extra=None):
    """Sweep one action's grid time; print the success window."""
    wins = []
    for step in range(lo, hi):
        acts = [(b, t) for b, t in base_actions if b != vary_id]
        acts.append((vary_id, step / 10.0))
        success, steps, elims, reward = simulate(sd, acts)
        if success:
            wins.append(step)
    if not wins:
        print(f"  scan {vary_id}: no success in [{lo},{hi})")
        return []
    runs = []
    start = prev = wins[0]
    for s in wins[1:]:
        if s == prev + 1:
            prev = s
        else:
            runs.append((start, prev))
            start = prev = s
    runs.append((start, prev))
    print(f"  scan {vary_id}: success windows (grid steps): {runs}")
    return wins


# ---------------------------------------------------------------- scenes

BUILDERS = {}


def builder(fn):
    BUILDERS[fn.__name__] = fn
    return fn


# ---------- basic ----------


@builder
def support():
    floor, goal = floor_with_hole(260, 340)
    bodies = floor + [
        bar("platform", "gray", (258, 450), (342, 450)),
        ball("ball", "red_ball", (300.0, 430.0)),
    ]
    return scene_dict(
        "basic", "support", bodies, goal,
        [ref([("platform", 1.0)], "drop")],
    )


@builder
def hinder():
    floor, goal = floor_with_hole(490, 570)
    ramp_a, ramp_b = (60.0, 330.0), (250.0, 390.0)
    bodies = floor + [
        bar("ramp", "black", ramp_a, ramp_b),
        stopper_on("stopper", ramp_a, ramp_b, 60),
        bar("wall", "gray", (440, 554), (440, 505), 12),
        wedged_ball("ball", ramp_a, ramp_b, 60),
    ]
    return scene_dict(
        "basic", "hinder", bodies, goal,
        [ref([("stopper", 1.0), ("wall", 2.0)], "roll then clear")],
    )


@builder
def direction():
    floor, goal = floor_with_hole(120, 210)
    left_a, left_b = (240.0, 355.0), (292.0, 392.0)
    right_a, right_b = (308.0, 392.0), (360.0, 355.0)
    bodies = floor + [
        bar("v_left", "gray", left_a, left_b),
        bar("v_right", "gray", right_a, right_b),
        ball("ball", "red_ball", (300.0, 370.0)),
    ]
    return scene_dict(
        "basic", "direction", bodies, goal,
        [ref([("v_left", 1.0)], "open the correct side")],
    )


@builder
def hole():
    floor, goal = floor_with_hole(262, 338)
    bodies = floor + [
        bar("lid", "gray", (258, 565), (342, 565)),
        ball("ball", "red_ball", (300.0, 545.0)),
    ]
    return scene_dict(
        "basic", "hole", bodies, goal,
        [ref([("lid", 1.0)], "open the hole")],
    )


@builder
def fill():
    floor_y = 570.0
    ramp_a, ramp_b = (80.0, 480.0), (200.0, 540.0)
    # floor with a pit [264,336] (dead end) and the goal hole [400,480]
    bodies = [
        bar("floor_l", "black", (-10, floor_y), (254, floor_y), 20),
        bar("floor_m", "black", (346, floor_y), (390, floor_y), 20),
        bar("floor_r", "black", (490, floor_y), (610, floor_y), 20),
        bar("pit_bottom", "black", (264, 620), (336, 620), 20),
        bar("pit_wall", "black", (341, 586), (341, 612), 10),
        bar("ramp", "black", ramp_a, ramp_b),
        stopper_on("stopper", ramp_a, ramp_b, 90),
        bar("fill_support", "gray", (282, 336), (318, 336)),
        bar("plank", "blue", (258, 325), (342, 325)),
        wedged_ball("ball", ramp_a, ramp_b, 90),
    ]
    goal = {"x": [400, 480], "y": [576, 700]}
    return scene_dict(
        "basic", "fill", bodies, goal,
        [ref([("fill_support", 0.5), ("stopper", 1.5)], "bridge the pit, then roll")],
    )


@builder
def seesaw():
    floor, goal = floor_with_hole(110, 190)
    chute_a, chute_b = (402.0, 373.0), (342.0, 387.0)
    bodies = floor + [
        bar("seesaw", "blue", (240, 460), (400, 460)),
        bar("seesaw_stop", "gray", (392, 470), (392, 552), 12),
        ball("weight", "blue", (388.0, 425.0), 30),
        bar("weight_pin", "black", (354, 444), (354, 428), 8),
        bar("chute", "black", chute_a, chute_b),
        stopper_on("chute_stop", chute_a, chute_b, 35),
        bar("wall", "black", (210, 436), (210, 558), 12),
        wedged_ball("ball", chute_a, chute_b, 35),
    ]
    return scene_dict(
        "basic", "seesaw", bodies, goal,
        [ref([("chute_stop", 0.5), ("seesaw_stop", 1.9)], "catapult")],
        joints=[{"body": "seesaw", "pivot": [330, 460]}],
        timing_sensitive={"solution": 0, "action": 1, "shift": 0.5},
    )


@builder
def angle():
    ramp_a, ramp_b = (200.0, 300.0), (320.0, 350.0)
    bodies = [
        bar("floor_l", "black", (-10, 570), (320, 570), 20),
        bar("floor_m", "black", (420, 570), (530, 570), 20),
        bar("pit_bottom", "black", (540, 620), (615, 620), 20),
        bar("incline", "gray", ramp_a, ramp_b),
        stopper_on("stopper", ramp_a, ramp_b, 55),
        bar("shelf", "black", (360, 385), (470, 385)),
        bar("curb", "black", (314, 544), (314, 556), 10),
        wedged_ball("ball", ramp_a, ramp_b, 55),
    ]
    goal = {"x": [330, 410], "y": [576, 710]}
    return scene_dict(
        "basic", "angle", bodies, goal,
        [ref([("stopper", 1.0), ("incline", 1.5)], "release then drop mid-roll")],
        order_sensitive={
            "wrong_order": [["incline", 1.0], ["stopper", 1.5]],
            "right_order": [["stopper", 1.0], ["incline", 1.5]],
        },
        timing_sensitive={"solution": 0, "action": 1, "shift": 0.5},
    )


@builder
def impulse():
    floor, goal = floor_with_hole(500, 580)
    incline_a, incline_b = (90.0, 330.0), (300.0, 480.0)
    bodies = floor + [
        bar("support", "gray", (100, 255), (160, 255)),
        ball("striker", "blue", (130.0, 232.0), 18),
        bar("incline", "black", incline_a, incline_b),
        ball("ball", "red_ball", (430.0, 545.0)),
    ]
    return scene_dict(
        "basic", "impulse", bodies, goal,
        [ref([("support", 1.0)], "drop the striker")],
    )


@builder
def pendulum():
    floor, goal = floor_with_hole(150, 230)
    pivot = (420.0, 130.0)
    th = math.radians(40)
    L = 262.0
    tip = (pivot[0] + L * math.sin(th), pivot[1] + L * math.cos(th))
    bodies = floor + [
        bar("arm", "blue", pivot, tip, 10, tip=18),
        bar("shelf", "gray", (tip[0] - 16, tip[1] + 25), (tip[0] + 20, tip[1] + 25)),
        bar("pedestal", "black", (320, 415), (346, 415)),
        ball("ball", "red_ball", (333.0, 395.0)),
    ]
    return scene_dict(
        "basic", "pendulum", bodies, goal,
        [ref([("shelf", 1.0)], "release the bob")],
        joints=[{"body": "arm", "pivot": list(pivot)}],
    )


@builder
def spring():
    floor, goal = floor_with_hole(300, 380)
    bodies = floor + [
        bar("anchor_wall", "black", (80, 470), (80, 560), 16),
        ball("pusher", "blue", (160.0, 540.0), 20),
        bar("stopper", "gray", (186, 510), (186, 548), 12),
        ball("ball", "red_ball", (230.0, 545.0)),
    ]
    springs = [
        {
            "body_a": "pusher",
            "point_a": [160, 540],
            "anchor": [85, 540],
            "rest_length": 150,
            "stiffness": 13000,
            "damping": 4,
        }
    ]
    return scene_dict(
        "basic", "spring", bodies, goal,
        [ref([("stopper", 1.0)], "release the pusher")],
        springs=springs,
    )


# ---------- noisy ----------


def noisy_variant(base_name, distractors):
    sd = BUILDERS[base_name]()
    sd["game"] = {"split": "noisy", "name": f"noisy_{base_name}"}
    sd["bodies"] = list(sd["bodies"]) + distractors
    return sd


@builder
def noisy_support():
    # reaches the 6-slot action cap: 1 real gray + 5 distractors
    return noisy_variant("support", [
        bar("distractor_1", "gray", (80, 150), (140, 150), distractor=True),
        bar("distractor_2", "gray", (460, 250), (520, 250), distractor=True),
        bar("distractor_3", "gray", (90, 420), (150, 420), distractor=True),
        ball("distractor_4", "gray", (520, 120), 14, distractor=True),
        bar("distractor_5", "gray", (440, 460), (500, 460), distractor=True),
    ])


@builder
def noisy_hinder():
    return noisy_variant("hinder", [
        bar("distractor_1", "gray", (400, 200), (460, 200), distractor=True),
        bar("distractor_2", "gray", (90, 480), (150, 480), distractor=True),
    ])


@builder
def noisy_direction():
    return noisy_variant("direction", [
        bar("distractor_1", "gray", (80, 250), (130, 250), distractor=True),
        bar("distractor_2", "gray", (450, 460), (500, 460), distractor=True),
        ball("distractor_3", "gray", (520, 180), 14, distractor=True),
    ])


@builder
def noisy_hole():
    return noisy_variant("hole", [
        bar("distractor_1", "gray", (150, 300), (200, 300), distractor=True),
        bar("distractor_2", "gray", (400, 300), (450, 300), distractor=True),
        bar("distractor_3", "gray", (290, 150), (350, 150), distractor=True),
    ])


@builder
def noisy_fill():
    return noisy_variant("fill", [
        bar("distractor_1", "gray", (80, 200), (130, 200), distractor=True),
        bar("distractor_2", "gray", (500, 200), (550, 200), distractor=True),
    ])


@builder
def noisy_seesaw():
    return noisy_variant("seesaw", [
        bar("distractor_1", "gray", (480, 250), (530, 250), distractor=True),
        bar("distractor_2", "gray", (100, 300), (150, 300), distractor=True),
    ])


@builder
def noisy_angle():
    return noisy_variant("angle", [
        bar("distractor_1", "gray", (100, 460), (150, 460), distractor=True),
        bar("distractor_2", "gray", (490, 200), (540, 200), distractor=True),
    ])


@builder
def noisy_impulse():
    return noisy_variant("impulse", [
        bar("distractor_1", "gray", (400, 200), (450, 200), distractor=True),
        ball("distractor_2", "gray", (540, 300), 14, distractor=True),
    ])


@builder
def noisy_pendulum():
    return noisy_variant("pendulum", [
        bar("distractor_1", "gray", (100, 200), (150, 200), distractor=True),
        bar("distractor_2", "gray", (480, 480), (530, 480), distractor=True),
    ])


@builder
def noisy_spring():
    return noisy_variant("spring", [
        bar("distractor_1", "gray", (350, 300), (400, 300), distractor=True),
        bar("distractor_2", "gray", (120, 200), (170, 200), distractor=True),
    ])


# ---------- compositional ----------


@builder
def support_hinder():
    floor, goal = floor_with_hole(500, 580)
    bodies = floor + [
        bar("platform", "gray", (150, 300), (230, 300)),
        ball("ball", "red_ball", (190.0, 282.0)),
        bar("slide", "black", (140, 420), (330, 470)),
        bar("wall", "gray", (450, 505), (450, 554), 12),
    ]
    return scene_dict(
        "compositional", "support_hinder", bodies, goal,
        [ref([("platform", 0.5), ("wall", 2.5)], "drop, slide, clear")],
    )


@builder
def support_direction():
    floor, goal = floor_with_hole(120, 200)
    bodies = floor + [
        bar("platform", "gray", (270, 280), (330, 280)),
        ball("ball", "red_ball", (300.0, 262.0)),
        bar("v_left", "gray", (240, 395), (295, 430)),
        bar("v_right", "gray", (305, 430), (360, 395)),
        bar("wall", "black", (585, 500), (585, 555), 10),
    ]
    return scene_dict(
        "compositional", "support_direction", bodies, goal,
        [ref([("platform", 0.5), ("v_left", 2.5)], "drop into the cradle, open left")],
    )


@builder
def support_hole():
    floor, goal = floor_with_hole(280, 360)
    bodies = floor + [
        bar("support", "gray", (290, 330), (350, 330)),
        ball("ball", "red_ball", (320.0, 312.0)),
        bar("deck_l", "black", (200, 430), (270, 430)),
        bar("deck_r", "black", (370, 430), (440, 430)),
        bar("lid", "gray", (276, 425), (364, 425)),
    ]
    return scene_dict(
        "compositional", "support_hole", bodies, goal,
        [ref([("support", 0.5), ("lid", 2.0)], "drop onto the covered gap, open it")],
    )


@builder
def more_step_hole():
    ramp_a, ramp_b = (60.0, 330.0), (220.0, 420.0)
    bodies = [
        bar("floor_l", "black", (-10, 570), (430, 570), 20),
        bar("floor_r", "black", (530, 570), (610, 570), 20),
        bar("backstop", "black", (5, 470), (5, 555), 10),
        bar("ramp", "black", ramp_a, ramp_b),
        stopper_on("stopper", ramp_a, ramp_b, 110),
        wedged_ball("ball", ramp_a, ramp_b, 110),
        bar("wall", "gray", (330, 505), (330, 554), 12),
        bar("lid", "gray", (436, 565), (524, 565)),
        bar("endwall", "black", (585, 480), (585, 556), 10),
    ]
    goal = {"x": [440, 520], "y": [576, 700]}
    return scene_dict(
        "compositional", "more_step_hole", bodies, goal,
        [ref([("stopper", 0.5), ("wall", 1.5), ("lid", 2.2)], "roll, clear, open")],
    )


@builder
def hinder_fill():
    floor_y = 570.0
    ramp_a, ramp_b = (80.0, 480.0), (200.0, 540.0)
    bodies = [
        bar("floor_l", "black", (-10, floor_y), (254, floor_y), 20),
        bar("floor_m", "black", (346, floor_y), (450, floor_y), 20),
        bar("floor_r", "black", (550, floor_y), (610, floor_y), 20),
        bar("pit_bottom", "black", (264, 620), (336, 620), 20),
        bar("pit_wall", "black", (341, 586), (341, 612), 10),
        bar("ramp", "black", ramp_a, ramp_b),
        stopper_on("stopper", ramp_a, ramp_b, 90),
        bar("fill_support", "gray", (282, 336), (318, 336)),
        bar("plank", "blue", (258, 325), (342, 325)),
        bar("wall", "gray", (430, 505), (430, 554), 12),
        wedged_ball("ball", ramp_a, ramp_b, 90),
    ]
    goal = {"x": [460, 540], "y": [576, 700]}
    return scene_dict(
        "compositional", "hinder_fill", bodies, goal,
        [ref([("fill_support", 0.5), ("stopper", 1.5), ("wall", 3.0)], "bridge, roll, clear")],
    )


@builder
def impulse_spring():
    floor, goal = floor_with_hole(470, 550)
    bodies = floor + [
        bar("support", "gray", (400, 225), (460, 225)),
        ball("ball", "red_ball", (430.0, 207.0)),
        bar("shelf", "black", (100, 445), (390, 445)),
        bar("post", "black", (95, 402), (95, 445), 10),
        ball("hammer", "blue", (150.0, 425.0), 15),
        bar("latch", "gray", (172, 402), (172, 442), 8),
        ball("projectile", "blue", (194.0, 427.0), 13),
        bar("curb", "black", (402, 546), (402, 558), 8),
    ]
    springs = [
        {
            "body_a": "hammer",
            "point_a": [150, 425],
            "anchor": [100, 425],
            "rest_length": 150,
            "stiffness": 30000,
            "damping": 5,
        }
    ]
    return scene_dict(
        "compositional", "impulse_spring", bodies, goal,
        [ref([("latch", 0.5), ("support", 0.6)], "strike the falling ball")],
        springs=springs,
        timing_sensitive={"solution": 0, "action": 1, "shift": 0.5},
    )


@builder
def impulse_pendulum():
    floor, goal = floor_with_hole(150, 230)
    pivot = (420.0, 130.0)
    import math as _m
    th = _m.radians(40)
    L = 262.0
    tip = (pivot[0] + L * _m.sin(th), pivot[1] + L * _m.cos(th))
    bodies = floor + [
        bar("arm", "blue", pivot, tip, 10, tip=18),
        bar("shelf", "gray", (tip[0] - 16, tip[1] + 25), (tip[0] + 20, tip[1] + 25)),
        bar("support", "gray", (305, 345), (365, 345)),
        ball("ball", "red_ball", (335.0, 327.0)),
        bar("pedestal", "black", (320, 415), (346, 415)),
    ]
    return scene_dict(
        "compositional", "impulse_pendulum", bodies, goal,
        [ref([("support", 0.5), ("shelf", 1.5)], "deliver then strike")],
        joints=[{"body": "arm", "pivot": list(pivot)}],
    )


@builder
def activated_pendulum():
    pivot = (300.0, 120.0)
    bodies = [
        bar("floor_l", "black", (-10, 570), (430, 570), 20),
        bar("floor_r", "black", (530, 570), (610, 570), 20),
        bar("arm", "blue", pivot, (300.0, 300.0), 6, tip=18),
        bar("striker_support", "gray", (120, 211), (180, 211)),
        ball("striker", "blue", (150.0, 188.0), 18),
        bar("chute", "black", (140, 248), (262, 323)),
        bar("pedestal", "black", (338, 325), (358, 325)),
        ball("ball", "red_ball", (348.0, 305.0)),
    ]
    goal = {"x": [440, 520], "y": [576, 700]}
    return scene_dict(
        "compositional", "activated_pendulum", bodies, goal,
        [ref([("striker_support", 0.5)], "wake the pendulum")],
        joints=[{"body": "arm", "pivot": list(pivot)}],
    )


@builder
def spring_flick():
    floor, goal = floor_with_hole(390, 470)
    bodies = floor + [
        bar("deck", "black", (100, 480), (330, 480), 16),
        bar("anchor_post", "black", (80, 402), (80, 468), 16),
        ball("pusher", "blue", (160.0, 452.0), 20),
        bar("stopper", "gray", (186, 420), (186, 458), 12),
        bar("wall", "gray", (256, 418), (256, 460), 10),
        ball("ball", "red_ball", (296.0, 457.0)),
    ]
    springs = [
        {"body_a": "pusher", "point_a": [160, 452], "anchor": [85, 452],
         "rest_length": 150, "stiffness": 13000, "damping": 4},
    ]
    return scene_dict(
        "compositional", "spring_flick", bodies, goal,
        [ref([("wall", 0.5), ("stopper", 1.5)], "clear the path, then fire")],
        springs=springs,
    )


@builder
def seesaw_angle():
    floor, goal = floor_with_hole(90, 160)
    chute_a, chute_b = (412.0, 358.0), (342.0, 380.0)
    bodies = floor + [
        bar("seesaw", "blue", (240, 460), (400, 460)),
        bar("seesaw_stop", "gray", (392, 470), (392, 552), 12),
        ball("weight", "blue", (388.0, 425.0), 30),
        bar("weight_pin", "black", (354, 444), (354, 428), 8),
        bar("chute", "black", chute_a, chute_b),
        stopper_on("chute_stop", chute_a, chute_b, 40),
        bar("wall", "black", (200, 470), (200, 558), 12),
        wedged_ball("ball", chute_a, chute_b, 40),
    ]
    return scene_dict(
        "compositional", "seesaw_angle", bodies, goal,
        [ref([("chute_stop", 0.5), ("seesaw_stop", 1.7)], "catapult through the slot")],
        joints=[{"body": "seesaw", "pivot": [330, 460]}],
    )


# ---------- multi-ball ----------


@builder
def multi_ball_stack():
    floor, goal = floor_with_hole(260, 340)
    bodies = floor + [
        bar("platform", "gray", (258, 480), (342, 480)),
        ball("ball_low", "red_ball", (300.0, 460.0)),
        ball("ball_high", "red_ball", (300.0, 430.0)),
    ]
    return scene_dict(
        "multi_ball", "multi_ball_stack", bodies, goal,
        [ref([("platform", 1.0)], "drop the stack")],
    )


@builder
def multi_ball_hinder():
    bodies = [
        bar("floor_l", "black", (-10, 570), (290, 570), 20),
        bar("floor_r", "black", (450, 570), (610, 570), 20),
        bar("incline_l", "black", (225, 475), (298, 508)),
        bar("support_l", "gray", (233, 352), (285, 352)),
        ball("ball_l", "red_ball", (259.0, 334.0)),
        bar("beam", "gray", (350, 432), (480, 452)),
        bar("support_r", "gray", (385, 300), (437, 300)),
        ball("ball_r", "red_ball", (411.0, 282.0)),
        bar("wall", "gray", (520, 505), (520, 556), 10),
    ]
    goal = {"x": [300, 440], "y": [576, 700]}
    return scene_dict(
        "multi_ball", "multi_ball_hinder", bodies, goal,
        [
            ref([("support_l", 0.5), ("support_r", 1.5), ("beam", 1.9)], "both routed in"),
            ref([("support_r", 0.5), ("beam", 0.9), ("support_l", 2.0)], "re-timed after an early right drop"),
        ],
        order=["support_l", "support_r", "beam"],
    )


@builder
def multi_ball_redirect():
    floor, goal = floor_with_hole(230, 370)
    bodies = floor + [
        bar("support_l", "gray", (140, 320), (200, 320)),
        ball("ball_l", "red_ball", (170.0, 302.0)),
        bar("incline_l", "black", (80, 330), (250, 410)),
        bar("support_r", "gray", (400, 320), (460, 320)),
        ball("ball_r", "red_ball", (430.0, 302.0)),
        bar("incline_r", "black", (520, 330), (350, 410)),
    ]
    return scene_dict(
        "multi_ball", "multi_ball_redirect", bodies, goal,
        [ref([("support_l", 0.5), ("support_r", 1.5)], "funnel both")],
    )


@builder
def multi_ball_hole():
    floor, goal = floor_with_hole(250, 350)
    bodies = floor + [
        bar("lid_l", "gray", (246, 565), (297, 565)),
        bar("lid_r", "gray", (303, 565), (354, 565)),
        ball("ball_l", "red_ball", (272.0, 545.0)),
        ball("ball_r", "red_ball", (328.0, 545.0)),
    ]
    return scene_dict(
        "multi_ball", "multi_ball_hole", bodies, goal,
        [ref([("lid_l", 0.5), ("lid_r", 1.5)], "open both lids")],
    )


@builder
def multi_ball_fill():
    floor_y = 570.0
    ramp_a, ramp_b = (60.0, 462.0), (190.0, 540.0)
    # pit [264,336] with recessed ledges: the plank drops onto them flush
    # with the floor; without it, balls fall through into the deep pit
    bodies = [
        bar("floor_l", "black", (-10, floor_y), (254, floor_y), 20),
        bar("floor_m", "black", (346, floor_y), (390, floor_y), 20),
        bar("floor_r", "black", (490, floor_y), (610, floor_y), 20),
        bar("ledge_l", "black", (253, 575), (268, 575), 10),
        bar("ledge_r", "black", (332, 575), (347, 575), 10),
        bar("pit_bottom", "black", (250, 670), (350, 670), 20),
        bar("ramp", "black", ramp_a, ramp_b),
        stopper_on("stopper", ramp_a, ramp_b, 100),
        bar("fill_support", "gray", (282, 337), (318, 337)),
        bar("plank", "blue", (270, 325), (330, 325), 10),
        wedged_ball("ball_a", ramp_a, ramp_b, 100),
        wedged_ball("ball_b", ramp_a, ramp_b, 68),
    ]
    goal = {"x": [400, 480], "y": [576, 640]}
    return scene_dict(
        "multi_ball", "multi_ball_fill", bodies, goal,
        [ref([("fill_support", 0.5), ("stopper", 1.5)], "bridge, then roll the pair")],
    )


@builder
def multi_ball_lever():
    floor, goal = floor_with_hole(140, 240)
    bodies = floor + [
        bar("lever", "blue", (240, 420), (400, 420)),
        bar("stopper", "gray", (245, 430), (245, 552), 12),
        ball("ball_a", "red_ball", (270.0, 400.0)),
        ball("ball_b", "red_ball", (310.0, 400.0)),
    ]
    return scene_dict(
        "multi_ball", "multi_ball_lever", bodies, goal,
        [ref([("stopper", 1.0)], "tip the lever")],
        joints=[{"body": "lever", "pivot": [360, 420]}],
    )


@builder
def multi_ball_angle():
    floor, goal = floor_with_hole(260, 340)
    ramp_l_a, ramp_l_b = (80.0, 320.0), (230.0, 400.0)
    ramp_r_a, ramp_r_b = (520.0, 320.0), (370.0, 400.0)
    bodies = floor + [
        bar("ramp_l", "black", ramp_l_a, ramp_l_b),
        stopper_on("stopper_l", ramp_l_a, ramp_l_b, 120),
        wedged_ball("ball_l", ramp_l_a, ramp_l_b, 120),
        bar("ramp_r", "black", ramp_r_a, ramp_r_b),
        stopper_on("stopper_r", ramp_r_a, ramp_r_b, 120),
        wedged_ball("ball_r", ramp_r_a, ramp_r_b, 120),
    ]
    return scene_dict(
        "multi_ball", "multi_ball_angle", bodies, goal,
        [ref([("stopper_l", 0.5), ("stopper_r", 2.0)], "roll both in")],
    )


@builder
def multi_ball_pendulum():
    floor, goal = floor_with_hole(130, 230)
    pivot = (420.0, 130.0)
    import math as _m
    th = _m.radians(40)
    L = 262.0
    tip = (pivot[0] + L * _m.sin(th), pivot[1] + L * _m.cos(th))
    bodies = floor + [
        bar("arm", "blue", pivot, tip, 10, tip=18),
        bar("shelf", "gray", (tip[0] - 16, tip[1] + 25), (tip[0] + 20, tip[1] + 25)),
        bar("pedestal", "black", (300, 415), (360, 415)),
        ball("ball_a", "red_ball", (315.0, 395.0)),
        ball("ball_b", "red_ball", (345.0, 395.0)),
    ]
    return scene_dict(
        "multi_ball", "multi_ball_pendulum", bodies, goal,
        [ref([("shelf", 1.0)], "strike the pair")],
        joints=[{"body": "arm", "pivot": list(pivot)}],
    )


@builder
def multi_ball_spring():
    floor, goal = floor_with_hole(330, 430)
    bodies = floor + [
        bar("anchor_wall", "black", (80, 470), (80, 560), 16),
        ball("pusher", "blue", (160.0, 540.0), 20),
        bar("stopper", "gray", (186, 510), (186, 548), 12),
        ball("ball_a", "red_ball", (230.0, 545.0)),
        ball("ball_b", "red_ball", (262.0, 545.0)),
    ]
    springs = [
        {"body_a": "pusher", "point_a": [160, 540], "anchor": [85, 540],
         "rest_length": 150, "stiffness": 13000, "damping": 4},
    ]
    return scene_dict(
        "multi_ball", "multi_ball_spring", bodies, goal,
        [ref([("stopper", 1.0)], "fire into the pair")],
        springs=springs,
    )


@builder
def multi_ball_spring_flick():
    floor, goal = floor_with_hole(390, 490)
    bodies = floor + [
        bar("deck", "black", (100, 480), (330, 480), 16),
        bar("anchor_post", "black", (80, 402), (80, 468), 16),
        ball("pusher", "blue", (160.0, 452.0), 20),
        bar("stopper", "gray", (186, 420), (186, 458), 12),
        ball("ball_a", "red_ball", (240.0, 457.0)),
        ball("ball_b", "red_ball", (272.0, 457.0)),
    ]
    springs = [
        {"body_a": "pusher", "point_a": [160, 452], "anchor": [85, 452],
         "rest_length": 150, "stiffness": 16000, "damping": 4},
    ]
    return scene_dict(
        "multi_ball", "multi_ball_spring_flick", bodies, goal,
        [ref([("stopper", 1.0)], "fire the pair off the deck")],
        springs=springs,
    )


# ---------- main ----------


def build_all(names=None, write=False):
    results = {}
    for name, fn in BUILDERS.items():
        if names and name not in names:
            continue
        sd = fn()
        scene = scene_from_dict(sd)
        ok = True
        lines = []
        for i, sol in enumerate(sd["reference_solutions"]):
            actions = [(a[0], a[1]) for a in sol["actions"]]
            success, steps, elims, reward = simulate(sd, actions)
            ok = ok and success
            lines.append(
                f"    ref[{i}] {sol.get('label','')!r}: success={success} "
                f"steps={steps} elims={elims} reward={reward:.1f}"
            )
        # no-action sanity: the scene must not solve itself
        idle_success, idle_steps, _, _ = simulate(sd, [])
        status = "OK " if ok and not idle_success else "FAIL"
        print(f"[{status}] {sd['game']['split']}/{name}")
        for ln in lines:
            print(ln)
        if idle_success:
            print("    !! solves itself with no actions")
            ok = False
        results[name] = ok
        if write and ok:
            out = DATA_DIR / f"{name}.json"
            out.write_text(json.dumps(sd, indent=1) + "\n")
    return results


def parse_actions(s):
    if not s:
        return []
    out = []
    for part in s.split(","):
        bid, t = part.rsplit(":", 1)
        out.append((bid, float(t)))
    return out


def main():
    ap = argparse.ArgumentParser()
    sub = ap.add_subparsers(dest="cmd", required=True)
    b = sub.add_parser("build")
    b.add_argument("names", nargs="*")
    c = sub.add_parser("check")
    c.add_argument("names", nargs="*")
    s = sub.add_parser("scan")
    s.add_argument("name")
    s.add_argument("vary")
    s.add_argument("--actions", default="")
    s.add_argument("--lo", type=int, default=0)
    s.add_argument("--hi", type=int, default=150)
    t = sub.add_parser("trace")
    t.add_argument("name")
    t.add_argument("--actions", default="")
    t.add_argument("--watch", default="")
    t.add_argument("--every", type=int, default=5)
    args = ap.parse_args()

    if args.cmd in ("build", "check"):
        res = build_all(args.names or None, write=args.cmd == "build")
        sys.exit(0 if all(res.values()) else 1)
    sd = BUILDERS[args.name]()
    if args.cmd == "scan":
        scan(sd, parse_actions(args.actions), args.vary, args.lo, args.hi)
    elif args.cmd == "trace":
        watch = [w for w in args.watch.split(",") if w] or None
        trace(sd, parse_actions(args.actions), watch=watch, every=args.every)


if __name__ == "__main__":
    main()
