from .types import (
    Ball,
    Bar,
    Body,
    CONTROL_DT,
    CONTROL_STEPS,
    EPISODE_SECONDS,
    GameId,
    Goal,
    Joint,
    MAX_ACTIONS,
    MAX_BODIES,
    PhysicsParams,
    ReferenceSolution,
    ROLE_BLACK,
    ROLE_BLUE,
    ROLE_GRAY,
    ROLE_RED,
    Scene,
    Spring,
    TimedAction,
)
from .world import RUNNING, SUCCESS, TIMEOUT, World, simulate_schedule

__all__ = [
    "Ball", "Bar", "Body", "GameId", "Goal", "Joint", "PhysicsParams",
    "ReferenceSolution", "Scene", "Spring", "TimedAction", "World",
    "simulate_schedule",
    "ROLE_GRAY", "ROLE_BLACK", "ROLE_BLUE", "ROLE_RED",
    "RUNNING", "SUCCESS", "TIMEOUT",
    "CONTROL_DT", "CONTROL_STEPS", "EPISODE_SECONDS", "MAX_ACTIONS", "MAX_BODIES",
]
