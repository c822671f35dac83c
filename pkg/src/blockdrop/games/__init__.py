from .library import (
    ROSTER,
    SPLITS,
    SceneReport,
    SolutionReport,
    basic_counterpart,
    list_games,
    load_scene,
    resolve_game,
    scene_from_dict,
    strip_distractors,
    verify_reference_solutions,
)

__all__ = [
    "ROSTER", "SPLITS", "SceneReport", "SolutionReport", "basic_counterpart",
    "list_games", "load_scene", "resolve_game", "scene_from_dict",
    "strip_distractors", "verify_reference_solutions",
]
