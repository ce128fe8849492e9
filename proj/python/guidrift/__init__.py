"""Resilient visual-agent runtime and GUI-drift simulator."""

from ._core import (
    DEFAULT_TAU,
    Scenario,
    ScenarioError,
    SimError,
    affordances,
    hierarchy,
    load_scenario,
    parse_scenario,
    predict,
    run,
    run_episode,
    scene_graph,
    sweep,
)

__all__ = [
    "DEFAULT_TAU",
    "Scenario",
    "ScenarioError",
    "SimError",
    "affordances",
    "hierarchy",
    "load_scenario",
    "parse_scenario",
    "predict",
    "run",
    "run_episode",
    "scene_graph",
    "sweep",
]
