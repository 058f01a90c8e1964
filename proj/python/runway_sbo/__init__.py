"""Runway sequencing with FCFS, deterministic and simulation-based optimization."""

from ._core import (  # noqa: F401
    Scenario,
    Schedule,
    Slot,
    StructuralError,
    WindowInfeasible,
    default_config,
    fcfs_schedule,
    ff,
    generate,
    greedy_schedule,
    hypervolume,
    load_scenario,
    nondominated,
    replicate,
    run_experiment,
    save_scenario,
    sedr_sample_count,
    simulate,
    violations,
    y_metric,
    zdt3,
)
