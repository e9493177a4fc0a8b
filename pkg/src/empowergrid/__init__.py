"""Empowerment-driven voxel block-world simulator.

A deterministic 3-D grid world in which an agent chooses actions purely
to maximize its sparse-sampled empowerment: the log-count of distinct
locations it could still reach with fixed-length open-loop action
sequences. Includes exact and sampled empowerment, a discrete
information-theory toolbox with a Blahut-Arimoto capacity solver that
doubles as an independent oracle, the greedy controller, and a scenario
harness for the embodiment, lava-stream and spreading-lava experiments.
"""

from .blockworld import (
    Action,
    Cell,
    Embodiment,
    Inventory,
    WorldState,
    action_set,
    apply_action,
    parse_snapshot,
    render_snapshot,
    step,
    world_update,
)
from .controller import Decision, choose_action
from .empowerment import (
    EmpowermentEstimate,
    EnumerationBudgetError,
    approximation_model,
    estimator_study_distributions,
    exact_empowerment,
    mc_discovery_estimate,
    rollout,
    sparse_empowerment,
)
from .info_theory import (
    CapacityResult,
    channel_capacity,
    conditional_entropy,
    entropy,
    mutual_information,
)
from .scenarios import (
    Outcome,
    ScenarioConfig,
    TurnRecord,
    build_experiment1,
    build_experiment2,
    build_experiment3,
    classify_outcome_exp3,
    run_episode,
    run_estimator_study,
)

__version__ = "0.1.0"

__all__ = [
    "Action",
    "CapacityResult",
    "Cell",
    "Decision",
    "Embodiment",
    "EmpowermentEstimate",
    "EnumerationBudgetError",
    "Inventory",
    "Outcome",
    "ScenarioConfig",
    "TurnRecord",
    "WorldState",
    "action_set",
    "apply_action",
    "approximation_model",
    "build_experiment1",
    "build_experiment2",
    "build_experiment3",
    "channel_capacity",
    "choose_action",
    "classify_outcome_exp3",
    "conditional_entropy",
    "entropy",
    "estimator_study_distributions",
    "exact_empowerment",
    "mc_discovery_estimate",
    "mutual_information",
    "parse_snapshot",
    "render_snapshot",
    "rollout",
    "run_episode",
    "run_estimator_study",
    "sparse_empowerment",
    "step",
    "world_update",
]
