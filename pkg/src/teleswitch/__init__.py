"""Teleportation through noisy Pauli channels routed by a quantum switch.

The package simulates generalized depolarizing channels applied in a coherent
superposition of causal orders, post-selects on control measurement outcomes,
and quantifies the resulting fidelity advantage over definite-order use of the
same channels.
"""
from .analysis import (
    AdvantageRegions,
    AlphaOutcome,
    OutcomeFamily2,
    OutcomeFamily3,
    ProfilePoint,
    QuadratureError,
    QuadratureSpec,
    SwitchParams,
    advantage_regions,
    alpha_fidelity_profile,
    evaluate_fidelity,
    fidelity_polynomials,
    fidelity_profile,
    figure_of_merit,
    k_total,
    l1_coherence,
    mu_threshold,
    mu_threshold_bisection,
    no_switch_merit,
    optimize_outcome,
    switched_fidelity,
)
from .channels import (
    DepolarizingChannel,
    PauliWeights,
    apply_channel,
    bell_basis,
    bell_diagonal_state,
    general_fidelity,
    isotropic_channel,
    isotropic_weights,
    no_switch_fidelity,
    no_switch_threshold,
    qubit_fidelity,
    weights_from_resource,
    werner_state,
)
from .linalg import normalize_state, partial_trace, projector, tensor_product
from .switch import (
    ControlState,
    DegenerateOutcomeError,
    JointState,
    PostSelectionResult,
    closed_form_two,
    control_qubit,
    enumerate_permutations,
    haar_random_state,
    post_select,
    post_selected_polynomials,
    project_outcome,
    switch_n,
    switch_two,
    uniform_control,
)
from .verification import CheckResult, run_all

__version__ = "0.1.0"

__all__ = [
    "AdvantageRegions",
    "AlphaOutcome",
    "CheckResult",
    "ControlState",
    "DegenerateOutcomeError",
    "DepolarizingChannel",
    "JointState",
    "OutcomeFamily2",
    "OutcomeFamily3",
    "PauliWeights",
    "PostSelectionResult",
    "ProfilePoint",
    "QuadratureError",
    "QuadratureSpec",
    "SwitchParams",
    "advantage_regions",
    "alpha_fidelity_profile",
    "apply_channel",
    "bell_basis",
    "bell_diagonal_state",
    "closed_form_two",
    "control_qubit",
    "enumerate_permutations",
    "evaluate_fidelity",
    "fidelity_polynomials",
    "fidelity_profile",
    "figure_of_merit",
    "general_fidelity",
    "haar_random_state",
    "isotropic_channel",
    "isotropic_weights",
    "k_total",
    "l1_coherence",
    "mu_threshold",
    "mu_threshold_bisection",
    "no_switch_fidelity",
    "no_switch_merit",
    "no_switch_threshold",
    "normalize_state",
    "optimize_outcome",
    "partial_trace",
    "post_select",
    "projector",
    "post_selected_polynomials",
    "project_outcome",
    "qubit_fidelity",
    "run_all",
    "switch_n",
    "switch_two",
    "switched_fidelity",
    "tensor_product",
    "uniform_control",
    "weights_from_resource",
    "werner_state",
]
