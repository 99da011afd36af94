"""Flag-gadget measurement simulation and Bayesian Pauli-channel adaptation."""

from .bayes import (
    DirichletState,
    MixtureBlowupError,
    PosteriorMixture,
    StrongCouplingError,
    UpdateTrace,
    ZeroProbabilityOutcomeError,
    approx_first_order,
    approx_zeroth_order,
    approx_zeroth_order_step,
    closed_form_maximal,
    covariance_form_step,
    exact_means,
    higher_moment,
    mixture_update,
    moments,
    noisy_likelihood_maximal,
    noisy_likelihood_single,
    noisy_single_layer_step,
    run_updates,
    single_step_general,
    update_maximal,
)
from .channel import (
    CompatibleSet,
    ContradictionError,
    ImpossibleOutcomeError,
    PauliChannel,
    compatible_set,
    outcome_probability,
    pauli_labels,
    post_selected_channel,
    sample_error,
)
from .gadget import (
    GadgetLayer,
    GadgetStack,
    maximal_stack,
    outcome_table,
    random_single_layer,
    single_layer_stack,
    singled_index_table,
)
from .metrics import ConvergencePoint, convergence_curve, tvd
from .pauli import (
    CliffordGate,
    DimensionError,
    PauliOperator,
    commutes,
    derive_left,
    hamming_distance,
)
from .sim import (
    DegeneratePerturbationError,
    FrameState,
    NoiseModel,
    RandomSingleLayers,
    ShotRecord,
    dense_outcome_distribution,
    frame_outcome_distribution,
    perturb_channel,
    run_experiment,
    run_shot,
    sample_prior_means,
)

__all__ = [
    "CliffordGate",
    "CompatibleSet",
    "ContradictionError",
    "ConvergencePoint",
    "DegeneratePerturbationError",
    "DimensionError",
    "DirichletState",
    "FrameState",
    "GadgetLayer",
    "GadgetStack",
    "ImpossibleOutcomeError",
    "MixtureBlowupError",
    "NoiseModel",
    "PauliChannel",
    "PauliOperator",
    "PosteriorMixture",
    "RandomSingleLayers",
    "ShotRecord",
    "StrongCouplingError",
    "UpdateTrace",
    "ZeroProbabilityOutcomeError",
    "approx_first_order",
    "approx_zeroth_order",
    "approx_zeroth_order_step",
    "closed_form_maximal",
    "commutes",
    "compatible_set",
    "convergence_curve",
    "covariance_form_step",
    "dense_outcome_distribution",
    "derive_left",
    "exact_means",
    "frame_outcome_distribution",
    "hamming_distance",
    "higher_moment",
    "maximal_stack",
    "mixture_update",
    "moments",
    "noisy_likelihood_maximal",
    "noisy_likelihood_single",
    "noisy_single_layer_step",
    "outcome_probability",
    "outcome_table",
    "pauli_labels",
    "perturb_channel",
    "post_selected_channel",
    "random_single_layer",
    "run_experiment",
    "run_shot",
    "run_updates",
    "sample_error",
    "sample_prior_means",
    "single_layer_stack",
    "single_step_general",
    "singled_index_table",
    "tvd",
    "update_maximal",
]
