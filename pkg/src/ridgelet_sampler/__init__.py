"""Sparse shallow networks by optimized sampling of hidden nodes.

The package samples hidden-node parameters (a, b) of a single-hidden-layer
network on Z_P^D proportionally to smoothed squared coefficients of the
regularized data fit, entirely from data-sized structures, and assembles
sparse subnetworks from the sampled nodes.  Exact enumeration oracles and
experiment drivers are included.
"""

from .domain import (
    DEFAULT_ENUMERATION_CAP,
    EnumerationCapError,
    FiniteDomain,
    NodeIndex,
    all_points,
    decode_node,
    decode_point,
    encode_node,
    encode_point,
    inner_product_mod,
    is_prime,
)
from .ridgelet import (
    ActivationTable,
    DenseRidgelet,
    DomainFunction,
    apply_dense,
    dense_ridgelet_matrix,
    fourier_slice_check,
    make_relu_table,
    reconstruct,
    ridgelet_coefficient,
)
from .sq_tree import SqTree
from .sampler import (
    DegenerateTargetError,
    EmpiricalDistribution,
    PhiVector,
    SampleOutcome,
    SamplerConfig,
    SamplerState,
    acceptance_ratio,
    build_state,
    coefficient_weight,
    phi_vector,
    propose,
    proposal_prob,
    sample_batch,
    sample_node,
    weight_s,
)
from .oracle import (
    DenseModel,
    ExactDistribution,
    enumerate_exact,
    exact_distribution_from_dense,
    exact_sample,
    inverse_decomposition_check,
    naive_dense_solve,
)
from .subnetwork import (
    FittedModel,
    NodeSet,
    dedup,
    design_matrix,
    empirical_risk,
    predict_on_support,
    ridge_fit,
    ridge_objective,
)
from .experiments import (
    RiskExperimentConfig,
    RiskResultRow,
    RuntimeExperimentConfig,
    RuntimeResultRow,
    SyntheticSpec,
    derive_seed,
    draw_sine_samples,
    fit_scaling,
    gen_sine_dataset,
    run_risk_experiment,
    run_runtime_experiment,
    sine_labels,
    write_risk_csv,
    write_runtime_csv,
)

__version__ = "0.1.0"
