"""Free-probability predictions for random quantum channels.

The library computes the closed-form limiting objects of the random
channel model — projector-product spectra, the extremal ("confining")
output spectrum, the Bell-output spectrum of a conjugate channel pair,
their entropies, additivity-violation margins and small-coupling
expansions — and checks them at desk scale by seeded Monte-Carlo
simulation of Haar-random couplings.
"""

from .errors import (
    DegenerateParameterError,
    InvalidDimensionError,
    InvalidMatrixError,
    InvalidParameterError,
    NotNormalizedError,
    NumericalFailureError,
    TooLargeError,
)
from .linalg import (
    RngStream,
    as_generator,
    haar_unitary,
    hermitian_eigenvalues,
    is_hermitian,
    is_unitary,
    partial_trace_left,
    psd_operator_norm,
    random_unit_vector,
    schmidt_spectrum,
)
from .freeprob import (
    SpectralMeasure,
    clean_probability_vector,
    confining_spectrum,
    conjugate_product_spectrum,
    projector_product_edges,
    projector_product_measure,
    projector_product_norm_limit,
    sorted_descending,
)
from .majorization import (
    HullPolyline,
    MajorizationReport,
    barycentric_embedding,
    hull_area,
    hull_membership_bruteforce,
    majorizes,
    partial_sums,
    polytope_excess,
    polytope_violation,
    simplex_figure_data,
)
from .entropy import (
    EntropyParams,
    confining_entropy,
    confining_entropy_asymptote,
    conjugate_product_entropy,
    conjugate_product_entropy_asymptote,
    entropy_term,
    min_violation_k,
    quantile_entropy_integral,
    renyi_entropy,
    schatten_norm_from_entropy,
    shannon_deficit,
    shannon_entropy,
    violation_margin,
)
from .channels import (
    ChannelInstance,
    apply_channel,
    apply_channel_pure,
    build_channel,
    conjugate_bell_output,
    embed_matrix,
    embed_vector,
    projector_product_norm,
)
from .trials import (
    Experiment,
    SummaryStats,
    TrialRecord,
    read_csv,
    read_jsonl,
    run_trials,
    summarize,
    write_csv,
    write_jsonl,
)
from .optimize import (
    OptResult,
    OptimizerConfig,
    estimate_hmin,
    max_partial_sum,
    renyi_objective_and_gradient,
)

__version__ = "0.1.0"
