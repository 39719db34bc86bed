"""proxcor: how the accuracy of a proxy measurement instrument distorts
downstream correlation estimates.

A detector whose outputs correlate with a ground-truth instrument at
level q attenuates every estimated cross correlation toward q*r, and
can flip its sign outright with a probability this package computes
analytically, cross-checks in closed form, and verifies by brute-force
Monte Carlo.  It also quantifies how well an ensemble of detectors
covers the sphere of equally-accurate measurement vectors.
"""

__version__ = "0.1.0"

from ._backend import USING_NUMBA, backend_name
from .coverage import (
    CoverageReport,
    DiscProjection,
    EnsembleRecord,
    coverage_significance,
    covariance_trace,
    disc_projection,
    filter_band,
    make_record,
    min_pairwise_correlation,
)
from .errors import (
    ApproximationBreakdown,
    ConstantVector,
    DegenerateCoplanar,
    DimensionMismatch,
    DimensionTooSmall,
    EmptyBand,
    FileFormatError,
    InfeasibleConfig,
    InvalidDof,
    InvalidParams,
    NumericError,
    ProxcorError,
    QuadratureFailure,
    TooFewRecords,
    ValidationError,
)
from . import formats
from .falsecorr import (
    FalseCorrParams,
    ProbabilityResult,
    chi2_cdf,
    chi2_pdf,
    false_corr_curve,
    false_corr_prob,
    false_corr_prob_closed_form,
    false_corr_prob_extended,
)
from .geometry import (
    NormalizedVector,
    OrthonormalBasis,
    build_basis,
    pearson,
    standardize,
    tail_coordinates,
)
from .oracles import (
    McEstimate,
    construct_pair,
    false_corr_prob_mc,
    marginal_false_corr_prob_mc,
)
from .sampling_dist import (
    SoperDist,
    marginal_false_corr_prob,
    numeric_mean_var,
    soper_build,
    soper_pdf,
    soper_sample,
)
from .synth import SynthConfig, generate_ensemble
from .tsphere import (
    SampleBatch,
    TsphereSpec,
    cross_correlation_mc,
    expected_cross_correlation,
    sample_tsphere,
)
