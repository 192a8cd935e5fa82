"""Monte Carlo laboratory for real zeros of random trigonometric polynomials.

Samples coefficient ensembles, counts real zeros of the window-scaled
polynomials in shrinking intervals, simulates the matching local limit
processes, and quantifies how closely the two count distributions agree.
"""

from ._kernels import BACKEND, HAVE_NUMBA
from .analysis import (
    ComparisonVerdict,
    CountDistribution,
    InsufficientSamples,
    chi2_two_sample,
    compare_distributions,
    empirical_pmf,
    equidistribution_ks,
    kac_rice_mean,
    tv_distance,
    weyl_limit,
    weyl_sigma_alpha,
)
from .config import ConfigError, ExperimentConfig, config_to_ini, load_config, parse_config
from .limitproc import (
    CenterClass,
    LevyIntegralPath,
    LimitSpec,
    RationalOverflow,
    ZPath,
    cardinal_truncation_bound,
    cardinal_variance_deficit,
    classify_two_pi_rational,
    limit_covariance,
    sample_G_path,
    sample_limit_path,
    sample_Z_path,
    sample_Znu_path,
    stable_cf_exponent,
    tilt_levy_measure,
)
from .rootfind import (
    CenterRule,
    DegenerateInput,
    ScanOptions,
    WindowSpec,
    ZeroFlag,
    ZeroReport,
    count_sign_changes,
    count_zeros_window,
    joint_counts,
)
from .runner import (
    RunResult,
    resolve_limit_spec,
    run_covariance_table,
    run_experiment,
    run_weyl_report,
    save_result,
)
from .sampling import (
    CoefficientModel,
    CoefficientPairs,
    ExactStable,
    FiniteVariance,
    InvalidModel,
    LevyMeasureSpec,
    ParetoTail,
    cms_stable,
    draw_coefficients,
    isotropic_atoms,
    limit_levy_measure,
    normalizer,
)
from .streams import coefficient_stream, limit_stream, replica_stream
from .trigpoly import (
    OracleUnreliable,
    ScaledEvaluator,
    TrigPolynomial,
    batch_evaluate_window,
    companion_circle_roots_oracle,
    derivative_scaled,
    evaluate,
    evaluate_scaled,
    exact_pair_covariance,
    trig_sum_closed_form,
)

__version__ = "0.1.0"
