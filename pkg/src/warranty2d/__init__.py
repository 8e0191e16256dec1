"""Two-dimensional warranty region optimization.

Fits a joint lifetime model (Weibull marginals, Gumbel copula) to
bivariate age/usage failure data and finds the warranty region that
maximizes expected utility under any combination of free-replacement,
pro-rata and combined policies on the two axes.
"""

from .benefit import (
    EconomicConfig,
    benefit,
    calibrate_rate,
    combined_retention,
    retention_ratio,
)
from .copula import (
    JointFit,
    JointModel,
    fit_joint_mle,
    gumbel_copula_cdf,
    joint_cdf,
    joint_density,
    joint_log_density,
    joint_loglik,
    joint_reliability,
    kendall_tau_theta,
    marginal_quantiles,
    sample_copula,
    sample_joint,
    survival_rectangle_prob,
)
from .dataset import Dataset, load_dataset
from .errors import (
    ConfigError,
    DataError,
    DomainError,
    FitError,
    NumericsError,
    OptimizerError,
    QuadratureError,
    WarrantyError,
)
from .gof import AdTestResult, StepFunction, ad_pvalue, anderson_darling_stat, kaplan_meier
from .marginal import (
    MarginalFit,
    WeibullParams,
    fit_weibull_mle,
    weibull_cdf,
    weibull_loglik,
    weibull_pdf,
    weibull_quantile,
    weibull_sf,
)
from .optimizer import (
    SEARCH_ANCHORED,
    SEARCH_WIDE,
    TABLE_ORDER,
    ConvergenceReport,
    OptimizationResult,
    PolicyTable,
    TableCell,
    optimize_region,
    run_policy_table,
)
from .policy import (
    AxisPolicy,
    PolicyKind,
    PolicyPair,
    WarrantyRegion,
    cost_1d,
    cost_2d,
    cost_surface_grid,
)
from .utility import (
    MODE_CONVENTIONAL,
    MODE_LITERAL,
    McCostEstimate,
    QuadratureSpec,
    expected_utility,
    expected_warranty_cost,
    mc_expected_cost,
    subregion_integrals,
)

__version__ = "0.1.0"

__all__ = [
    "AdTestResult",
    "AxisPolicy",
    "ConfigError",
    "ConvergenceReport",
    "DataError",
    "Dataset",
    "DomainError",
    "EconomicConfig",
    "FitError",
    "JointFit",
    "JointModel",
    "MODE_CONVENTIONAL",
    "MODE_LITERAL",
    "MarginalFit",
    "McCostEstimate",
    "NumericsError",
    "OptimizationResult",
    "OptimizerError",
    "PolicyKind",
    "PolicyPair",
    "PolicyTable",
    "QuadratureError",
    "QuadratureSpec",
    "SEARCH_ANCHORED",
    "SEARCH_WIDE",
    "StepFunction",
    "TABLE_ORDER",
    "TableCell",
    "WarrantyError",
    "WarrantyRegion",
    "WeibullParams",
    "ad_pvalue",
    "anderson_darling_stat",
    "benefit",
    "calibrate_rate",
    "combined_retention",
    "cost_1d",
    "cost_2d",
    "cost_surface_grid",
    "expected_utility",
    "expected_warranty_cost",
    "fit_joint_mle",
    "fit_weibull_mle",
    "gumbel_copula_cdf",
    "joint_cdf",
    "joint_density",
    "joint_log_density",
    "joint_loglik",
    "joint_reliability",
    "kaplan_meier",
    "kendall_tau_theta",
    "load_dataset",
    "marginal_quantiles",
    "mc_expected_cost",
    "optimize_region",
    "run_policy_table",
    "sample_copula",
    "sample_joint",
    "subregion_integrals",
    "survival_rectangle_prob",
    "weibull_cdf",
    "weibull_loglik",
    "weibull_pdf",
    "weibull_quantile",
    "weibull_sf",
]
