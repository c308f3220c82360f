"""Noise stability of non-negative submodular functions on {-1,1}^n.

Exact Fourier machinery over product distributions, machine checks of the
stability and pointwise noise-operator lower bounds, low-degree
approximation, agnostic learning by L1 polynomial regression and
statistical queries, and private release of disjunction counting queries.
"""

__version__ = "0.1.0"

from .cube import (
    BudgetAdditive,
    Coverage,
    CubeFunction,
    DenseTable,
    GraphCut,
    UniformMatroidRank,
    function_from_dict,
    is_nonnegative,
    is_submodular_lattice,
    is_submodular_marginal,
    random_submodular,
    supermodular_square,
)
from .dist import ProductDistribution, random_distribution
from .dp_release import (
    AccessLog,
    Database,
    DisjunctionQuery,
    counting_query,
    evaluate_release,
    laplace_sq,
    release,
    verify_privacy_accounting,
)
from .fourier import FourierExpansion, inverse_table, transform
from .learn import (
    Dataset,
    Hypothesis,
    NoiseSpec,
    SQOracle,
    empirical_opt,
    eval_l1_error,
    generate_dataset,
    l1_poly_regression,
    low_degree_algorithm_sq,
    normalize_target,
)
from .lowdeg import (
    LOW_DEGREE_CONSTANT,
    TruncatedPolynomial,
    approx_error,
    check_folklore_lemma,
    degree_for_accuracy,
    truncate,
)
from .noise import (
    NoiseParams,
    apply_noise_operator,
    check_pointwise_product,
    check_pointwise_uniform,
    check_stability_bound,
    stability,
)
from .simplex import LPResult, solve_inequality_lp, solve_lp

__all__ = [name for name in dir() if not name.startswith("_")]
