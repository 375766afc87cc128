"""Robust case-control genetic association tests.

Trend tests over genotype scores, maximin efficiency robust combinations
(MERT), maximum statistics (MAX2/MAX3), classical chi-square competitors,
and a reproducible Monte Carlo engine for empirical critical values,
power, correlation structure and matched p-value comparisons.
"""

from .battery import (
    ALL_STATISTICS,
    DEFAULT_BATTERY,
    DEFAULT_GRID,
    evaluate_battery,
    evaluate_single,
    validate_battery,
)
from .classical import (
    CompositeStatistic,
    chisq_2df,
    chisq_allele,
    chisq_hwd,
    product_test,
    tmax,
)
from .errors import (
    CorrelationOutOfRange,
    DegeneratePrevalence,
    DegenerateProportions,
    DegenerateTable,
    EmptyRow,
    FrequencyOutOfRange,
    InputError,
    MismatchedScenario,
    MonomorphicSample,
    NegativeCell,
    NotExtremePair,
    NotPSD,
    OrderViolation,
    ScenarioError,
    TrendmaxError,
    UnknownStatistic,
    ZeroMargin,
    ZeroVariance,
)
from .montecarlo import (
    CriticalValueSet,
    MeanCorrelations,
    PowerRow,
    PValueCrossTab,
    empirical_upper_quantile,
    estimate_critical_values,
    estimate_power,
    exact_permutation_pvalue,
    mean_correlation_matrix,
    normal_approx_critical_max,
    permutation_pvalue,
    pvalue_crosstab,
    sample_mixture,
    sample_table,
    simulate_cells,
)
from .population import (
    CaseControlProbs,
    GenotypeFreqs,
    HWEPopulation,
    MixturePopulation,
    PenetranceModel,
    PopulationSpec,
    case_control_probs,
    hwe_genotype_freqs,
    penetrances_for_model,
    prevalence,
)
from .robust import (
    CorrelationTriple,
    RobustStatistic,
    check_extreme_pair_condition,
    estimate_correlations,
    max2,
    max3,
    max_grid,
    maximin_member,
    mert_are,
    mert_certificate,
    mert_pair,
    mert_rec_add,
    mert_statistic,
    recommend_robust_test,
)
from .scenarios import Scenario, load_scenarios, parse_scenarios, scenario_hash
from .tables import (
    AlleleTable,
    GenotypeTable,
    apply_continuity_correction,
    new_genotype_table,
    parse_table_record,
    to_allele_table,
)
from .trend import TrendStatistic, optimal_score, trend_statistic

__version__ = "0.1.0"
