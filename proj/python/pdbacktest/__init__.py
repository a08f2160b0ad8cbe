"""Validation of default-probability forecasts via exact binomial tests and
multiplicity adjustments (Bonferroni-family, FDR-family and discrete min-p)."""

from ._core import (
    __version__,
    adjust_abh,
    adjust_bh,
    adjust_bonferroni,
    adjust_by,
    adjust_holm,
    adjust_hommel,
    binom_pmf,
    binom_test_pvalue,
    build_portfolio,
    dispersion_matrix,
    estimate_m0,
    hl_exact_test,
    hl_statistic,
    minp_critical_value,
    minp_single_step,
    minp_step_down,
    pvalue_law,
    upgrade_downgrade_matrix,
    validate,
)

__all__ = [
    "__version__",
    "adjust_abh",
    "adjust_bh",
    "adjust_bonferroni",
    "adjust_by",
    "adjust_holm",
    "adjust_hommel",
    "binom_pmf",
    "binom_test_pvalue",
    "build_portfolio",
    "dispersion_matrix",
    "estimate_m0",
    "hl_exact_test",
    "hl_statistic",
    "minp_critical_value",
    "minp_single_step",
    "minp_step_down",
    "pvalue_law",
    "upgrade_downgrade_matrix",
    "validate",
]
