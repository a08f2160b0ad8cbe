#pragma once

#include <span>
#include <vector>

namespace pdbt {

// Classical multiplicity adjustments. Every function maps raw p-values in
// (0,1] to adjusted p-values in (0,1], preserving the input order. A
// hypothesis is rejected at level alpha iff its adjusted p-value is <= alpha.

std::vector<double> adjust_bonferroni(std::span<const double> pvs);
std::vector<double> adjust_holm(std::span<const double> pvs);

// Hommel (1988) adjusted p-values; valid under independence or positive
// dependence. Follows the standard iterative reformulation.
std::vector<double> adjust_hommel(std::span<const double> pvs);

// Benjamini-Hochberg step-up FDR adjustment.
std::vector<double> adjust_bh(std::span<const double> pvs);

// Lowest-slope estimate of the number of true null hypotheses: with sorted
// p-values compute m0(k) = (K+1-k)/(1-pv_(k)) for pv_(k) < 1 and stop at the
// first increase; returns K when the sequence never increases.
int estimate_m0(std::span<const double> pvs);

// Adaptive BH: BH scaled by m0_hat / K.
std::vector<double> adjust_abh(std::span<const double> pvs);

// Benjamini-Yekutieli: BH inflated by the harmonic number H_K, valid under
// arbitrary dependence.
std::vector<double> adjust_by(std::span<const double> pvs);

}  // namespace pdbt
