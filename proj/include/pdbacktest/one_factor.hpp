#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "pdbacktest/minp.hpp"
#include "pdbacktest/step_cdf.hpp"

namespace pdbt {

// Gaussian one-factor default model: borrower i defaults when
// sqrt(rho)*Z + sqrt(1-rho)*U_i <= Phi^{-1}(pd of its class), with Z the
// systematic factor shared by all borrowers of a replication.
struct OneFactorConfig {
    double rho = 0.0;  // asset correlation, in (0,1)
    std::vector<MinPClass> classes;
    int n_sim = 10000;
    std::uint64_t seed = 1;

    void validate() const;
};

// Default counts per class for one replication.
std::vector<long> one_factor_sample(const OneFactorConfig& config, std::mt19937_64& gen);

// Empirical distribution of min(PV_1,...,PV_K) under the full null,
// estimated from n_sim one-factor replications.
DiscreteCdf simulated_minp_cdf(const OneFactorConfig& config);

// Min-P adjustments for dependent defaults. One simulation batch provides
// the distribution of every subset minimum: the step-down procedure takes
// minima over the relevant class subset of the same batch.
class OneFactorMinP {
  public:
    explicit OneFactorMinP(const OneFactorConfig& config);

    std::vector<double> raw_pvalues(std::span<const long> defaults) const;
    std::vector<double> single_step(std::span<const double> pvs) const;
    std::vector<double> step_down(std::span<const double> pvs) const;
    DiscreteCdf min_pvalue_cdf() const;

    // Empirical P(min over all classes <= x); used by the FWER checks.
    double full_min_cdf(double x) const;

  private:
    double subset_min_cdf(std::span<const std::size_t> subset, double x) const;

    OneFactorConfig config_;
    std::vector<std::vector<double>> pv_tables_;
    std::vector<double> pv_sim_;       // n_sim x K, row-major
    std::vector<double> sorted_mins_;  // minima over all classes, sorted
};

}  // namespace pdbt
