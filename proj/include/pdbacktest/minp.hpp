#pragma once

#include <span>
#include <vector>

#include "pdbacktest/binomial.hpp"
#include "pdbacktest/step_cdf.hpp"

namespace pdbt {

// How the distribution of the minimum p-value is formed from the per-class
// p-value distributions.
enum class CombineMode { independence, bonferroni };

// One class of a validation sample as seen by the discrete Min-P machinery:
// exposures, forecast PD and observed defaults. Classes with n = 0 must be
// dropped before construction.
struct MinPClass {
    long n = 0;
    double pd = 0.0;
    long defaults = 0;
};

struct MinPInput {
    std::vector<MinPClass> classes;
};

// Precomputed per-class p-value laws for one family of binomial tests.
// Construction enumerates each law once; the adjustment calls are then
// cheap enough for simulation loops.
class MinPAnalyzer {
  public:
    explicit MinPAnalyzer(std::vector<BinomialLaw> laws, Tail tail = Tail::two_sided);

    std::size_t family_size() const { return laws_.size(); }

    // p-value of every outcome of class j, indexed by the default count.
    const std::vector<double>& outcome_pvalues(std::size_t j) const {
        return tables_[j];
    }

    std::vector<double> raw_pvalues(std::span<const long> defaults) const;

    // Single-step adjustment: pv'_j = F(pv_j) with F the distribution of the
    // minimum p-value over the whole family.
    std::vector<double> single_step(std::span<const double> pvs, CombineMode mode) const;

    // Step-down adjustment: classes ordered by significance, the most
    // significant one removed at each step and F rebuilt over the remainder;
    // a running maximum enforces monotonicity. Tied raw p-values receive
    // equal adjusted values.
    std::vector<double> step_down(std::span<const double> pvs, CombineMode mode) const;

    // Distribution of the minimum p-value over the whole family on its
    // union support.
    DiscreteCdf min_pvalue_cdf(CombineMode mode) const;

  private:
    double subset_value(std::span<const std::size_t> subset, double x,
                        CombineMode mode) const;

    std::vector<BinomialLaw> laws_;
    std::vector<PValueLaw> pvalue_laws_;
    std::vector<DiscreteCdf> cdfs_;
    std::vector<std::vector<double>> tables_;
};

// Convenience wrappers over MinPAnalyzer for a single validation sample.
std::vector<double> minp_single_step(const MinPInput& input, CombineMode mode,
                                     Tail tail = Tail::two_sided);
std::vector<double> minp_step_down(const MinPInput& input, CombineMode mode,
                                   Tail tail = Tail::two_sided);

}  // namespace pdbt
