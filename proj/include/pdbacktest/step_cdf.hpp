#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pdbacktest/binomial.hpp"

namespace pdbt {

// Right-continuous step CDF on (0,1]: xs strictly increasing abscissae,
// ys nondecreasing cumulative values with ys.back() <= 1. Evaluation below
// xs.front() is 0.
struct DiscreteCdf {
    std::vector<double> xs;
    std::vector<double> ys;
};

// Abscissae closer than this are treated as the same support point when
// merging CDFs; identical p-values (for instance the value 1) routinely
// occur across classes.
inline constexpr double kMergeTol = 1e-15;

DiscreteCdf from_pvalue_law(const PValueLaw& law);

// F(x) with the right-continuous "<=" rule.
double eval(const DiscreteCdf& cdf, double x);

// Largest support point x with F(x) <= alpha, or nullopt when even the
// smallest attainable value already exceeds alpha (no rejection possible).
std::optional<double> critical_value(const DiscreteCdf& cdf, double alpha);

// Distribution of min(PV_1,...,PV_K) under independence:
// F(x) = 1 - prod_i (1 - F_i(x)) on the union of the supports.
DiscreteCdf combine_ind(std::span<const DiscreteCdf> cdfs);

// Conservative Bonferroni bound F(x) = min(sum_i F_i(x), 1).
DiscreteCdf combine_bonf(std::span<const DiscreteCdf> cdfs);

}  // namespace pdbt
