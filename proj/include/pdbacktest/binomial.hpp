#pragma once

#include <span>
#include <vector>

namespace pdbt {

// Binomial law of the default count in one rating class: O ~ Bin(n, p).
struct BinomialLaw {
    long n = 0;      // exposures, >= 0
    double p = 0.0;  // default probability, in [0,1]
};

// Which tail the class-wise test uses. The two-sided variant sums the
// probabilities of all outcomes at most as likely as the observed one
// (likelihood ties resolved with a relative tolerance, see kTieRelTol).
enum class Tail { two_sided, less, greater };

// Relative tolerance when comparing outcome likelihoods in the two-sided
// test: an outcome k counts as "no more likely" than x whenever
// pmf(k) <= pmf(x) * (1 + kTieRelTol).
inline constexpr double kTieRelTol = 1e-7;

// Distribution of the test's p-value as a random variable under the null:
// the attainable p-values (strictly increasing, in (0,1]) and their
// probabilities.
struct PValueLaw {
    std::vector<double> support;
    std::vector<double> mass;
};

double binom_log_pmf(const BinomialLaw& law, long k);
double binom_pmf(const BinomialLaw& law, long k);

// p-value for observing x defaults under the law. Result lies in (0,1];
// it is never reported as exactly zero.
double binom_test_pvalue(const BinomialLaw& law, long x, Tail tail = Tail::two_sided);

inline double two_sided_pvalue(const BinomialLaw& law, long x) {
    return binom_test_pvalue(law, x, Tail::two_sided);
}

// p-value of every outcome k = 0..n, indexed by k.
std::vector<double> outcome_pvalues(const BinomialLaw& law, Tail tail = Tail::two_sided);

// Null distribution of the p-value. Outcomes sharing a p-value are merged,
// their masses summed. Requires n >= 1.
PValueLaw pvalue_law(const BinomialLaw& law, Tail tail = Tail::two_sided);

}  // namespace pdbt
