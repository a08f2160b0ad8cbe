#include "pdbacktest/rng.hpp"

#include <algorithm>
#include <cmath>

namespace pdbt {

BinomialSampler::BinomialSampler(const BinomialLaw& law) {
    cdf_.resize(static_cast<std::size_t>(law.n) + 1);
    double acc = 0.0;
    for (long k = 0; k <= law.n; ++k) {
        acc += binom_pmf(law, k);
        cdf_[static_cast<std::size_t>(k)] = acc;
    }
    cdf_.back() = 1.0;
}

long BinomialSampler::operator()(std::mt19937_64& gen) const {
    const double u = uniform01(gen);
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return static_cast<long>(std::min<std::size_t>(
        static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1));
}

}  // namespace pdbt
