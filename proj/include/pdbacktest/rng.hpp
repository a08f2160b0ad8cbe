#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "pdbacktest/binomial.hpp"
#include "pdbacktest/math_util.hpp"

namespace pdbt {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Independent generator for replication `index` of a run seeded with `seed`.
// Identical (seed, index) pairs give identical streams regardless of how
// replications are distributed over threads.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    const std::uint64_t a = splitmix64(s);
    const std::uint64_t b = splitmix64(s);
    return std::mt19937_64(a ^ (b << 1));
}

inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double normal01(std::mt19937_64& gen) {
    double u = uniform01(gen);
    if (u <= 0.0) u = 0x1.0p-53;
    return norm_quantile(u);
}

// Binomial sampling by inversion of a cached outcome CDF. Construction costs
// O(n); draws are a binary search, identical on every platform.
class BinomialSampler {
  public:
    explicit BinomialSampler(const BinomialLaw& law);

    long operator()(std::mt19937_64& gen) const;
    long n() const { return static_cast<long>(cdf_.size()) - 1; }

  private:
    std::vector<double> cdf_;
};

}  // namespace pdbt
