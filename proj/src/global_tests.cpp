#include "pdbacktest/global_tests.hpp"

#include <algorithm>
#include <stdexcept>

#include "pdbacktest/rng.hpp"

namespace pdbt {

namespace {

void check_input(const MinPInput& input) {
    if (input.classes.empty()) throw std::domain_error("hl: empty input");
    for (const auto& c : input.classes) {
        if (c.n < 1) throw std::domain_error("hl: class with n < 1");
        if (!(c.pd > 0.0 && c.pd < 1.0))
            throw std::domain_error("hl: pd must lie strictly in (0,1)");
        if (c.defaults < 0 || c.defaults > c.n)
            throw std::domain_error("hl: defaults outside 0..n");
    }
}

double statistic(const MinPInput& input, std::span<const long> defaults) {
    double t = 0.0;
    for (std::size_t j = 0; j < input.classes.size(); ++j) {
        const auto& c = input.classes[j];
        const double e = static_cast<double>(c.n) * c.pd;
        const double v = e * (1.0 - c.pd);
        const double d = static_cast<double>(defaults[j]) - e;
        t += d * d / v;
    }
    return t;
}

}  // namespace

double hl_statistic(const MinPInput& input) {
    check_input(input);
    std::vector<long> defaults;
    defaults.reserve(input.classes.size());
    for (const auto& c : input.classes) defaults.push_back(c.defaults);
    return statistic(input, defaults);
}

HlNullDistribution::HlNullDistribution(const MinPInput& input, int n_sim,
                                       std::uint64_t seed) {
    check_input(input);
    if (n_sim < 1) throw std::domain_error("hl: n_sim must be >= 1");
    std::vector<BinomialSampler> samplers;
    samplers.reserve(input.classes.size());
    for (const auto& c : input.classes) samplers.emplace_back(BinomialLaw{c.n, c.pd});

    sorted_.resize(static_cast<std::size_t>(n_sim));
    std::vector<long> draws(input.classes.size());
    for (int r = 0; r < n_sim; ++r) {
        auto gen = substream(seed, static_cast<std::uint64_t>(r));
        for (std::size_t j = 0; j < samplers.size(); ++j) draws[j] = samplers[j](gen);
        sorted_[static_cast<std::size_t>(r)] = statistic(input, draws);
    }
    std::sort(sorted_.begin(), sorted_.end());
}

double HlNullDistribution::pvalue(double t_obs) const {
    const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), t_obs);
    const auto exceed = static_cast<double>(sorted_.end() - it);
    return (1.0 + exceed) / (static_cast<double>(sorted_.size()) + 1.0);
}

double hl_exact_test(const MinPInput& input, int n_sim, std::uint64_t seed) {
    if (n_sim < 1000) throw std::domain_error("hl_exact_test: n_sim must be >= 1000");
    const HlNullDistribution null_dist(input, n_sim, seed);
    return null_dist.pvalue(hl_statistic(input));
}

}  // namespace pdbt
