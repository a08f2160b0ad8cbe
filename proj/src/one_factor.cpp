#include "pdbacktest/one_factor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "pdbacktest/math_util.hpp"
#include "pdbacktest/rng.hpp"

namespace pdbt {

void OneFactorConfig::validate() const {
    if (!(rho > 0.0 && rho < 1.0))
        throw std::domain_error("one_factor: rho must lie in (0,1)");
    if (classes.empty()) throw std::domain_error("one_factor: empty class list");
    for (const auto& c : classes) {
        if (c.n < 1) throw std::domain_error("one_factor: class with n < 1");
        if (!(c.pd > 0.0 && c.pd < 1.0))
            throw std::domain_error("one_factor: pd must lie in (0,1)");
    }
    if (n_sim < 1) throw std::domain_error("one_factor: n_sim must be >= 1");
}

std::vector<long> one_factor_sample(const OneFactorConfig& config, std::mt19937_64& gen) {
    config.validate();
    const double sqrt_rho = std::sqrt(config.rho);
    const double sqrt_comp = std::sqrt(1.0 - config.rho);
    const double z = normal01(gen);
    std::vector<long> defaults(config.classes.size(), 0);
    for (std::size_t j = 0; j < config.classes.size(); ++j) {
        const double threshold = norm_quantile(config.classes[j].pd);
        long d = 0;
        for (long b = 0; b < config.classes[j].n; ++b)
            if (sqrt_rho * z + sqrt_comp * normal01(gen) <= threshold) ++d;
        defaults[j] = d;
    }
    return defaults;
}

OneFactorMinP::OneFactorMinP(const OneFactorConfig& config) : config_(config) {
    config_.validate();
    const std::size_t k = config_.classes.size();
    pv_tables_.reserve(k);
    for (const auto& c : config_.classes)
        pv_tables_.push_back(outcome_pvalues({c.n, c.pd}));

    pv_sim_.resize(static_cast<std::size_t>(config_.n_sim) * k);
    sorted_mins_.resize(static_cast<std::size_t>(config_.n_sim));
    for (int rep = 0; rep < config_.n_sim; ++rep) {
        auto gen = substream(config_.seed, static_cast<std::uint64_t>(rep));
        const auto defaults = one_factor_sample(config_, gen);
        double mn = 1.0;
        for (std::size_t j = 0; j < k; ++j) {
            const double pv = pv_tables_[j][static_cast<std::size_t>(defaults[j])];
            pv_sim_[static_cast<std::size_t>(rep) * k + j] = pv;
            mn = std::min(mn, pv);
        }
        sorted_mins_[static_cast<std::size_t>(rep)] = mn;
    }
    std::sort(sorted_mins_.begin(), sorted_mins_.end());
}

std::vector<double> OneFactorMinP::raw_pvalues(std::span<const long> defaults) const {
    if (defaults.size() != config_.classes.size())
        throw std::domain_error("one_factor raw_pvalues: size mismatch");
    std::vector<double> pvs(defaults.size());
    for (std::size_t j = 0; j < defaults.size(); ++j) {
        if (defaults[j] < 0 || defaults[j] > config_.classes[j].n)
            throw std::domain_error("one_factor raw_pvalues: defaults outside 0..n");
        pvs[j] = pv_tables_[j][static_cast<std::size_t>(defaults[j])];
    }
    return pvs;
}

double OneFactorMinP::full_min_cdf(double x) const {
    const auto it = std::upper_bound(sorted_mins_.begin(), sorted_mins_.end(), x);
    return static_cast<double>(it - sorted_mins_.begin()) /
           static_cast<double>(sorted_mins_.size());
}

double OneFactorMinP::subset_min_cdf(std::span<const std::size_t> subset, double x) const {
    const std::size_t k = config_.classes.size();
    long count = 0;
    for (int rep = 0; rep < config_.n_sim; ++rep) {
        const double* row = pv_sim_.data() + static_cast<std::size_t>(rep) * k;
        for (std::size_t j : subset) {
            if (row[j] <= x) {
                ++count;
                break;
            }
        }
    }
    return static_cast<double>(count) / static_cast<double>(config_.n_sim);
}

std::vector<double> OneFactorMinP::single_step(std::span<const double> pvs) const {
    if (pvs.size() != config_.classes.size())
        throw std::domain_error("one_factor single_step: size mismatch");
    std::vector<double> adj(pvs.size());
    for (std::size_t j = 0; j < pvs.size(); ++j) adj[j] = full_min_cdf(pvs[j]);
    return adj;
}

std::vector<double> OneFactorMinP::step_down(std::span<const double> pvs) const {
    if (pvs.size() != config_.classes.size())
        throw std::domain_error("one_factor step_down: size mismatch");
    const std::size_t k = pvs.size();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pvs[a] < pvs[b]; });
    std::vector<double> adj(k);
    double running = 0.0;
    for (std::size_t pos = 0; pos < k; ++pos) {
        const std::span<const std::size_t> subset(order.data() + pos, k - pos);
        double t = 1.0;
        for (std::size_t j : subset) t = std::min(t, pvs[j]);
        running = std::max(running, subset_min_cdf(subset, t));
        adj[order[pos]] = running;
    }
    std::size_t pos = 0;
    while (pos < k) {
        std::size_t end = pos + 1;
        while (end < k && pvs[order[end]] == pvs[order[pos]]) ++end;
        const double group = adj[order[end - 1]];
        for (std::size_t i = pos; i < end; ++i) adj[order[i]] = group;
        pos = end;
    }
    return adj;
}

DiscreteCdf OneFactorMinP::min_pvalue_cdf() const {
    DiscreteCdf cdf;
    const double n = static_cast<double>(sorted_mins_.size());
    for (std::size_t i = 0; i < sorted_mins_.size(); ++i) {
        if (!cdf.xs.empty() && sorted_mins_[i] == cdf.xs.back()) {
            cdf.ys.back() = static_cast<double>(i + 1) / n;
        } else {
            cdf.xs.push_back(sorted_mins_[i]);
            cdf.ys.push_back(static_cast<double>(i + 1) / n);
        }
    }
    return cdf;
}

DiscreteCdf simulated_minp_cdf(const OneFactorConfig& config) {
    if (config.n_sim < 10000)
        throw std::domain_error("simulated_minp_cdf: n_sim must be >= 10000");
    return OneFactorMinP(config).min_pvalue_cdf();
}

}  // namespace pdbt
