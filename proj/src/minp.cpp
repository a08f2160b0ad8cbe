#include "pdbacktest/minp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pdbt {

namespace {

std::vector<BinomialLaw> laws_from_input(const MinPInput& input) {
    if (input.classes.empty()) throw std::domain_error("minp: empty input");
    std::vector<BinomialLaw> laws;
    laws.reserve(input.classes.size());
    for (const auto& c : input.classes) {
        if (c.n < 1)
            throw std::domain_error("minp: class with n < 1; drop empty classes first");
        if (!(c.pd > 0.0 && c.pd < 1.0))
            throw std::domain_error("minp: pd must lie in (0,1), got " +
                                    std::to_string(c.pd));
        if (c.defaults < 0 || c.defaults > c.n)
            throw std::domain_error("minp: defaults outside 0..n");
        laws.push_back({c.n, c.pd});
    }
    return laws;
}

std::vector<long> defaults_from_input(const MinPInput& input) {
    std::vector<long> d;
    d.reserve(input.classes.size());
    for (const auto& c : input.classes) d.push_back(c.defaults);
    return d;
}

}  // namespace

MinPAnalyzer::MinPAnalyzer(std::vector<BinomialLaw> laws, Tail tail)
    : laws_(std::move(laws)) {
    if (laws_.empty()) throw std::domain_error("MinPAnalyzer: empty family");
    pvalue_laws_.reserve(laws_.size());
    cdfs_.reserve(laws_.size());
    tables_.reserve(laws_.size());
    for (const auto& law : laws_) {
        tables_.push_back(outcome_pvalues(law, tail));
        pvalue_laws_.push_back(pvalue_law(law, tail));
        cdfs_.push_back(from_pvalue_law(pvalue_laws_.back()));
    }
}

std::vector<double> MinPAnalyzer::raw_pvalues(std::span<const long> defaults) const {
    if (defaults.size() != laws_.size())
        throw std::domain_error("raw_pvalues: size mismatch");
    std::vector<double> pvs(defaults.size());
    for (std::size_t j = 0; j < defaults.size(); ++j) {
        if (defaults[j] < 0 || defaults[j] > laws_[j].n)
            throw std::domain_error("raw_pvalues: defaults outside 0..n");
        pvs[j] = tables_[j][static_cast<std::size_t>(defaults[j])];
    }
    return pvs;
}

double MinPAnalyzer::subset_value(std::span<const std::size_t> subset, double x,
                                  CombineMode mode) const {
    if (mode == CombineMode::bonferroni) {
        double s = 0.0;
        for (std::size_t j : subset) s += eval(cdfs_[j], x);
        return std::min(s, 1.0);
    }
    double log_surv = 0.0;
    for (std::size_t j : subset) {
        const double v = eval(cdfs_[j], x);
        if (v >= 1.0) return 1.0;
        log_surv += std::log1p(-v);
    }
    return -std::expm1(log_surv);
}

std::vector<double> MinPAnalyzer::single_step(std::span<const double> pvs,
                                              CombineMode mode) const {
    if (pvs.size() != laws_.size())
        throw std::domain_error("single_step: size mismatch");
    std::vector<std::size_t> all(laws_.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::vector<double> adj(pvs.size());
    for (std::size_t j = 0; j < pvs.size(); ++j)
        adj[j] = std::max(subset_value(all, pvs[j], mode),
                          std::numeric_limits<double>::min());
    return adj;
}

std::vector<double> MinPAnalyzer::step_down(std::span<const double> pvs,
                                            CombineMode mode) const {
    if (pvs.size() != laws_.size())
        throw std::domain_error("step_down: size mismatch");
    const std::size_t K = pvs.size();
    std::vector<std::size_t> order(K);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pvs[a] < pvs[b]; });

    std::vector<double> adj(K);
    double running = std::numeric_limits<double>::min();
    for (std::size_t pos = 0; pos < K; ++pos) {
        const std::span<const std::size_t> subset(order.data() + pos, K - pos);
        double t = pvs[subset[0]];
        for (std::size_t j : subset) t = std::min(t, pvs[j]);
        running = std::max(running, subset_value(subset, t, mode));
        adj[order[pos]] = running;
    }
    // Classes sharing a raw p-value get the group's largest adjusted value.
    std::size_t pos = 0;
    while (pos < K) {
        std::size_t end = pos + 1;
        while (end < K && pvs[order[end]] == pvs[order[pos]]) ++end;
        const double group = adj[order[end - 1]];
        for (std::size_t i = pos; i < end; ++i) adj[order[i]] = group;
        pos = end;
    }
    return adj;
}

DiscreteCdf MinPAnalyzer::min_pvalue_cdf(CombineMode mode) const {
    return mode == CombineMode::bonferroni ? combine_bonf(cdfs_) : combine_ind(cdfs_);
}

std::vector<double> minp_single_step(const MinPInput& input, CombineMode mode, Tail tail) {
    const MinPAnalyzer analyzer(laws_from_input(input), tail);
    const auto defaults = defaults_from_input(input);
    return analyzer.single_step(analyzer.raw_pvalues(defaults), mode);
}

std::vector<double> minp_step_down(const MinPInput& input, CombineMode mode, Tail tail) {
    const MinPAnalyzer analyzer(laws_from_input(input), tail);
    const auto defaults = defaults_from_input(input);
    return analyzer.step_down(analyzer.raw_pvalues(defaults), mode);
}

}  // namespace pdbt
