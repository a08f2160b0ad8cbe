#include "pdbacktest/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pdbt {

namespace {

void check_pvalues(std::span<const double> pvs) {
    if (pvs.empty()) throw std::domain_error("adjustment: empty p-value vector");
    for (double p : pvs) {
        if (!(p > 0.0 && p <= 1.0))
            throw std::domain_error("adjustment: p-value " + std::to_string(p) +
                                    " outside (0,1]");
    }
}

// Ascending p-value order, ties broken by original index for determinism.
std::vector<std::size_t> sort_order(std::span<const double> pvs) {
    std::vector<std::size_t> order(pvs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pvs[a] < pvs[b]; });
    return order;
}

}  // namespace

std::vector<double> adjust_bonferroni(std::span<const double> pvs) {
    check_pvalues(pvs);
    const double K = static_cast<double>(pvs.size());
    std::vector<double> out(pvs.size());
    for (std::size_t i = 0; i < pvs.size(); ++i) out[i] = std::min(K * pvs[i], 1.0);
    return out;
}

std::vector<double> adjust_holm(std::span<const double> pvs) {
    check_pvalues(pvs);
    const std::size_t K = pvs.size();
    const auto order = sort_order(pvs);
    std::vector<double> out(K);
    double running = 0.0;
    for (std::size_t i = 0; i < K; ++i) {
        running = std::max(running, static_cast<double>(K - i) * pvs[order[i]]);
        out[order[i]] = std::min(running, 1.0);
    }
    return out;
}

std::vector<double> adjust_hommel(std::span<const double> pvs) {
    check_pvalues(pvs);
    const std::size_t n = pvs.size();
    if (n < 2) return {pvs.begin(), pvs.end()};
    const auto order = sort_order(pvs);
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = pvs[order[i]];

    double q0 = 1.0;
    for (std::size_t i = 0; i < n; ++i)
        q0 = std::min(q0, static_cast<double>(n) * p[i] / static_cast<double>(i + 1));
    std::vector<double> q(n, q0), pa(n, q0);

    for (std::size_t m = n - 1; m >= 2; --m) {
        const std::size_t split = n - m + 1;  // first `split` entries form block i1
        double q1 = 1.0;
        for (std::size_t i = split; i < n; ++i)
            q1 = std::min(q1, static_cast<double>(m) * p[i] /
                                  static_cast<double>(i - split + 2));
        for (std::size_t i = 0; i < split; ++i)
            q[i] = std::min(static_cast<double>(m) * p[i], q1);
        for (std::size_t i = split; i < n; ++i) q[i] = q[split - 1];
        for (std::size_t i = 0; i < n; ++i) pa[i] = std::max(pa[i], q[i]);
    }

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[order[i]] = std::min(std::max(pa[i], p[i]), 1.0);
    return out;
}

std::vector<double> adjust_bh(std::span<const double> pvs) {
    check_pvalues(pvs);
    const std::size_t K = pvs.size();
    const auto order = sort_order(pvs);
    std::vector<double> out(K);
    double running = 1.0;
    for (std::size_t i = K; i-- > 0;) {
        running = std::min(running, static_cast<double>(K) /
                                        static_cast<double>(i + 1) * pvs[order[i]]);
        out[order[i]] = running;
    }
    return out;
}

int estimate_m0(std::span<const double> pvs) {
    check_pvalues(pvs);
    const std::size_t K = pvs.size();
    std::vector<double> sorted(pvs.begin(), pvs.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> m0s;
    for (std::size_t k = 1; k <= K; ++k) {
        const double pv = sorted[k - 1];
        if (pv >= 1.0) break;
        m0s.push_back(static_cast<double>(K + 1 - k) / (1.0 - pv));
    }
    for (std::size_t k = 1; k < m0s.size(); ++k) {
        if (m0s[k] > m0s[k - 1])
            return static_cast<int>(
                std::min(static_cast<double>(K), std::ceil(m0s[k])));
    }
    return static_cast<int>(K);
}

std::vector<double> adjust_abh(std::span<const double> pvs) {
    const int m0 = estimate_m0(pvs);
    std::vector<double> out = adjust_bh(pvs);
    const double scale = static_cast<double>(m0) / static_cast<double>(pvs.size());
    for (double& v : out) v = std::min(v * scale, 1.0);
    return out;
}

std::vector<double> adjust_by(std::span<const double> pvs) {
    std::vector<double> out = adjust_bh(pvs);
    double harmonic = 0.0;
    for (std::size_t i = 1; i <= pvs.size(); ++i)
        harmonic += 1.0 / static_cast<double>(i);
    for (double& v : out) v = std::min(v * harmonic, 1.0);
    return out;
}

}  // namespace pdbt
