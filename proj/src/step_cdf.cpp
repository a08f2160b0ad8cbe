#include "pdbacktest/step_cdf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pdbt {

namespace {

double value_at(const DiscreteCdf& cdf, double x, double tol) {
    const auto it = std::upper_bound(cdf.xs.begin(), cdf.xs.end(), x + tol);
    if (it == cdf.xs.begin()) return 0.0;
    return cdf.ys[static_cast<std::size_t>(it - cdf.xs.begin()) - 1];
}

std::vector<double> union_support(std::span<const DiscreteCdf> cdfs) {
    std::vector<double> xs;
    std::size_t total = 0;
    for (const auto& c : cdfs) total += c.xs.size();
    xs.reserve(total);
    for (const auto& c : cdfs) xs.insert(xs.end(), c.xs.begin(), c.xs.end());
    std::sort(xs.begin(), xs.end());
    std::vector<double> out;
    out.reserve(xs.size());
    for (double x : xs) {
        if (out.empty() || x - out.back() > kMergeTol) out.push_back(x);
    }
    return out;
}

template <typename Combine>
DiscreteCdf combine(std::span<const DiscreteCdf> cdfs, Combine&& fold) {
    if (cdfs.empty()) throw std::domain_error("combine: need at least one CDF");
    DiscreteCdf out;
    out.xs = union_support(cdfs);
    out.ys.reserve(out.xs.size());
    // Sweep each input once; per-input cursor tracks the last jump <= x.
    std::vector<std::size_t> cur(cdfs.size(), 0);
    std::vector<double> vals(cdfs.size(), 0.0);
    for (double x : out.xs) {
        for (std::size_t i = 0; i < cdfs.size(); ++i) {
            const auto& c = cdfs[i];
            while (cur[i] < c.xs.size() && c.xs[cur[i]] <= x + kMergeTol) {
                vals[i] = c.ys[cur[i]];
                ++cur[i];
            }
        }
        out.ys.push_back(fold(vals));
    }
    return out;
}

}  // namespace

DiscreteCdf from_pvalue_law(const PValueLaw& law) {
    DiscreteCdf cdf;
    cdf.xs = law.support;
    cdf.ys.reserve(law.mass.size());
    double acc = 0.0;
    for (double m : law.mass) {
        acc += m;
        cdf.ys.push_back(std::min(acc, 1.0));
    }
    return cdf;
}

double eval(const DiscreteCdf& cdf, double x) {
    return value_at(cdf, x, 0.0);
}

std::optional<double> critical_value(const DiscreteCdf& cdf, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::domain_error("critical_value: alpha must be in (0,1]");
    // ys is nondecreasing: find the last index with ys <= alpha.
    const auto it = std::upper_bound(cdf.ys.begin(), cdf.ys.end(), alpha);
    if (it == cdf.ys.begin()) return std::nullopt;
    return cdf.xs[static_cast<std::size_t>(it - cdf.ys.begin()) - 1];
}

DiscreteCdf combine_ind(std::span<const DiscreteCdf> cdfs) {
    return combine(cdfs, [](const std::vector<double>& vals) {
        double log_surv = 0.0;
        for (double v : vals) {
            if (v >= 1.0) return 1.0;
            log_surv += std::log1p(-v);
        }
        return -std::expm1(log_surv);
    });
}

DiscreteCdf combine_bonf(std::span<const DiscreteCdf> cdfs) {
    return combine(cdfs, [](const std::vector<double>& vals) {
        double s = 0.0;
        for (double v : vals) s += v;
        return std::min(s, 1.0);
    });
}

}  // namespace pdbt
