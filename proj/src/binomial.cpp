#include "pdbacktest/binomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pdbt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_law(const BinomialLaw& law) {
    if (law.n < 0)
        throw std::domain_error("BinomialLaw: n must be >= 0, got " + std::to_string(law.n));
    if (!(law.p >= 0.0 && law.p <= 1.0))
        throw std::domain_error("BinomialLaw: p must be in [0,1], got " + std::to_string(law.p));
}

void check_outcome(const BinomialLaw& law, long k, const char* what) {
    check_law(law);
    if (k < 0 || k > law.n)
        throw std::domain_error(std::string(what) + ": outcome " + std::to_string(k) +
                                " outside 0.." + std::to_string(law.n));
}

std::vector<double> log_pmf_all(const BinomialLaw& law) {
    std::vector<double> lp(static_cast<std::size_t>(law.n) + 1, kNegInf);
    if (law.p == 0.0) {
        lp[0] = 0.0;
        return lp;
    }
    if (law.p == 1.0) {
        lp.back() = 0.0;
        return lp;
    }
    const double lg_n1 = std::lgamma(static_cast<double>(law.n) + 1.0);
    const double log_p = std::log(law.p);
    const double log_q = std::log1p(-law.p);
    for (long k = 0; k <= law.n; ++k) {
        lp[static_cast<std::size_t>(k)] =
            lg_n1 - std::lgamma(static_cast<double>(k) + 1.0) -
            std::lgamma(static_cast<double>(law.n - k) + 1.0) +
            static_cast<double>(k) * log_p + static_cast<double>(law.n - k) * log_q;
    }
    return lp;
}

double clamp_pvalue(double pv) {
    if (pv > 1.0) return 1.0;
    if (pv <= 0.0) return std::numeric_limits<double>::min();
    return pv;
}

}  // namespace

double binom_log_pmf(const BinomialLaw& law, long k) {
    check_outcome(law, k, "binom_pmf");
    if (law.p == 0.0) return k == 0 ? 0.0 : kNegInf;
    if (law.p == 1.0) return k == law.n ? 0.0 : kNegInf;
    return std::lgamma(static_cast<double>(law.n) + 1.0) -
           std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(law.n - k) + 1.0) +
           static_cast<double>(k) * std::log(law.p) +
           static_cast<double>(law.n - k) * std::log1p(-law.p);
}

double binom_pmf(const BinomialLaw& law, long k) {
    return std::exp(binom_log_pmf(law, k));
}

std::vector<double> outcome_pvalues(const BinomialLaw& law, Tail tail) {
    check_law(law);
    const std::size_t m = static_cast<std::size_t>(law.n) + 1;
    const std::vector<double> lp = log_pmf_all(law);
    std::vector<double> pmf(m);
    for (std::size_t k = 0; k < m; ++k) pmf[k] = std::exp(lp[k]);

    std::vector<double> pv(m);
    if (tail == Tail::less) {
        double acc = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            acc += pmf[k];
            pv[k] = clamp_pvalue(acc);
        }
        return pv;
    }
    if (tail == Tail::greater) {
        double acc = 0.0;
        for (std::size_t k = m; k-- > 0;) {
            acc += pmf[k];
            pv[k] = clamp_pvalue(acc);
        }
        return pv;
    }

    // Two-sided: sum the masses of all outcomes at most as likely as k.
    // Outcomes are ranked by log-likelihood; masses accumulate in ascending
    // likelihood order, which also keeps the summation well conditioned.
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return lp[a] < lp[b]; });
    std::vector<double> sorted_lp(m), prefix(m);
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sorted_lp[i] = lp[order[i]];
        acc += pmf[order[i]];
        prefix[i] = acc;
    }
    const double tie_shift = std::log1p(kTieRelTol);
    for (std::size_t k = 0; k < m; ++k) {
        const double bound = lp[k] + tie_shift;
        const auto it = std::upper_bound(sorted_lp.begin(), sorted_lp.end(), bound);
        const std::size_t count = static_cast<std::size_t>(it - sorted_lp.begin());
        pv[k] = clamp_pvalue(count == 0 ? 0.0 : prefix[count - 1]);
    }
    return pv;
}

double binom_test_pvalue(const BinomialLaw& law, long x, Tail tail) {
    check_outcome(law, x, "binom_test_pvalue");
    return outcome_pvalues(law, tail)[static_cast<std::size_t>(x)];
}

PValueLaw pvalue_law(const BinomialLaw& law, Tail tail) {
    check_law(law);
    if (law.n < 1) throw std::domain_error("pvalue_law: requires n >= 1");
    const std::vector<double> pv = outcome_pvalues(law, tail);
    const std::vector<double> lp = log_pmf_all(law);

    std::vector<std::size_t> order(pv.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pv[a] < pv[b]; });

    PValueLaw out;
    for (std::size_t i : order) {
        const double mass = std::exp(lp[i]);
        if (!out.support.empty() && pv[i] == out.support.back()) {
            out.mass.back() += mass;
        } else {
            out.support.push_back(pv[i]);
            out.mass.push_back(mass);
        }
    }
    return out;
}

}  // namespace pdbt
