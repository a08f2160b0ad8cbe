#include "pdbacktest/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pdbacktest/rng.hpp"

namespace pdbt {

namespace {

// One rung of the incremental allocation: hand out `seats` borrowers by
// largest remainder of the per-class deficits against the cumulative target.
void allocate_rung(const std::vector<double>& probs, long target_total,
                   std::vector<long>& alloc) {
    const std::size_t k = probs.size();
    long seats = target_total - std::accumulate(alloc.begin(), alloc.end(), 0L);
    std::vector<double> need(k);
    std::vector<long> give(k);
    for (std::size_t j = 0; j < k; ++j) {
        need[j] = static_cast<double>(target_total) * probs[j] -
                  static_cast<double>(alloc[j]);
        give[j] = std::max(0L, static_cast<long>(std::floor(need[j])));
    }
    long handed = std::accumulate(give.begin(), give.end(), 0L);

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return (need[a] - static_cast<double>(give[a])) >
               (need[b] - static_cast<double>(give[b]));
    });
    for (std::size_t idx = 0; handed < seats; idx = (idx + 1) % k) {
        ++give[order[idx]];
        ++handed;
    }
    while (handed > seats) {
        for (std::size_t t = k; t-- > 0;) {
            if (give[order[t]] > 0) {
                --give[order[t]];
                --handed;
                break;
            }
        }
    }
    for (std::size_t j = 0; j < k; ++j) alloc[j] += give[j];
}

}  // namespace

PortfolioSpec PortfolioSpec::make(std::vector<double> pds, std::vector<double> probs) {
    if (pds.empty() || pds.size() != probs.size())
        throw std::domain_error("PortfolioSpec: pds and probs must be nonempty and match");
    for (std::size_t i = 0; i < pds.size(); ++i) {
        if (!(pds[i] > 0.0 && pds[i] < 1.0))
            throw std::domain_error("PortfolioSpec: pds must lie in (0,1)");
        if (i > 0 && !(pds[i] > pds[i - 1]))
            throw std::domain_error("PortfolioSpec: pds must be strictly increasing");
        if (!(probs[i] > 0.0))
            throw std::domain_error("PortfolioSpec: class probabilities must be positive");
    }
    const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
    if (std::fabs(total - 1.0) > 0.05)
        throw std::domain_error("PortfolioSpec: class probabilities far from summing to 1");
    for (double& q : probs) q /= total;
    return PortfolioSpec{std::move(pds), std::move(probs)};
}

const PortfolioSpec& PortfolioSpec::prototype() {
    static const PortfolioSpec spec = PortfolioSpec::make(
        {0.00015, 0.0003, 0.0006, 0.0011, 0.0020, 0.0035, 0.0060, 0.0105, 0.0185,
         0.0325, 0.0570, 0.1000, 0.1750, 0.3380},
        {0.009, 0.014, 0.053, 0.070, 0.133, 0.133, 0.164, 0.149, 0.123, 0.077,
         0.046, 0.020, 0.008, 0.002});
    return spec;
}

std::vector<long> MisclassificationMatrix::row_sums() const {
    std::vector<long> out(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) out[static_cast<std::size_t>(i)] += at(i, j);
    return out;
}

std::vector<long> MisclassificationMatrix::col_sums() const {
    std::vector<long> out(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) out[static_cast<std::size_t>(j)] += at(i, j);
    return out;
}

long MisclassificationMatrix::total() const {
    return std::accumulate(cells.begin(), cells.end(), 0L);
}

std::vector<long> build_portfolio(const PortfolioSpec& spec, int n_pf) {
    if (n_pf < 1) throw std::domain_error("build_portfolio: n_pf must be >= 1");
    std::vector<long> alloc(spec.class_probs.size(), 0);
    for (long target = 100; target < n_pf; target += 100)
        allocate_rung(spec.class_probs, target, alloc);
    allocate_rung(spec.class_probs, n_pf, alloc);
    return alloc;
}

MisclassificationMatrix upgrade_downgrade_matrix(std::span<const long> counts, int s) {
    const int k = static_cast<int>(counts.size());
    if (k == 0) throw std::domain_error("upgrade_downgrade_matrix: empty counts");
    if (std::abs(s) > k)
        throw std::domain_error("upgrade_downgrade_matrix: |s| must be <= K");
    MisclassificationMatrix m{k, std::vector<long>(static_cast<std::size_t>(k) * k, 0)};
    for (int g = 1; g <= k; ++g) {
        const int assigned = std::clamp(g - s, 1, k);
        m.at(g - 1, assigned - 1) = counts[static_cast<std::size_t>(g - 1)];
    }
    return m;
}

MisclassificationMatrix dispersion_matrix(std::span<const long> counts, double h) {
    const int k = static_cast<int>(counts.size());
    if (k == 0) throw std::domain_error("dispersion_matrix: empty counts");
    if (!(h >= 0.0)) throw std::domain_error("dispersion_matrix: h must be >= 0");
    MisclassificationMatrix m{k, std::vector<long>(static_cast<std::size_t>(k) * k, 0)};
    if (h == 0.0) {
        for (int i = 0; i < k; ++i) m.at(i, i) = counts[static_cast<std::size_t>(i)];
        return m;
    }
    for (int i = 0; i < k; ++i) {
        double norm = 0.0;
        std::vector<double> w(static_cast<std::size_t>(k));
        for (int j = 0; j < k; ++j) {
            const double d = static_cast<double>(i - j) / h;
            w[static_cast<std::size_t>(j)] = std::exp(-0.5 * d * d);
            norm += w[static_cast<std::size_t>(j)];
        }
        for (int j = 0; j < k; ++j)
            m.at(i, j) = std::llround(static_cast<double>(counts[static_cast<std::size_t>(i)]) *
                                      w[static_cast<std::size_t>(j)] / norm);
    }
    return m;
}

ValidationSample assigned_sample(const MisclassificationMatrix& matrix,
                                 const PortfolioSpec& spec) {
    if (matrix.k != spec.size())
        throw std::domain_error("assigned_sample: matrix and spec sizes differ");
    const auto cols = matrix.col_sums();
    ValidationSample sample;
    for (int j = 0; j < matrix.k; ++j) {
        if (cols[static_cast<std::size_t>(j)] == 0) continue;
        sample.classes.push_back({j + 1, std::to_string(j + 1),
                                  cols[static_cast<std::size_t>(j)],
                                  spec.true_pds[static_cast<std::size_t>(j)], 0});
    }
    return sample;
}

ConvolutionSampler::ConvolutionSampler(const MisclassificationMatrix& matrix,
                                       const PortfolioSpec& spec)
    : k_(matrix.k) {
    if (matrix.k != spec.size())
        throw std::domain_error("ConvolutionSampler: matrix and spec sizes differ");
    for (int i = 0; i < matrix.k; ++i) {
        for (int j = 0; j < matrix.k; ++j) {
            const long n = matrix.at(i, j);
            if (n == 0) continue;
            cells_.push_back(
                {j, BinomialSampler({n, spec.true_pds[static_cast<std::size_t>(i)]})});
        }
    }
}

std::vector<long> ConvolutionSampler::operator()(std::mt19937_64& gen) const {
    std::vector<long> defaults(static_cast<std::size_t>(k_), 0);
    for (const auto& cell : cells_)
        defaults[static_cast<std::size_t>(cell.col)] += cell.sampler(gen);
    return defaults;
}

std::vector<long> sample_defaults(const MisclassificationMatrix& matrix,
                                  const PortfolioSpec& spec, std::mt19937_64& gen) {
    return ConvolutionSampler(matrix, spec)(gen);
}

}  // namespace pdbt
