#include "pdbacktest/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "pdbacktest/classical.hpp"
#include "pdbacktest/global_tests.hpp"
#include "pdbacktest/math_util.hpp"
#include "pdbacktest/rng.hpp"

namespace pdbt {

namespace {

void parallel_for(int n, int threads, const std::function<void(int, int)>& body) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, std::max(1, n));
    if (threads == 1) {
        body(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    const int chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const int lo = t * chunk;
        const int hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(body, lo, hi);
    }
    for (auto& th : pool) th.join();
}

// Samples the whole portfolio's default vector under a common one-factor
// shock: per replication one systematic draw, then one idiosyncratic draw
// per borrower.
struct OneFactorCells {
    double sqrt_rho, sqrt_comp;
    struct Cell {
        int col;
        long n;
        double threshold;
    };
    std::vector<Cell> cells;
    int k;

    std::vector<long> operator()(std::mt19937_64& gen) const {
        const double z = normal01(gen);
        std::vector<long> defaults(static_cast<std::size_t>(k), 0);
        for (const auto& c : cells) {
            long d = 0;
            for (long b = 0; b < c.n; ++b)
                if (sqrt_rho * z + sqrt_comp * normal01(gen) <= c.threshold) ++d;
            defaults[static_cast<std::size_t>(c.col)] += d;
        }
        return defaults;
    }
};

struct CellEngine {
    const ExperimentConfig& config;
    bool include_hl;

    std::vector<int> class_ids;       // 1-based ids of tested classes
    std::vector<std::size_t> column;  // matrix column per tested class
    std::vector<BinomialLaw> laws;
    std::vector<bool> truth;  // H_0^j true for this alternative?
    std::vector<std::vector<double>> pv_tables;
    std::optional<MinPAnalyzer> analyzer;
    std::optional<ConvolutionSampler> sampler;
    std::optional<OneFactorCells> factor_sampler;
    std::vector<BinomialSampler> hl_samplers;  // null laws for the inner HL loop
    std::vector<double> hl_expect, hl_var;

    CellEngine(const ExperimentConfig& cfg, const MisclassificationMatrix& matrix,
               const PortfolioSpec& spec, bool hl)
        : config(cfg), include_hl(hl) {
        const auto cols = matrix.col_sums();
        if (std::count_if(cols.begin(), cols.end(), [](long c) { return c > 0; }) > 32)
            throw std::domain_error("experiment: more than 32 assigned classes");
        for (int j = 0; j < matrix.k; ++j) {
            const long nj = cols[static_cast<std::size_t>(j)];
            if (nj == 0) continue;
            class_ids.push_back(j + 1);
            column.push_back(static_cast<std::size_t>(j));
            laws.push_back({nj, spec.true_pds[static_cast<std::size_t>(j)]});
            bool pure = true;
            for (int i = 0; i < matrix.k; ++i)
                if (matrix.at(i, j) > 0 && i != j) pure = false;
            truth.push_back(pure);
        }
        for (const auto& law : laws) pv_tables.push_back(outcome_pvalues(law));

        const bool needs_minp =
            std::any_of(config.methods.begin(), config.methods.end(), [](Method m) {
                return m == Method::d_ind || m == Method::d_bonf ||
                       m == Method::sd_d_bonf;
            });
        if (needs_minp) analyzer.emplace(laws);

        if (config.rho) {
            OneFactorCells f;
            f.sqrt_rho = std::sqrt(*config.rho);
            f.sqrt_comp = std::sqrt(1.0 - *config.rho);
            f.k = matrix.k;
            for (int i = 0; i < matrix.k; ++i)
                for (int j = 0; j < matrix.k; ++j)
                    if (matrix.at(i, j) > 0)
                        f.cells.push_back(
                            {j, matrix.at(i, j),
                             norm_quantile(spec.true_pds[static_cast<std::size_t>(i)])});
            factor_sampler = std::move(f);
        } else {
            sampler.emplace(matrix, spec);
        }

        if (include_hl) {
            for (const auto& law : laws) {
                hl_samplers.emplace_back(law);
                const double e = static_cast<double>(law.n) * law.p;
                hl_expect.push_back(e);
                hl_var.push_back(e * (1.0 - law.p));
            }
        }
    }

    double hl_stat(std::span<const long> obs) const {
        double t = 0.0;
        for (std::size_t j = 0; j < obs.size(); ++j) {
            const double d = static_cast<double>(obs[j]) - hl_expect[j];
            t += d * d / hl_var[j];
        }
        return t;
    }

    ExperimentCell run(int n_pf, double alt_value) const {
        const std::size_t kt = laws.size();
        const std::size_t nm = config.methods.size();
        const int n_sim = config.n_sim;

        // Per-replication records, written by disjoint index ranges and
        // reduced sequentially afterwards so the aggregate does not depend
        // on the thread count.
        std::vector<std::uint8_t> rej(nm * static_cast<std::size_t>(n_sim));
        std::vector<std::uint8_t> vfalse(nm * static_cast<std::size_t>(n_sim));
        std::vector<std::uint32_t> bits(nm * static_cast<std::size_t>(n_sim));
        std::vector<std::uint8_t> hl_flag(include_hl ? static_cast<std::size_t>(n_sim) : 0);

        parallel_for(n_sim, config.threads, [&](int lo, int hi) {
            std::vector<long> obs(kt);
            std::vector<double> pvs(kt);
            for (int rep = lo; rep < hi; ++rep) {
                auto gen = substream(config.seed, static_cast<std::uint64_t>(rep));
                const std::vector<long> all = factor_sampler ? (*factor_sampler)(gen)
                                                             : (*sampler)(gen);
                for (std::size_t j = 0; j < kt; ++j) {
                    obs[j] = all[column[j]];
                    pvs[j] = pv_tables[j][static_cast<std::size_t>(obs[j])];
                }
                for (std::size_t mi = 0; mi < nm; ++mi) {
                    const std::vector<double> adj = adjusted(config.methods[mi], pvs);
                    std::uint8_t r = 0, v = 0;
                    std::uint32_t b = 0;
                    for (std::size_t j = 0; j < kt; ++j) {
                        if (adj[j] <= config.alpha) {
                            ++r;
                            b |= (1u << j);
                            if (truth[j]) ++v;
                        }
                    }
                    const std::size_t slot =
                        mi * static_cast<std::size_t>(n_sim) + static_cast<std::size_t>(rep);
                    rej[slot] = r;
                    vfalse[slot] = v;
                    bits[slot] = b;
                }
                if (include_hl) {
                    const double t_obs = hl_stat(obs);
                    int exceed = 0;
                    std::vector<long> draw(kt);
                    for (int s = 0; s < config.hl_sims; ++s) {
                        for (std::size_t j = 0; j < kt; ++j) draw[j] = hl_samplers[j](gen);
                        if (hl_stat(draw) >= t_obs) ++exceed;
                    }
                    const double p = (1.0 + exceed) / (config.hl_sims + 1.0);
                    hl_flag[static_cast<std::size_t>(rep)] = p <= config.alpha ? 1 : 0;
                }
            }
        });

        ExperimentCell cell;
        cell.n_pf = n_pf;
        cell.alt_value = alt_value;
        cell.class_ids = class_ids;
        const double n = static_cast<double>(n_sim);
        for (std::size_t mi = 0; mi < nm; ++mi) {
            MethodCellStats st;
            st.method = config.methods[mi];
            std::uint64_t sum = 0, sum2 = 0, global = 0;
            std::vector<std::uint64_t> per_class(kt, 0);
            double fdr_sum = 0.0;
            for (int rep = 0; rep < n_sim; ++rep) {
                const std::size_t slot =
                    mi * static_cast<std::size_t>(n_sim) + static_cast<std::size_t>(rep);
                const std::uint64_t r = rej[slot];
                sum += r;
                sum2 += r * r;
                if (r > 0) {
                    ++global;
                    fdr_sum += static_cast<double>(vfalse[slot]) / static_cast<double>(r);
                }
                for (std::size_t j = 0; j < kt; ++j)
                    if (bits[slot] & (1u << j)) ++per_class[j];
            }
            st.avg_rejections = static_cast<double>(sum) / n;
            const double var =
                std::max(0.0, static_cast<double>(sum2) / n -
                                  st.avg_rejections * st.avg_rejections);
            st.avg_rejections_se = std::sqrt(var / n);
            st.global_rate = static_cast<double>(global) / n;
            st.fdr = fdr_sum / n;
            st.class_rates.resize(kt);
            for (std::size_t j = 0; j < kt; ++j)
                st.class_rates[j] = static_cast<double>(per_class[j]) / n;
            cell.methods.push_back(std::move(st));
        }
        if (include_hl) {
            std::uint64_t c = 0;
            for (auto f : hl_flag) c += f;
            cell.hl_rate = static_cast<double>(c) / n;
        }
        return cell;
    }

    std::vector<double> adjusted(Method m, std::span<const double> pvs) const {
        switch (m) {
            case Method::bonferroni: return adjust_bonferroni(pvs);
            case Method::holm: return adjust_holm(pvs);
            case Method::hommel: return adjust_hommel(pvs);
            case Method::bh: return adjust_bh(pvs);
            case Method::abh: return adjust_abh(pvs);
            case Method::by: return adjust_by(pvs);
            case Method::d_ind:
                return analyzer->single_step(pvs, CombineMode::independence);
            case Method::d_bonf:
                return analyzer->single_step(pvs, CombineMode::bonferroni);
            case Method::sd_d_bonf:
                return analyzer->step_down(pvs, CombineMode::bonferroni);
        }
        throw std::logic_error("unknown method");
    }
};

ExperimentResult run(const ExperimentConfig& config, bool include_hl) {
    config.validate();
    const PortfolioSpec& spec = PortfolioSpec::prototype();
    ExperimentResult result;
    for (int n_pf : config.portfolio_sizes) {
        std::vector<long> counts;
        if (config.fixed_counts) {
            counts = *config.fixed_counts;
        } else {
            counts = build_portfolio(spec, n_pf);
        }
        for (double value : config.values) {
            MisclassificationMatrix matrix =
                config.alternative == AlternativeKind::shift
                    // Experiment labels use the shift axis of the study design:
                    // label s moves grade g to clamp(g + s).
                    ? upgrade_downgrade_matrix(counts, -static_cast<int>(std::lround(value)))
                    : dispersion_matrix(counts, value);
            const CellEngine engine(config, matrix, spec, include_hl);
            result.cells.push_back(engine.run(n_pf, value));
        }
    }
    return result;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (n_sim < 1) throw std::domain_error("config: n_sim must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("config: alpha must be in (0,1)");
    if (values.empty()) throw std::domain_error("config: no alternative values");
    if (methods.empty()) throw std::domain_error("config: no methods");
    if (hl_sims < 1) throw std::domain_error("config: hl_sims must be >= 1");
    if (rho && !(*rho > 0.0 && *rho < 1.0))
        throw std::domain_error("config: rho must lie in (0,1)");
    const int k = PortfolioSpec::prototype().size();
    if (alternative == AlternativeKind::shift) {
        for (double v : values)
            if (std::fabs(v) > k || v != std::floor(v))
                throw std::domain_error("config: shift values must be integers with |s| <= K");
    } else {
        for (double v : values)
            if (!(v >= 0.0)) throw std::domain_error("config: dispersion values must be >= 0");
    }
    if (fixed_counts) {
        if (static_cast<int>(fixed_counts->size()) != k)
            throw std::domain_error("config: fixed counts must list all classes");
        if (portfolio_sizes.size() != 1)
            throw std::domain_error("config: fixed counts require a single portfolio size");
        const long total =
            std::accumulate(fixed_counts->begin(), fixed_counts->end(), 0L);
        if (total != portfolio_sizes.front())
            throw std::domain_error("config: fixed counts must sum to the portfolio size");
    } else {
        if (portfolio_sizes.empty())
            throw std::domain_error("config: no portfolio sizes");
        for (int n : portfolio_sizes)
            if (n < 1) throw std::domain_error("config: portfolio sizes must be >= 1");
    }
}

ExperimentResult run_identification(const ExperimentConfig& config) {
    return run(config, false);
}

ExperimentResult run_global_power(const ExperimentConfig& config) {
    return run(config, true);
}

}  // namespace pdbt
