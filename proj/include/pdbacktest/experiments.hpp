#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "pdbacktest/portfolio.hpp"
#include "pdbacktest/report.hpp"

namespace pdbt {

enum class AlternativeKind { shift, dispersion };

// One Monte-Carlo study: portfolio sizes crossed with a grid of alternative
// values, n_sim replications each. Replication r uses the substream
// (seed, r), so results are bit-identical for any worker count.
struct ExperimentConfig {
    std::vector<int> portfolio_sizes;
    AlternativeKind alternative = AlternativeKind::shift;
    std::vector<double> values;
    double alpha = 0.05;
    int n_sim = 10000;
    std::uint64_t seed = 1;
    std::vector<Method> methods;
    std::optional<double> rho;  // one-factor asset correlation for sampling
    int hl_sims = 2000;         // inner simulations per replication (power runs)
    // Fixed portfolio realization instead of the quota builder; requires a
    // single portfolio size equal to its sum.
    std::optional<std::vector<long>> fixed_counts;
    int threads = 0;  // 0 = hardware concurrency

    void validate() const;
};

struct MethodCellStats {
    Method method;
    double avg_rejections = 0.0;
    double avg_rejections_se = 0.0;
    double global_rate = 0.0;  // frequency of rejecting at least one class
    double fdr = 0.0;          // mean of V / max(R,1)
    std::vector<double> class_rates;
};

struct ExperimentCell {
    int n_pf = 0;
    double alt_value = 0.0;
    std::vector<int> class_ids;  // 1-based assigned classes (nonempty columns)
    std::vector<MethodCellStats> methods;
    double hl_rate = std::numeric_limits<double>::quiet_NaN();
};

struct ExperimentResult {
    std::vector<ExperimentCell> cells;
};

// Per-class identification study: rejection frequencies, average rejection
// counts and empirical FDR for every requested method.
ExperimentResult run_identification(const ExperimentConfig& config);

// Power against the global calibration hypothesis: per-method frequency of
// rejecting at least one class, plus the exact HL test's rejection rate.
ExperimentResult run_global_power(const ExperimentConfig& config);

}  // namespace pdbt
