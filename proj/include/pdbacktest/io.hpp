#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdbacktest/experiments.hpp"
#include "pdbacktest/report.hpp"

namespace pdbt {

// Malformed input file (syntax, unknown columns, bad numbers).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Syntactically valid input whose values violate the data contract.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad command usage or configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Validation sample CSV. Header: class,label,n,pd,defaults with an optional
// trailing `unit` column (`prob`, the default, or `bps`; basis points are
// converted to probabilities at ingestion).
ValidationSample read_validation_csv(std::istream& in, const std::string& name);
ValidationSample read_validation_csv_file(const std::string& path);

enum class ReportFormat { csv, json };

// Per-class report. Classes with n = 0 are echoed with blank p-values and do
// not count towards the family size.
void write_report_csv(std::ostream& out, const ValidationSample& sample,
                      const AdjustmentReport& report,
                      std::optional<double> hl_pvalue = std::nullopt);
void write_report_json(std::ostream& out, const ValidationSample& sample,
                       const AdjustmentReport& report,
                       std::optional<double> hl_pvalue = std::nullopt);

// Flat key-value experiment configuration ("key = value", '#' comments).
// Recognized keys: sizes, alternative (shift|dispersion), values, alpha,
// n_sim, seed, methods, rho, hl_sims, portfolio_file, threads.
ExperimentConfig read_experiment_config(std::istream& in, const std::string& name);
ExperimentConfig read_experiment_config_file(const std::string& path);

// Result tables keyed by (method, portfolio size, alternative value).
void write_identification_tables(std::ostream& out, const ExperimentResult& result,
                                 ReportFormat format);
void write_power_tables(std::ostream& out, const ExperimentResult& result,
                        ReportFormat format);

// Per-class counts CSV with header class,count (one row per class).
std::vector<long> read_counts_csv_file(const std::string& path, int expected_k);

}  // namespace pdbt
