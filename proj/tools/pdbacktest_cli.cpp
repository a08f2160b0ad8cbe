// Command-line front end: validate PD forecasts against observed defaults,
// and drive the Monte-Carlo identification and power studies.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pdbacktest/experiments.hpp"
#include "pdbacktest/global_tests.hpp"
#include "pdbacktest/io.hpp"
#include "pdbacktest/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

std::vector<pdbt::Method> parse_methods(const std::vector<std::string>& names) {
    if (names.empty()) {
        const auto all = pdbt::all_methods();
        return {all.begin(), all.end()};
    }
    std::vector<pdbt::Method> methods;
    for (const auto& name : names) {
        const auto m = pdbt::parse_method(name);
        if (!m)
            throw pdbt::ConfigError("unknown method '" + name +
                                    "'; valid methods: " + pdbt::valid_method_names());
        methods.push_back(*m);
    }
    return methods;
}

pdbt::Tail parse_tail(const std::string& name) {
    if (name == "two-sided" || name == "two.sided" || name == "two_sided")
        return pdbt::Tail::two_sided;
    if (name == "less") return pdbt::Tail::less;
    if (name == "greater") return pdbt::Tail::greater;
    throw pdbt::ConfigError("unknown tail '" + name +
                            "'; expected two-sided, less or greater");
}

pdbt::ReportFormat parse_format(const std::string& name) {
    if (name == "csv") return pdbt::ReportFormat::csv;
    if (name == "json") return pdbt::ReportFormat::json;
    throw pdbt::ConfigError("unknown format '" + name + "'; expected csv or json");
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw pdbt::ConfigError("cannot open output file: " + path);
    return file;
}

struct ValidateArgs {
    std::string input;
    std::string out;
    std::string format = "csv";
    std::string tail = "two-sided";
    std::vector<std::string> methods;
    double alpha = 0.05;
    bool hl = false;
    int hl_sims = 10000;
    std::uint64_t seed = 1;
};

int run_validate(const ValidateArgs& args) {
    const pdbt::ValidationSample sample = pdbt::read_validation_csv_file(args.input);
    const auto methods = parse_methods(args.methods);
    const pdbt::Tail tail = parse_tail(args.tail);
    const pdbt::AdjustmentReport report =
        pdbt::run_battery(sample, methods, args.alpha, tail);

    std::optional<double> hl_pvalue;
    if (args.hl)
        hl_pvalue = pdbt::hl_exact_test(sample.minp_input(), args.hl_sims, args.seed);

    std::ofstream file;
    std::ostream& out = open_output(file, args.out);
    if (parse_format(args.format) == pdbt::ReportFormat::csv)
        pdbt::write_report_csv(out, sample, report, hl_pvalue);
    else
        pdbt::write_report_json(out, sample, report, hl_pvalue);
    return kExitOk;
}

struct StudyArgs {
    std::string config;
    std::string out;
    std::string format = "csv";
    int threads = 0;
};

int run_study(const StudyArgs& args, bool power) {
    pdbt::ExperimentConfig config = pdbt::read_experiment_config_file(args.config);
    if (args.threads > 0) config.threads = args.threads;
    const pdbt::ExperimentResult result =
        power ? pdbt::run_global_power(config) : pdbt::run_identification(config);
    std::ofstream file;
    std::ostream& out = open_output(file, args.out);
    if (power)
        pdbt::write_power_tables(out, result, parse_format(args.format));
    else
        pdbt::write_identification_tables(out, result, parse_format(args.format));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Per-class validation of default-probability forecasts via "
                 "exact binomial tests and multiplicity adjustments"};
    app.require_subcommand(1);

    ValidateArgs vargs;
    auto* validate = app.add_subcommand(
        "validate", "Test a validation sample and report adjusted p-values");
    validate->add_option("input", vargs.input, "CSV with class,label,n,pd,defaults")
        ->required();
    validate->add_option("--alpha", vargs.alpha, "significance level")
        ->capture_default_str();
    validate->add_option("--methods", vargs.methods,
                         "adjustment methods (default: all)")
        ->delimiter(',');
    validate->add_option("--format", vargs.format, "csv or json")->capture_default_str();
    validate->add_option("--out", vargs.out, "output file (default: stdout)");
    validate->add_option("--tail", vargs.tail, "two-sided, less or greater")
        ->capture_default_str();
    validate->add_flag("--hl", vargs.hl, "append the exact global calibration p-value");
    validate->add_option("--hl-sims", vargs.hl_sims, "simulations for the global test")
        ->capture_default_str();
    validate->add_option("--seed", vargs.seed, "seed for the global test")
        ->capture_default_str();

    StudyArgs sargs;
    auto* simulate = app.add_subcommand(
        "simulate", "Per-class identification study from a config file");
    simulate->add_option("config", sargs.config, "experiment config file")->required();
    simulate->add_option("--out", sargs.out, "output file (default: stdout)");
    simulate->add_option("--format", sargs.format, "csv or json")->capture_default_str();
    simulate->add_option("--threads", sargs.threads, "worker threads (0 = hardware)");

    StudyArgs pargs;
    auto* power = app.add_subcommand(
        "power", "Global rejection power study from a config file");
    power->add_option("config", pargs.config, "experiment config file")->required();
    power->add_option("--out", pargs.out, "output file (default: stdout)");
    power->add_option("--format", pargs.format, "csv or json")->capture_default_str();
    power->add_option("--threads", pargs.threads, "worker threads (0 = hardware)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (validate->parsed()) return run_validate(vargs);
        if (simulate->parsed()) return run_study(sargs, false);
        if (power->parsed()) return run_study(pargs, true);
    } catch (const pdbt::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const pdbt::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const pdbt::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
