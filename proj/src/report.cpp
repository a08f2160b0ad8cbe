#include "pdbacktest/report.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <stdexcept>

#include "pdbacktest/classical.hpp"

namespace pdbt {

namespace {

constexpr std::array<Method, 9> kAllMethods = {
    Method::bonferroni, Method::holm,   Method::hommel,
    Method::bh,         Method::abh,    Method::by,
    Method::d_ind,      Method::d_bonf, Method::sd_d_bonf,
};

std::string normalize(std::string_view name) {
    std::string out;
    for (char c : name) {
        if (c == '-' || c == '_' || c == ' ') continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

}  // namespace

void ValidationSample::validate() const {
    if (classes.empty()) throw std::domain_error("validation sample: no classes");
    for (const auto& c : classes) {
        if (c.n < 0)
            throw std::domain_error("class " + c.label + ": n must be >= 0");
        if (c.defaults < 0 || c.defaults > c.n)
            throw std::domain_error("class " + c.label + ": defaults outside 0..n");
        if (c.n > 0 && !(c.pd > 0.0 && c.pd < 1.0))
            throw std::domain_error("class " + c.label + ": pd must lie in (0,1)");
    }
}

std::vector<ClassRecord> ValidationSample::tested() const {
    std::vector<ClassRecord> out;
    for (const auto& c : classes)
        if (c.n >= 1) out.push_back(c);
    return out;
}

MinPInput ValidationSample::minp_input() const {
    MinPInput input;
    for (const auto& c : classes)
        if (c.n >= 1) input.classes.push_back({c.n, c.pd, c.defaults});
    return input;
}

std::span<const Method> all_methods() { return kAllMethods; }

std::string_view method_label(Method m) {
    switch (m) {
        case Method::bonferroni: return "bonf";
        case Method::holm: return "holm";
        case Method::hommel: return "hommel";
        case Method::bh: return "bh";
        case Method::abh: return "abh";
        case Method::by: return "by";
        case Method::d_ind: return "d-ind";
        case Method::d_bonf: return "d-bonf";
        case Method::sd_d_bonf: return "sd-d-bonf";
    }
    return "?";
}

std::optional<Method> parse_method(std::string_view name) {
    const std::string key = normalize(name);
    if (key == "bonf" || key == "bonferroni") return Method::bonferroni;
    if (key == "hol" || key == "holm") return Method::holm;
    if (key == "hom" || key == "hommel") return Method::hommel;
    if (key == "bh") return Method::bh;
    if (key == "abh") return Method::abh;
    if (key == "by") return Method::by;
    if (key == "dind") return Method::d_ind;
    if (key == "dbonf") return Method::d_bonf;
    if (key == "sddbonf") return Method::sd_d_bonf;
    return std::nullopt;
}

std::string valid_method_names() {
    std::string out;
    for (Method m : kAllMethods) {
        if (!out.empty()) out += ", ";
        out += method_label(m);
    }
    return out;
}

AdjustmentReport run_battery(const ValidationSample& sample,
                             std::span<const Method> methods, double alpha,
                             Tail tail) {
    sample.validate();
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("run_battery: alpha must be in (0,1)");

    AdjustmentReport report;
    report.alpha = alpha;
    report.tail = tail;
    report.classes = sample.tested();
    if (report.classes.empty())
        throw std::domain_error("run_battery: no class with n >= 1");
    report.methods.assign(methods.begin(), methods.end());

    std::vector<BinomialLaw> laws;
    std::vector<long> defaults;
    for (const auto& c : report.classes) {
        laws.push_back({c.n, c.pd});
        defaults.push_back(c.defaults);
    }
    const bool needs_minp =
        std::any_of(methods.begin(), methods.end(), [](Method m) {
            return m == Method::d_ind || m == Method::d_bonf || m == Method::sd_d_bonf;
        });

    std::optional<MinPAnalyzer> analyzer;
    if (needs_minp) {
        analyzer.emplace(laws, tail);
        report.raw = analyzer->raw_pvalues(defaults);
    } else {
        report.raw.reserve(laws.size());
        for (std::size_t j = 0; j < laws.size(); ++j)
            report.raw.push_back(binom_test_pvalue(laws[j], defaults[j], tail));
    }

    for (Method m : methods) {
        switch (m) {
            case Method::bonferroni:
                report.adjusted.push_back(adjust_bonferroni(report.raw));
                break;
            case Method::holm:
                report.adjusted.push_back(adjust_holm(report.raw));
                break;
            case Method::hommel:
                report.adjusted.push_back(adjust_hommel(report.raw));
                break;
            case Method::bh:
                report.adjusted.push_back(adjust_bh(report.raw));
                break;
            case Method::abh:
                report.adjusted.push_back(adjust_abh(report.raw));
                break;
            case Method::by:
                report.adjusted.push_back(adjust_by(report.raw));
                break;
            case Method::d_ind:
                report.adjusted.push_back(
                    analyzer->single_step(report.raw, CombineMode::independence));
                break;
            case Method::d_bonf:
                report.adjusted.push_back(
                    analyzer->single_step(report.raw, CombineMode::bonferroni));
                break;
            case Method::sd_d_bonf:
                report.adjusted.push_back(
                    analyzer->step_down(report.raw, CombineMode::bonferroni));
                break;
        }
    }
    return report;
}

std::vector<bool> global_reject(const AdjustmentReport& report, double alpha) {
    std::vector<bool> out;
    out.reserve(report.adjusted.size());
    for (const auto& adj : report.adjusted) {
        const double m = *std::min_element(adj.begin(), adj.end());
        out.push_back(m <= alpha);
    }
    return out;
}

}  // namespace pdbt
