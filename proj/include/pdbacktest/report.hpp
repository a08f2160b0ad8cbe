#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pdbacktest/binomial.hpp"
#include "pdbacktest/minp.hpp"

namespace pdbt {

// One rating class of a validation sample.
struct ClassRecord {
    int id = 0;
    std::string label;
    long n = 0;
    double pd = 0.0;
    long defaults = 0;
};

// Per-class exposure counts, forecast PDs and observed defaults: the unit
// every test consumes. Classes with n = 0 are carried along but excluded
// from the tested family.
struct ValidationSample {
    std::vector<ClassRecord> classes;

    void validate() const;
    // Classes with n >= 1, in input order.
    std::vector<ClassRecord> tested() const;
    MinPInput minp_input() const;
};

enum class Method {
    bonferroni,
    holm,
    hommel,
    bh,
    abh,
    by,
    d_ind,
    d_bonf,
    sd_d_bonf,
};

std::span<const Method> all_methods();
std::string_view method_label(Method m);
std::optional<Method> parse_method(std::string_view name);
std::string valid_method_names();

// Raw plus per-method adjusted p-values for the tested classes, with the
// rejection rule "adjusted <= alpha".
struct AdjustmentReport {
    double alpha = 0.05;
    Tail tail = Tail::two_sided;
    std::vector<ClassRecord> classes;
    std::vector<double> raw;
    std::vector<Method> methods;
    std::vector<std::vector<double>> adjusted;  // [method][class]

    bool reject(std::size_t method_idx, std::size_t class_idx) const {
        return adjusted[method_idx][class_idx] <= alpha;
    }
};

AdjustmentReport run_battery(const ValidationSample& sample,
                             std::span<const Method> methods, double alpha,
                             Tail tail = Tail::two_sided);

// One flag per method: does the family reject at least one hypothesis?
std::vector<bool> global_reject(const AdjustmentReport& report, double alpha);

}  // namespace pdbt
