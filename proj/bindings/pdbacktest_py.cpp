#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pdbacktest/binomial.hpp"
#include "pdbacktest/classical.hpp"
#include "pdbacktest/experiments.hpp"
#include "pdbacktest/global_tests.hpp"
#include "pdbacktest/minp.hpp"
#include "pdbacktest/portfolio.hpp"
#include "pdbacktest/report.hpp"
#include "pdbacktest/rng.hpp"
#include "pdbacktest/step_cdf.hpp"

namespace py = pybind11;
using namespace pdbt;

namespace {

Tail tail_from(const std::string& name) {
    if (name == "two-sided" || name == "two.sided" || name == "two_sided")
        return Tail::two_sided;
    if (name == "less") return Tail::less;
    if (name == "greater") return Tail::greater;
    throw std::domain_error("tail must be two-sided, less or greater");
}

MinPInput input_from(const std::vector<long>& n, const std::vector<double>& pd,
                     const std::vector<long>& defaults) {
    if (n.size() != pd.size() || n.size() != defaults.size())
        throw std::domain_error("n, pd and defaults must have equal length");
    MinPInput input;
    for (std::size_t j = 0; j < n.size(); ++j)
        input.classes.push_back({n[j], pd[j], defaults[j]});
    return input;
}

CombineMode mode_from(const std::string& name) {
    if (name == "independence" || name == "ind") return CombineMode::independence;
    if (name == "bonferroni" || name == "bonf") return CombineMode::bonferroni;
    throw std::domain_error("mode must be independence or bonferroni");
}

py::dict report_to_dict(const AdjustmentReport& report) {
    py::dict out;
    py::list ids, labels, ns, pds, defaults;
    for (const auto& c : report.classes) {
        ids.append(c.id);
        labels.append(c.label);
        ns.append(c.n);
        pds.append(c.pd);
        defaults.append(c.defaults);
    }
    out["class"] = ids;
    out["label"] = labels;
    out["n"] = ns;
    out["pd"] = pds;
    out["defaults"] = defaults;
    out["p_value"] = report.raw;
    py::dict adjusted, reject;
    for (std::size_t mi = 0; mi < report.methods.size(); ++mi) {
        const std::string key(method_label(report.methods[mi]));
        adjusted[key.c_str()] = report.adjusted[mi];
        py::list flags;
        for (std::size_t ci = 0; ci < report.classes.size(); ++ci)
            flags.append(report.reject(mi, ci));
        reject[key.c_str()] = flags;
    }
    out["adjusted"] = adjusted;
    out["reject"] = reject;
    out["alpha"] = report.alpha;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Validation of default-probability forecasts via exact binomial "
              "tests and multiplicity adjustments";

    m.def(
        "binom_pmf",
        [](long n, double p, long k) { return binom_pmf({n, p}, k); },
        py::arg("n"), py::arg("p"), py::arg("k"));
    m.def(
        "binom_test_pvalue",
        [](long n, double p, long x, const std::string& tail) {
            return binom_test_pvalue({n, p}, x, tail_from(tail));
        },
        py::arg("n"), py::arg("p"), py::arg("x"), py::arg("tail") = "two-sided");
    m.def(
        "pvalue_law",
        [](long n, double p, const std::string& tail) {
            const PValueLaw law = pvalue_law({n, p}, tail_from(tail));
            return py::make_tuple(law.support, law.mass);
        },
        py::arg("n"), py::arg("p"), py::arg("tail") = "two-sided",
        "Attainable p-values and their null probabilities.");

    m.def("adjust_bonferroni", [](const std::vector<double>& p) { return adjust_bonferroni(p); });
    m.def("adjust_holm", [](const std::vector<double>& p) { return adjust_holm(p); });
    m.def("adjust_hommel", [](const std::vector<double>& p) { return adjust_hommel(p); });
    m.def("adjust_bh", [](const std::vector<double>& p) { return adjust_bh(p); });
    m.def("adjust_abh", [](const std::vector<double>& p) { return adjust_abh(p); });
    m.def("adjust_by", [](const std::vector<double>& p) { return adjust_by(p); });
    m.def("estimate_m0", [](const std::vector<double>& p) { return estimate_m0(p); });

    m.def(
        "minp_single_step",
        [](const std::vector<long>& n, const std::vector<double>& pd,
           const std::vector<long>& defaults, const std::string& mode) {
            return minp_single_step(input_from(n, pd, defaults), mode_from(mode));
        },
        py::arg("n"), py::arg("pd"), py::arg("defaults"),
        py::arg("mode") = "bonferroni");
    m.def(
        "minp_step_down",
        [](const std::vector<long>& n, const std::vector<double>& pd,
           const std::vector<long>& defaults, const std::string& mode) {
            return minp_step_down(input_from(n, pd, defaults), mode_from(mode));
        },
        py::arg("n"), py::arg("pd"), py::arg("defaults"),
        py::arg("mode") = "bonferroni");
    m.def(
        "minp_critical_value",
        [](const std::vector<long>& n, const std::vector<double>& pd, double alpha,
           const std::string& mode) -> py::object {
            std::vector<BinomialLaw> laws;
            for (std::size_t j = 0; j < n.size(); ++j) laws.push_back({n[j], pd[j]});
            const MinPAnalyzer analyzer(laws);
            const auto cv =
                critical_value(analyzer.min_pvalue_cdf(mode_from(mode)), alpha);
            if (!cv) return py::none();
            return py::float_(*cv);
        },
        py::arg("n"), py::arg("pd"), py::arg("alpha") = 0.05,
        py::arg("mode") = "bonferroni",
        "Largest attainable p-value rejected by the min-p rule, or None.");

    m.def(
        "hl_statistic",
        [](const std::vector<long>& n, const std::vector<double>& pd,
           const std::vector<long>& defaults) {
            return hl_statistic(input_from(n, pd, defaults));
        },
        py::arg("n"), py::arg("pd"), py::arg("defaults"));
    m.def(
        "hl_exact_test",
        [](const std::vector<long>& n, const std::vector<double>& pd,
           const std::vector<long>& defaults, int n_sim, std::uint64_t seed) {
            return hl_exact_test(input_from(n, pd, defaults), n_sim, seed);
        },
        py::arg("n"), py::arg("pd"), py::arg("defaults"), py::arg("n_sim") = 10000,
        py::arg("seed") = 1);

    m.def(
        "validate",
        [](const std::vector<long>& n, const std::vector<double>& pd,
           const std::vector<long>& defaults, double alpha,
           const std::vector<std::string>& method_names, const std::string& tail) {
            ValidationSample sample;
            for (std::size_t j = 0; j < n.size(); ++j)
                sample.classes.push_back({static_cast<int>(j + 1),
                                          std::to_string(j + 1), n[j], pd[j],
                                          defaults[j]});
            std::vector<Method> methods;
            if (method_names.empty()) {
                const auto all = all_methods();
                methods.assign(all.begin(), all.end());
            } else {
                for (const auto& name : method_names) {
                    const auto mm = parse_method(name);
                    if (!mm)
                        throw std::domain_error("unknown method '" + name +
                                                "'; valid methods: " +
                                                valid_method_names());
                    methods.push_back(*mm);
                }
            }
            return report_to_dict(
                run_battery(sample, methods, alpha, tail_from(tail)));
        },
        py::arg("n"), py::arg("pd"), py::arg("defaults"), py::arg("alpha") = 0.05,
        py::arg("methods") = std::vector<std::string>{},
        py::arg("tail") = "two-sided",
        "Raw and adjusted p-values plus rejection flags for one sample.");

    m.def("build_portfolio", [](int n_pf) {
        return build_portfolio(PortfolioSpec::prototype(), n_pf);
    });
    m.def(
        "upgrade_downgrade_matrix",
        [](const std::vector<long>& counts, int s) {
            return upgrade_downgrade_matrix(counts, s).cells;
        },
        py::arg("counts"), py::arg("s"));
    m.def(
        "dispersion_matrix",
        [](const std::vector<long>& counts, double h) {
            return dispersion_matrix(counts, h).cells;
        },
        py::arg("counts"), py::arg("h"));

    m.attr("__version__") = "0.1.0";
}
