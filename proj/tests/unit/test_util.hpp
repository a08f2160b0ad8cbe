#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pdbacktest/binomial.hpp"

namespace pdbt::test {

inline std::string fixture_path(const std::string& name) {
    return std::string(PDBT_FIXTURE_DIR) + "/" + name;
}

// Brute-force two-sided p-value: pmf via the multiplicative recurrence (an
// independent computation path), then a direct scan over all outcomes.
inline std::vector<double> oracle_pmf(long n, double p) {
    std::vector<double> pmf(static_cast<std::size_t>(n) + 1);
    pmf[0] = std::pow(1.0 - p, static_cast<double>(n));
    for (long k = 0; k < n; ++k)
        pmf[static_cast<std::size_t>(k) + 1] =
            pmf[static_cast<std::size_t>(k)] * static_cast<double>(n - k) /
            static_cast<double>(k + 1) * p / (1.0 - p);
    return pmf;
}

inline double oracle_two_sided(long n, double p, long x) {
    const auto pmf = oracle_pmf(n, p);
    const double bound = pmf[static_cast<std::size_t>(x)] * (1.0 + 1e-7);
    double s = 0.0;
    for (double m : pmf)
        if (m <= bound) s += m;
    return std::min(s, 1.0);
}

// Support/mass of the p-value distribution by full enumeration.
inline std::pair<std::vector<double>, std::vector<double>> oracle_pvalue_law(long n,
                                                                             double p) {
    const auto pmf = oracle_pmf(n, p);
    std::map<double, double> grouped;
    for (long k = 0; k <= n; ++k)
        grouped[oracle_two_sided(n, p, k)] += pmf[static_cast<std::size_t>(k)];
    std::pair<std::vector<double>, std::vector<double>> out;
    for (const auto& [pv, mass] : grouped) {
        out.first.push_back(pv);
        out.second.push_back(mass);
    }
    return out;
}

// method,class,expected rows of a frozen expectation table.
inline std::map<std::string, std::map<int, double>> load_expected_table(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::map<std::string, std::map<int, double>> out;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string method, cls, value;
        std::getline(ss, method, ',');
        std::getline(ss, cls, ',');
        std::getline(ss, value, ',');
        out[method][std::stoi(cls)] = std::stod(value);
    }
    return out;
}

}  // namespace pdbt::test
