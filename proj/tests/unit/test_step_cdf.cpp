#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "pdbacktest/step_cdf.hpp"
#include "test_util.hpp"

using namespace pdbt;

namespace {

std::vector<DiscreteCdf> k11_cdfs() {
    std::ifstream in(test::fixture_path("k11_example.csv"));
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    std::vector<DiscreteCdf> cdfs;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cls, n, p;
        std::getline(ss, cls, ',');
        std::getline(ss, n, ',');
        std::getline(ss, p, ',');
        cdfs.push_back(from_pvalue_law(pvalue_law({std::stol(n), std::stod(p)})));
    }
    REQUIRE(cdfs.size() == 11);
    return cdfs;
}

void check_valid(const DiscreteCdf& cdf) {
    REQUIRE(cdf.xs.size() == cdf.ys.size());
    for (std::size_t i = 0; i < cdf.xs.size(); ++i) {
        CHECK(cdf.xs[i] > 0.0);
        CHECK(cdf.ys[i] >= 0.0);
        CHECK(cdf.ys[i] <= 1.0 + 1e-12);
        if (i > 0) {
            CHECK(cdf.xs[i] > cdf.xs[i - 1]);
            CHECK(cdf.ys[i] >= cdf.ys[i - 1]);
        }
    }
}

}  // namespace

TEST_CASE("from_pvalue_law and eval") {
    PValueLaw trivial{{1.0}, {1.0}};
    const DiscreteCdf unit = from_pvalue_law(trivial);
    CHECK(unit.xs == std::vector<double>{1.0});
    CHECK(unit.ys == std::vector<double>{1.0});

    const DiscreteCdf cdf = from_pvalue_law(pvalue_law({5, 0.2}));
    check_valid(cdf);
    const auto [sup, mass] = test::oracle_pvalue_law(5, 0.2);
    double acc = 0.0;
    for (std::size_t i = 0; i < sup.size(); ++i) {
        acc += mass[i];
        CHECK(eval(cdf, sup[i]) == doctest::Approx(acc).epsilon(1e-12));
    }
    CHECK(eval(cdf, cdf.xs.front() * 0.5) == 0.0);
    CHECK(eval(cdf, 1.0) == doctest::Approx(1.0));
    // midpoint between support points sees the left value
    CHECK(eval(cdf, 0.5 * (cdf.xs[0] + cdf.xs[1])) == doctest::Approx(cdf.ys[0]));
}

TEST_CASE("closed-form check for one near-degenerate law") {
    // for n=46, p=0.0003 all outcomes >= 1 have p-values below the one at x=1
    const BinomialLaw law{46, 0.0003};
    const DiscreteCdf cdf = from_pvalue_law(pvalue_law(law));
    const double pv1 = two_sided_pvalue(law, 1);
    const double want = 1.0 - std::pow(1.0 - law.p, static_cast<double>(law.n));
    CHECK(eval(cdf, pv1) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("combining a single CDF is the identity") {
    const DiscreteCdf cdf = from_pvalue_law(pvalue_law({7, 0.1}));
    for (const auto& combined : {combine_ind({&cdf, 1}), combine_bonf({&cdf, 1})}) {
        REQUIRE(combined.xs == cdf.xs);
        for (std::size_t i = 0; i < cdf.ys.size(); ++i)
            CHECK(combined.ys[i] == doctest::Approx(cdf.ys[i]).epsilon(1e-12));
    }
    CHECK_THROWS_AS(combine_ind({}), std::domain_error);
    CHECK_THROWS_AS(combine_bonf({}), std::domain_error);
}

TEST_CASE("independence combination matches joint enumeration for two classes") {
    const BinomialLaw a{5, 0.2}, b{4, 0.35};
    const auto pv_a = outcome_pvalues(a), pv_b = outcome_pvalues(b);
    const std::vector<DiscreteCdf> cdfs = {from_pvalue_law(pvalue_law(a)),
                                           from_pvalue_law(pvalue_law(b))};
    const DiscreteCdf joint = combine_ind(cdfs);
    check_valid(joint);
    for (double x : joint.xs) {
        double want = 0.0;
        for (long ka = 0; ka <= a.n; ++ka)
            for (long kb = 0; kb <= b.n; ++kb)
                if (std::min(pv_a[static_cast<std::size_t>(ka)],
                             pv_b[static_cast<std::size_t>(kb)]) <= x)
                    want += binom_pmf(a, ka) * binom_pmf(b, kb);
        CHECK(eval(joint, x) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("bonferroni bound dominates the independence combination") {
    const auto cdfs = k11_cdfs();
    const DiscreteCdf ind = combine_ind(cdfs);
    const DiscreteCdf bonf = combine_bonf(cdfs);
    check_valid(ind);
    check_valid(bonf);
    REQUIRE(ind.xs.size() == bonf.xs.size());
    for (std::size_t i = 0; i < ind.xs.size(); ++i)
        CHECK(bonf.ys[i] >= ind.ys[i] - 1e-12);
}

TEST_CASE("critical values of the 11-class example") {
    const auto cdfs = k11_cdfs();
    for (const auto& combined : {combine_bonf(cdfs), combine_ind(cdfs)}) {
        const auto cv = critical_value(combined, 0.05);
        REQUIRE(cv.has_value());
        CHECK(std::abs(*cv - 0.0139) < 5e-4);
    }
    // analytic continuous references
    CHECK(std::abs((1.0 - std::pow(0.95, 1.0 / 11.0)) - 0.0047) < 5e-5);
    CHECK(std::abs(0.05 / 11.0 - 0.0045) < 5e-5);
}

TEST_CASE("continuous-uniform margins approach the analytic critical values") {
    const int m = 100000;
    DiscreteCdf grid;
    grid.xs.resize(m);
    grid.ys.resize(m);
    for (int i = 0; i < m; ++i) {
        grid.xs[static_cast<std::size_t>(i)] = static_cast<double>(i + 1) / m;
        grid.ys[static_cast<std::size_t>(i)] = static_cast<double>(i + 1) / m;
    }
    const std::vector<DiscreteCdf> margins(11, grid);
    const auto c_ind = critical_value(combine_ind(margins), 0.05);
    const auto c_bonf = critical_value(combine_bonf(margins), 0.05);
    REQUIRE(c_ind.has_value());
    REQUIRE(c_bonf.has_value());
    CHECK(std::abs(*c_ind - (1.0 - std::pow(0.95, 1.0 / 11.0))) < 2e-5);
    CHECK(std::abs(*c_bonf - 0.05 / 11.0) < 2e-5);
}

TEST_CASE("critical value sentinels") {
    DiscreteCdf point{{1.0}, {1.0}};
    CHECK_FALSE(critical_value(point, 0.05).has_value());
    CHECK(critical_value(point, 1.0) == 1.0);
    const DiscreteCdf cdf = from_pvalue_law(pvalue_law({5, 0.2}));
    CHECK(critical_value(cdf, 1.0) == cdf.xs.back());
    CHECK_THROWS_AS(critical_value(cdf, 0.0), std::domain_error);
}
