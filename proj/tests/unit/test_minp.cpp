#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "pdbacktest/io.hpp"
#include "pdbacktest/minp.hpp"
#include "pdbacktest/rng.hpp"
#include "test_util.hpp"

using namespace pdbt;

namespace {

MinPInput table_input() {
    const ValidationSample sample =
        read_validation_csv_file(test::fixture_path("table1_input.csv"));
    return sample.minp_input();
}

MinPInput random_input(std::mt19937_64& gen) {
    std::uniform_int_distribution<int> ksize(1, 10);
    std::uniform_int_distribution<long> nsize(1, 60);
    std::uniform_real_distribution<double> pd(1e-4, 0.4);
    MinPInput input;
    const int k = ksize(gen);
    for (int j = 0; j < k; ++j) {
        MinPClass c;
        c.n = nsize(gen);
        c.pd = pd(gen);
        c.defaults = static_cast<long>(gen() % static_cast<std::uint64_t>(c.n + 1));
        input.classes.push_back(c);
    }
    return input;
}

}  // namespace

TEST_CASE("worked sample adjusted p-values") {
    const auto expected =
        test::load_expected_table(test::fixture_path("table1_expected.csv"));
    const std::vector<int> ids = {1, 2, 3, 4, 5, 6, 7, 8, 9, 11};
    const MinPInput input = table_input();

    const auto check = [&](const char* method, const std::vector<double>& got) {
        for (std::size_t i = 0; i < ids.size(); ++i) {
            INFO(method, " class ", ids[i]);
            CHECK(std::abs(got[i] - expected.at(method).at(ids[i])) < 1e-4 + 1e-12);
        }
    };
    check("d-ind", minp_single_step(input, CombineMode::independence));
    check("d-bonf", minp_single_step(input, CombineMode::bonferroni));
    check("sd-d-bonf", minp_step_down(input, CombineMode::bonferroni));
}

TEST_CASE("single class: adjusted equals raw") {
    MinPInput input;
    input.classes.push_back({14, 0.0105, 2});
    const double raw = two_sided_pvalue({14, 0.0105}, 2);
    for (CombineMode mode : {CombineMode::independence, CombineMode::bonferroni}) {
        CHECK(minp_single_step(input, mode)[0] == doctest::Approx(raw).epsilon(1e-12));
        CHECK(minp_step_down(input, mode)[0] == doctest::Approx(raw).epsilon(1e-12));
    }
}

TEST_CASE("single-step agrees with evaluating the combined CDF") {
    const MinPInput input = table_input();
    std::vector<BinomialLaw> laws;
    std::vector<long> defaults;
    for (const auto& c : input.classes) {
        laws.push_back({c.n, c.pd});
        defaults.push_back(c.defaults);
    }
    const MinPAnalyzer analyzer(laws);
    const auto pvs = analyzer.raw_pvalues(defaults);
    for (CombineMode mode : {CombineMode::independence, CombineMode::bonferroni}) {
        const DiscreteCdf full = analyzer.min_pvalue_cdf(mode);
        const auto adj = analyzer.single_step(pvs, mode);
        for (std::size_t j = 0; j < pvs.size(); ++j)
            CHECK(adj[j] == doctest::Approx(eval(full, pvs[j])).epsilon(1e-12));
    }
}

TEST_CASE("ordering properties on random samples") {
    std::mt19937_64 gen(31);
    for (int trial = 0; trial < 60; ++trial) {
        const MinPInput input = random_input(gen);
        const auto ss_ind = minp_single_step(input, CombineMode::independence);
        const auto ss_bonf = minp_single_step(input, CombineMode::bonferroni);
        const auto sd_ind = minp_step_down(input, CombineMode::independence);
        const auto sd_bonf = minp_step_down(input, CombineMode::bonferroni);
        std::vector<double> raw;
        for (const auto& c : input.classes)
            raw.push_back(two_sided_pvalue({c.n, c.pd}, c.defaults));
        for (std::size_t j = 0; j < input.classes.size(); ++j) {
            CHECK(ss_ind[j] <= ss_bonf[j] + 1e-12);
            CHECK(sd_ind[j] <= sd_bonf[j] + 1e-12);
            CHECK(sd_bonf[j] <= ss_bonf[j] + 1e-12);
            CHECK(sd_ind[j] <= ss_ind[j] + 1e-12);
            CHECK(ss_ind[j] > 0.0);
            CHECK(ss_bonf[j] <= 1.0);
        }
        // single-step preserves the raw ordering
        for (std::size_t a = 0; a < raw.size(); ++a)
            for (std::size_t b = 0; b < raw.size(); ++b)
                if (raw[a] < raw[b]) CHECK(ss_bonf[a] <= ss_bonf[b] + 1e-12);
        // step-down values are nondecreasing along the raw ordering
        std::vector<std::size_t> order(raw.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return raw[a] < raw[b]; });
        for (std::size_t i = 1; i < order.size(); ++i)
            CHECK(sd_bonf[order[i]] >= sd_bonf[order[i - 1]] - 1e-12);
    }
}

TEST_CASE("tied raw p-values receive equal adjusted values") {
    MinPInput input;
    // identical classes produce identical p-value laws, so raw ties are exact
    input.classes.push_back({5, 0.1, 1});
    input.classes.push_back({5, 0.1, 1});
    input.classes.push_back({5, 0.1, 0});
    const auto adj = minp_step_down(input, CombineMode::bonferroni);
    CHECK(adj[0] == adj[1]);
}

TEST_CASE("familywise error under the full null stays near the level") {
    // small Monte-Carlo check: defaults drawn from the null laws themselves
    MinPInput input = table_input();
    std::vector<BinomialLaw> laws;
    for (const auto& c : input.classes) laws.push_back({c.n, c.pd});
    const MinPAnalyzer analyzer(laws);
    std::vector<BinomialSampler> samplers;
    for (const auto& law : laws) samplers.emplace_back(law);

    const int n_sim = 4000;
    const double alpha = 0.05;
    int any_bonf = 0, any_sd = 0;
    std::vector<long> draws(laws.size());
    for (int rep = 0; rep < n_sim; ++rep) {
        auto gen = substream(505, static_cast<std::uint64_t>(rep));
        for (std::size_t j = 0; j < laws.size(); ++j) draws[j] = samplers[j](gen);
        const auto pvs = analyzer.raw_pvalues(draws);
        const auto ss = analyzer.single_step(pvs, CombineMode::bonferroni);
        const auto sd = analyzer.step_down(pvs, CombineMode::bonferroni);
        if (*std::min_element(ss.begin(), ss.end()) <= alpha) ++any_bonf;
        if (*std::min_element(sd.begin(), sd.end()) <= alpha) ++any_sd;
    }
    const double se = std::sqrt(alpha * (1 - alpha) / n_sim);
    CHECK(static_cast<double>(any_bonf) / n_sim <= alpha + 3 * se);
    CHECK(static_cast<double>(any_sd) / n_sim <= alpha + 3 * se);
}

TEST_CASE("input validation") {
    MinPInput empty;
    CHECK_THROWS_AS(minp_single_step(empty, CombineMode::bonferroni), std::domain_error);
    MinPInput zero;
    zero.classes.push_back({0, 0.1, 0});
    CHECK_THROWS_AS(minp_single_step(zero, CombineMode::bonferroni), std::domain_error);
    MinPInput bad_pd;
    bad_pd.classes.push_back({5, 0.0, 0});
    CHECK_THROWS_AS(minp_step_down(bad_pd, CombineMode::bonferroni), std::domain_error);
}
