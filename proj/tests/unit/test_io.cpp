#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "pdbacktest/io.hpp"
#include "test_util.hpp"

using namespace pdbt;

TEST_CASE("validation csv parsing") {
    std::istringstream good(
        "class,label,n,pd,defaults\n"
        "1,AAA,100,0.001,0\n"
        "2,AA,0,0.002,0\n"
        "3,A,50,0.004,1\n");
    const ValidationSample sample = read_validation_csv(good, "good");
    REQUIRE(sample.classes.size() == 3);
    CHECK(sample.classes[0].label == "AAA");
    CHECK(sample.classes[1].n == 0);
    CHECK(sample.tested().size() == 2);
    CHECK(sample.minp_input().classes.size() == 2);

    std::istringstream bps(
        "class,label,n,pd,defaults,unit\n"
        "1,B,100,45.64,2,bps\n");
    CHECK(read_validation_csv(bps, "bps").classes[0].pd == doctest::Approx(0.004564));

    std::istringstream bad_number(
        "class,label,n,pd,defaults\n"
        "1,AAA,abc,0.001,0\n");
    CHECK_THROWS_WITH_AS(read_validation_csv(bad_number, "f"),
                         doctest::Contains("line 2"), ParseError);

    std::istringstream missing_col("class,n,pd,defaults\n1,100,0.001,0\n");
    CHECK_THROWS_AS(read_validation_csv(missing_col, "f"), ParseError);

    std::istringstream bad_pd(
        "class,label,n,pd,defaults\n"
        "1,AAA,100,1.5,0\n");
    CHECK_THROWS_AS(read_validation_csv(bad_pd, "f"), DataError);

    std::istringstream too_many_defaults(
        "class,label,n,pd,defaults\n"
        "1,AAA,10,0.1,11\n");
    CHECK_THROWS_AS(read_validation_csv(too_many_defaults, "f"), DataError);
}

TEST_CASE("report csv blanks untested classes") {
    ValidationSample sample;
    sample.classes.push_back({1, "a", 20, 0.01, 1});
    sample.classes.push_back({2, "b", 0, 0.02, 0});
    sample.classes.push_back({3, "c", 30, 0.03, 0});
    const auto methods = std::vector<Method>{Method::bonferroni, Method::bh};
    const AdjustmentReport report = run_battery(sample, methods, 0.05);
    std::ostringstream out;
    write_report_csv(out, sample, report);
    std::istringstream lines(out.str());
    std::string header, row1, row2, row3;
    std::getline(lines, header);
    std::getline(lines, row1);
    std::getline(lines, row2);
    std::getline(lines, row3);
    CHECK(header == "class,label,n,pd,defaults,p_value,bonf,bh,reject_bonf,reject_bh");
    CHECK(row2.substr(0, 14) == "2,b,0,0.02,0,,");
    CHECK(row1.find(",,") == std::string::npos);
}

TEST_CASE("json report round-trips exactly") {
    const ValidationSample sample =
        read_validation_csv_file(test::fixture_path("table1_input.csv"));
    const auto all = all_methods();
    const AdjustmentReport report =
        run_battery(sample, {all.begin(), all.end()}, 0.05);
    std::ostringstream out;
    write_report_json(out, sample, report, 0.34);
    const nlohmann::json doc = nlohmann::json::parse(out.str());
    CHECK(doc["alpha"].get<double>() == report.alpha);
    CHECK(doc["family_size"].get<std::size_t>() == report.classes.size());
    CHECK(doc["hl_p_value"].get<double>() == 0.34);
    for (std::size_t ci = 0; ci < report.classes.size(); ++ci) {
        const auto& row = doc["classes"][ci];
        CHECK(row["p_value"].get<double>() == report.raw[ci]);
        for (std::size_t mi = 0; mi < report.methods.size(); ++mi) {
            const std::string key(method_label(report.methods[mi]));
            CHECK(row["adjusted"][key].get<double>() == report.adjusted[mi][ci]);
            CHECK(row["reject"][key].get<bool>() == report.reject(mi, ci));
        }
    }
    // serializing the parsed document again is identical
    std::ostringstream out2;
    out2 << doc.dump(2) << "\n";
    CHECK(out2.str() == out.str());
}

TEST_CASE("experiment config parsing") {
    std::istringstream good(
        "# comment\n"
        "sizes = 100 300\n"
        "alternative = shift\n"
        "values = -3 0 3\n"
        "alpha = 0.05\n"
        "n_sim = 50\n"
        "seed = 9\n"
        "methods = bonf, d-bonf sd-d-bonf\n"
        "hl_sims = 250\n");
    const ExperimentConfig config = read_experiment_config(good, "conf");
    CHECK(config.portfolio_sizes == std::vector<int>{100, 300});
    CHECK(config.values == std::vector<double>{-3, 0, 3});
    CHECK(config.n_sim == 50);
    CHECK(config.methods ==
          std::vector<Method>{Method::bonferroni, Method::d_bonf, Method::sd_d_bonf});
    CHECK(config.hl_sims == 250);
    CHECK_FALSE(config.rho.has_value());

    std::istringstream missing(
        "sizes = 100\nalternative = shift\nvalues = 0\nalpha = 0.05\nn_sim = 10\nseed = 1\n");
    CHECK_THROWS_WITH_AS(read_experiment_config(missing, "conf"),
                         doctest::Contains("methods"), ConfigError);

    std::istringstream unknown_method(
        "sizes = 100\nalternative = shift\nvalues = 0\nalpha = 0.05\nn_sim = 10\nseed = 1\n"
        "methods = bonf frobnicate\n");
    CHECK_THROWS_WITH_AS(read_experiment_config(unknown_method, "conf"),
                         doctest::Contains("sd-d-bonf"), ConfigError);

    std::istringstream zero_sims(
        "sizes = 100\nalternative = shift\nvalues = 0\nalpha = 0.05\nn_sim = 0\nseed = 1\n"
        "methods = bonf\n");
    CHECK_THROWS_AS(read_experiment_config(zero_sims, "conf"), ConfigError);

    std::istringstream bad_alt(
        "sizes = 100\nalternative = wiggle\nvalues = 0\nalpha = 0.05\nn_sim = 10\nseed = 1\n"
        "methods = bonf\n");
    CHECK_THROWS_WITH_AS(read_experiment_config(bad_alt, "conf"),
                         doctest::Contains("alternative"), ConfigError);

    std::istringstream stray(
        "sizes = 100\nalternative = shift\nvalues = 0\nalpha = 0.05\nn_sim = 10\nseed = 1\n"
        "methods = bonf\nbogus_key = 3\n");
    CHECK_THROWS_WITH_AS(read_experiment_config(stray, "conf"),
                         doctest::Contains("bogus_key"), ConfigError);
}

TEST_CASE("counts csv") {
    const auto counts =
        read_counts_csv_file(test::fixture_path("portfolio_n300_counts.csv"), 14);
    REQUIRE(counts.size() == 14);
    CHECK(counts[0] == 2);
    CHECK(counts[12] == 0);
    CHECK_THROWS_AS(read_counts_csv_file(test::fixture_path("missing.csv"), 14),
                    ConfigError);
}

TEST_CASE("method names") {
    CHECK(parse_method("sd-d-bonf") == Method::sd_d_bonf);
    CHECK(parse_method("SD_D_BONF") == Method::sd_d_bonf);
    CHECK(parse_method("Hommel") == Method::hommel);
    CHECK(parse_method("hol") == Method::holm);
    CHECK_FALSE(parse_method("tukey").has_value());
    CHECK(method_label(Method::d_ind) == "d-ind");
}
