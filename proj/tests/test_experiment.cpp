#include "doctest.h"
#include "mclab/experiment.hpp"

using namespace mclab;

TEST_CASE("experiment row at n = 4") {
    SweepConfig config;
    config.exact_lsi_max_n = 0;
    const auto row = experiment_row(4, config);
    CHECK(row.n == 4);
    CHECK(row.kappa_min == 1.0 / 64);
    CHECK(row.d == 64);
    CHECK(row.pi_1 > 0.5);
    CHECK_FALSE(row.lsi_exact.has_value());
    CHECK(row.ratio == doctest::Approx(row.isocap_bound * std::log(64.0) / row.kappa_min));
}

TEST_CASE("rational and float rows agree") {
    SweepConfig exact;
    exact.exact_lsi_max_n = 0;
    SweepConfig logs = exact;
    logs.mode = NumericMode::float64_log_space;
    for (int n : {5, 10, 24}) {
        const auto a = experiment_row(n, exact);
        const auto b = experiment_row(n, logs);
        CHECK(a.kappa_min == doctest::Approx(b.kappa_min).epsilon(1e-12));
        CHECK(a.cap_log == doctest::Approx(b.cap_log).epsilon(1e-10));
        CHECK(a.pi_B_log == doctest::Approx(b.pi_B_log).epsilon(1e-10));
        CHECK(a.ratio == doctest::Approx(b.ratio).epsilon(1e-10));
    }
}

TEST_CASE("reproduce sorts n and records failures per row") {
    SweepConfig config;
    config.n_list = {8, 3, 4};
    config.exact_lsi_max_n = 0;
    const auto rows = reproduce(config);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].n == 3);
    CHECK(rows[0].error.has_value());
    CHECK_FALSE(rows[1].error.has_value());
    CHECK(rows[2].n == 8);
}

TEST_CASE("counterexample check thresholds") {
    const auto report = paper_checks({12, 20}, NumericMode::exact_rational);
    CHECK(report.threshold_iii == 11);
    CHECK(report.threshold_pi1 == 4);
    CHECK(report.claimed_checks_pass());
    const auto row = paper_check_row(10, NumericMode::exact_rational);
    CHECK_FALSE(row.check("iii").pass);
    CHECK(row.check("i").pass);
    CHECK_THROWS_AS(row.check("nope"), IndexError);
    CHECK_THROWS_AS(paper_checks({3}, NumericMode::exact_rational), DomainError);
}

TEST_CASE("float checks agree with exact checks") {
    for (int n : {11, 16, 40}) {
        const auto exact = paper_check_row(n, NumericMode::exact_rational);
        const auto logs = paper_check_row(n, NumericMode::float64_log_space);
        REQUIRE(exact.checks.size() == logs.checks.size());
        for (std::size_t i = 0; i < exact.checks.size(); ++i) {
            CHECK(exact.checks[i].pass == logs.checks[i].pass);
            CHECK(std::fabs(exact.checks[i].margin - logs.checks[i].margin) <=
                  1e-10 * std::max(1.0, std::fabs(exact.checks[i].margin)));
        }
    }
}
