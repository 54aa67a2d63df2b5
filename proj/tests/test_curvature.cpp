#include "doctest.h"
#include "mclab/curvature.hpp"
#include "mclab/functional.hpp"
#include "oracles.hpp"

using namespace mclab;

TEST_CASE("ollivier curvature of a lazy two-point chain") {
    Eigen::MatrixXd p(2, 2);
    p << 0.75, 0.25, 0.25, 0.75;
    const auto chain = MarkovChain::from_kernel(p);
    // W1 = |0.75 - 0.25| = 0.5.
    CHECK(ollivier_curvature(chain, 1, 2) == doctest::Approx(0.5));
    CHECK_THROWS_AS(ollivier_curvature(chain, 1, 1), NotNeighborsError);
}

TEST_CASE("closed form requires a birth-death chain") {
    Eigen::MatrixXd p(3, 3);
    p << 0.5, 0.25, 0.25, 0.25, 0.5, 0.25, 0.25, 0.25, 0.5;
    const auto chain = MarkovChain::from_kernel(p);
    CHECK_FALSE(is_birth_death(chain));
    CHECK_THROWS_AS(min_ollivier_curvature(chain, CurvatureMethod::closed_form_bd), MethodMismatchError);
    // Complete graph K3 with laziness 1/2: kappa = 1 - W1 = 1 - 1/4.
    CHECK(min_ollivier_curvature(chain, CurvatureMethod::lp).kappa_min == doctest::Approx(0.75));
}

TEST_CASE("exact curvature of the counterexample sits on the slow stretch") {
    for (int n : {4, 9, 20}) {
        const auto curvature = min_ollivier_curvature(counterexample_chain<Rational>(n));
        CHECK(curvature.kappa_min == Rational(1, 4L * n * n));
        CHECK(curvature.per_edge.size() == static_cast<std::size_t>(3 * n - 1));
    }
}

TEST_CASE("property: lp curvature matches the hand closed form on lazy bd chains") {
    oracle::Rng rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const int m = oracle::uniform_int(rng, 2, 12);
        const Eigen::MatrixXd p = oracle::bd_kernel(oracle::random_bd_rates(rng, m));
        const auto chain = MarkovChain::from_kernel(p);
        const auto report = min_ollivier_curvature(chain, CurvatureMethod::lp);
        for (const auto& e : report.per_edge) CHECK(std::fabs(e.kappa - oracle::bd_edge_curvature(p, e.x)) < 1e-10);
    }
}

TEST_CASE("property: lichnerowicz on lazy chains") {
    oracle::Rng rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        const int m = oracle::uniform_int(rng, 2, 10);
        const auto chain = MarkovChain::from_kernel(oracle::random_reversible_kernel(rng, m, true));
        CHECK(spectral_gap(chain) >= min_ollivier_curvature(chain, CurvatureMethod::lp).kappa_min - 1e-9);
    }
}

TEST_CASE("gamma matrices reproduce the direct formulas") {
    oracle::Rng rng(29);
    const Eigen::MatrixXd p = oracle::random_reversible_kernel(rng, 6, false, 0.5);
    const auto chain = MarkovChain::from_kernel(p);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd f(6);
        for (auto& v : f) v = oracle::uniform(rng, -1, 1);
        for (State x = 1; x <= 6; ++x) {
            CHECK(f.dot(gamma_matrix(chain, x) * f) == doctest::Approx(oracle::gamma_at(p, f, f, x - 1)).epsilon(1e-10));
            CHECK(f.dot(gamma2_matrix(chain, x) * f) == doctest::Approx(oracle::gamma2_at(p, f, x - 1)).epsilon(1e-10));
        }
    }
}

TEST_CASE("bakry-emery curvature of the lazy two-point chain") {
    // Gamma_2 / Gamma is constant here: with flip probability q it equals q.
    for (double q : {0.1, 0.25, 0.5}) {
        Eigen::MatrixXd p(2, 2);
        p << 1 - q, q, q, 1 - q;
        const auto chain = MarkovChain::from_kernel(p);
        Eigen::VectorXd f(2);
        f << 1, -1;
        const double ratio = oracle::gamma2_at(p, f, 0) / oracle::gamma_at(p, f, f, 0);
        CHECK(bakry_emery_curvature(chain, 1) == doctest::Approx(ratio).epsilon(1e-10));
    }
}

TEST_CASE("obstruction checks on the counterexample") {
    const auto bd = counterexample_chain<Rational>(8);
    const auto concavity = check_log_concavity(stationary_distribution(bd));
    CHECK_FALSE(concavity.holds);
    REQUIRE(concavity.violation.has_value());
    CHECK(*concavity.violation == 9);
    const auto monotone = check_monotone_rates(bd);
    CHECK_FALSE(monotone.holds);
    CHECK(monotone.which == "up");

    const auto logs = check_log_concavity(stationary_distribution(counterexample_chain<double>(8)));
    CHECK_FALSE(logs.holds);
    CHECK(*logs.violation == 9);
}

TEST_CASE("property: monotone rates give log-concave measures") {
    oracle::Rng rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const int m = oracle::uniform_int(rng, 3, 15);
        std::vector<double> u(m), d(m);
        for (auto& v : u) v = oracle::uniform(rng, 0.01, 0.25);
        for (auto& v : d) v = oracle::uniform(rng, 0.01, 0.25);
        std::sort(u.begin(), u.end(), std::greater<>());
        std::sort(d.begin(), d.end());
        Eigen::VectorXd up(m - 1), down(m - 1);
        for (int k = 0; k < m - 1; ++k) {
            up(k) = u[k];
            down(k) = d[k + 1];
        }
        const auto bd = BirthDeathChain<double>::create(up, down);
        CHECK(check_monotone_rates(bd).holds);
        CHECK(check_log_concavity(stationary_distribution(bd)).holds);
    }
}

TEST_CASE("semigroup contraction at the curvature rate") {
    const auto chain = to_chain(counterexample_chain<Rational>(4));
    const auto report = check_semigroup_contraction(chain, 1.0 / 64, {1, 10, 100}, 20, 7);
    CHECK(report.checks == 60);
    CHECK(report.violations == 0);
    CHECK(report.worst_ratio <= 1.0 + 1e-8);
    // Far above the curvature the bound must break.
    CHECK(check_semigroup_contraction(chain, 1.0, {10}, 20, 7).violations > 0);
}

TEST_CASE("sectional check reports the worst edge") {
    Eigen::MatrixXd p(2, 2);
    p << 0.5, 0.5, 0.5, 0.5;
    const auto two = check_nonnegative_sectional(MarkovChain::from_kernel(p));
    CHECK(two.holds);
    CHECK(two.worst_w_infinity == 0.0);
    const auto ce = check_nonnegative_sectional(to_chain(counterexample_chain<Rational>(4)));
    CHECK(ce.worst_w_infinity <= 2.0);
}
