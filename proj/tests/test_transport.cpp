#include "doctest.h"
#include "mclab/transport.hpp"
#include "mclab/errors.hpp"
#include "oracles.hpp"

using namespace mclab;

namespace {

Eigen::MatrixXd path_cost(int m) {
    Eigen::MatrixXd c(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) c(i, j) = std::abs(i - j);
    }
    return c;
}

}  // namespace

TEST_CASE("w1 on small hand cases") {
    Eigen::VectorXd mu(3), nu(3);
    mu << 1, 0, 0;
    nu << 0, 0, 1;
    CHECK(w1_distance({mu, nu, path_cost(3)}) == doctest::Approx(2.0));
    CHECK(w1_distance({mu, mu, path_cost(3)}) == 0.0);
    CHECK(w1_path(mu, nu) == doctest::Approx(2.0));
    Eigen::VectorXd heavy(3);
    heavy << 1, 0, 0.5;
    CHECK_THROWS_AS(w1_distance({mu, heavy, path_cost(3)}), InfeasibleError);
    CHECK_THROWS_AS(w1_distance({mu, nu, path_cost(2)}), DimensionError);
}

TEST_CASE("property: w1 is a metric on random measures") {
    oracle::Rng rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        const int m = oracle::uniform_int(rng, 2, 12);
        Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            for (int j = i + 1; j < m; ++j) cost(i, j) = cost(j, i) = oracle::uniform(rng, 0.5, 1.0);
        }
        // Weights in [1/2, 1] already satisfy the triangle inequality.
        const auto a = oracle::random_probability(rng, m);
        const auto b = oracle::random_probability(rng, m);
        const auto c = oracle::random_probability(rng, m);
        const double ab = w1_distance({a, b, cost});
        CHECK(ab >= 0.0);
        CHECK(ab == doctest::Approx(w1_distance({b, a, cost})).epsilon(1e-12));
        CHECK(ab <= w1_distance({a, c, cost}) + w1_distance({c, b, cost}) + 1e-12);
        // Total variation bounds: (min cost) TV <= W1 <= (max cost) TV.
        const double tv = 0.5 * (a - b).cwiseAbs().sum();
        CHECK(ab >= 0.5 * tv - 1e-12);
        CHECK(ab <= tv + 1e-12);
    }
}

TEST_CASE("property: w_infinity dominates w1 and is a realized cost") {
    oracle::Rng rng(8);
    for (int trial = 0; trial < 40; ++trial) {
        const int m = oracle::uniform_int(rng, 2, 10);
        const auto a = oracle::random_probability(rng, m);
        const auto b = oracle::random_probability(rng, m);
        const Eigen::MatrixXd cost = path_cost(m);
        const double winf = w_infinity({a, b, cost});
        CHECK(winf >= w1_distance({a, b, cost}) - 1e-12);
        CHECK(winf == std::round(winf));
        CHECK(coupling_within({a, b, cost}, winf));
        if (winf > 0) CHECK_FALSE(coupling_within({a, b, cost}, winf - 1));
    }
}
