#include "doctest.h"
#include "mclab/chain.hpp"
#include "oracles.hpp"

using namespace mclab;

TEST_CASE("parse_rational accepts fractions, integers and decimals") {
    CHECK(parse_rational("3/12") == Rational(1, 4));
    CHECK(parse_rational(" -7 ") == Rational(-7));
    CHECK(parse_rational("0.125") == Rational(1, 8));
    CHECK(parse_rational("-.5") == Rational(-1, 2));
    CHECK(parse_rational("010/08") == Rational(5, 4));
    CHECK(format_rational(Rational(6, 4)) == "3/2");
    CHECK(format_rational(Rational(2)) == "2/1");
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("abc"), ParseError);
    CHECK_THROWS_AS(parse_rational(""), ParseError);
}

TEST_CASE("kernel validation") {
    Eigen::MatrixXd bad_sum(2, 2);
    bad_sum << 0.5, 0.4, 0.5, 0.5;
    CHECK_THROWS_AS(MarkovChain::from_kernel(bad_sum), RowSumError);

    Eigen::MatrixXd split(3, 3);
    split << 1, 0, 0, 0, 0.5, 0.5, 0, 0.5, 0.5;
    CHECK_THROWS_AS(MarkovChain::from_kernel(split), DisconnectedError);

    Eigen::MatrixXd negative(2, 2);
    negative << 1.5, -0.5, 0.5, 0.5;
    CHECK_THROWS_AS(MarkovChain::from_kernel(negative), NegativeRateError);

    // A biased cycle has uniform stationary measure but is not reversible.
    Eigen::MatrixXd cycle(3, 3);
    cycle << 0, 0.8, 0.2, 0.2, 0, 0.8, 0.8, 0.2, 0;
    CHECK_THROWS_AS(MarkovChain::from_kernel(cycle), NotReversibleError);

    CHECK_THROWS_AS(MarkovChain::from_kernel(Eigen::MatrixXd(2, 3)), DimensionError);
}

TEST_CASE("birth-death construction errors") {
    Vector<Rational> up(2), down(2);
    up << Rational(1, 2), Rational(0);
    down << Rational(1, 4), Rational(1, 4);
    CHECK_THROWS_AS(BirthDeathChain<Rational>::create(up, down), DisconnectedError);
    up << Rational(1, 4), Rational(3, 4);
    down << Rational(1, 2), Rational(1, 4);
    CHECK_THROWS_AS(BirthDeathChain<Rational>::create(up, down), RowOverflowError);
    up << Rational(-1, 4), Rational(1, 4);
    CHECK_THROWS_AS(BirthDeathChain<Rational>::create(up, down), NegativeRateError);
    CHECK_THROWS_AS(counterexample_chain<Rational>(3), DomainError);
}

TEST_CASE("counterexample rates at n = 4") {
    const auto bd = counterexample_chain<Rational>(4);
    CHECK(bd.size() == 12);
    CHECK(bd.up(1) == Rational(1, 64));
    CHECK(bd.up(4) == Rational(1, 64));
    CHECK(bd.up(5) == Rational(7, 64));  // (16 - 4 - 5) / 64
    CHECK(bd.up(11) == Rational(1, 64));
    CHECK(bd.down(2) == Rational(7, 64));  // (4 + 3) / 64
    CHECK(bd.down(4) == Rational(9, 64));
    CHECK(bd.down(5) == Rational(1, 4));
    CHECK(bd.down(12) == Rational(1, 4));
    CHECK(bd.up(12) == 0);
    CHECK(bd.down(1) == 0);
}

TEST_CASE("property: stationary measure is invariant and balanced") {
    oracle::Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int m = oracle::uniform_int(rng, 2, 15);
        const Eigen::MatrixXd p = oracle::random_reversible_kernel(rng, m, trial % 2 == 0);
        const auto chain = MarkovChain::from_kernel(p);
        const Eigen::VectorXd pi = chain.pi().weights();
        CHECK(std::fabs(pi.sum() - 1.0) < 1e-12);
        CHECK((pi.transpose() * p - pi.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(detailed_balance_residual(chain) < 1e-9);
    }
}

TEST_CASE("property: exact and log-space birth-death measures agree") {
    for (int n : {4, 7, 12}) {
        const auto exact = stationary_distribution(counterexample_chain<Rational>(n));
        const auto logs = stationary_distribution(counterexample_chain<double>(n));
        const Eigen::VectorXd diff = exact.log_weights() - logs.log_weights();
        CHECK(diff.cwiseAbs().maxCoeff() < 1e-10);
        CHECK(exact.weights().sum() == 1);
    }
}

TEST_CASE("bd measure matches the ratio-product oracle") {
    oracle::Rng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const int m = oracle::uniform_int(rng, 2, 20);
        const auto rates = oracle::random_bd_rates(rng, m);
        const auto bd = BirthDeathChain<double>::create(rates.up, rates.down);
        const Eigen::VectorXd expected = oracle::bd_stationary(oracle::bd_kernel(rates));
        CHECK((stationary_distribution(bd).weights() - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("heat semigroup") {
    oracle::Rng rng(3);
    const Eigen::MatrixXd p = oracle::random_reversible_kernel(rng, 6, true);
    const auto chain = MarkovChain::from_kernel(p);
    const HeatSemigroup semigroup(chain);
    CHECK((semigroup.matrix(0.0) - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-12);
    // Rows stay stochastic and P_s P_t = P_{s+t}.
    const Eigen::MatrixXd p1 = semigroup.matrix(1.3);
    CHECK((p1.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
    CHECK((p1 * semigroup.matrix(0.7) - semigroup.matrix(2.0)).cwiseAbs().maxCoeff() < 1e-12);
    // Small t: P_t ~ I + t (P - I).
    const double t = 1e-6;
    const Eigen::MatrixXd first_order = Eigen::MatrixXd::Identity(6, 6) + t * (p - Eigen::MatrixXd::Identity(6, 6));
    CHECK((semigroup.matrix(t) - first_order).cwiseAbs().maxCoeff() < 1e-11);
    CHECK(semigroup.spectrum()(0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("sparsity, diameter and edges") {
    const auto bd = counterexample_chain<Rational>(4);
    CHECK(sparsity(bd) == 64);
    const auto chain = to_chain(bd);
    CHECK(sparsity(chain) == doctest::Approx(64.0));
    CHECK(diameter(chain) == 11);
    CHECK(chain.edges().size() == 11);
    CHECK(chain.neighbors(1) == std::vector<State>{2});
}
