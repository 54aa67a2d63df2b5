#pragma once

// Independent reference computations used only by tests. Nothing here calls
// into the library's numerical routines.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "mclab/chain.hpp"

namespace oracle {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Birth–death rates with up + down <= budget at every state.
struct BdRates {
    Eigen::VectorXd up;    // k = 1..m-1
    Eigen::VectorXd down;  // k = 2..m
};

inline BdRates random_bd_rates(Rng& rng, int m, double budget = 0.5) {
    BdRates r{Eigen::VectorXd(m - 1), Eigen::VectorXd(m - 1)};
    std::vector<double> u(m + 1, 0.0), d(m + 1, 0.0);
    for (int k = 1; k <= m; ++k) {
        const double total = uniform(rng, 0.05, budget);
        const double split = uniform(rng, 0.1, 0.9);
        u[k] = k < m ? (k > 1 ? total * split : total) : 0.0;
        d[k] = k > 1 ? (k < m ? total * (1 - split) : total) : 0.0;
    }
    for (int k = 1; k < m; ++k) r.up(k - 1) = u[k];
    for (int k = 2; k <= m; ++k) r.down(k - 2) = d[k];
    return r;
}

inline Eigen::MatrixXd bd_kernel(const BdRates& r) {
    const int m = static_cast<int>(r.up.size()) + 1;
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(m, m);
    for (int k = 1; k < m; ++k) p(k - 1, k) = r.up(k - 1);
    for (int k = 2; k <= m; ++k) p(k - 1, k - 2) = r.down(k - 2);
    for (int k = 0; k < m; ++k) p(k, k) = 1.0 - p.row(k).sum();
    return p;
}

/// Reversible walk from symmetric conductances on a random connected graph:
/// a random spanning tree plus extra edges. With `lazy` the walk holds with
/// probability at least 1/2.
inline Eigen::MatrixXd random_reversible_kernel(Rng& rng, int m, bool lazy, double extra_edge_prob = 0.3) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(m, m);
    for (int x = 1; x < m; ++x) {
        const int parent = uniform_int(rng, 0, x - 1);
        const double w = uniform(rng, 0.1, 1.0);
        c(x, parent) = c(parent, x) = w;
    }
    for (int x = 0; x < m; ++x) {
        for (int y = x + 1; y < m; ++y) {
            if (c(x, y) == 0 && uniform(rng, 0, 1) < extra_edge_prob) c(x, y) = c(y, x) = uniform(rng, 0.1, 1.0);
        }
    }
    Eigen::MatrixXd p(m, m);
    for (int x = 0; x < m; ++x) p.row(x) = c.row(x) / c.row(x).sum();
    if (lazy) p = 0.5 * (Eigen::MatrixXd::Identity(m, m) + p);
    // Exact row sums keep validation tolerances out of the picture.
    for (int x = 0; x < m; ++x) {
        p(x, x) = 0.0;
        p(x, x) = std::max(0.0, 1.0 - p.row(x).sum());
    }
    return p;
}

inline Eigen::VectorXd random_probability(Rng& rng, int m) {
    Eigen::VectorXd v(m);
    for (auto& x : v) x = uniform(rng, 0.0, 1.0);
    return v / v.sum();
}

/// W1 on the path 1..m: sum of |F_mu - F_nu| over the first m-1 cut points.
inline double path_w1(const Eigen::VectorXd& mu, const Eigen::VectorXd& nu) {
    double fm = 0, fn = 0, total = 0;
    for (Eigen::Index i = 0; i + 1 < mu.size(); ++i) {
        fm += mu(i);
        fn += nu(i);
        total += std::fabs(fm - fn);
    }
    return total;
}

/// Ollivier curvature of the edge (k, k+1) of a birth–death kernel by hand.
inline double bd_edge_curvature(const Eigen::MatrixXd& p, int k) {
    const int m = static_cast<int>(p.rows());
    auto at = [&](int x, int y) { return (x < 1 || y < 1 || x > m || y > m) ? 0.0 : p(x - 1, y - 1); };
    return at(k, k + 1) - at(k, k - 1) - at(k + 1, k + 2) + at(k + 1, k);
}

/// Stationary weights of a birth–death kernel by ratio products.
inline Eigen::VectorXd bd_stationary(const Eigen::MatrixXd& p) {
    const int m = static_cast<int>(p.rows());
    Eigen::VectorXd pi(m);
    pi(0) = 1.0;
    for (int k = 1; k < m; ++k) pi(k) = pi(k - 1) * p(k - 1, k) / p(k, k - 1);
    return pi / pi.sum();
}

/// Series resistance between {1..a} and {b..m}.
inline double bd_capacity(const Eigen::MatrixXd& p, int a, int b) {
    const Eigen::VectorXd pi = bd_stationary(p);
    double resistance = 0.0;
    for (int k = a; k < b; ++k) resistance += 1.0 / (pi(k - 1) * p(k - 1, k));
    return 1.0 / resistance;
}

/// Gamma(f,g)(x) and Gamma_2(f)(x) straight from their definitions.
inline double gamma_at(const Eigen::MatrixXd& p, const Eigen::VectorXd& f, const Eigen::VectorXd& g, int x) {
    double s = 0;
    for (int y = 0; y < p.rows(); ++y) s += p(x, y) * (f(y) - f(x)) * (g(y) - g(x));
    return 0.5 * s;
}

inline Eigen::VectorXd laplacian(const Eigen::MatrixXd& p, const Eigen::VectorXd& f) {
    return p * f - f;
}

inline double gamma2_at(const Eigen::MatrixXd& p, const Eigen::VectorXd& f, int x) {
    const int m = static_cast<int>(p.rows());
    Eigen::VectorXd gff(m);
    for (int y = 0; y < m; ++y) gff(y) = gamma_at(p, f, f, y);
    const Eigen::VectorXd lf = laplacian(p, f);
    return 0.5 * laplacian(p, gff)(x) - gamma_at(p, f, lf, x);
}

/// Entropy quotients of f = (1+s, 1-s) on the symmetric two-point chain with
/// flip probability q and pi = (1/2, 1/2).
struct TwoPoint {
    double q;

    double entropy(double s) const {
        auto phi = [](double v) { return v > 0 ? v * std::log(v) : 0.0; };
        return 0.5 * (phi(1 + s) + phi(1 - s));  // E f = 1
    }
    double lsi(double s) const {
        const double d = std::sqrt(1 + s) - std::sqrt(1 - s);
        return 0.5 * q * d * d / entropy(s);  // E(sqrt f) = pi(1) q (diff)^2
    }
    double mlsi(double s) const {
        const double d = ((1 + s) - (1 - s)) * (std::log(1 + s) - std::log(1 - s));
        return 0.5 * q * d / entropy(s);
    }

    /// Minimum over a log-spaced grid of s in [1e-5, 1 - 1e-9].
    template <class F>
    static double grid_min(F&& quotient) {
        double best = INFINITY;
        const int steps = 200000;
        for (int i = 0; i <= steps; ++i) {
            const double t = static_cast<double>(i) / steps;
            const double s = std::min(1e-5 * std::pow(1e5, t), 1.0 - 1e-9);
            best = std::min(best, quotient(s));
        }
        return best;
    }
};

}  // namespace oracle
