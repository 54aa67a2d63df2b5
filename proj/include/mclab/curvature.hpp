#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mclab/chain.hpp"
#include "mclab/transport.hpp"

namespace mclab {

enum class CurvatureMethod { lp, closed_form_bd };

std::string to_string(CurvatureMethod method);

struct EdgeCurvature {
    State x;
    State y;
    double kappa;
};

/// Per-edge Ollivier curvature over every support edge x < y, sorted by edge.
struct CurvatureReport {
    CurvatureMethod method = CurvatureMethod::lp;
    double kappa_min = 0.0;
    std::vector<EdgeCurvature> per_edge;
};

/// kappa(x,y) = 1 - W1(p(x,.), p(y,.)) under the hop metric. Throws
/// NotNeighborsError unless p(x,y) > 0 and x != y.
double ollivier_curvature(const MarkovChain& chain, State x, State y);

/// Closed form on the edge (k, k+1) of a birth–death chain:
/// up(k) - down(k) - up(k+1) + down(k+1). Exact in rational mode.
template <class Scalar>
Scalar ollivier_curvature_bd(const BirthDeathChain<Scalar>& bd, State k) {
    if (k < 1 || k >= bd.size()) throw IndexError("edge index k must satisfy 1 <= k <= m-1");
    return bd.up(k) - bd.down(k) - bd.up(k + 1) + bd.down(k + 1);
}

/// Minimum of the closed form over all edges, exact in rational mode.
template <class Scalar>
struct BdCurvature {
    Scalar kappa_min;
    State argmin;
    std::vector<Scalar> per_edge;  // per_edge[k-1] is the edge (k, k+1)
};

template <class Scalar>
BdCurvature<Scalar> min_ollivier_curvature(const BirthDeathChain<Scalar>& bd) {
    BdCurvature<Scalar> out{Scalar(0), 1, {}};
    for (State k = 1; k < bd.size(); ++k) {
        out.per_edge.push_back(ollivier_curvature_bd(bd, k));
        if (k == 1 || out.per_edge.back() < out.kappa_min) {
            out.kappa_min = out.per_edge.back();
            out.argmin = k;
        }
    }
    return out;
}

/// True iff all transitions stay within distance one on the path 1..m.
bool is_birth_death(const MarkovChain& chain);

/// Curvature on every support edge. closed_form_bd throws MethodMismatchError
/// on chains that are not nearest-neighbour paths.
CurvatureReport min_ollivier_curvature(const MarkovChain& chain, CurvatureMethod method);

/// max over x != y of |f(x) - f(y)| / dist(x,y).
double lipschitz_constant(const MarkovChain& chain, const Eigen::VectorXd& f);

struct ContractionReport {
    double rate = 0.0;  // K
    std::vector<double> times;
    int trials = 0;
    std::uint64_t seed = 0;
    int checks = 0;
    int violations = 0;
    double worst_ratio = 0.0;  // max of Lip(P_t f) / (e^{-Kt} Lip f)
    bool laziness_warning = false;
};

/// Samples f uniform on [-1,1]^m (mt19937_64 seeded with `seed`) and checks
/// Lip(P_t f) <= e^{-Kt} Lip(f) (1 + 1e-8) for every t. Constant f passes.
ContractionReport check_semigroup_contraction(const MarkovChain& chain, double rate,
                                              const std::vector<double>& times, int trials,
                                              std::uint64_t seed);

/// Quadratic forms of Gamma(f)(x) and Gamma_2(f)(x) as m x m matrices.
/// Gamma_2(f) = 1/2 Delta Gamma(f,f) - Gamma(f, Delta f).
Eigen::MatrixXd gamma_matrix(const MarkovChain& chain, State x);
Eigen::MatrixXd gamma2_matrix(const MarkovChain& chain, State x);

/// Largest K with Gamma_2(f)(x) >= K Gamma(f)(x) for all f.
///
/// Only the 2-ball of x matters. Constants are removed by pinning f(x) = 0;
/// the values on the sphere of radius two only enter Gamma_2 (through a
/// positive diagonal block), so they are eliminated by a Schur complement.
/// What remains is a generalized eigenproblem on the neighbours of x against
/// the positive definite Gamma form. Throws EigenFailure.
double bakry_emery_curvature(const MarkovChain& chain, State x);

/// Minimum over all states.
double bakry_emery_curvature_min(const MarkovChain& chain);

struct LogConcavity {
    bool holds = true;
    std::optional<State> violation;  // first interior k with pi(k)^2 < pi(k-1) pi(k+1)
};

/// pi(k)^2 >= pi(k-1) pi(k+1) for every interior k. Exact for rationals;
/// in double mode evaluated on the log twin with a 1e-12 slack.
template <class Scalar>
LogConcavity check_log_concavity(const BasicMeasure<Scalar>& measure) {
    LogConcavity out;
    for (State k = 2; k < measure.size(); ++k) {
        bool ok;
        if constexpr (is_exact_v<Scalar>) {
            ok = measure(k) * measure(k) >= measure(k - 1) * measure(k + 1);
        } else {
            ok = 2.0 * measure.log_at(k) >= measure.log_at(k - 1) + measure.log_at(k + 1) - 1e-12;
        }
        if (!ok) {
            out.holds = false;
            out.violation = k;
            return out;
        }
    }
    return out;
}

struct MonotoneRates {
    bool holds = true;
    std::optional<State> violation;
    std::string which;  // "up" or "down"
};

/// The monotone-rate criterion: up(k) non-increasing over k = 1..m-1 and
/// down(k) non-decreasing over k = 2..m.
template <class Scalar>
MonotoneRates check_monotone_rates(const BirthDeathChain<Scalar>& bd) {
    MonotoneRates out;
    for (State k = 2; k <= bd.size() - 1; ++k) {
        if (bd.up(k) > bd.up(k - 1)) {
            out = {false, k, "up"};
            return out;
        }
    }
    for (State k = 3; k <= bd.size(); ++k) {
        if (bd.down(k) < bd.down(k - 1)) {
            out = {false, k, "down"};
            return out;
        }
    }
    return out;
}

struct SectionalCheck {
    bool holds = true;
    std::optional<std::pair<State, State>> witness;
    double worst_w_infinity = 0.0;
};

/// W_inf(p(x,.), p(y,.)) <= 1 on every support edge.
SectionalCheck check_nonnegative_sectional(const MarkovChain& chain);

}  // namespace mclab
