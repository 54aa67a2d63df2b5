#pragma once

#include <vector>

#include "mclab/chain.hpp"

namespace mclab {

/// Harmonic extension between two disjoint sets: f = 0 on A, f = 1 on B,
/// Delta f = 0 elsewhere, and cap(A,B) = E(f).
struct CapacityProblem {
    std::vector<State> A;
    std::vector<State> B;
    Eigen::VectorXd solution;
    double cap = 0.0;
};

/// Throws OverlapError for intersecting or empty sets, IndexError for states
/// out of range, SingularSystemError if the interior system cannot be solved.
CapacityProblem capacity_general(const MarkovChain& chain, std::vector<State> A, std::vector<State> B);

/// Serial-resistance capacity between A = {1..a} and B = {b..m} on a
/// birth–death chain: 1/cap = sum_{k=a}^{b-1} 1 / (pi(k) up(k)).
template <class Scalar>
struct BdCapacity {
    Scalar cap;           // exact for rationals; may underflow in double mode
    double log_cap = 0.0;
};

template <class Scalar>
BdCapacity<Scalar> capacity_bd(const BirthDeathChain<Scalar>& bd, const BasicMeasure<Scalar>& pi, State a, State b) {
    if (a < 1 || b > bd.size() || a >= b) throw IndexError("capacity_bd needs 1 <= a < b <= m");
    BdCapacity<Scalar> out{Scalar(0), 0.0};
    if constexpr (is_exact_v<Scalar>) {
        Scalar resistance = 0;
        for (State k = a; k < b; ++k) resistance += Scalar(1) / (pi(k) * bd.up(k));
        out.cap = Scalar(1) / resistance;
        out.log_cap = log_of(out.cap);
    } else {
        double log_resistance = -INFINITY;
        for (State k = a; k < b; ++k) {
            log_resistance = log_add_exp(log_resistance, -(pi.log_at(k) + std::log(bd.up(k))));
        }
        out.log_cap = -log_resistance;
        out.cap = std::exp(out.log_cap);
    }
    return out;
}

template <class Scalar>
BdCapacity<Scalar> capacity_bd(const BirthDeathChain<Scalar>& bd, State a, State b) {
    return capacity_bd(bd, stationary_distribution(bd), a, b);
}

/// cap(A,B) / (pi(B) |log pi(B)|). `valid` records pi(A) >= 1/2, the
/// condition under which the quantity bounds the log-Sobolev constant from
/// above up to a universal factor.
struct IsoCapBound {
    std::vector<State> A;
    std::vector<State> B;
    double cap_log = 0.0;
    double pi_A = 0.0;
    double pi_B_log = 0.0;
    double bound = 0.0;
    bool valid = false;
};

/// Assembles the bound from log-space pieces. Infinite when pi(B) = 1.
IsoCapBound make_isocap_bound(std::vector<State> A, std::vector<State> B, double cap_log, double pi_A_log,
                              double pi_B_log);

/// Via the harmonic solver.
IsoCapBound isocap_bound(const MarkovChain& chain, std::vector<State> A, std::vector<State> B);

/// Via the serial formula, for A = {1..a}, B = {b..m}.
template <class Scalar>
IsoCapBound isocap_bound_bd(const BirthDeathChain<Scalar>& bd, const BasicMeasure<Scalar>& pi, State a, State b) {
    const auto cap = capacity_bd(bd, pi, a, b);
    auto A = state_range(1, a);
    auto B = state_range(b, bd.size());
    const double pi_A_log = pi.log_mass(A);
    const double pi_B_log = pi.log_mass(B);
    return make_isocap_bound(std::move(A), std::move(B), cap.log_cap, pi_A_log, pi_B_log);
}

/// Minimum of the bound over all prefix/suffix pairs with pi(A) >= 1/2 (both
/// orientations), in log space. An upper bound on the infimum over all sets.
/// Ties go to the lexicographically smallest (a, b), prefix-A first.
IsoCapBound isocap_profile_bd(const Eigen::VectorXd& up, const Eigen::VectorXd& log_pi);

template <class Scalar>
IsoCapBound isocap_profile_bd(const BirthDeathChain<Scalar>& bd) {
    const auto pi = stationary_distribution(bd);
    Eigen::VectorXd up(bd.size());
    for (State k = 1; k <= bd.size(); ++k) up(k - 1) = to_double(bd.up(k));
    return isocap_profile_bd(up, pi.log_weights());
}

}  // namespace mclab
