#pragma once

#include "mclab/scalar.hpp"

namespace mclab {

/// Discrete optimal transport between two probability vectors on the same
/// finite metric space.
struct TransportProblem {
    Eigen::VectorXd mu;
    Eigen::VectorXd nu;
    Eigen::MatrixXd cost;
};

/// Exact W1 by successive shortest augmenting paths on the transportation
/// network. Throws InfeasibleError when total masses differ by more than
/// 1e-12, DimensionError on shape mismatch.
double w1_distance(const TransportProblem& problem);

/// W1 on the path 1..m with hop metric: sum_k |F_mu(k) - F_nu(k)|.
double w1_path(const Eigen::VectorXd& mu, const Eigen::VectorXd& nu);

/// True iff some coupling moves no mass farther than `threshold`.
/// Decided by max-flow on the bipartite threshold graph.
bool coupling_within(const TransportProblem& problem, double threshold);

/// W_infinity: the smallest realized cost value admitting such a coupling.
/// The search runs over the finite set of cost values, so it is exact.
double w_infinity(const TransportProblem& problem);

}  // namespace mclab
