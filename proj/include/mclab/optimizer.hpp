#pragma once

#include <functional>

#include <Eigen/Dense>

namespace mclab {

/// Value and gradient at a point. A non-finite value marks the point as
/// infeasible; the line search backs off from it.
using SmoothObjective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

struct LbfgsOptions {
    int max_iters = 2000;
    int memory = 10;
    /// Stop once ||grad||_inf <= gradient_tol * |f|.
    double gradient_tol = 1e-6;
};

struct LbfgsResult {
    Eigen::VectorXd x;
    double value = 0.0;
    double gradient_norm = 0.0;  // infinity norm at x
    int iterations = 0;
    bool gradient_converged = false;
    bool stalled = false;  // line search or progress stalled before the test passed
};

/// Limited-memory BFGS with Armijo backtracking. The start point must be
/// feasible.
LbfgsResult lbfgs_minimize(const SmoothObjective& objective, Eigen::VectorXd x0, const LbfgsOptions& options);

}  // namespace mclab
