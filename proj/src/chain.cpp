#include "mclab/chain.hpp"

#include <queue>

#include <Eigen/Eigenvalues>

namespace mclab {

namespace {

constexpr double kRowSumTol = 1e-9;
constexpr double kBalanceTol = 1e-9;

void validate_kernel(const Eigen::MatrixXd& kernel) {
    if (kernel.rows() != kernel.cols() || kernel.rows() == 0) {
        throw DimensionError("kernel must be a non-empty square matrix");
    }
    if (!kernel.allFinite()) throw RowSumError("kernel has non-finite entries");
    if ((kernel.array() < 0).any()) throw NegativeRateError("kernel has negative entries");
    for (Eigen::Index x = 0; x < kernel.rows(); ++x) {
        const double s = kernel.row(x).sum();
        if (std::fabs(s - 1.0) > kRowSumTol) {
            throw RowSumError("row " + std::to_string(x + 1) + " sums to " + std::to_string(s));
        }
    }
}

}  // namespace

MarkovChain MarkovChain::from_kernel(Eigen::MatrixXd kernel) {
    validate_kernel(kernel);
    MarkovChain chain;
    chain.kernel_ = std::move(kernel);
    chain.build_graph();
    chain.pi_ = chain.tree_measure();
    chain.check_detailed_balance();
    return chain;
}

// pi(y)/pi(x) = p(x,y)/p(y,x) along a BFS tree, in log space. Unlike a linear
// solve this keeps full relative accuracy on tiny masses; the balance check
// that follows rejects kernels for which the tree choice matters.
Measure MarkovChain::tree_measure() const {
    const int m = size();
    Eigen::VectorXd lw = Eigen::VectorXd::Constant(m, NAN);
    std::queue<int> frontier;
    lw(0) = 0.0;
    frontier.push(0);
    while (!frontier.empty()) {
        const int x = frontier.front();
        frontier.pop();
        for (State y1 : neighbors_[x]) {
            const int y = y1 - 1;
            if (!std::isnan(lw(y))) continue;
            if (kernel_(y, x) <= 0) {
                throw NotReversibleError("one-way transition between states " + std::to_string(x + 1) + " and " +
                                         std::to_string(y + 1));
            }
            lw(y) = lw(x) + std::log(kernel_(x, y)) - std::log(kernel_(y, x));
            frontier.push(y);
        }
    }
    return Measure::from_log_weights(lw);
}

MarkovChain MarkovChain::from_kernel(Eigen::MatrixXd kernel, Measure pi) {
    validate_kernel(kernel);
    if (pi.size() != kernel.rows()) throw DimensionError("measure and kernel sizes differ");
    MarkovChain chain;
    chain.kernel_ = std::move(kernel);
    chain.build_graph();
    chain.pi_ = std::move(pi);
    chain.check_detailed_balance();
    return chain;
}

void MarkovChain::build_graph() {
    const int m = size();
    neighbors_.assign(m, {});
    for (int x = 0; x < m; ++x) {
        for (int y = 0; y < m; ++y) {
            if (x != y && kernel_(x, y) > 0) neighbors_[x].push_back(y + 1);
        }
    }
    dist_ = Eigen::MatrixXi::Constant(m, m, -1);
    for (int source = 0; source < m; ++source) {
        std::queue<int> frontier;
        frontier.push(source);
        dist_(source, source) = 0;
        while (!frontier.empty()) {
            const int u = frontier.front();
            frontier.pop();
            for (State v : neighbors_[u]) {
                if (dist_(source, v - 1) < 0) {
                    dist_(source, v - 1) = dist_(source, u) + 1;
                    frontier.push(v - 1);
                }
            }
        }
    }
    if ((dist_.array() < 0).any()) throw DisconnectedError("support graph is not connected");
}

// Compared in log space so measures far below the double range still work.
void MarkovChain::check_detailed_balance() const {
    const int m = size();
    const auto& lpi = pi_.log_weights();
    for (int x = 0; x < m; ++x) {
        for (int y = x + 1; y < m; ++y) {
            const double pxy = kernel_(x, y);
            const double pyx = kernel_(y, x);
            if ((pxy > 0) != (pyx > 0)) {
                throw NotReversibleError("one-way transition between states " + std::to_string(x + 1) +
                                         " and " + std::to_string(y + 1));
            }
            if (pxy == 0) continue;
            const double lhs = lpi(x) + std::log(pxy);
            const double rhs = lpi(y) + std::log(pyx);
            if (!(std::fabs(lhs - rhs) <= kBalanceTol)) {
                throw NotReversibleError("detailed balance fails between states " + std::to_string(x + 1) +
                                         " and " + std::to_string(y + 1));
            }
        }
    }
}

std::vector<std::pair<State, State>> MarkovChain::edges() const {
    std::vector<std::pair<State, State>> out;
    for (State x = 1; x <= size(); ++x) {
        for (State y : neighbors(x)) {
            if (x < y) out.emplace_back(x, y);
        }
    }
    return out;
}

Measure stationary_distribution(const Eigen::MatrixXd& kernel) {
    const Eigen::Index m = kernel.rows();
    Eigen::MatrixXd system(m + 1, m);
    system.topRows(m) = kernel.transpose() - Eigen::MatrixXd::Identity(m, m);
    system.row(m).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
    rhs(m) = 1.0;

    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(system);
    if (qr.rank() < m) throw SingularSystemError("stationary system is rank deficient");
    Eigen::VectorXd pi = qr.solve(rhs);
    if (!pi.allFinite() || (system * pi - rhs).norm() > 1e-8) {
        throw SingularSystemError("stationary solve failed");
    }
    // Roundoff can leave tiny negative entries.
    pi = pi.cwiseMax(0.0);
    return Measure::from_weights(std::move(pi));
}

double sparsity(const MarkovChain& chain) {
    double smallest = INFINITY;
    for (double v : chain.kernel().reshaped()) {
        if (v > 0) smallest = std::min(smallest, v);
    }
    return 1.0 / smallest;
}

Eigen::VectorXd laplacian_apply(const MarkovChain& chain, const Eigen::VectorXd& f) {
    if (f.size() != chain.size()) throw DimensionError("function length differs from state count");
    return chain.kernel() * f - f;
}

HeatSemigroup::HeatSemigroup(const MarkovChain& chain) : log_pi_(chain.pi().log_weights()) {
    const Eigen::MatrixXd& p = chain.kernel();
    const Eigen::MatrixXd sym = (p.array() * p.transpose().array()).sqrt().matrix();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success) throw EigenFailure("symmetric eigensolver failed");
    // -Delta has eigenvalues 1 - mu; reverse so the spectrum ascends.
    spectrum_ = (1.0 - solver.eigenvalues().reverse().array()).matrix();
    eigenvectors_ = solver.eigenvectors().rowwise().reverse();
}

Eigen::MatrixXd HeatSemigroup::matrix(double t) const {
    if (!(t >= 0)) throw DomainError("heat semigroup needs t >= 0");
    const Eigen::VectorXd decay = (-t * spectrum_.array()).exp();
    Eigen::MatrixXd q = eigenvectors_ * decay.asDiagonal() * eigenvectors_.transpose();
    const Eigen::Index m = q.rows();
    for (Eigen::Index x = 0; x < m; ++x) {
        for (Eigen::Index y = 0; y < m; ++y) q(x, y) *= std::exp(0.5 * (log_pi_(y) - log_pi_(x)));
    }
    return q;
}

Eigen::VectorXd HeatSemigroup::apply(double t, const Eigen::VectorXd& f) const {
    if (f.size() != log_pi_.size()) throw DimensionError("function length differs from state count");
    if (t == 0) return f;
    return matrix(t) * f;
}

Eigen::VectorXd heat_semigroup_apply(const MarkovChain& chain, double t, const Eigen::VectorXd& f) {
    return HeatSemigroup(chain).apply(t, f);
}

int diameter(const MarkovChain& chain) { return chain.distances().maxCoeff(); }

double detailed_balance_residual(const MarkovChain& chain) {
    const Eigen::VectorXd pi = chain.pi().weights();
    const Eigen::MatrixXd flow = pi.asDiagonal() * chain.kernel();
    const double scale = flow.maxCoeff();
    return (flow - flow.transpose()).cwiseAbs().maxCoeff() / scale;
}

}  // namespace mclab
