#include "mclab/optimizer.hpp"

#include <cmath>
#include <deque>

namespace mclab {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;
constexpr int kStagnationWindow = 25;

struct CurvaturePair {
    Eigen::VectorXd s;
    Eigen::VectorXd y;
    double rho;
};

Eigen::VectorXd two_loop_direction(const Eigen::VectorXd& grad, const std::deque<CurvaturePair>& pairs) {
    Eigen::VectorXd q = grad;
    std::vector<double> alpha(pairs.size());
    for (int i = static_cast<int>(pairs.size()) - 1; i >= 0; --i) {
        alpha[i] = pairs[i].rho * pairs[i].s.dot(q);
        q -= alpha[i] * pairs[i].y;
    }
    if (!pairs.empty()) {
        const auto& last = pairs.back();
        q *= last.s.dot(last.y) / last.y.squaredNorm();
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const double beta = pairs[i].rho * pairs[i].y.dot(q);
        q += (alpha[i] - beta) * pairs[i].s;
    }
    return -q;
}

}  // namespace

LbfgsResult lbfgs_minimize(const SmoothObjective& objective, Eigen::VectorXd x0, const LbfgsOptions& options) {
    LbfgsResult result;
    result.x = std::move(x0);
    Eigen::VectorXd grad(result.x.size());
    result.value = objective(result.x, grad);

    std::deque<CurvaturePair> pairs;
    Eigen::VectorXd trial_grad(result.x.size());
    int flat_iters = 0;

    for (result.iterations = 0; result.iterations < options.max_iters; ++result.iterations) {
        result.gradient_norm = grad.lpNorm<Eigen::Infinity>();
        if (result.gradient_norm <= options.gradient_tol * std::fabs(result.value)) {
            result.gradient_converged = true;
            return result;
        }

        Eigen::VectorXd dir = two_loop_direction(grad, pairs);
        double slope = grad.dot(dir);
        if (!(slope < 0)) {
            pairs.clear();
            dir = -grad;
            slope = -grad.squaredNorm();
        }
        double step = pairs.empty() ? std::min(1.0, 1.0 / dir.lpNorm<Eigen::Infinity>()) : 1.0;

        bool accepted = false;
        Eigen::VectorXd trial;
        double trial_value = 0.0;
        for (int bt = 0; bt < kMaxBacktracks; ++bt, step *= 0.5) {
            trial = result.x + step * dir;
            trial_value = objective(trial, trial_grad);
            if (std::isfinite(trial_value) && trial_value <= result.value + kArmijo * step * slope) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            if (pairs.empty()) {
                result.stalled = true;
                return result;
            }
            pairs.clear();
            continue;
        }

        CurvaturePair pair{trial - result.x, trial_grad - grad, 0.0};
        const double sy = pair.s.dot(pair.y);
        if (sy > 1e-300 && sy > 1e-12 * pair.s.norm() * pair.y.norm()) {
            pair.rho = 1.0 / sy;
            pairs.push_back(std::move(pair));
            if (static_cast<int>(pairs.size()) > options.memory) pairs.pop_front();
        }

        const double decrease = result.value - trial_value;
        flat_iters = decrease <= 1e-15 * std::fabs(result.value) ? flat_iters + 1 : 0;
        result.x = std::move(trial);
        result.value = trial_value;
        grad = trial_grad;
        if (flat_iters >= kStagnationWindow) {
            result.gradient_norm = grad.lpNorm<Eigen::Infinity>();
            result.gradient_converged = result.gradient_norm <= options.gradient_tol * std::fabs(result.value);
            result.stalled = !result.gradient_converged;
            return result;
        }
    }
    result.gradient_norm = grad.lpNorm<Eigen::Infinity>();
    result.gradient_converged = result.gradient_norm <= options.gradient_tol * std::fabs(result.value);
    return result;
}

}  // namespace mclab
