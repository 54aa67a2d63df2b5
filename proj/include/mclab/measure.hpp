#pragma once

#include <span>
#include <vector>

#include "mclab/scalar.hpp"

namespace mclab {

/// 1-based state label. Vectors store state x at position x - 1.
using State = int;

/// Probability vector carried twice: as plain weights and as natural logs.
/// The log twin is authoritative for masses that underflow a double; for
/// exact scalars the weights are authoritative and sum to exactly one.
template <class Scalar>
class BasicMeasure {
public:
    BasicMeasure() = default;

    /// Normalizes nonnegative weights.
    static BasicMeasure from_weights(Vector<Scalar> weights);

    /// Normalizes unnormalized log-weights (log-sum-exp).
    static BasicMeasure from_log_weights(const Eigen::VectorXd& log_weights)
        requires(!is_exact_v<Scalar>);

    int size() const { return static_cast<int>(weights_.size()); }
    const Vector<Scalar>& weights() const { return weights_; }
    const Eigen::VectorXd& log_weights() const { return log_weights_; }

    const Scalar& operator()(State x) const { return weights_(x - 1); }
    double log_at(State x) const { return log_weights_(x - 1); }

    /// Mass of a set of states.
    Scalar mass(std::span<const State> states) const;
    /// log of the mass of a set, computed from the log twin.
    double log_mass(std::span<const State> states) const;

    Eigen::VectorXd to_double() const;

private:
    Vector<Scalar> weights_;
    Eigen::VectorXd log_weights_;
};

using Measure = BasicMeasure<double>;
using ExactMeasure = BasicMeasure<Rational>;

template <class Scalar>
BasicMeasure<Scalar> BasicMeasure<Scalar>::from_weights(Vector<Scalar> weights) {
    BasicMeasure out;
    const Scalar total = weights.sum();
    out.weights_ = weights / total;
    out.log_weights_.resize(weights.size());
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        out.log_weights_(i) = out.weights_(i) > 0 ? log_of(out.weights_(i)) : -INFINITY;
    }
    return out;
}

template <class Scalar>
BasicMeasure<Scalar> BasicMeasure<Scalar>::from_log_weights(const Eigen::VectorXd& log_weights)
    requires(!is_exact_v<Scalar>)
{
    double log_total = -INFINITY;
    for (double lw : log_weights) log_total = log_add_exp(log_total, lw);
    BasicMeasure out;
    out.log_weights_ = log_weights.array() - log_total;
    out.weights_ = out.log_weights_.array().exp();
    return out;
}

template <class Scalar>
Scalar BasicMeasure<Scalar>::mass(std::span<const State> states) const {
    Scalar total = 0;
    for (State x : states) total += weights_(x - 1);
    return total;
}

template <class Scalar>
double BasicMeasure<Scalar>::log_mass(std::span<const State> states) const {
    if constexpr (is_exact_v<Scalar>) {
        return log_of(mass(states));
    } else {
        double total = -INFINITY;
        for (State x : states) total = log_add_exp(total, log_weights_(x - 1));
        return total;
    }
}

template <class Scalar>
Eigen::VectorXd BasicMeasure<Scalar>::to_double() const {
    if constexpr (is_exact_v<Scalar>) {
        Eigen::VectorXd out(weights_.size());
        for (Eigen::Index i = 0; i < weights_.size(); ++i) out(i) = mclab::to_double(weights_(i));
        return out;
    } else {
        return weights_;
    }
}

/// States lo..hi inclusive.
inline std::vector<State> state_range(State lo, State hi) {
    std::vector<State> out;
    for (State x = lo; x <= hi; ++x) out.push_back(x);
    return out;
}

}  // namespace mclab
