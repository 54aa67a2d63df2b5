#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mclab/errors.hpp"
#include "mclab/measure.hpp"
#include "mclab/scalar.hpp"

namespace mclab {

/// Finite reversible Markov chain with its stationary measure and hop
/// distances. Immutable once built; safe to share across threads.
class MarkovChain {
public:
    /// Validates the kernel, builds the stationary measure from transition
    /// ratios along a spanning tree and checks detailed balance. Throws
    /// RowSumError, DisconnectedError, NotReversibleError, DimensionError or
    /// NegativeRateError.
    static MarkovChain from_kernel(Eigen::MatrixXd kernel);

    /// As above but with a stationary measure that is already known (e.g. from
    /// a birth–death product formula). Detailed balance is still verified.
    static MarkovChain from_kernel(Eigen::MatrixXd kernel, Measure pi);

    int size() const { return static_cast<int>(kernel_.rows()); }
    const Eigen::MatrixXd& kernel() const { return kernel_; }
    double p(State x, State y) const { return kernel_(x - 1, y - 1); }
    const Measure& pi() const { return pi_; }
    int dist(State x, State y) const { return dist_(x - 1, y - 1); }
    const Eigen::MatrixXi& distances() const { return dist_; }

    /// Support neighbours of x (p(x,y) > 0, y != x), ascending.
    const std::vector<State>& neighbors(State x) const { return neighbors_[x - 1]; }
    bool adjacent(State x, State y) const { return x != y && kernel_(x - 1, y - 1) > 0; }

    /// Support edges x < y, lexicographic.
    std::vector<std::pair<State, State>> edges() const;

    double min_laziness() const { return kernel_.diagonal().minCoeff(); }

private:
    MarkovChain() = default;
    void build_graph();
    void check_detailed_balance() const;
    Measure tree_measure() const;

    Eigen::MatrixXd kernel_;
    Measure pi_;
    Eigen::MatrixXi dist_;
    std::vector<std::vector<State>> neighbors_;
};

/// Nearest-neighbour chain on the path 1..m. up(k) = p(k,k+1),
/// down(k) = p(k,k-1), with down(1) = up(m) = 0 and the remaining mass on the
/// self-loop.
template <class Scalar>
class BirthDeathChain {
public:
    /// up has entries for k = 1..m-1, down for k = 2..m.
    static BirthDeathChain create(const Vector<Scalar>& up, const Vector<Scalar>& down);

    int size() const { return static_cast<int>(up_.size()); }
    Scalar up(State k) const { return (k >= 1 && k <= size()) ? up_(k - 1) : Scalar(0); }
    Scalar down(State k) const { return (k >= 1 && k <= size()) ? down_(k - 1) : Scalar(0); }
    Scalar laziness(State k) const { return Scalar(1) - up(k) - down(k); }

    /// p(x,y) for |x - y| <= 1, zero otherwise.
    Scalar p(State x, State y) const;

    const Vector<Scalar>& up_rates() const { return up_; }
    const Vector<Scalar>& down_rates() const { return down_; }

private:
    Vector<Scalar> up_;    // up_(k-1) = up(k), last entry 0
    Vector<Scalar> down_;  // down_(k-1) = down(k), first entry 0
};

template <class Scalar>
BirthDeathChain<Scalar> new_birth_death(const Vector<Scalar>& up, const Vector<Scalar>& down) {
    return BirthDeathChain<Scalar>::create(up, down);
}

/// The three-regime family on 3n states: slow forward rates of order 1/n^2 on
/// the first n states, then fast rates of constant order.
template <class Scalar>
BirthDeathChain<Scalar> counterexample_chain(int n);

/// Exact stationary measure of a birth–death chain via the ratio products
/// pi(k+1)/pi(k) = up(k)/down(k+1). In double mode the products are
/// accumulated in log space.
template <class Scalar>
BasicMeasure<Scalar> stationary_distribution(const BirthDeathChain<Scalar>& bd);

/// Left fixed point of a kernel: solves (P^T - I) pi = 0 with the
/// normalization row appended. Throws SingularSystemError.
Measure stationary_distribution(const Eigen::MatrixXd& kernel);

inline const Measure& stationary_distribution(const MarkovChain& chain) { return chain.pi(); }

/// Floating-point MarkovChain view of a birth–death chain.
template <class Scalar>
MarkovChain to_chain(const BirthDeathChain<Scalar>& bd);

/// max 1/p(x,y) over positive entries, self-loops included.
double sparsity(const MarkovChain& chain);
template <class Scalar>
Scalar sparsity(const BirthDeathChain<Scalar>& bd);

/// (Delta f)(x) = sum_y p(x,y) (f(y) - f(x)).
Eigen::VectorXd laplacian_apply(const MarkovChain& chain, const Eigen::VectorXd& f);

/// P_t = exp(t Delta) through the spectral decomposition of the symmetrized
/// kernel sqrt(p(x,y) p(y,x)). Build once, apply for many t.
class HeatSemigroup {
public:
    explicit HeatSemigroup(const MarkovChain& chain);

    Eigen::MatrixXd matrix(double t) const;
    Eigen::VectorXd apply(double t, const Eigen::VectorXd& f) const;

    /// Eigenvalues of -Delta, ascending.
    const Eigen::VectorXd& spectrum() const { return spectrum_; }

private:
    Eigen::MatrixXd eigenvectors_;
    Eigen::VectorXd spectrum_;
    Eigen::VectorXd log_pi_;
};

Eigen::VectorXd heat_semigroup_apply(const MarkovChain& chain, double t, const Eigen::VectorXd& f);

int diameter(const MarkovChain& chain);

/// Max over x,y of |pi(x)p(x,y) - pi(y)p(y,x)| divided by the largest
/// pi(x)p(x,y).
double detailed_balance_residual(const MarkovChain& chain);

// ---------------------------------------------------------------------------

template <class Scalar>
BirthDeathChain<Scalar> BirthDeathChain<Scalar>::create(const Vector<Scalar>& up,
                                                        const Vector<Scalar>& down) {
    if (up.size() != down.size()) {
        throw DimensionError("birth-death chain needs up (k=1..m-1) and down (k=2..m) of equal length");
    }
    if (up.size() < 1) throw DimensionError("birth-death chain needs at least two states");
    const Eigen::Index m = up.size() + 1;

    BirthDeathChain bd;
    bd.up_ = Vector<Scalar>::Zero(m);
    bd.down_ = Vector<Scalar>::Zero(m);
    bd.up_.head(m - 1) = up;
    bd.down_.tail(m - 1) = down;

    for (State k = 1; k <= m; ++k) {
        const Scalar u = bd.up(k);
        const Scalar d = bd.down(k);
        if (u < 0 || d < 0) {
            throw NegativeRateError("negative rate at state " + std::to_string(k));
        }
        if (u + d > 1) {
            throw RowOverflowError("up + down exceeds 1 at state " + std::to_string(k));
        }
        if ((k < m && u == 0) || (k > 1 && d == 0)) {
            throw DisconnectedError("zero interior rate at state " + std::to_string(k));
        }
    }
    return bd;
}

template <class Scalar>
Scalar BirthDeathChain<Scalar>::p(State x, State y) const {
    if (y == x + 1) return up(x);
    if (y == x - 1) return down(x);
    if (y == x) return laziness(x);
    return Scalar(0);
}

template <class Scalar>
BirthDeathChain<Scalar> counterexample_chain(int n) {
    if (n < 4) throw DomainError("counterexample family is defined for n >= 4");
    const int m = 3 * n;
    const long n2 = static_cast<long>(n) * n;
    Vector<Scalar> up(m - 1);
    Vector<Scalar> down(m - 1);
    // 4 up(k) = 1/n^2 on k <= n, 1 - 1/n - k/n^2 beyond.
    for (int k = 1; k <= m - 1; ++k) {
        up(k - 1) = k <= n ? make_fraction<Scalar>(1, 4 * n2)
                           : make_fraction<Scalar>(n2 - n - k, 4 * n2);
    }
    // 4 down(k) = 1/n + (k+1)/n^2 on 2 <= k <= n, 1 beyond.
    for (int k = 2; k <= m; ++k) {
        down(k - 2) = k <= n ? make_fraction<Scalar>(n + k + 1, 4 * n2) : make_fraction<Scalar>(1, 4);
    }
    return BirthDeathChain<Scalar>::create(up, down);
}

template <class Scalar>
BasicMeasure<Scalar> stationary_distribution(const BirthDeathChain<Scalar>& bd) {
    const int m = bd.size();
    if constexpr (is_exact_v<Scalar>) {
        Vector<Scalar> w(m);
        w(0) = 1;
        for (State k = 1; k < m; ++k) w(k) = w(k - 1) * bd.up(k) / bd.down(k + 1);
        return BasicMeasure<Scalar>::from_weights(std::move(w));
    } else {
        Eigen::VectorXd lw(m);
        lw(0) = 0.0;
        for (State k = 1; k < m; ++k) lw(k) = lw(k - 1) + std::log(bd.up(k)) - std::log(bd.down(k + 1));
        return BasicMeasure<Scalar>::from_log_weights(lw);
    }
}

template <class Scalar>
MarkovChain to_chain(const BirthDeathChain<Scalar>& bd) {
    const int m = bd.size();
    Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(m, m);
    for (State k = 1; k <= m; ++k) {
        if (k > 1) kernel(k - 1, k - 2) = to_double(bd.down(k));
        if (k < m) kernel(k - 1, k) = to_double(bd.up(k));
        kernel(k - 1, k - 1) = to_double(bd.laziness(k));
    }
    const auto pi = stationary_distribution(bd);
    if constexpr (is_exact_v<Scalar>) {
        Eigen::VectorXd lw = pi.log_weights();
        return MarkovChain::from_kernel(std::move(kernel), Measure::from_log_weights(lw));
    } else {
        return MarkovChain::from_kernel(std::move(kernel), pi);
    }
}

template <class Scalar>
Scalar sparsity(const BirthDeathChain<Scalar>& bd) {
    std::optional<Scalar> smallest;
    auto consider = [&](const Scalar& rate) {
        if (rate > 0 && (!smallest || rate < *smallest)) smallest = rate;
    };
    for (State k = 1; k <= bd.size(); ++k) {
        consider(bd.up(k));
        consider(bd.down(k));
        consider(bd.laziness(k));
    }
    return Scalar(1) / *smallest;
}

}  // namespace mclab
