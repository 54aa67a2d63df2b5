#include "mclab/capacity.hpp"

#include <algorithm>

#include "mclab/functional.hpp"

namespace mclab {

namespace {

void check_states(const MarkovChain& chain, const std::vector<State>& set) {
    for (State x : set) {
        if (x < 1 || x > chain.size()) throw IndexError("state " + std::to_string(x) + " out of range");
    }
}

}  // namespace

CapacityProblem capacity_general(const MarkovChain& chain, std::vector<State> A, std::vector<State> B) {
    if (A.empty() || B.empty()) throw OverlapError("capacity needs nonempty sets");
    check_states(chain, A);
    check_states(chain, B);
    std::sort(A.begin(), A.end());
    std::sort(B.begin(), B.end());
    A.erase(std::unique(A.begin(), A.end()), A.end());
    B.erase(std::unique(B.begin(), B.end()), B.end());
    std::vector<State> common;
    std::set_intersection(A.begin(), A.end(), B.begin(), B.end(), std::back_inserter(common));
    if (!common.empty()) throw OverlapError("capacity sets intersect at state " + std::to_string(common.front()));

    const int m = chain.size();
    Eigen::VectorXd f = Eigen::VectorXd::Zero(m);
    std::vector<char> fixed(m, 0);
    for (State x : A) fixed[x - 1] = 1;
    for (State x : B) {
        fixed[x - 1] = 1;
        f(x - 1) = 1.0;
    }
    std::vector<int> free_idx;
    for (int x = 0; x < m; ++x) {
        if (!fixed[x]) free_idx.push_back(x);
    }

    if (!free_idx.empty()) {
        // Rows of Delta at the free states: (P - I)_FF f_F = -P_FB 1.
        const Eigen::MatrixXd laplacian = chain.kernel() - Eigen::MatrixXd::Identity(m, m);
        const Eigen::MatrixXd lff = laplacian(free_idx, free_idx);
        Eigen::VectorXd rhs = -(laplacian(free_idx, Eigen::all) * f);
        const Eigen::FullPivLU<Eigen::MatrixXd> lu(lff);
        if (!lu.isInvertible()) throw SingularSystemError("harmonic extension system is singular");
        const Eigen::VectorXd sol = lu.solve(rhs);
        if (!sol.allFinite()) throw SingularSystemError("harmonic extension produced non-finite values");
        f(free_idx) = sol;
    }

    CapacityProblem out;
    out.cap = dirichlet_energy(chain, f);
    out.solution = std::move(f);
    out.A = std::move(A);
    out.B = std::move(B);
    return out;
}

IsoCapBound make_isocap_bound(std::vector<State> A, std::vector<State> B, double cap_log, double pi_A_log,
                              double pi_B_log) {
    IsoCapBound out;
    out.A = std::move(A);
    out.B = std::move(B);
    out.cap_log = cap_log;
    out.pi_A = std::exp(pi_A_log);
    out.pi_B_log = pi_B_log;
    out.valid = pi_A_log >= -std::log(2.0);
    out.bound = pi_B_log < 0 ? std::exp(cap_log - pi_B_log) / std::fabs(pi_B_log) : INFINITY;
    return out;
}

IsoCapBound isocap_bound(const MarkovChain& chain, std::vector<State> A, std::vector<State> B) {
    const CapacityProblem problem = capacity_general(chain, std::move(A), std::move(B));
    const double pi_A_log = chain.pi().log_mass(problem.A);
    const double pi_B_log = chain.pi().log_mass(problem.B);
    return make_isocap_bound(problem.A, problem.B, std::log(problem.cap), pi_A_log, pi_B_log);
}

IsoCapBound isocap_profile_bd(const Eigen::VectorXd& up, const Eigen::VectorXd& log_pi) {
    const int m = static_cast<int>(log_pi.size());
    // prefix_log[a] = log pi{1..a}, suffix_log[b] = log pi{b..m}; 1-based.
    std::vector<double> prefix_log(m + 2, -INFINITY), suffix_log(m + 2, -INFINITY);
    for (int a = 1; a <= m; ++a) prefix_log[a] = log_add_exp(prefix_log[a - 1], log_pi(a - 1));
    for (int b = m; b >= 1; --b) suffix_log[b] = log_add_exp(suffix_log[b + 1], log_pi(b - 1));
    const double half_log = -std::log(2.0);

    IsoCapBound best;
    best.bound = INFINITY;
    bool found = false;
    for (int a = 1; a < m; ++a) {
        double log_resistance = -INFINITY;
        for (int b = a + 1; b <= m; ++b) {
            const int k = b - 1;  // edge (k, k+1) joins the resistance sum
            log_resistance = log_add_exp(log_resistance, -(log_pi(k - 1) + std::log(up(k - 1))));
            const double cap_log = -log_resistance;
            // A = {1..a}, B = {b..m}; then the mirrored pair.
            const std::pair<double, double> orientations[] = {{prefix_log[a], suffix_log[b]},
                                                              {suffix_log[b], prefix_log[a]}};
            for (int o = 0; o < 2; ++o) {
                const auto [pa, pb] = orientations[o];
                if (pa < half_log || pb >= 0) continue;
                const double bound = std::exp(cap_log - pb) / std::fabs(pb);
                if (!found || bound < best.bound) {
                    found = true;
                    auto prefix = state_range(1, a);
                    auto suffix = state_range(b, m);
                    best = o == 0 ? make_isocap_bound(std::move(prefix), std::move(suffix), cap_log, pa, pb)
                                  : make_isocap_bound(std::move(suffix), std::move(prefix), cap_log, pa, pb);
                }
            }
        }
    }
    return best;
}

}  // namespace mclab
