#include "mclab/curvature.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "mclab/parallel.hpp"

namespace mclab {

std::string to_string(CurvatureMethod method) {
    return method == CurvatureMethod::lp ? "lp" : "closed-form-bd";
}

double ollivier_curvature(const MarkovChain& chain, State x, State y) {
    if (x < 1 || y < 1 || x > chain.size() || y > chain.size() || !chain.adjacent(x, y)) {
        throw NotNeighborsError("states " + std::to_string(x) + " and " + std::to_string(y) +
                                " are not neighbours");
    }
    const TransportProblem problem{chain.kernel().row(x - 1).transpose(), chain.kernel().row(y - 1).transpose(),
                                   chain.distances().cast<double>()};
    return 1.0 - w1_distance(problem);
}

bool is_birth_death(const MarkovChain& chain) {
    for (State x = 1; x <= chain.size(); ++x) {
        for (State y : chain.neighbors(x)) {
            if (std::abs(x - y) != 1) return false;
        }
    }
    return true;
}

CurvatureReport min_ollivier_curvature(const MarkovChain& chain, CurvatureMethod method) {
    if (method == CurvatureMethod::closed_form_bd && !is_birth_death(chain)) {
        throw MethodMismatchError("closed-form curvature requires a birth-death chain");
    }
    const auto edges = chain.edges();
    CurvatureReport report;
    report.method = method;
    report.per_edge.resize(edges.size());
    auto p = [&](State a, State b) {
        return (a < 1 || b < 1 || a > chain.size() || b > chain.size()) ? 0.0 : chain.p(a, b);
    };
    parallel_for(edges.size(), [&](std::size_t i) {
        const auto [x, y] = edges[i];
        const double kappa = method == CurvatureMethod::lp
                                 ? ollivier_curvature(chain, x, y)
                                 : p(x, x + 1) - p(x, x - 1) - p(y, y + 1) + p(y, y - 1);
        report.per_edge[i] = {x, y, kappa};
    });
    report.kappa_min = INFINITY;
    for (const auto& e : report.per_edge) report.kappa_min = std::min(report.kappa_min, e.kappa);
    return report;
}

double lipschitz_constant(const MarkovChain& chain, const Eigen::VectorXd& f) {
    if (f.size() != chain.size()) throw DimensionError("function length differs from state count");
    double lip = 0.0;
    for (int x = 0; x < chain.size(); ++x) {
        for (int y = x + 1; y < chain.size(); ++y) {
            lip = std::max(lip, std::fabs(f(x) - f(y)) / chain.distances()(x, y));
        }
    }
    return lip;
}

ContractionReport check_semigroup_contraction(const MarkovChain& chain, double rate,
                                              const std::vector<double>& times, int trials,
                                              std::uint64_t seed) {
    ContractionReport report;
    report.rate = rate;
    report.times = times;
    report.trials = trials;
    report.seed = seed;
    report.laziness_warning = chain.min_laziness() < 0.5;

    const HeatSemigroup semigroup(chain);
    std::vector<Eigen::MatrixXd> kernels;
    for (double t : times) kernels.push_back(semigroup.matrix(t));

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    for (int trial = 0; trial < trials; ++trial) {
        Eigen::VectorXd f(chain.size());
        for (auto& v : f) v = coord(rng);
        const double lip_f = lipschitz_constant(chain, f);
        for (std::size_t i = 0; i < times.size(); ++i) {
            ++report.checks;
            const double lip_t = lipschitz_constant(chain, kernels[i] * f);
            const double bound = std::exp(-rate * times[i]) * lip_f;
            if (lip_f == 0.0) continue;
            report.worst_ratio = std::max(report.worst_ratio, lip_t / bound);
            if (lip_t > bound * (1.0 + 1e-8)) ++report.violations;
        }
    }
    return report;
}

namespace {

void add_gamma(Eigen::MatrixXd& g, const MarkovChain& chain, State y, double weight) {
    const int iy = y - 1;
    for (State z : chain.neighbors(y)) {
        const double w = 0.5 * weight * chain.p(y, z);
        const int iz = z - 1;
        g(iz, iz) += w;
        g(iy, iy) += w;
        g(iz, iy) -= w;
        g(iy, iz) -= w;
    }
}

std::vector<int> ball_indices(const MarkovChain& chain, State x, int radius) {
    std::vector<int> out;
    for (int z = 0; z < chain.size(); ++z) {
        if (chain.distances()(x - 1, z) <= radius) out.push_back(z);
    }
    return out;
}

}  // namespace

Eigen::MatrixXd gamma_matrix(const MarkovChain& chain, State x) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(chain.size(), chain.size());
    add_gamma(g, chain, x, 1.0);
    return g;
}

Eigen::MatrixXd gamma2_matrix(const MarkovChain& chain, State x) {
    const int m = chain.size();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
    double out_rate = 0.0;
    for (State y : chain.neighbors(x)) {
        add_gamma(h, chain, y, 0.5 * chain.p(x, y));
        out_rate += chain.p(x, y);
    }
    const Eigen::MatrixXd gx = gamma_matrix(chain, x);
    h -= 0.5 * out_rate * gx;

    // G_x only lives on the 1-ball, so only those rows of Delta are needed.
    const auto b1 = ball_indices(chain, x, 1);
    Eigen::MatrixXd gx_delta = Eigen::MatrixXd::Zero(m, m);
    for (int i : b1) {
        for (int k : b1) {
            if (gx(i, k) == 0.0) continue;
            gx_delta.row(i) += gx(i, k) * chain.kernel().row(k);
            gx_delta(i, k) -= gx(i, k);
        }
    }
    h -= 0.5 * (gx_delta + gx_delta.transpose());
    return h;
}

double bakry_emery_curvature(const MarkovChain& chain, State x) {
    if (x < 1 || x > chain.size()) throw IndexError("state out of range");
    const Eigen::MatrixXd h = gamma2_matrix(chain, x);

    std::vector<int> inner;   // neighbours of x
    std::vector<int> sphere;  // distance exactly two
    for (int z = 0; z < chain.size(); ++z) {
        const int d = chain.distances()(x - 1, z);
        if (d == 1) inner.push_back(z);
        if (d == 2) sphere.push_back(z);
    }
    const auto nu = static_cast<Eigen::Index>(inner.size());
    const auto nw = static_cast<Eigen::Index>(sphere.size());

    Eigen::MatrixXd schur = h(inner, inner);
    if (nw > 0) {
        const Eigen::MatrixXd hww = h(sphere, sphere);
        const Eigen::MatrixXd hwu = h(sphere, inner);
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(hww);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
            throw EigenFailure("distance-two block of Gamma_2 is not positive definite");
        }
        schur -= hwu.transpose() * ldlt.solve(hwu);
    }

    // Gamma(f)(x) restricted to f(x) = 0 is diag(p(x,y)) / 2.
    Eigen::VectorXd inv_sqrt_gamma(nu);
    for (Eigen::Index i = 0; i < nu; ++i) inv_sqrt_gamma(i) = 1.0 / std::sqrt(0.5 * chain.kernel()(x - 1, inner[i]));
    Eigen::MatrixXd pencil = inv_sqrt_gamma.asDiagonal() * schur * inv_sqrt_gamma.asDiagonal();
    pencil = 0.5 * (pencil + pencil.transpose());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(pencil, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw EigenFailure("Bakry-Emery eigenproblem failed");
    return solver.eigenvalues()(0);
}

double bakry_emery_curvature_min(const MarkovChain& chain) {
    std::vector<double> values(chain.size());
    parallel_for(values.size(), [&](std::size_t i) { values[i] = bakry_emery_curvature(chain, static_cast<State>(i + 1)); });
    return *std::min_element(values.begin(), values.end());
}

SectionalCheck check_nonnegative_sectional(const MarkovChain& chain) {
    SectionalCheck out;
    const Eigen::MatrixXd cost = chain.distances().cast<double>();
    for (const auto& [x, y] : chain.edges()) {
        const TransportProblem problem{chain.kernel().row(x - 1).transpose(), chain.kernel().row(y - 1).transpose(),
                                       cost};
        const double w = w_infinity(problem);
        out.worst_w_infinity = std::max(out.worst_w_infinity, w);
        if (w > 1.0 && out.holds) {
            out.holds = false;
            out.witness = std::make_pair(x, y);
        }
    }
    return out;
}

}  // namespace mclab
