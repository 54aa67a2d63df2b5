#include "mclab/functional.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

#include "mclab/curvature.hpp"
#include "mclab/optimizer.hpp"
#include "mclab/parallel.hpp"

namespace mclab {

namespace {

void require_length(const MarkovChain& chain, const Eigen::VectorXd& f) {
    if (f.size() != chain.size()) throw DimensionError("function length differs from state count");
}

/// Edges x < y with conductance pi(x) p(x,y).
struct Conductances {
    std::vector<int> from;
    std::vector<int> to;
    std::vector<double> weight;
};

Conductances conductances(const MarkovChain& chain) {
    Conductances c;
    for (const auto& [x, y] : chain.edges()) {
        c.from.push_back(x - 1);
        c.to.push_back(y - 1);
        c.weight.push_back(std::exp(chain.pi().log_at(x)) * chain.p(x, y));
    }
    return c;
}

struct QuotientTerms {
    double numerator;
    double entropy;
};

/// u is normalized so that sum pi e^u = 1. Gradients are taken in u.
QuotientTerms quotient_terms(const Conductances& c, const Eigen::VectorXd& pi, EntropyFunctional kind,
                             const Eigen::VectorXd& u, Eigen::VectorXd* d_num, Eigen::VectorXd* d_ent) {
    const Eigen::Index m = u.size();
    const Eigen::VectorXd f = u.array().exp();

    // sum pi phi(f), phi(f) = f log f - f + 1 = u e^u - expm1(u); equals Ent when E f = 1.
    double ent = 0.0;
    for (Eigen::Index x = 0; x < m; ++x) {
        const double em1 = std::expm1(u(x));
        ent += pi(x) * (u(x) * em1 + u(x) - em1);
    }

    double num = 0.0;
    if (d_num) d_num->setZero(m);
    for (std::size_t e = 0; e < c.weight.size(); ++e) {
        const int x = c.from[e];
        const int y = c.to[e];
        const double w = c.weight[e];
        const double du = u(y) - u(x);
        if (kind == EntropyFunctional::log_sobolev) {
            // sqrt f(y) - sqrt f(x), accurate for nearby values.
            const double hx = std::exp(0.5 * u(x));
            const double hy = std::exp(0.5 * u(y));
            const double dh = hx * std::expm1(0.5 * du);
            num += w * dh * dh;
            if (d_num) {
                (*d_num)(x) -= w * hx * dh;
                (*d_num)(y) += w * hy * dh;
            }
        } else {
            const double df = f(x) * std::expm1(du);
            num += w * df * du;
            if (d_num) {
                (*d_num)(x) -= w * (f(x) * du + df);
                (*d_num)(y) += w * (f(y) * du + df);
            }
        }
    }
    if (d_ent) *d_ent = (pi.array() * f.array() * u.array()).matrix();
    return {num, ent};
}

Eigen::VectorXd normalized_log(const MarkovChain& chain, const Eigen::VectorXd& g) {
    double lse = -INFINITY;
    for (Eigen::Index x = 0; x < g.size(); ++x) lse = log_add_exp(lse, chain.pi().log_weights()(x) + g(x));
    return g.array() - lse;
}

double evaluate_quotient(const MarkovChain& chain, const Conductances& c, const Eigen::VectorXd& pi,
                         EntropyFunctional kind, const Eigen::VectorXd& g, Eigen::VectorXd* grad,
                         double min_entropy) {
    const Eigen::VectorXd u = normalized_log(chain, g);
    Eigen::VectorXd d_num, d_ent;
    const auto terms = quotient_terms(c, pi, kind, u, grad ? &d_num : nullptr, grad ? &d_ent : nullptr);
    if (!(terms.entropy > min_entropy) || !std::isfinite(terms.numerator)) {
        if (grad) grad->setZero(g.size());
        return INFINITY;
    }
    const double value = terms.numerator / terms.entropy;
    // The quotient is invariant under g -> g + const, so the u-gradient is
    // already the g-gradient.
    if (grad) *grad = (d_num - value * d_ent) / terms.entropy;
    return value;
}

/// Eigenvector of -Delta for the spectral gap, as a function on states.
Eigen::VectorXd fiedler_function(const MarkovChain& chain) {
    const Eigen::MatrixXd& p = chain.kernel();
    const Eigen::MatrixXd sym = (p.array() * p.transpose().array()).sqrt().matrix();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success) throw EigenFailure("symmetric eigensolver failed");
    const Eigen::Index m = sym.rows();
    Eigen::VectorXd v = solver.eigenvectors().col(m - 2);
    for (Eigen::Index x = 0; x < m; ++x) v(x) *= std::exp(-0.5 * chain.pi().log_weights()(x));
    return v / v.lpNorm<Eigen::Infinity>();
}

/// Start points for restart index i. The first 2m are structured: the two
/// signs of a small Fiedler perturbation (the near-constant limit), then
/// two-level steps along the Fiedler ordering; the rest are random.
class SeedSchedule {
public:
    SeedSchedule(const MarkovChain& chain, const OptimizerOptions& opts) : opts_(opts) {
        fiedler_ = fiedler_function(chain);
        const Eigen::VectorXd pi = chain.pi().weights();
        const double mean = pi.dot(fiedler_);
        const double var = pi.dot((fiedler_.array() - mean).square().matrix());
        spectral_amplitude_ = std::sqrt(2.0 * 100.0 * opts.min_entropy / std::max(var, 1e-300));
        order_.resize(chain.size());
        std::iota(order_.begin(), order_.end(), 0);
        std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) { return fiedler_(a) < fiedler_(b); });
    }

    int structured() const { return 2 * static_cast<int>(order_.size()); }
    int total() const { return structured() + opts_.restarts; }

    Eigen::VectorXd seed(int i) const {
        const int m = static_cast<int>(order_.size());
        if (i < 2) return (i == 0 ? 1.0 : -1.0) * spectral_amplitude_ * fiedler_;
        if (i < structured()) {
            const int k = i - 2;
            const int threshold = 1 + k / 2;
            const double level = (k % 2 == 0) ? 5.0 : -5.0;
            Eigen::VectorXd g = Eigen::VectorXd::Zero(m);
            for (int r = threshold; r < m; ++r) g(order_[r]) = level;
            return g;
        }
        const int j = i - structured();
        std::mt19937_64 rng(opts_.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(j));
        std::uniform_real_distribution<double> coord(-1.0, 1.0);
        static constexpr double kScales[] = {0.5, 2.0, 8.0};
        const double scale = kScales[j % 3];
        Eigen::VectorXd g(m);
        for (auto& v : g) v = scale * coord(rng);
        return g;
    }

private:
    OptimizerOptions opts_;
    Eigen::VectorXd fiedler_;
    std::vector<int> order_;
    double spectral_amplitude_ = 0.0;
};

LsiResult minimize_quotient(const MarkovChain& chain, EntropyFunctional kind, const OptimizerOptions& opts) {
    if (chain.size() < 2) throw DimensionError("entropy constants need at least two states");
    const SeedSchedule schedule(chain, opts);
    const Conductances c = conductances(chain);
    const Eigen::VectorXd pi = chain.pi().log_weights().array().exp();

    const SmoothObjective objective = [&](const Eigen::VectorXd& g, Eigen::VectorXd& grad) {
        return evaluate_quotient(chain, c, pi, kind, g, &grad, opts.min_entropy);
    };
    LbfgsOptions lbfgs;
    lbfgs.max_iters = opts.max_iters;
    lbfgs.gradient_tol = opts.gradient_tol;

    struct Run {
        double value = INFINITY;
        Eigen::VectorXd g;
        bool converged = false;
    };
    std::vector<Run> runs(schedule.total());
    parallel_for(runs.size(), [&](std::size_t i) {
        Eigen::VectorXd g0 = schedule.seed(static_cast<int>(i));
        Eigen::VectorXd scratch(g0.size());
        if (!std::isfinite(objective(g0, scratch))) return;
        const LbfgsResult r = lbfgs_minimize(objective, std::move(g0), lbfgs);
        Eigen::VectorXd u = normalized_log(chain, r.x);
        const auto terms = quotient_terms(c, pi, kind, u, nullptr, nullptr);
        // Stalling against the entropy floor is the near-constant limit.
        const bool at_floor = r.stalled && terms.entropy <= 100.0 * opts.min_entropy;
        runs[i] = {r.value, std::move(u), r.gradient_converged || at_floor};
    });

    LsiResult result;
    result.restarts_used = schedule.total();
    bool any_converged = false;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        any_converged = any_converged || runs[i].converged;
        if (runs[i].value < result.alpha || result.best_restart < 0) {
            if (!std::isfinite(runs[i].value)) continue;
            result.alpha = runs[i].value;
            result.best_restart = static_cast<int>(i);
        }
    }
    if (result.best_restart < 0 || !any_converged) {
        throw ConvergenceFailure("no restart met the gradient tolerance");
    }
    const Run& best = runs[result.best_restart];
    result.minimizer = best.g.array().exp();
    result.converged = best.converged;
    return result;
}

}  // namespace

Eigen::VectorXd gamma_form(const MarkovChain& chain, const Eigen::VectorXd& f, const Eigen::VectorXd& g) {
    require_length(chain, f);
    require_length(chain, g);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(chain.size());
    for (State x = 1; x <= chain.size(); ++x) {
        double acc = 0.0;
        for (State y : chain.neighbors(x)) acc += chain.p(x, y) * (f(y - 1) - f(x - 1)) * (g(y - 1) - g(x - 1));
        out(x - 1) = 0.5 * acc;
    }
    return out;
}

double dirichlet_energy(const MarkovChain& chain, const Eigen::VectorXd& f, const Eigen::VectorXd& g) {
    return chain.pi().weights().dot(gamma_form(chain, f, g));
}

double dirichlet_energy(const MarkovChain& chain, const Eigen::VectorXd& f) { return dirichlet_energy(chain, f, f); }

double entropy(const MarkovChain& chain, const Eigen::VectorXd& f) {
    require_length(chain, f);
    if ((f.array() < 0).any()) throw NegativeInputError("entropy needs a nonnegative function");
    const Eigen::VectorXd& pi = chain.pi().weights();
    const double mean = pi.dot(f);
    if (mean == 0.0) return 0.0;
    double ent = 0.0;
    for (Eigen::Index x = 0; x < f.size(); ++x) {
        if (f(x) > 0) ent += pi(x) * f(x) * std::log(f(x) / mean);
    }
    return std::max(ent, 0.0);
}

double variance(const MarkovChain& chain, const Eigen::VectorXd& f) {
    require_length(chain, f);
    const Eigen::VectorXd& pi = chain.pi().weights();
    const double mean = pi.dot(f);
    return pi.dot((f.array() - mean).square().matrix());
}

double spectral_gap(const MarkovChain& chain) {
    if (chain.size() < 2) throw DimensionError("spectral gap needs at least two states");
    return HeatSemigroup(chain).spectrum()(1);
}

double entropy_quotient(const MarkovChain& chain, EntropyFunctional kind, const Eigen::VectorXd& g,
                        Eigen::VectorXd* grad, double min_entropy) {
    require_length(chain, g);
    const Eigen::VectorXd pi = chain.pi().log_weights().array().exp();
    return evaluate_quotient(chain, conductances(chain), pi, kind, g, grad, min_entropy);
}

Eigen::VectorXd entropy_quotient_fd_gradient(const MarkovChain& chain, EntropyFunctional kind,
                                             const Eigen::VectorXd& g, double h) {
    Eigen::VectorXd out(g.size());
    Eigen::VectorXd probe = g;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        probe(i) = g(i) + h;
        const double hi = entropy_quotient(chain, kind, probe, nullptr);
        probe(i) = g(i) - h;
        const double lo = entropy_quotient(chain, kind, probe, nullptr);
        probe(i) = g(i);
        out(i) = (hi - lo) / (2.0 * h);
    }
    return out;
}

LsiResult lsi_constant(const MarkovChain& chain, const OptimizerOptions& opts) {
    return minimize_quotient(chain, EntropyFunctional::log_sobolev, opts);
}

LsiResult modified_lsi_constant(const MarkovChain& chain, const OptimizerOptions& opts) {
    return minimize_quotient(chain, EntropyFunctional::modified_log_sobolev, opts);
}

bool AuditReport::all_pass() const {
    return std::all_of(relations.begin(), relations.end(), [](const Relation& r) { return !r.applicable || r.pass; });
}

AuditReport relation_audit(const MarkovChain& chain, const OptimizerOptions& opts, double tol) {
    using C = LiteratureConstants;
    AuditReport report;
    const LsiResult lsi = lsi_constant(chain, opts);
    const LsiResult mod = modified_lsi_constant(chain, opts);
    report.alpha_lsi = lsi.alpha;
    report.alpha_mod = mod.alpha;
    report.optimizers_converged = lsi.converged && mod.converged;
    report.lambda = spectral_gap(chain);
    report.kappa_min = min_ollivier_curvature(chain, CurvatureMethod::lp).kappa_min;
    report.kbe_min = bakry_emery_curvature_min(chain);
    report.sparsity = sparsity(chain);
    report.diameter = diameter(chain);

    const double log_d = std::log(report.sparsity);
    const bool log_d_ok = report.sparsity > std::exp(1.0);
    auto add = [&](std::string name, double lhs, double rhs, double slack, bool applicable) {
        report.relations.push_back({std::move(name), lhs, rhs, slack, !applicable || lhs <= rhs, applicable});
    };

    add("4*alpha_lsi <= alpha_mod", C::c_mod_lower * lsi.alpha, mod.alpha * (1.0 + tol), tol, true);
    add("alpha_mod <= 2*lambda", mod.alpha, C::c_mod_upper_gap * report.lambda * (1.0 + tol), tol, true);
    add("alpha_mod <= 15*alpha_lsi*log(d)", mod.alpha, C::c_sy_upgrade * lsi.alpha * log_d * (1.0 + tol), tol,
        log_d_ok);
    // Lichnerowicz: no optimizer involved, so only roundoff slack.
    add("kappa_min <= lambda", report.kappa_min, report.lambda + 1e-9, 1e-9, chain.min_laziness() >= 0.5);
    add("kbe_min/(33*log(d)) <= alpha_lsi", log_d_ok ? report.kbe_min / (C::c_be_lsi * log_d) : 0.0,
        lsi.alpha * (1.0 + tol), tol, log_d_ok && report.kbe_min > 0);
    return report;
}

}  // namespace mclab
