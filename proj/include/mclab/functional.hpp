#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mclab/chain.hpp"

namespace mclab {

/// Gamma(f,g)(x) = 1/2 sum_y p(x,y) (f(y) - f(x)) (g(y) - g(x)).
Eigen::VectorXd gamma_form(const MarkovChain& chain, const Eigen::VectorXd& f, const Eigen::VectorXd& g);

/// E(f,g) = sum_x pi(x) Gamma(f,g)(x).
double dirichlet_energy(const MarkovChain& chain, const Eigen::VectorXd& f, const Eigen::VectorXd& g);
double dirichlet_energy(const MarkovChain& chain, const Eigen::VectorXd& f);

/// Ent(f) = E[f log f] - E[f] log E[f] under pi, with 0 log 0 = 0.
/// Throws NegativeInputError for negative entries.
double entropy(const MarkovChain& chain, const Eigen::VectorXd& f);

double variance(const MarkovChain& chain, const Eigen::VectorXd& f);

/// Smallest nonzero eigenvalue of -Delta.
double spectral_gap(const MarkovChain& chain);

/// Constants of the quoted inequalities. Fixed, never tuned.
struct LiteratureConstants {
    static constexpr double c_mod_lower = 4.0;      // 4 alpha_LSI <= alpha_mod
    static constexpr double c_mod_upper_gap = 2.0;  // alpha_mod <= 2 lambda
    static constexpr double c_sy_upgrade = 15.0;    // alpha_mod <= 15 alpha_LSI log d
    static constexpr double c_be_lsi = 33.0;        // alpha_LSI >= K_BE / (33 log d)
};

struct OptimizerOptions {
    int restarts = 32;
    int max_iters = 2000;
    double gradient_tol = 1e-6;
    std::uint64_t seed = 0;
    /// Entropy floor (at E f = 1) that keeps iterates away from constants.
    double min_entropy = 1e-10;
};

/// Best objective found by multi-start descent. Always an upper bound on the
/// true infimum.
struct LsiResult {
    double alpha = 0.0;
    Eigen::VectorXd minimizer;  // positive, normalized to E f = 1
    int restarts_used = 0;
    int best_restart = -1;
    bool converged = false;
    bool upper_bound = true;
};

enum class EntropyFunctional {
    log_sobolev,           // E(sqrt f) / Ent(f)
    modified_log_sobolev,  // E(f, log f) / Ent(f)
};

/// Objective in the log-parametrization f = exp(g), with its analytic
/// gradient in g. Returns +inf below the entropy floor.
double entropy_quotient(const MarkovChain& chain, EntropyFunctional kind, const Eigen::VectorXd& g,
                        Eigen::VectorXd* grad, double min_entropy = 0.0);

/// Central differences with step h, for checking the analytic gradient.
Eigen::VectorXd entropy_quotient_fd_gradient(const MarkovChain& chain, EntropyFunctional kind,
                                             const Eigen::VectorXd& g, double h = 1e-6);

/// Throws ConvergenceFailure when no restart passes the gradient test.
LsiResult lsi_constant(const MarkovChain& chain, const OptimizerOptions& opts = {});
LsiResult modified_lsi_constant(const MarkovChain& chain, const OptimizerOptions& opts = {});

struct Relation {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double tol = 0.0;
    bool pass = true;
    bool applicable = true;
};

struct AuditReport {
    double alpha_lsi = 0.0;
    double alpha_mod = 0.0;
    double lambda = 0.0;
    double kappa_min = 0.0;
    double kbe_min = 0.0;
    double sparsity = 0.0;
    int diameter = 0;
    bool optimizers_converged = true;
    std::vector<Relation> relations;

    bool all_pass() const;
};

/// Evaluates the inequality web. Relations that compare optimizer outputs get
/// a multiplicative slack `tol`; log d relations are skipped when d <= e.
AuditReport relation_audit(const MarkovChain& chain, const OptimizerOptions& opts = {}, double tol = 0.05);

}  // namespace mclab
