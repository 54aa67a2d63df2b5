#include "mclab/experiment.hpp"

#include <algorithm>

#include "mclab/parallel.hpp"

namespace mclab {

namespace {

constexpr double kLogTol = 1e-10;

template <class Scalar>
ExperimentRow compute_row(int n, const SweepConfig& config) {
    const auto bd = counterexample_chain<Scalar>(n);
    const auto pi = stationary_distribution(bd);
    const auto curvature = min_ollivier_curvature(bd);
    const Scalar d = sparsity(bd);
    const IsoCapBound bound = isocap_bound_bd(bd, pi, 1, 2 * n);

    ExperimentRow row;
    row.n = n;
    row.kappa_min = to_double(curvature.kappa_min);
    row.d = to_double(d);
    row.pi_1 = std::exp(pi.log_at(1));
    row.pi_B_log = bound.pi_B_log;
    row.cap_log = bound.cap_log;
    row.isocap_bound = bound.bound;
    const double log_d = log_of(d);
    row.ratio = bound.bound * log_d / row.kappa_min;

    const bool cross_check = n <= config.cross_check_max_n;
    const bool want_lsi = n <= config.exact_lsi_max_n;
    if (cross_check || want_lsi) {
        const MarkovChain chain = to_chain(bd);
        if (cross_check) {
            const double lp = min_ollivier_curvature(chain, CurvatureMethod::lp).kappa_min;
            if (std::fabs(lp - row.kappa_min) > 1e-10) {
                throw NumericalError("LP and closed-form curvature disagree at n = " + std::to_string(n));
            }
            const double harmonic = capacity_general(chain, {1}, state_range(2 * n, 3 * n)).cap;
            if (std::fabs(std::log(harmonic) - row.cap_log) > 1e-10) {
                throw NumericalError("harmonic and serial capacity disagree at n = " + std::to_string(n));
            }
        }
        if (want_lsi) {
            OptimizerOptions opts = config.lsi_options;
            opts.seed = config.seed;
            row.lsi_exact = lsi_constant(chain, opts).alpha * log_d / row.kappa_min;
        }
    }
    return row;
}

PaperCheck make_check(std::string id, std::string name, bool pass, double margin) {
    return {std::move(id), std::move(name), pass, margin, true};
}

template <class Scalar>
PaperCheckRow compute_checks(int n, NumericMode mode) {
    constexpr bool exact = is_exact_v<Scalar>;
    const auto bd = counterexample_chain<Scalar>(n);
    const auto pi = stationary_distribution(bd);
    const int m = 3 * n;
    const double log_n = std::log(static_cast<double>(n));
    const auto B = state_range(2 * n, m);

    PaperCheckRow row;
    row.n = n;
    row.mode = mode;
    row.pi_1 = std::exp(pi.log_at(1));

    // (i), (ii): end-edge curvatures dominate 1/(4n^2).
    const Scalar target = make_fraction<Scalar>(1, 4L * n * n);
    auto curvature_check = [&](std::string id, State k) {
        const Scalar kappa = ollivier_curvature_bd(bd, k);
        const double margin = log_of(kappa) - log_of(target);
        const bool pass = exact ? kappa >= target : margin >= -kLogTol;
        row.checks.push_back(make_check(std::move(id), "kappa(" + std::to_string(k) + "," + std::to_string(k + 1) +
                                                           ") >= 1/(4n^2)",
                                        pass, margin));
    };
    curvature_check("i", 1);
    curvature_check("ii", m - 1);

    // (iii): 1 >= pi(k)/pi(n+1) >= (1 - 4/n)^{2n} >= e^{-10} on n+1..3n, hence
    // pi(B) >= e^{-10} pi(n+1) n.
    {
        const double base_log = 2.0 * n * std::log1p(-4.0 / n);
        double ratio_upper = INFINITY;  // slack in ratio <= 1
        double ratio_lower = INFINITY;  // slack in ratio >= base
        bool ratio_pass = true;
        [[maybe_unused]] Scalar power = 1;
        if constexpr (exact) {
            const Scalar base = 1 - make_fraction<Scalar>(4, n);
            for (int j = 0; j < 2 * n; ++j) power *= base;
        }
        for (State k = n + 1; k <= m; ++k) {
            const double log_ratio = pi.log_at(k) - pi.log_at(n + 1);
            ratio_upper = std::min(ratio_upper, -log_ratio);
            ratio_lower = std::min(ratio_lower, log_ratio - base_log);
            if constexpr (exact) {
                const Scalar ratio = pi(k) / pi(n + 1);
                ratio_pass = ratio_pass && ratio <= 1 && ratio >= power;
            }
        }
        if constexpr (!exact) ratio_pass = ratio_upper >= -kLogTol && ratio_lower >= -kLogTol;
        const double base_margin = base_log + 10.0;
        const double mass_margin = pi.log_mass(B) - pi.log_at(n + 1) - log_n + 10.0;
        const bool pass = ratio_pass && base_margin >= 0 && mass_margin >= (exact ? 0.0 : -kLogTol);
        // ratio <= 1 is tight at k = n+1, so it only gates pass.
        const double margin = std::min({ratio_lower, base_margin, mass_margin});
        row.checks.push_back(make_check("iii", "pi(B) >= e^{-10} pi(n+1) n via (1-4/n)^{2n} >= e^{-10}", pass, margin));
    }

    // (iv), (v): serial resistance between {1} and B.
    const auto cap = capacity_bd(bd, pi, 1, 2 * n);
    {
        const double margin = -cap.log_cap + pi.log_at(n + 1) - log_n;
        bool pass;
        if constexpr (exact) {
            pass = pi(n + 1) / cap.cap >= Scalar(n);
        } else {
            pass = margin >= -kLogTol;
        }
        row.checks.push_back(make_check("iv", "1/cap({1},B) >= n/pi(n+1)", pass, margin));
    }
    {
        const double margin = 10.0 - (cap.log_cap - pi.log_mass(B) + 2.0 * log_n);
        row.checks.push_back(make_check("v", "cap({1},B)/pi(B) <= e^{10}/n^2", margin >= (exact ? 0.0 : -kLogTol), margin));
    }
    // (vi): pi(B) <= n^{-n/2}, squared to stay in integers.
    {
        const double margin = -0.5 * n * log_n - pi.log_mass(B);
        bool pass;
        if constexpr (exact) {
            const Scalar mass = pi.mass(B);
            Scalar scaled = mass * mass;
            for (int j = 0; j < n; ++j) scaled *= n;
            pass = scaled <= 1;
        } else {
            pass = margin >= -kLogTol;
        }
        row.checks.push_back(make_check("vi", "pi(B) <= n^{-n/2}", pass, margin));
    }
    {
        const double margin = pi.log_at(1) + std::log(2.0);
        bool pass;
        if constexpr (exact) {
            pass = pi(1) * 2 >= 1;
        } else {
            pass = margin >= -kLogTol;
        }
        row.checks.push_back(make_check("pi1", "pi(1) >= 1/2", pass, margin));
    }
    return row;
}

PaperCheckRow checks_for(int n, NumericMode mode, int rational_max_n) {
    if (mode == NumericMode::exact_rational && n <= rational_max_n) return compute_checks<Rational>(n, mode);
    return compute_checks<double>(n, NumericMode::float64_log_space);
}

}  // namespace

ExperimentRow experiment_row(int n, const SweepConfig& config) {
    if (config.mode == NumericMode::exact_rational && n <= config.rational_max_n) {
        return compute_row<Rational>(n, config);
    }
    return compute_row<double>(n, config);
}

std::vector<ExperimentRow> reproduce(const SweepConfig& config) {
    std::vector<int> ns = config.n_list;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    std::vector<ExperimentRow> rows(ns.size());
    parallel_for(ns.size(), [&](std::size_t i) {
        try {
            rows[i] = experiment_row(ns[i], config);
        } catch (const std::exception& e) {
            rows[i] = ExperimentRow{};
            rows[i].n = ns[i];
            rows[i].error = e.what();
        }
    });
    return rows;
}

PaperCheckRow paper_check_row(int n, NumericMode mode) { return checks_for(n, mode, 1 << 30); }

const PaperCheck& PaperCheckRow::check(const std::string& id) const {
    for (const auto& c : checks) {
        if (c.id == id) return c;
    }
    throw IndexError("no counterexample check with id " + id);
}

bool PaperCheckReport::claimed_checks_pass() const {
    for (const auto& row : rows) {
        for (const auto& c : row.checks) {
            if (c.claimed && !c.pass) return false;
        }
    }
    return true;
}

PaperCheckReport paper_checks(const std::vector<int>& n_list, NumericMode mode, int rational_max_n) {
    if (n_list.empty()) throw DomainError("counterexample checks need at least one n");
    for (int n : n_list) {
        if (n < 4) throw DomainError("counterexample checks need n >= 4");
    }
    PaperCheckReport report;
    report.scan_max = *std::max_element(n_list.begin(), n_list.end());

    const int scan_count = report.scan_max - 3;
    std::vector<PaperCheckRow> scan(scan_count);
    parallel_for(scan.size(), [&](std::size_t i) { scan[i] = checks_for(static_cast<int>(i) + 4, mode, rational_max_n); });

    auto threshold = [&](const std::string& id) {
        int n0 = report.scan_max + 1;
        for (int i = scan_count - 1; i >= 0 && scan[i].check(id).pass; --i) n0 = scan[i].n;
        return n0;
    };
    report.threshold_iii = threshold("iii");
    report.threshold_pi1 = threshold("pi1");

    std::vector<int> ns = n_list;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    for (int n : ns) {
        PaperCheckRow row = scan[n - 4];
        for (auto& c : row.checks) {
            if (c.id == "iii") c.claimed = n >= report.threshold_iii;
            if (c.id == "pi1") c.claimed = n >= report.threshold_pi1;
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

const std::set<std::string>& analyze_quantities() {
    static const std::set<std::string> names{"pi",   "lambda", "kappa", "kbe",      "lsi",     "mlsi",
                                             "audit", "capacity", "diameter", "sparsity", "sectional", "shape"};
    return names;
}

}  // namespace mclab
