#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mclab/capacity.hpp"
#include "mclab/chain.hpp"
#include "mclab/curvature.hpp"
#include "mclab/functional.hpp"

namespace mclab {

/// One n of the counterexample sweep. B = {2n..3n}, A = {1}.
struct ExperimentRow {
    int n = 0;
    double kappa_min = 0.0;
    double d = 0.0;
    double pi_1 = 0.0;
    double pi_B_log = 0.0;
    double cap_log = 0.0;
    double isocap_bound = 0.0;
    double ratio = 0.0;                // isocap_bound * log d / kappa_min
    std::optional<double> lsi_exact;   // alpha_LSI * log d / kappa_min, small n only
    std::optional<std::string> error;  // set on a failed row; other fields unset

    bool operator==(const ExperimentRow&) const = default;
};

enum class OutputFormat { csv, json };

struct SweepConfig {
    std::vector<int> n_list{4, 8, 16, 32, 64, 128};
    NumericMode mode = NumericMode::exact_rational;
    int exact_lsi_max_n = 6;
    /// Rows above this n run in log space even in rational mode.
    int rational_max_n = 64;
    /// LP curvature and harmonic-solver capacity cross-checks up to this n.
    int cross_check_max_n = 8;
    std::uint64_t seed = 0;
    OptimizerOptions lsi_options{};
};

/// Computes a row. Throws if a cross-check disagrees beyond 1e-10.
ExperimentRow experiment_row(int n, const SweepConfig& config);

/// All rows, ordered by n. A failing n yields an error row and the sweep
/// continues.
std::vector<ExperimentRow> reproduce(const SweepConfig& config);

struct PaperCheck {
    std::string id;    // "i" .. "vi", plus "pi1"
    std::string name;
    bool pass = false;
    double margin = 0.0;  // natural-log slack, positive when the inequality holds
    bool claimed = true;  // the inequality is asserted for this n
};

struct PaperCheckRow {
    int n = 0;
    NumericMode mode = NumericMode::exact_rational;
    double pi_1 = 0.0;
    std::vector<PaperCheck> checks;

    const PaperCheck& check(const std::string& id) const;
};

struct PaperCheckReport {
    std::vector<PaperCheckRow> rows;
    /// Smallest n0 such that the check passes for every scanned n >= n0.
    int threshold_iii = 0;
    int threshold_pi1 = 0;
    int scan_max = 0;

    /// True unless a claimed check failed.
    bool claimed_checks_pass() const;
};

/// Evaluates the displayed counterexample inequalities for one n.
PaperCheckRow paper_check_row(int n, NumericMode mode);

/// Rows for n_list plus thresholds located by scanning 4..max(n_list).
/// Rows above `rational_max_n` fall back to log space in rational mode.
PaperCheckReport paper_checks(const std::vector<int>& n_list, NumericMode mode, int rational_max_n = 128);

/// Quantities understood by analyze.
const std::set<std::string>& analyze_quantities();

}  // namespace mclab
