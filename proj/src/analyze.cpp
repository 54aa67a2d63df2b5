#include "mclab/analyze.hpp"

#include <sstream>

namespace mclab {

namespace {

std::string quantity_list() {
    std::string out;
    for (const auto& name : analyze_quantities()) out += (out.empty() ? "" : ", ") + name;
    return out;
}

json measure_json(const ChainFile& file) {
    json out;
    const auto& pi = file.chain.pi();
    out["pi"] = std::vector<double>(pi.weights().begin(), pi.weights().end());
    out["log_pi"] = std::vector<double>(pi.log_weights().begin(), pi.log_weights().end());
    if (file.birth_death) {
        const auto exact = stationary_distribution(*file.birth_death);
        json strings = json::array();
        for (State k = 1; k <= exact.size(); ++k) strings.push_back(format_rational(exact(k)));
        out["exact"] = strings;
    }
    return out;
}

json kappa_json(const ChainFile& file) {
    if (!file.birth_death) return to_json(min_ollivier_curvature(file.chain, CurvatureMethod::lp));
    const auto exact = min_ollivier_curvature(*file.birth_death);
    CurvatureReport report;
    report.method = CurvatureMethod::closed_form_bd;
    report.kappa_min = to_double(exact.kappa_min);
    for (State k = 1; k < file.birth_death->size(); ++k) {
        report.per_edge.push_back({k, k + 1, to_double(exact.per_edge[k - 1])});
    }
    json out = to_json(report);
    out["kappa_min_exact"] = format_rational(exact.kappa_min);
    return out;
}

json kbe_json(const MarkovChain& chain) {
    std::vector<double> per_state;
    for (State x = 1; x <= chain.size(); ++x) per_state.push_back(bakry_emery_curvature(chain, x));
    return {{"min", *std::min_element(per_state.begin(), per_state.end())}, {"per_state", per_state}};
}

template <class Scalar>
json shape_json(const BirthDeathChain<Scalar>& bd) {
    const auto concavity = check_log_concavity(stationary_distribution(bd));
    const auto monotone = check_monotone_rates(bd);
    return {{"log_concave", concavity.holds},
            {"log_concavity_violation", concavity.violation ? json(*concavity.violation) : json(nullptr)},
            {"monotone_rates", monotone.holds},
            {"monotone_violation", monotone.violation ? json(*monotone.violation) : json(nullptr)},
            {"monotone_which", monotone.which}};
}

json bd_shape_json(const ChainFile& file) {
    if (file.birth_death) return shape_json(*file.birth_death);
    if (!is_birth_death(file.chain)) throw MethodMismatchError("shape checks need a birth-death chain");
    const int m = file.chain.size();
    Eigen::VectorXd up(m - 1), down(m - 1);
    for (State k = 1; k < m; ++k) {
        up(k - 1) = file.chain.p(k, k + 1);
        down(k - 1) = file.chain.p(k + 1, k);
    }
    return shape_json(BirthDeathChain<double>::create(up, down));
}

}  // namespace

std::vector<std::string> parse_quantities(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "all") {
            for (const auto& name : analyze_quantities()) {
                if (name != "capacity") out.push_back(name);
            }
            continue;
        }
        if (!analyze_quantities().contains(item)) {
            throw UnknownQuantityError("unknown quantity '" + item + "'; expected one of: " + quantity_list() +
                                       " (or all)");
        }
        out.push_back(item);
    }
    if (out.empty()) throw UnknownQuantityError("no quantities given; expected one of: " + quantity_list());
    return out;
}

json analyze(const ChainFile& file, const AnalyzeRequest& request) {
    const MarkovChain& chain = file.chain;
    json out;
    out["states"] = chain.size();
    for (const auto& q : request.quantities) {
        if (!analyze_quantities().contains(q)) {
            throw UnknownQuantityError("unknown quantity '" + q + "'; expected one of: " + quantity_list());
        }
        if (q == "pi") {
            out[q] = measure_json(file);
        } else if (q == "lambda") {
            out[q] = spectral_gap(chain);
        } else if (q == "kappa") {
            out[q] = kappa_json(file);
        } else if (q == "kbe") {
            out[q] = kbe_json(chain);
        } else if (q == "lsi") {
            out[q] = to_json(lsi_constant(chain, request.optimizer));
        } else if (q == "mlsi") {
            out[q] = to_json(modified_lsi_constant(chain, request.optimizer));
        } else if (q == "audit") {
            out[q] = to_json(relation_audit(chain, request.optimizer));
        } else if (q == "capacity") {
            if (!request.A || !request.B) {
                throw UnknownQuantityError("capacity needs both --A and --B (e.g. --A 1 --B 5..9)");
            }
            out[q] = to_json(isocap_bound(chain, *request.A, *request.B));
        } else if (q == "diameter") {
            out[q] = diameter(chain);
        } else if (q == "sparsity") {
            out[q] = file.birth_death ? json(format_rational(sparsity(*file.birth_death))) : json(sparsity(chain));
        } else if (q == "sectional") {
            const auto check = check_nonnegative_sectional(chain);
            out[q] = {{"holds", check.holds},
                      {"worst_w_infinity", check.worst_w_infinity},
                      {"witness", check.witness ? json{check.witness->first, check.witness->second} : json(nullptr)}};
        } else if (q == "shape") {
            out[q] = bd_shape_json(file);
        }
    }
    return out;
}

}  // namespace mclab
