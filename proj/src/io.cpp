#include "mclab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace mclab {

namespace {

Rational rational_entry(const json& value, const std::string& where) {
    if (value.is_string()) return parse_rational(value.get<std::string>());
    if (value.is_number_integer()) return Rational(value.get<long long>());
    if (value.is_number_unsigned()) return Rational(value.get<unsigned long long>());
    if (value.is_number_float()) return Rational(value.get<double>());
    throw ParseError(where + ": expected a number or a \"p/q\" string");
}

Vector<Rational> rational_array(const json& value, const std::string& where) {
    if (!value.is_array()) throw ParseError(where + " must be an array");
    Vector<Rational> out(value.size());
    for (std::size_t i = 0; i < value.size(); ++i) {
        out(i) = rational_entry(value[i], where + "[" + std::to_string(i) + "]");
    }
    return out;
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double number_from(const json& value) {
    if (value.is_null()) return NAN;
    if (!value.is_number()) throw ParseError("expected a number");
    return value.get<double>();
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_double(const std::string& field) {
    if (field == "nan") return NAN;
    if (field == "inf") return INFINITY;
    if (field == "-inf") return -INFINITY;
    std::size_t used = 0;
    double x;
    try {
        x = std::stod(field, &used);
    } catch (const std::exception&) {
        throw ParseError("bad number '" + field + "'");
    }
    if (used != field.size()) throw ParseError("bad number '" + field + "'");
    return x;
}

constexpr const char* kCsvHeader = "n,kappa_min,d,pi_1,pi_B_log,cap_log,isocap_bound,ratio,lsi_exact";
constexpr const char* kErrorPrefix = "# error n=";

std::string mode_name(NumericMode mode) {
    return mode == NumericMode::exact_rational ? "rational" : "float";
}

}  // namespace

ChainFile parse_chain_json(const json& doc) {
    if (!doc.is_object()) throw ParseError("chain file must be a JSON object");
    if (doc.contains("birth_death")) {
        const json& bd = doc.at("birth_death");
        if (!bd.is_object() || !bd.contains("up") || !bd.contains("down")) {
            throw ParseError("birth_death needs \"up\" and \"down\" arrays");
        }
        auto exact = BirthDeathChain<Rational>::create(rational_array(bd.at("up"), "up"),
                                                       rational_array(bd.at("down"), "down"));
        MarkovChain chain = to_chain(exact);
        return {std::move(chain), std::move(exact)};
    }
    if (doc.contains("kernel")) {
        const json& rows = doc.at("kernel");
        if (!rows.is_array() || rows.empty()) throw ParseError("kernel must be a non-empty array of rows");
        const std::size_t m = rows.size();
        Eigen::MatrixXd kernel(m, m);
        for (std::size_t x = 0; x < m; ++x) {
            const std::string where = "kernel[" + std::to_string(x) + "]";
            const Vector<Rational> row = rational_array(rows[x], where);
            if (static_cast<std::size_t>(row.size()) != m) throw DimensionError(where + " has the wrong length");
            for (std::size_t y = 0; y < m; ++y) kernel(x, y) = to_double(row(y));
        }
        return {MarkovChain::from_kernel(std::move(kernel)), std::nullopt};
    }
    throw ParseError("chain file needs a \"kernel\" or \"birth_death\" entry");
}

ChainFile read_chain_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return parse_chain_json(doc);
}

json chain_to_json(const BirthDeathChain<Rational>& bd) {
    json up = json::array();
    json down = json::array();
    for (State k = 1; k < bd.size(); ++k) up.push_back(format_rational(bd.up(k)));
    for (State k = 2; k <= bd.size(); ++k) down.push_back(format_rational(bd.down(k)));
    return {{"birth_death", {{"up", up}, {"down", down}}}};
}

json chain_to_json(const BirthDeathChain<double>& bd) {
    json up = json::array();
    json down = json::array();
    for (State k = 1; k < bd.size(); ++k) up.push_back(format_rational(Rational(bd.up(k))));
    for (State k = 2; k <= bd.size(); ++k) down.push_back(format_rational(Rational(bd.down(k))));
    return {{"birth_death", {{"up", up}, {"down", down}}}};
}

json chain_to_json(const MarkovChain& chain) {
    json rows = json::array();
    for (State x = 1; x <= chain.size(); ++x) {
        json row = json::array();
        for (State y = 1; y <= chain.size(); ++y) row.push_back(chain.p(x, y));
        rows.push_back(std::move(row));
    }
    return {{"kernel", rows}};
}

json to_json(const CurvatureReport& report) {
    json edges = json::array();
    for (const auto& e : report.per_edge) edges.push_back({{"x", e.x}, {"y", e.y}, {"kappa", e.kappa}});
    return {{"method", to_string(report.method)}, {"kappa_min", number_or_null(report.kappa_min)}, {"edges", edges}};
}

json to_json(const IsoCapBound& bound) {
    return {{"A", bound.A},
            {"B", bound.B},
            {"cap_log", number_or_null(bound.cap_log)},
            {"piB_log", number_or_null(bound.pi_B_log)},
            {"bound", number_or_null(bound.bound)},
            {"valid", bound.valid}};
}

json to_json(const Relation& relation) {
    return {{"name", relation.name},
            {"lhs", number_or_null(relation.lhs)},
            {"rhs", number_or_null(relation.rhs)},
            {"tol", relation.tol},
            {"pass", relation.pass},
            {"applicable", relation.applicable}};
}

json to_json(const AuditReport& report) {
    json relations = json::array();
    for (const auto& r : report.relations) relations.push_back(to_json(r));
    return {{"alpha_lsi", number_or_null(report.alpha_lsi)},
            {"alpha_mod", number_or_null(report.alpha_mod)},
            {"lambda", number_or_null(report.lambda)},
            {"kappa_min", number_or_null(report.kappa_min)},
            {"kbe_min", number_or_null(report.kbe_min)},
            {"sparsity", number_or_null(report.sparsity)},
            {"diameter", report.diameter},
            {"optimizers_converged", report.optimizers_converged},
            {"all_pass", report.all_pass()},
            {"relations", relations}};
}

json to_json(const LsiResult& result) {
    return {{"alpha", number_or_null(result.alpha)},
            {"minimizer", std::vector<double>(result.minimizer.begin(), result.minimizer.end())},
            {"restarts_used", result.restarts_used},
            {"best_restart", result.best_restart},
            {"converged", result.converged},
            {"upper_bound", result.upper_bound}};
}

json to_json(const ContractionReport& report) {
    return {{"rate", report.rate},
            {"times", report.times},
            {"trials", report.trials},
            {"seed", report.seed},
            {"checks", report.checks},
            {"violations", report.violations},
            {"worst_ratio", number_or_null(report.worst_ratio)},
            {"laziness_warning", report.laziness_warning}};
}

json to_json(const ExperimentRow& row) {
    json out = {{"n", row.n},
                {"kappa_min", number_or_null(row.kappa_min)},
                {"d", number_or_null(row.d)},
                {"pi_1", number_or_null(row.pi_1)},
                {"pi_B_log", number_or_null(row.pi_B_log)},
                {"cap_log", number_or_null(row.cap_log)},
                {"isocap_bound", number_or_null(row.isocap_bound)},
                {"ratio", number_or_null(row.ratio)},
                {"lsi_exact", row.lsi_exact ? number_or_null(*row.lsi_exact) : json(nullptr)}};
    if (row.error) out["error"] = *row.error;
    return out;
}

ExperimentRow experiment_row_from_json(const json& doc) {
    if (!doc.is_object()) throw ParseError("row must be a JSON object");
    ExperimentRow row;
    try {
        row.n = doc.at("n").get<int>();
        if (doc.contains("error")) {
            row.error = doc.at("error").get<std::string>();
            return row;
        }
        row.kappa_min = number_from(doc.at("kappa_min"));
        row.d = number_from(doc.at("d"));
        row.pi_1 = number_from(doc.at("pi_1"));
        row.pi_B_log = number_from(doc.at("pi_B_log"));
        row.cap_log = number_from(doc.at("cap_log"));
        row.isocap_bound = number_from(doc.at("isocap_bound"));
        row.ratio = number_from(doc.at("ratio"));
        if (doc.contains("lsi_exact") && !doc.at("lsi_exact").is_null()) row.lsi_exact = number_from(doc.at("lsi_exact"));
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad row: ") + e.what());
    }
    return row;
}

json to_json(const PaperCheckReport& report) {
    json rows = json::array();
    for (const auto& row : report.rows) {
        json checks = json::array();
        for (const auto& c : row.checks) {
            checks.push_back({{"id", c.id},
                              {"name", c.name},
                              {"pass", c.pass},
                              {"margin", number_or_null(c.margin)},
                              {"claimed", c.claimed}});
        }
        rows.push_back({{"n", row.n}, {"mode", mode_name(row.mode)}, {"pi_1", row.pi_1}, {"checks", checks}});
    }
    return {{"threshold_iii", report.threshold_iii},
            {"threshold_pi1", report.threshold_pi1},
            {"scan_max", report.scan_max},
            {"claimed_checks_pass", report.claimed_checks_pass()},
            {"rows", rows}};
}

void write_rows_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
    out << kCsvHeader << '\n';
    for (const auto& row : rows) {
        if (row.error) {
            // Failed rows keep their message in a comment line.
            std::string message = *row.error;
            for (char& c : message) {
                if (c == '\n' || c == '\r') c = ' ';
            }
            out << kErrorPrefix << row.n << ": " << message << '\n';
            continue;
        }
        out << row.n << ',' << format_double(row.kappa_min) << ',' << format_double(row.d) << ','
            << format_double(row.pi_1) << ',' << format_double(row.pi_B_log) << ',' << format_double(row.cap_log)
            << ',' << format_double(row.isocap_bound) << ',' << format_double(row.ratio) << ','
            << (row.lsi_exact ? format_double(*row.lsi_exact) : "") << '\n';
    }
}

std::vector<ExperimentRow> read_rows_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw ParseError("missing or unexpected CSV header");
    std::vector<ExperimentRow> rows;
    const std::string prefix = kErrorPrefix;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ExperimentRow row;
        if (line.rfind(prefix, 0) == 0) {
            const auto colon = line.find(": ", prefix.size());
            if (colon == std::string::npos) throw ParseError("bad error line '" + line + "'");
            row.n = static_cast<int>(parse_double(line.substr(prefix.size(), colon - prefix.size())));
            row.error = line.substr(colon + 2);
            rows.push_back(std::move(row));
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (!line.empty() && line.back() == ',') fields.emplace_back();
        if (fields.size() != 9) throw ParseError("expected 9 CSV fields in '" + line + "'");
        row.n = static_cast<int>(parse_double(fields[0]));
        row.kappa_min = parse_double(fields[1]);
        row.d = parse_double(fields[2]);
        row.pi_1 = parse_double(fields[3]);
        row.pi_B_log = parse_double(fields[4]);
        row.cap_log = parse_double(fields[5]);
        row.isocap_bound = parse_double(fields[6]);
        row.ratio = parse_double(fields[7]);
        if (!fields[8].empty()) row.lsi_exact = parse_double(fields[8]);
        rows.push_back(std::move(row));
    }
    return rows;
}

json rows_to_json(const std::vector<ExperimentRow>& rows) {
    json out = json::array();
    for (const auto& row : rows) out.push_back(to_json(row));
    return out;
}

std::vector<ExperimentRow> rows_from_json(const json& doc) {
    if (!doc.is_array()) throw ParseError("rows must be a JSON array");
    std::vector<ExperimentRow> rows;
    for (const auto& item : doc) rows.push_back(experiment_row_from_json(item));
    return rows;
}

std::vector<int> parse_int_set(const std::string& text) {
    auto to_int = [&](const std::string& s) {
        std::size_t used = 0;
        int v;
        try {
            v = std::stoi(s, &used);
        } catch (const std::exception&) {
            throw ParseError("bad integer '" + s + "' in '" + text + "'");
        }
        if (used != s.size()) throw ParseError("bad integer '" + s + "' in '" + text + "'");
        return v;
    };
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw ParseError("empty item in '" + text + "'");
        if (const auto dots = item.find(".."); dots != std::string::npos) {
            const int lo = to_int(item.substr(0, dots));
            const int hi = to_int(item.substr(dots + 2));
            if (lo > hi) throw ParseError("empty range '" + item + "'");
            if (hi - lo > 1000000) throw ParseError("range too large '" + item + "'");
            for (int v = lo; v <= hi; ++v) out.push_back(v);
        } else {
            out.push_back(to_int(item));
        }
    }
    if (out.empty()) throw ParseError("empty integer set");
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace mclab
