#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "mclab/capacity.hpp"
#include "mclab/chain.hpp"
#include "mclab/curvature.hpp"
#include "mclab/experiment.hpp"
#include "mclab/functional.hpp"

namespace mclab {

using nlohmann::json;

/// A parsed chain file. Birth–death files keep the exact rates; entries given
/// as "p/q" strings or integers are exact, JSON floats are taken at their
/// binary value.
struct ChainFile {
    MarkovChain chain;
    std::optional<BirthDeathChain<Rational>> birth_death;
};

/// {"kernel": [[...]]} or {"birth_death": {"up": [...], "down": [...]}}.
/// Throws ParseError on malformed input; chain validation errors propagate.
ChainFile parse_chain_json(const json& doc);
ChainFile read_chain_file(const std::filesystem::path& path);

/// Canonical form: birth–death rates as "p/q" strings in lowest terms.
json chain_to_json(const BirthDeathChain<Rational>& bd);
json chain_to_json(const BirthDeathChain<double>& bd);
json chain_to_json(const MarkovChain& chain);

json to_json(const CurvatureReport& report);
json to_json(const IsoCapBound& bound);
json to_json(const Relation& relation);
json to_json(const AuditReport& report);
json to_json(const LsiResult& result);
json to_json(const ContractionReport& report);
json to_json(const ExperimentRow& row);
json to_json(const PaperCheckReport& report);

ExperimentRow experiment_row_from_json(const json& doc);

/// CSV with header n,kappa_min,d,pi_1,pi_B_log,cap_log,isocap_bound,ratio,lsi_exact.
void write_rows_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);
std::vector<ExperimentRow> read_rows_csv(std::istream& in);

json rows_to_json(const std::vector<ExperimentRow>& rows);
std::vector<ExperimentRow> rows_from_json(const json& doc);

/// "3", "2..5", "1,4,7..9" -> sorted unique values.
std::vector<int> parse_int_set(const std::string& text);

}  // namespace mclab
