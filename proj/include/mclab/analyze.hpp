#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mclab/io.hpp"

namespace mclab {

struct AnalyzeRequest {
    std::vector<std::string> quantities;
    std::optional<std::vector<State>> A;
    std::optional<std::vector<State>> B;
    OptimizerOptions optimizer{};
};

/// One JSON member per requested quantity. Throws UnknownQuantityError for
/// unsupported names and for "capacity" without both sets.
json analyze(const ChainFile& file, const AnalyzeRequest& request);

/// "pi,kappa" -> {"pi", "kappa"}; "all" expands to every quantity except
/// capacity.
std::vector<std::string> parse_quantities(const std::string& text);

}  // namespace mclab
