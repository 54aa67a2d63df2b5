#include <sstream>

#include "doctest.h"
#include "mclab/analyze.hpp"
#include "mclab/io.hpp"

using namespace mclab;

TEST_CASE("birth-death chain files round-trip in canonical form") {
    const auto bd = counterexample_chain<Rational>(5);
    const json doc = chain_to_json(bd);
    CHECK(doc["birth_death"]["up"][0] == "1/100");
    const auto parsed = parse_chain_json(doc);
    REQUIRE(parsed.birth_death.has_value());
    CHECK(parsed.birth_death->up_rates() == bd.up_rates());
    CHECK(parsed.birth_death->down_rates() == bd.down_rates());
    CHECK(chain_to_json(*parsed.birth_death) == doc);
}

TEST_CASE("chain files accept mixed numeric forms") {
    const json doc = json::parse(R"({"kernel": [["1/2", 0.5], [0.25, "3/4"]]})");
    const auto file = parse_chain_json(doc);
    CHECK_FALSE(file.birth_death.has_value());
    CHECK(file.chain.p(1, 2) == 0.5);
    CHECK(parse_chain_json(chain_to_json(file.chain)).chain.kernel() == file.chain.kernel());

    const json bd = json::parse(R"({"birth_death": {"up": [0.25, "1/4"], "down": [1, "0.5"]}})");
    CHECK_THROWS_AS(parse_chain_json(bd), RowOverflowError);
    CHECK_THROWS_AS(parse_chain_json(json::parse(R"({"kernel": [["x"]]})")), ParseError);
    CHECK_THROWS_AS(parse_chain_json(json::parse(R"({"rates": []})")), ParseError);
    CHECK_THROWS_AS(parse_chain_json(json::parse(R"({"kernel": [[1, 0]]})")), DimensionError);
}

TEST_CASE("rows round-trip through csv and json") {
    SweepConfig config;
    config.n_list = {3, 4, 5, 9};
    config.exact_lsi_max_n = 4;
    const auto rows = reproduce(config);
    REQUIRE(rows[0].error.has_value());
    REQUIRE(rows[1].lsi_exact.has_value());

    std::stringstream csv;
    write_rows_csv(csv, rows);
    CHECK(csv.str().rfind("n,kappa_min,d,pi_1,pi_B_log,cap_log,isocap_bound,ratio,lsi_exact\n", 0) == 0);
    CHECK(read_rows_csv(csv) == rows);

    CHECK(rows_from_json(json::parse(rows_to_json(rows).dump())) == rows);
}

TEST_CASE("integer sets") {
    CHECK(parse_int_set("3") == std::vector<int>{3});
    CHECK(parse_int_set("5..7,1") == std::vector<int>{1, 5, 6, 7});
    CHECK_THROWS_AS(parse_int_set("4..2"), ParseError);
    CHECK_THROWS_AS(parse_int_set("a"), ParseError);
    CHECK_THROWS_AS(parse_int_set(""), ParseError);
}

TEST_CASE("analyze") {
    const auto file = parse_chain_json(chain_to_json(counterexample_chain<Rational>(4)));
    AnalyzeRequest request;
    request.quantities = parse_quantities("kappa,sparsity,capacity,shape");
    CHECK_THROWS_AS(analyze(file, request), UnknownQuantityError);
    request.A = std::vector<State>{1};
    request.B = state_range(8, 12);
    const json out = analyze(file, request);
    CHECK(out["kappa"]["method"] == "closed-form-bd");
    CHECK(out["kappa"]["kappa_min_exact"] == "1/64");
    CHECK(out["sparsity"] == "64/1");
    CHECK(out["capacity"]["valid"] == true);
    for (const char* key : {"A", "B", "cap_log", "piB_log", "bound", "valid"}) CHECK(out["capacity"].contains(key));
    CHECK(out["shape"]["log_concave"] == false);
    CHECK_THROWS_AS(parse_quantities("pi,entropy"), UnknownQuantityError);
}

TEST_CASE("curvature report shape") {
    const auto chain = to_chain(counterexample_chain<Rational>(4));
    const json doc = to_json(min_ollivier_curvature(chain, CurvatureMethod::lp));
    CHECK(doc["method"] == "lp");
    CHECK(doc["edges"].size() == 11);
    CHECK(doc["edges"][0].contains("kappa"));
    CHECK(doc["kappa_min"].get<double>() == doctest::Approx(1.0 / 64));
}
