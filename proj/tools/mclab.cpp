#include <fstream>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "mclab/analyze.hpp"
#include "mclab/experiment.hpp"
#include "mclab/io.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 2;
constexpr int kNumericalError = 3;
constexpr int kCheckFailed = 4;

mclab::NumericMode parse_mode(const std::string& mode) {
    if (mode == "rational") return mclab::NumericMode::exact_rational;
    if (mode == "float") return mclab::NumericMode::float64_log_space;
    throw mclab::ParseError("mode must be rational or float");
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw mclab::ParseError("cannot write " + path);
    return out;
}

void print_paper_checks(const mclab::PaperCheckReport& report) {
    std::cout << "threshold (iii): n >= " << report.threshold_iii << "   threshold pi(1) >= 1/2: n >= "
              << report.threshold_pi1 << "   (scanned 4.." << report.scan_max << ")\n";
    for (const auto& row : report.rows) {
        std::cout << "n = " << row.n << " ("
                  << (row.mode == mclab::NumericMode::exact_rational ? "rational" : "float") << ")\n";
        for (const auto& c : row.checks) {
            std::cout << "  " << std::left << std::setw(4) << c.id << (c.pass ? "pass" : "FAIL")
                      << (c.claimed ? "" : " (not claimed)") << "  margin " << std::setprecision(6) << c.margin
                      << "  " << c.name << '\n';
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Curvature, functional inequalities and capacities of finite Markov chains"};
    app.require_subcommand(1);
    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "Seed for randomized restarts")->capture_default_str();

    auto* analyze = app.add_subcommand("analyze", "Compute quantities for a chain file");
    std::string chain_path;
    std::string quantities = "pi,lambda,kappa";
    std::string set_a;
    std::string set_b;
    int restarts = 32;
    analyze->add_option("file", chain_path, "Chain JSON file")->required();
    analyze->add_option("--quantities", quantities,
                        "Comma list: pi, lambda, kappa, kbe, lsi, mlsi, audit, capacity, diameter, sparsity, "
                        "sectional, shape, all")
        ->capture_default_str();
    analyze->add_option("--A", set_a, "Capacity source set, e.g. 1 or 1..3");
    analyze->add_option("--B", set_b, "Capacity target set, e.g. 7..9");
    analyze->add_option("--restarts", restarts, "Random restarts for the entropy optimizers")->capture_default_str();

    auto* reproduce = app.add_subcommand("reproduce", "Sweep the counterexample family");
    std::string n_list = "4,8,16,32,64,128";
    std::string mode = "rational";
    std::string out_path;
    std::string format = "csv";
    int lsi_max_n = 6;
    reproduce->add_option("--n", n_list, "Values of n, e.g. 4,8,16 or 4..12")->capture_default_str();
    reproduce->add_option("--mode", mode, "rational or float")->capture_default_str();
    reproduce->add_option("--out", out_path, "Output file (default stdout)");
    reproduce->add_option("--format", format, "csv or json")->capture_default_str();
    reproduce->add_option("--lsi-max-n", lsi_max_n, "Compute lsi_exact up to this n")->capture_default_str();

    auto* checks = app.add_subcommand("paper-checks", "Check the counterexample inequalities");
    std::string check_n = "16,32,64,128";
    std::string check_mode = "rational";
    std::string check_out;
    checks->add_option("--n", check_n, "Values of n, e.g. 4..128")->capture_default_str();
    checks->add_option("--mode", check_mode, "rational or float")->capture_default_str();
    checks->add_option("--out", check_out, "Also write the JSON report here");

    auto* counterexample = app.add_subcommand("counterexample", "Write a counterexample chain file");
    int ce_n = 4;
    std::string ce_out;
    counterexample->add_option("--n", ce_n, "Family index, n >= 4")->required();
    counterexample->add_option("--out", ce_out, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    try {
        if (*analyze) {
            mclab::AnalyzeRequest request;
            request.quantities = mclab::parse_quantities(quantities);
            if (!set_a.empty()) request.A = mclab::parse_int_set(set_a);
            if (!set_b.empty()) request.B = mclab::parse_int_set(set_b);
            request.optimizer.seed = seed;
            request.optimizer.restarts = restarts;
            const auto file = mclab::read_chain_file(chain_path);
            std::cout << mclab::analyze(file, request).dump(2) << '\n';
            return kOk;
        }
        if (*reproduce) {
            mclab::SweepConfig config;
            config.n_list = mclab::parse_int_set(n_list);
            if (config.n_list.front() < 4) throw mclab::DomainError("the counterexample family needs n >= 4");
            config.mode = parse_mode(mode);
            config.exact_lsi_max_n = lsi_max_n;
            config.seed = seed;
            if (format != "csv" && format != "json") throw mclab::ParseError("format must be csv or json");
            const auto rows = mclab::reproduce(config);
            std::ofstream file;
            if (!out_path.empty()) file = open_output(out_path);
            std::ostream& out = out_path.empty() ? std::cout : file;
            if (format == "csv") {
                mclab::write_rows_csv(out, rows);
            } else {
                out << mclab::rows_to_json(rows).dump(2) << '\n';
            }
            for (const auto& row : rows) {
                if (row.error) {
                    std::cerr << "n = " << row.n << ": " << *row.error << '\n';
                    return kNumericalError;
                }
            }
            return kOk;
        }
        if (*checks) {
            const auto report = mclab::paper_checks(mclab::parse_int_set(check_n), parse_mode(check_mode));
            print_paper_checks(report);
            if (!check_out.empty()) open_output(check_out) << mclab::to_json(report).dump(2) << '\n';
            return report.claimed_checks_pass() ? kOk : kCheckFailed;
        }
        if (*counterexample) {
            const auto doc = mclab::chain_to_json(mclab::counterexample_chain<mclab::Rational>(ce_n));
            if (ce_out.empty()) {
                std::cout << doc.dump(2) << '\n';
            } else {
                open_output(ce_out) << doc.dump(2) << '\n';
            }
            return kOk;
        }
    } catch (const mclab::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const mclab::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumericalError;
    }
    return kOk;
}
