// diagon: diagonalize, classify, count, fit and verify Diophantine equations.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "diagon/cli.hpp"
#include "diagon/diagon.hpp"
#include "diagon/report.hpp"

namespace {

struct Common {
    std::string output;
    bool text = false;
    std::uint64_t ceiling = 0;
    unsigned workers = 1;
    double fermat_constant = diagon::kDefaultFermatConstant;
    double r_squared_threshold = diagon::kDefaultRSquaredThreshold;
};

int emit(const diagon::cli::Outcome& outcome, const Common& common) {
    if (!outcome.diagnostic.empty() && outcome.exit_code != diagon::cli::kOk)
        std::cerr << "diagon: " << outcome.diagnostic << "\n";
    if (!outcome.report) return outcome.exit_code;
    const std::string body = common.text ? diagon::cli::render_text(*outcome.report)
                                         : diagon::to_json(*outcome.report).dump(2) + "\n";
    if (common.output.empty()) {
        std::cout << body;
    } else {
        std::ofstream out(common.output, std::ios::binary);
        if (!out) {
            std::cerr << "diagon: cannot write '" << common.output << "'\n";
            return diagon::cli::kPipelineError;
        }
        out << body;
    }
    return outcome.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Diagonal forms of Diophantine equations and solution-count checks"};
    app.fallthrough();
    app.require_subcommand(1);

    Common common;
    std::string ceiling_text;
    app.add_option("-o,--output", common.output, "Write the report to a file instead of stdout");
    auto* json_flag = app.add_flag("--json", "Emit the JSON report (default)");
    app.add_flag("--text", common.text, "Emit a human-readable summary")->excludes(json_flag);
    app.add_option("--ceiling", ceiling_text, "Maximum number of enumerated points (env DIAGON_CEILING)");
    app.add_option("--workers", common.workers, "Worker threads for counting")->check(CLI::Range(1u, 1024u));
    app.add_option("--fermat-constant", common.fermat_constant, "Constant C in count <= C N ln N for ternary forms");
    app.add_option("--r2-threshold", common.r_squared_threshold, "Minimum r^2 for a conclusive fit");

    std::string file;
    std::string grid_text = "32,64,128,256,512";
    double tolerance = 0.15;
    std::vector<long> ns;
    bool pullback = false;

    auto* diag = app.add_subcommand("diagonalize", "Reduce an equation to diagonal form");
    diag->add_option("file", file, "Equation file")->required();

    auto* verify = app.add_subcommand("verify", "Compare solution-count exponents before and after diagonalization");
    verify->add_option("file", file, "Equation file")->required();
    verify->add_option("--grid", grid_text, "Comma-separated increasing N values");
    verify->add_option("--tol", tolerance, "Allowed exponent gap");

    auto* count = app.add_subcommand("count", "Count integer solutions in [-N, N]^k");
    count->add_option("file", file, "Equation file")->required();
    count->add_option("-N,--n", ns, "Hypercube half-side(s)")->required()->check(CLI::PositiveNumber);
    count->add_flag("--pullback", pullback, "Count the diagonal equation over the pulled-back hypercube");

    auto* fit = app.add_subcommand("fit", "Fit the solution-count exponent");
    fit->add_option("file", file, "Equation file")->required();
    fit->add_option("--grid", grid_text, "Comma-separated increasing N values");

    auto* classify = app.add_subcommand("classify", "Signature, surface type and predicted exponent");
    classify->add_option("file", file, "Equation file")->required();

    std::string corpus_dir;
    auto* corpus = app.add_subcommand("corpus", "Diagonalize every .dioph file in a directory");
    corpus->add_option("dir", corpus_dir, "Corpus directory")->required()->check(CLI::ExistingDirectory);

    CLI11_PARSE(app, argc, argv);

    diagon::cli::Settings settings;
    try {
        settings.count.ceiling = ceiling_text.empty() ? diagon::cli::ceiling_from_environment()
                                                      : std::stoull(ceiling_text);
    } catch (const std::exception& err) {
        std::cerr << "diagon: invalid ceiling: " << err.what() << "\n";
        return diagon::cli::kParseError;
    }
    settings.count.workers = common.workers;
    settings.fermat_constant = common.fermat_constant;
    settings.r_squared_threshold = common.r_squared_threshold;

    if (corpus->parsed()) {
        nlohmann::json all = nlohmann::json::array();
        int code = diagon::cli::kOk;
        std::vector<diagon::Equation> equations;
        try {
            equations = diagon::load_corpus(corpus_dir);
        } catch (const diagon::ParseError& err) {
            std::cerr << "diagon: " << err.what() << "\n";
            return diagon::cli::kParseError;
        }
        for (const auto& e : equations) {
            const auto outcome = diagon::cli::cmd_diagonalize(e, settings);
            if (outcome.report) {
                all.push_back(diagon::to_json(*outcome.report));
            } else {
                std::cerr << "diagon: " << e.name.value_or("?") << ": " << outcome.diagnostic << "\n";
                code = diagon::cli::kPipelineError;
            }
        }
        std::cout << all.dump(2) << "\n";
        return code;
    }

    diagon::Equation equation;
    try {
        equation = diagon::load_equation_file(file);
    } catch (const diagon::ParseError& err) {
        std::cerr << "diagon: " << file << ":" << err.what() << "\n";
        return diagon::cli::kParseError;
    }

    std::vector<long> grid;
    if (verify->parsed() || fit->parsed()) {
        try {
            grid = diagon::cli::parse_grid(grid_text);
        } catch (const diagon::Error& err) {
            std::cerr << "diagon: " << err.what() << "\n";
            return diagon::cli::kParseError;
        }
    }

    if (diag->parsed()) return emit(diagon::cli::cmd_diagonalize(equation, settings), common);
    if (verify->parsed()) return emit(diagon::cli::cmd_verify(equation, grid, tolerance, settings), common);
    if (count->parsed()) return emit(diagon::cli::cmd_count(equation, ns, pullback, settings), common);
    if (fit->parsed()) return emit(diagon::cli::cmd_fit(equation, grid, settings), common);
    return emit(diagon::cli::cmd_classify(equation, settings), common);
}
