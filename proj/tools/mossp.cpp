// Command-line front end: solve single instances, run benchmark matrices,
// verify solvers against the exhaustive oracle, evaluate heuristic accuracy
// and generate benchmark instances.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mossp/domains.hpp"
#include "mossp/harness.hpp"
#include "mossp/model.hpp"
#include "mossp/state_space.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

std::optional<mossp::CostVector> parse_bound_flag(const std::string& text) {
    if (text.empty()) return std::nullopt;
    mossp::CostVector bound;
    std::stringstream stream(text);
    std::string token;
    while (std::getline(stream, token, ',')) bound.push_back(std::stod(token));
    return bound;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-objective stochastic shortest path solver"};
    app.require_subcommand(1);

    // --- solve ---
    std::string solve_model, solve_alg = "movi", solve_heuristic = "blind";
    std::string solve_bound_text, solve_out;
    double solve_epsilon = 1e-3, solve_lambda = mossp::kDefaultLambda, solve_timeout = 1800.0;
    std::uint64_t solve_seed = 0;
    bool solve_capped = false, solve_giveup = false, solve_pcs = false, solve_timing = false;
    auto* solve = app.add_subcommand("solve", "solve one instance, emit a run record");
    solve->add_option("--model", solve_model, "model JSON path")->required();
    solve->add_option("--alg", solve_alg, "movi|motvi|molao|imolao|molrtdp");
    solve->add_option("--heuristic", solve_heuristic, "heuristic selection string");
    solve->add_option("--epsilon", solve_epsilon, "consistency threshold");
    solve->add_flag("--capped", solve_capped, "use the capped backup for movi");
    solve->add_option("--bound", solve_bound_text, "bound vector, e.g. 2,2 (or one broadcast value)");
    solve->add_option("--lambda", solve_lambda, "CCS pruning margin");
    solve->add_flag("--pcs", solve_pcs, "prune with the Pareto coverage set instead of the CCS");
    solve->add_option("--seed", solve_seed, "RNG seed (molrtdp)");
    solve->add_option("--timeout", solve_timeout, "wall-clock limit in seconds");
    solve->add_flag("--giveup", solve_giveup, "apply the give-up transformation first");
    solve->add_option("--out", solve_out, "write the run record here instead of stdout");
    solve->add_flag("--timing", solve_timing, "include wall-clock time in the record");

    // --- bench ---
    std::string bench_config, bench_out;
    auto* bench = app.add_subcommand("bench", "run a benchmark matrix, emit CSV");
    bench->add_option("--config", bench_config, "bench config JSON path")->required();
    bench->add_option("--out", bench_out, "CSV output path (default stdout)");

    // --- verify ---
    std::string verify_model, verify_bound_text;
    double verify_epsilon = 1e-3, verify_lambda = mossp::kDefaultLambda;
    bool verify_nocap = false, verify_giveup = false;
    auto* verify = app.add_subcommand("verify", "check all solvers against the exhaustive oracle");
    verify->add_option("--model", verify_model, "model JSON path")->required();
    verify->add_option("--epsilon", verify_epsilon, "consistency threshold");
    verify->add_flag("--no-cap", verify_nocap, "use plain (uncapped) value iteration as oracle");
    verify->add_option("--bound", verify_bound_text, "bound vector");
    verify->add_option("--lambda", verify_lambda, "CCS pruning margin");
    verify->add_flag("--giveup", verify_giveup, "apply the give-up transformation first");

    // --- heval ---
    std::string heval_model, heval_bound_text;
    double heval_epsilon = 1e-3, heval_lambda = mossp::kDefaultLambda;
    bool heval_giveup = false;
    auto* heval = app.add_subcommand("heval", "heuristic relative error at the initial state");
    heval->add_option("--model", heval_model, "model JSON path")->required();
    heval->add_option("--epsilon", heval_epsilon, "consistency threshold");
    heval->add_option("--bound", heval_bound_text, "bound vector");
    heval->add_option("--lambda", heval_lambda, "CCS pruning margin");
    heval->add_flag("--giveup", heval_giveup, "apply the give-up transformation first");

    // --- gen ---
    std::string gen_family, gen_out_dir = ".";
    int gen_n = 1, gen_width = 2, gen_height = 2, gen_agents = 1, gen_spares = 1,
        gen_survivors = 1;
    double gen_pflat = 0.5;
    std::uint64_t gen_seed = 0;
    auto* gen = app.add_subcommand("gen", "generate benchmark instances");
    gen->add_option("family", gen_family, "sar|tireworld|pvisitall|visitalltire")->required();
    gen->add_option("--n", gen_n, "size parameter (tireworld, sar)");
    gen->add_option("--width", gen_width, "grid width (pvisitall, visitalltire)");
    gen->add_option("--height", gen_height, "grid height (pvisitall, visitalltire)");
    gen->add_option("--agents", gen_agents, "agent count");
    gen->add_option("--spares", gen_spares, "spare tires (visitalltire)");
    gen->add_option("--survivors", gen_survivors, "uncertain survivor cells (sar)");
    gen->add_option("--p-flat", gen_pflat, "flat-tire probability (tireworld)");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--out", gen_out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            const mossp::FactoredModel model = mossp::parse_model(read_file(solve_model));
            mossp::SolveSpec spec;
            spec.instance = solve_model;
            spec.algorithm = solve_alg;
            spec.heuristic = solve_heuristic;
            spec.epsilon = solve_epsilon;
            spec.capped = solve_capped;
            spec.bound = parse_bound_flag(solve_bound_text);
            spec.lambda = solve_lambda;
            spec.coverage = solve_pcs ? mossp::CoverageKind::kPcs : mossp::CoverageKind::kCcs;
            spec.seed = solve_seed;
            spec.timeout_s = solve_timeout;
            spec.giveup = solve_giveup;
            const mossp::RunRecord record = mossp::run_solve(model, spec);
            const std::string doc = mossp::run_record_to_json(record, solve_timing).dump(2) + "\n";
            if (solve_out.empty()) {
                std::cout << doc;
            } else {
                write_file(solve_out, doc);
            }
            if (record.outcome == "solved") return 0;
            std::cerr << record.outcome << ": " << record.error << "\n";
            return record.outcome == "timeout" ? 2 : 1;
        }

        if (bench->parsed()) {
            const mossp::BenchConfig cfg = mossp::parse_bench_config(read_file(bench_config));
            const std::string csv = mossp::run_bench(cfg);
            if (bench_out.empty()) {
                std::cout << csv;
            } else {
                write_file(bench_out, csv);
            }
            return 0;
        }

        if (verify->parsed()) {
            mossp::FactoredModel model = mossp::parse_model(read_file(verify_model));
            if (verify_giveup) model = mossp::apply_giveup_transform(model);
            const mossp::VerifyReport report =
                mossp::run_verify(model, verify_epsilon, !verify_nocap,
                                  parse_bound_flag(verify_bound_text), verify_lambda);
            for (const std::string& line : report.lines) std::cout << line << "\n";
            std::cout << (report.pass ? "PASS" : "FAIL") << "\n";
            return report.pass ? 0 : 1;
        }

        if (heval->parsed()) {
            mossp::FactoredModel model = mossp::parse_model(read_file(heval_model));
            if (heval_giveup) model = mossp::apply_giveup_transform(model);
            const auto rows = mossp::run_heval(model, heval_epsilon,
                                               parse_bound_flag(heval_bound_text), heval_lambda);
            std::cout << std::left << std::setw(14) << "heuristic" << std::setw(12)
                      << "error(%)" << "construct(ms)\n";
            for (const auto& row : rows) {
                std::cout << std::left << std::setw(14) << row.heuristic;
                if (row.defined) {
                    std::ostringstream pct;
                    pct << std::fixed << std::setprecision(1) << row.error_pct;
                    std::cout << std::setw(12) << pct.str();
                } else {
                    std::cout << std::setw(12) << "undefined";
                }
                std::cout << row.construct_ms;
                if (!row.defined && !row.note.empty()) std::cout << "  (" << row.note << ")";
                std::cout << "\n";
            }
            return 0;
        }

        if (gen->parsed()) {
            namespace fs = std::filesystem;
            mossp::FactoredModel model;
            std::string stem;
            if (gen_family == "tireworld") {
                model = mossp::gen_tireworld(gen_n, gen_pflat);
                stem = mossp::instance_stem("tireworld", "n" + std::to_string(gen_n), gen_seed);
            } else if (gen_family == "pvisitall") {
                model = mossp::gen_pvisitall(gen_width, gen_height, gen_agents);
                stem = mossp::instance_stem("pvisitall",
                                            "w" + std::to_string(gen_width) + "h" +
                                                std::to_string(gen_height) + "a" +
                                                std::to_string(gen_agents),
                                            gen_seed);
            } else if (gen_family == "visitalltire") {
                model = mossp::gen_visitalltire(gen_width, gen_height, gen_agents, gen_spares,
                                                gen_seed);
                stem = mossp::instance_stem("visitalltire",
                                            "w" + std::to_string(gen_width) + "h" +
                                                std::to_string(gen_height) + "a" +
                                                std::to_string(gen_agents) + "p" +
                                                std::to_string(gen_spares),
                                            gen_seed);
            } else if (gen_family == "sar") {
                model = mossp::gen_sar(gen_n, gen_survivors, gen_seed);
                stem = mossp::instance_stem("sar",
                                            "n" + std::to_string(gen_n) + "v" +
                                                std::to_string(gen_survivors),
                                            gen_seed);
            } else {
                std::cerr << "unknown family '" << gen_family << "'\n";
                return 1;
            }
            const fs::path dir(gen_out_dir);
            fs::create_directories(dir);
            const fs::path raw = dir / (stem + ".json");
            write_file(raw.string(), mossp::serialize_model(model));
            std::cout << raw.string() << "\n";
            if (mossp::has_dead_ends(model)) {
                const fs::path transformed = dir / (stem + "-giveup.json");
                write_file(transformed.string(),
                           mossp::serialize_model(mossp::apply_giveup_transform(model)));
                std::cout << transformed.string() << "\n";
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
