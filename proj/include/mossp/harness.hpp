/**
 * @file harness.hpp
 * @brief Experiment orchestration: single solves producing run records,
 * benchmark matrices with CSV output, oracle-based verification and
 * heuristic accuracy evaluation.
 *
 * Defaults follow the experimental setup: epsilon 0.001, bound 100 in
 * every dimension, lambda 0.01, per-run timeout 1800 s.
 *
 * Run records are written without wall-clock timing unless asked for, so
 * repeated solves of deterministic algorithms produce byte-identical
 * documents.
 */

#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "mossp/domains.hpp"
#include "mossp/heuristics.hpp"
#include "mossp/model.hpp"
#include "mossp/search.hpp"
#include "mossp/state_space.hpp"
#include "mossp/vecset.hpp"
#include "mossp/vi.hpp"

namespace mossp {

struct RunRecord {
    std::string instance;
    std::string algorithm;
    std::string heuristic;
    double epsilon = 1e-3;
    CostVector bound;  ///< empty = uncapped
    double lambda = kDefaultLambda;
    std::uint64_t seed = 0;
    std::string outcome;  ///< solved | timeout | error
    std::string error;    ///< diagnostic when outcome != solved
    VectorSet ccs;        ///< value at the initial state, lexicographically sorted
    SearchStats stats;
};

inline nlohmann::ordered_json run_record_to_json(const RunRecord& r, bool include_timing = false) {
    nlohmann::ordered_json doc;
    doc["instance"] = r.instance;
    doc["algorithm"] = r.algorithm;
    doc["heuristic"] = r.heuristic;
    doc["epsilon"] = r.epsilon;
    if (r.bound.empty()) {
        doc["bound"] = nullptr;
    } else {
        doc["bound"] = r.bound;
    }
    doc["lambda"] = r.lambda;
    doc["seed"] = r.seed;
    doc["outcome"] = r.outcome;
    doc["error"] = r.error;
    doc["ccs"] = r.ccs;
    doc["ccs_size"] = r.ccs.size();
    doc["stats"] = {{"backups", r.stats.backups},
                    {"expansions", r.stats.expansions},
                    {"trials", r.stats.trials},
                    {"lp_calls", r.stats.lp_calls}};
    if (include_timing) doc["stats"]["wall_ms"] = r.stats.wall_ms;
    return doc;
}

inline RunRecord run_record_from_json(const nlohmann::ordered_json& doc) {
    RunRecord r;
    r.instance = doc.at("instance").get<std::string>();
    r.algorithm = doc.at("algorithm").get<std::string>();
    r.heuristic = doc.at("heuristic").get<std::string>();
    r.epsilon = doc.at("epsilon").get<double>();
    if (!doc.at("bound").is_null()) r.bound = doc.at("bound").get<CostVector>();
    r.lambda = doc.at("lambda").get<double>();
    r.seed = doc.at("seed").get<std::uint64_t>();
    r.outcome = doc.at("outcome").get<std::string>();
    r.error = doc.at("error").get<std::string>();
    r.ccs = doc.at("ccs").get<VectorSet>();
    r.stats.backups = doc.at("stats").at("backups").get<long long>();
    r.stats.expansions = doc.at("stats").at("expansions").get<long long>();
    r.stats.trials = doc.at("stats").at("trials").get<long long>();
    r.stats.lp_calls = doc.at("stats").at("lp_calls").get<long long>();
    if (doc.at("stats").contains("wall_ms"))
        r.stats.wall_ms = doc.at("stats").at("wall_ms").get<std::int64_t>();
    return r;
}

inline const std::vector<std::string>& algorithm_names() {
    static const std::vector<std::string> names = {"movi", "motvi", "molao", "imolao", "molrtdp"};
    return names;
}

struct SolveSpec {
    std::string instance;  ///< label recorded in the output
    std::string algorithm = "movi";
    std::string heuristic = "blind";
    double epsilon = 1e-3;
    bool capped = false;  ///< movi only; every other algorithm is always capped
    std::optional<CostVector> bound;
    double lambda = kDefaultLambda;
    CoverageKind coverage = CoverageKind::kCcs;
    std::uint64_t seed = 0;
    double timeout_s = 1800.0;
    std::size_t state_cap = 10'000'000;
    bool giveup = false;  ///< apply the give-up transformation before solving
};

/// Runs one solve under the spec's caps; failures land in the record's
/// outcome rather than escaping.
inline RunRecord run_solve(const FactoredModel& input, const SolveSpec& spec) {
    RunRecord record;
    record.instance = spec.instance;
    record.algorithm = spec.algorithm;
    record.heuristic = spec.heuristic;
    record.epsilon = spec.epsilon;
    record.lambda = spec.lambda;
    record.seed = spec.seed;

    try {
        const FactoredModel model = spec.giveup ? apply_giveup_transform(input) : input;
        CostVector bound;
        if (spec.bound) {
            bound = *spec.bound;
            if (bound.size() == 1) bound.assign(model.n_objectives(), spec.bound->front());
            if (bound.size() != model.n_objectives())
                throw SolveError("bound dimension does not match the model");
        } else {
            bound.assign(model.n_objectives(), 100.0);
        }
        const bool capped = spec.capped || spec.algorithm != "movi";
        if (capped) record.bound = bound;

        CoverageOps ops{spec.coverage, spec.lambda};
        SolveLimits limits;
        limits.state_cap = spec.state_cap;
        limits.deadline = std::chrono::steady_clock::now() +
                          std::chrono::milliseconds(static_cast<std::int64_t>(
                              spec.timeout_s * 1000.0));

        HeuristicConfig hcfg;
        hcfg.coverage = ops;
        hcfg.bound = bound;
        hcfg.epsilon = spec.epsilon;
        hcfg.limits = limits;
        const Heuristic heuristic = make_heuristic(model, spec.heuristic, hcfg);

        SolveOutput output;
        if (spec.algorithm == "movi") {
            ViConfig cfg{ops, heuristic.evaluate, limits, {}};
            output = capped ? run_movi_capped(model, spec.epsilon, Bound(bound), cfg)
                            : run_movi(model, spec.epsilon, cfg);
        } else if (spec.algorithm == "motvi") {
            ViConfig cfg{ops, heuristic.evaluate, limits, {}};
            output = run_motvi(model, spec.epsilon, Bound(bound), cfg);
        } else if (spec.algorithm == "molao" || spec.algorithm == "imolao" ||
                   spec.algorithm == "molrtdp") {
            SearchConfig cfg;
            cfg.coverage = ops;
            cfg.bound = bound;
            cfg.limits = limits;
            SearchResult result;
            if (spec.algorithm == "molao")
                result = molao_star(model, heuristic.evaluate, spec.epsilon, cfg);
            else if (spec.algorithm == "imolao")
                result = imolao_star(model, heuristic.evaluate, spec.epsilon, cfg);
            else
                result = molrtdp(model, heuristic.evaluate, spec.epsilon, spec.seed, cfg);
            output.values = std::move(result.values);
            output.stats = result.stats;
        } else {
            throw SolveError("unknown algorithm '" + spec.algorithm + "'");
        }

        record.stats = output.stats;
        const VectorSet& at_init = output.values.at(model.init);
        if (at_init.empty())
            throw SolveError(
                "no proper policy from the initial state (assumption violation suspected)");
        record.ccs = lexicographic_sorted(at_init);
        record.outcome = "solved";
    } catch (const SolveTimeout& e) {
        record.outcome = "timeout";
        record.error = e.what();
    } catch (const std::exception& e) {
        record.outcome = "error";
        record.error = e.what();
    }
    return record;
}

// ---------------------------------------------------------------------------
// Benchmark matrices
// ---------------------------------------------------------------------------

struct BenchConfig {
    std::vector<std::string> instances;  ///< model file paths
    std::vector<std::string> algorithms;
    std::vector<std::string> heuristics;
    double epsilon = 1e-3;
    double lambda = kDefaultLambda;
    std::optional<CostVector> bound;
    double timeout_s = 60.0;
    int repeats = 1;
    int workers = 1;
};

inline BenchConfig parse_bench_config(const std::string& text) {
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ModelError(std::string("bench config is not valid JSON: ") + e.what());
    }
    detail::reject_unknown_keys(doc,
                                {"instances", "algorithms", "heuristics", "epsilon", "lambda",
                                 "bound", "timeout_s", "repeats", "workers"},
                                "bench config");
    BenchConfig cfg;
    cfg.instances = doc.at("instances").get<std::vector<std::string>>();
    cfg.algorithms = doc.at("algorithms").get<std::vector<std::string>>();
    cfg.heuristics = doc.at("heuristics").get<std::vector<std::string>>();
    if (doc.contains("epsilon")) cfg.epsilon = doc["epsilon"].get<double>();
    if (doc.contains("lambda")) cfg.lambda = doc["lambda"].get<double>();
    if (doc.contains("bound")) cfg.bound = doc["bound"].get<CostVector>();
    if (doc.contains("timeout_s")) cfg.timeout_s = doc["timeout_s"].get<double>();
    if (doc.contains("repeats")) cfg.repeats = doc["repeats"].get<int>();
    if (doc.contains("workers")) cfg.workers = doc["workers"].get<int>();
    if (cfg.instances.empty() || cfg.algorithms.empty() || cfg.heuristics.empty())
        throw ModelError("bench config: instances, algorithms and heuristics must be non-empty");
    if (cfg.repeats < 1 || cfg.workers < 1)
        throw ModelError("bench config: repeats and workers must be >= 1");
    return cfg;
}

namespace detail {

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string join_bound(const CostVector& bound) {
    std::string out;
    for (std::size_t i = 0; i < bound.size(); ++i) {
        if (i) out += ';';
        out += nlohmann::ordered_json(bound[i]).dump();
    }
    return out;
}

}  // namespace detail

/// One CSV document: a `run` row per solve, then cumulative solved counts
/// marginalised by algorithm and by heuristic. Header order is stable.
inline std::string run_bench(const BenchConfig& cfg) {
    struct Row {
        std::string instance_label;
        SolveSpec spec;
    };
    std::vector<FactoredModel> models;
    models.reserve(cfg.instances.size());
    for (const std::string& path : cfg.instances) {
        std::ifstream in(path);
        if (!in) throw ModelError("cannot open model file '" + path + "'");
        std::stringstream buffer;
        buffer << in.rdbuf();
        models.push_back(parse_model(buffer.str()));
    }

    std::vector<Row> rows;
    std::vector<int> model_of;
    for (std::size_t i = 0; i < cfg.instances.size(); ++i) {
        for (const std::string& alg : cfg.algorithms) {
            for (const std::string& heuristic : cfg.heuristics) {
                for (int repeat = 0; repeat < cfg.repeats; ++repeat) {
                    SolveSpec spec;
                    spec.instance = cfg.instances[i];
                    spec.algorithm = alg;
                    spec.heuristic = heuristic;
                    spec.epsilon = cfg.epsilon;
                    spec.lambda = cfg.lambda;
                    spec.bound = cfg.bound;
                    spec.seed = static_cast<std::uint64_t>(repeat);
                    spec.timeout_s = cfg.timeout_s;
                    rows.push_back({cfg.instances[i], spec});
                    model_of.push_back(static_cast<int>(i));
                }
            }
        }
    }

    std::vector<RunRecord> records(rows.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= rows.size()) return;
            records[k] = run_solve(models[model_of[k]], rows[k].spec);
        }
    };
    if (cfg.workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < cfg.workers; ++w) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    std::ostringstream csv;
    csv << "kind,instance,algorithm,heuristic,epsilon,bound,lambda,seed,outcome,solved,"
           "ccs_size,backups,expansions,trials,lp_calls,wall_ms,ccs\n";
    std::map<std::string, long long> solved_by_algorithm, solved_by_heuristic;
    for (const std::string& alg : cfg.algorithms) solved_by_algorithm[alg] = 0;
    for (const std::string& h : cfg.heuristics) solved_by_heuristic[h] = 0;
    for (const RunRecord& r : records) {
        const bool solved = r.outcome == "solved";
        if (solved) {
            ++solved_by_algorithm[r.algorithm];
            ++solved_by_heuristic[r.heuristic];
        }
        csv << "run," << detail::csv_escape(r.instance) << ',' << r.algorithm << ','
            << r.heuristic << ',' << nlohmann::ordered_json(r.epsilon).dump() << ','
            << detail::join_bound(r.bound) << ','
            << nlohmann::ordered_json(r.lambda).dump() << ',' << r.seed << ',' << r.outcome
            << ',' << (solved ? 1 : 0) << ',' << r.ccs.size() << ',' << r.stats.backups << ','
            << r.stats.expansions << ',' << r.stats.trials << ',' << r.stats.lp_calls << ','
            << r.stats.wall_ms << ','
            << detail::csv_escape(nlohmann::ordered_json(r.ccs).dump()) << '\n';
    }
    for (const std::string& alg : cfg.algorithms)
        csv << "summary-algorithm,," << alg << ",,,,,,," << solved_by_algorithm[alg]
            << ",,,,,,,\n";
    for (const std::string& h : cfg.heuristics)
        csv << "summary-heuristic,,," << h << ",,,,,," << solved_by_heuristic[h]
            << ",,,,,,,\n";
    return csv.str();
}

// ---------------------------------------------------------------------------
// Verification against the exhaustive oracle
// ---------------------------------------------------------------------------

struct VerifyReport {
    bool pass = false;
    std::vector<std::string> lines;
};

/**
 * @brief Exhaustively solves the model (capped VI oracle by default), then
 * checks every search algorithm under every heuristic against it at the
 * initial state, and audits every heuristic for admissibility. Tolerance
 * is 10 times epsilon throughout. Only for models small enough to
 * enumerate (default cap 10^4 states).
 */
inline VerifyReport run_verify(const FactoredModel& m, double epsilon, bool capped = true,
                               std::optional<CostVector> bound_opt = {},
                               double lambda = kDefaultLambda,
                               std::size_t state_cap = 10'000) {
    VerifyReport report;
    const double tolerance = 10.0 * epsilon;
    CostVector bound = bound_opt.value_or(CostVector(m.n_objectives(), 100.0));
    if (bound.size() == 1) bound.assign(m.n_objectives(), bound.front());
    CoverageOps ops{CoverageKind::kCcs, lambda};
    SolveLimits limits;
    limits.state_cap = state_cap;

    ValueFunction oracle;
    try {
        ViConfig cfg{ops, {}, limits, {}};
        oracle = capped ? run_movi_capped(m, epsilon, Bound(bound), cfg).values
                        : run_movi(m, epsilon, cfg).values;
    } catch (const SolveError& e) {
        report.lines.push_back(std::string("oracle: assumption violation suspected (") +
                               e.what() + ")");
        report.pass = false;
        return report;
    }
    const VectorSet& optimal = oracle.at(m.init);
    if (optimal.empty()) {
        report.lines.push_back(
            "oracle: assumption violation suspected (no proper policy from the initial state)");
        report.pass = false;
        return report;
    }
    report.lines.push_back("oracle: solved " + std::to_string(oracle.values.size()) +
                           " states, |CCS(s0)| = " + std::to_string(optimal.size()));

    bool all_ok = true;
    HeuristicConfig hcfg;
    hcfg.coverage = ops;
    hcfg.bound = bound;
    hcfg.epsilon = epsilon;
    hcfg.limits = limits;

    std::vector<Heuristic> heuristics;
    for (const std::string& name : heuristic_names()) {
        try {
            heuristics.push_back(make_heuristic(m, name, hcfg));
        } catch (const std::exception& e) {
            report.lines.push_back("heuristic " + name + ": construction failed (" + e.what() +
                                   ")");
            all_ok = false;
        }
    }

    for (const Heuristic& h : heuristics) {
        const AdmissibilityReport audit = audit_admissible(m, h, oracle, tolerance);
        if (audit.ok()) {
            report.lines.push_back("audit " + h.name + ": ok (" +
                                   std::to_string(audit.states_checked) + " states)");
        } else {
            report.lines.push_back("audit " + h.name + ": " +
                                   std::to_string(audit.violations.size()) + " violations");
            all_ok = false;
        }
    }

    SearchConfig scfg;
    scfg.coverage = ops;
    scfg.bound = bound;
    scfg.limits = limits;
    for (const std::string& alg : {"molao", "imolao", "molrtdp"}) {
        for (const Heuristic& h : heuristics) {
            try {
                SearchResult result;
                if (std::string(alg) == "molao")
                    result = molao_star(m, h.evaluate, epsilon, scfg);
                else if (std::string(alg) == "imolao")
                    result = imolao_star(m, h.evaluate, epsilon, scfg);
                else
                    result = molrtdp(m, h.evaluate, epsilon, 0, scfg);
                const double gap = hausdorff(result.values.at(m.init), optimal);
                const bool ok = gap <= tolerance;
                all_ok = all_ok && ok;
                std::ostringstream line;
                line << alg << " + " << h.name << ": gap " << gap << (ok ? " ok" : " FAIL");
                report.lines.push_back(line.str());
            } catch (const std::exception& e) {
                report.lines.push_back(std::string(alg) + " + " + h.name + ": error (" +
                                       e.what() + ")");
                all_ok = false;
            }
        }
    }
    report.pass = all_ok;
    return report;
}

// ---------------------------------------------------------------------------
// Heuristic accuracy at the initial state
// ---------------------------------------------------------------------------

struct HevalRow {
    std::string heuristic;
    bool defined = false;
    double error_pct = 0.0;
    std::int64_t construct_ms = 0;
    std::string note;
};

/// Relative error of each heuristic at the initial state against the exact
/// optimum, as a percentage, plus construction time.
inline std::vector<HevalRow> run_heval(const FactoredModel& m, double epsilon = 1e-3,
                                       std::optional<CostVector> bound_opt = {},
                                       double lambda = kDefaultLambda,
                                       std::size_t state_cap = 10'000'000) {
    CostVector bound = bound_opt.value_or(CostVector(m.n_objectives(), 100.0));
    if (bound.size() == 1) bound.assign(m.n_objectives(), bound.front());
    CoverageOps ops{CoverageKind::kCcs, lambda};
    SolveLimits limits;
    limits.state_cap = state_cap;
    ViConfig cfg{ops, {}, limits, {}};
    const ValueFunction oracle = run_motvi(m, epsilon, Bound(bound), cfg).values;
    const VectorSet& optimal = oracle.at(m.init);

    HeuristicConfig hcfg;
    hcfg.coverage = ops;
    hcfg.bound = bound;
    hcfg.epsilon = epsilon;
    hcfg.limits = limits;

    std::vector<HevalRow> rows;
    for (const std::string& name : heuristic_names()) {
        HevalRow row;
        row.heuristic = name;
        const auto started = std::chrono::steady_clock::now();
        try {
            const Heuristic h = make_heuristic(m, name, hcfg);
            const VectorSet value = h.evaluate(m.init);
            row.construct_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                   std::chrono::steady_clock::now() - started)
                                   .count();
            row.error_pct = 100.0 * directed_relative_error(value, optimal);
            row.defined = true;
        } catch (const std::exception& e) {
            row.construct_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                   std::chrono::steady_clock::now() - started)
                                   .count();
            row.note = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace mossp
