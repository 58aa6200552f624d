/**
 * @file heuristics.hpp
 * @brief Admissible heuristics for multi-objective stochastic shortest paths.
 *
 * The spectrum differs in which problem features survive the relaxation:
 *
 *  - blind:        {0} everywhere.
 *  - ideal-hmax:   classical hmax per objective on the determinised model;
 *                  a single ideal-point vector.
 *  - mo-comax:     multi-objective hmax; fact costs are vector sets combined
 *                  with comax, so trade-offs between objectives survive.
 *  - ideal-pdb2/3: projections solved per objective as scalar SSPs
 *                  (stochasticity survives, trade-offs do not).
 *  - mo-pdb2/3:    projections of the determinised model solved as
 *                  multi-objective shortest-path problems (trade-offs
 *                  survive, stochasticity does not).
 *  - mossp-pdb2/3: projections solved as full MOSSPs with topological VI;
 *                  both features survive.
 *
 * Pattern databases are computed eagerly at construction; evaluation is a
 * table lookup combined with comax across patterns.
 */

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <queue>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mossp/model.hpp"
#include "mossp/state_space.hpp"
#include "mossp/vecset.hpp"
#include "mossp/vi.hpp"

namespace mossp {

struct Heuristic {
    std::string name;
    std::function<VectorSet(const State&)> evaluate;
};

/// Exact-solution table of one projection.
struct PdbTable {
    Pattern pattern;
    std::unordered_map<State, VectorSet, StateHash> values;
};

struct HeuristicConfig {
    CoverageOps coverage{};
    CostVector bound;          ///< cap for projection solves; empty = 100-vector
    double epsilon = 1e-3;     ///< consistency threshold for projection solves
    SolveLimits limits{};
};

namespace detail {

inline CostVector heuristic_bound(const FactoredModel& m, const HeuristicConfig& cfg) {
    if (cfg.bound.empty()) return CostVector(m.n_objectives(), 100.0);
    if (cfg.bound.size() != m.n_objectives())
        throw SolveError("heuristic bound dimension mismatch");
    return cfg.bound;
}

/// Numbering of (variable = value) atoms.
struct FactIndex {
    std::vector<int> offsets;
    int total = 0;

    explicit FactIndex(const FactoredModel& m) {
        offsets.reserve(m.variables.size());
        for (const Variable& v : m.variables) {
            offsets.push_back(total);
            total += static_cast<int>(v.domain.size());
        }
    }
    int id(int var, int value) const { return offsets[var] + value; }
};

/// Scalar hmax for one objective over a determinised model, evaluated from
/// state @p s via generalised Dijkstra over facts.
inline double scalar_hmax(const FactoredModel& det, const FactIndex& facts, const State& s,
                          std::size_t objective, double cap) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> cost(facts.total, kInf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    for (std::size_t var = 0; var < s.values.size(); ++var) {
        const int f = facts.id(static_cast<int>(var), s.values[var]);
        cost[f] = 0.0;
        open.emplace(0.0, f);
    }
    // Per-action countdown of unsatisfied precondition facts.
    std::vector<int> waiting(det.actions.size());
    std::vector<std::vector<int>> consumers(facts.total);
    for (std::size_t a = 0; a < det.actions.size(); ++a) {
        waiting[a] = static_cast<int>(det.actions[a].precondition.size());
        for (const auto& [var, value] : det.actions[a].precondition)
            consumers[facts.id(var, value)].push_back(static_cast<int>(a));
    }
    std::vector<char> finished(facts.total, 0);
    const auto trigger = [&](std::size_t a, double pre_cost) {
        const double through = pre_cost + det.actions[a].cost[objective];
        for (const Outcome& o : det.actions[a].outcomes) {
            for (const auto& [var, value] : o.effect) {
                const int f = facts.id(var, value);
                if (through < cost[f]) {
                    cost[f] = through;
                    open.emplace(through, f);
                }
            }
        }
    };
    for (std::size_t a = 0; a < det.actions.size(); ++a)
        if (waiting[a] == 0) trigger(a, 0.0);
    while (!open.empty()) {
        const auto [c, f] = open.top();
        open.pop();
        if (finished[f]) continue;
        finished[f] = 1;
        for (int a : consumers[f])
            if (--waiting[a] == 0) trigger(a, c);  // hmax: max over pre facts = last one settled
    }
    double out = 0.0;
    for (const auto& [var, value] : det.goal) {
        const double c = cost[facts.id(var, value)];
        out = std::max(out, c == kInf ? cap : c);
    }
    return out;
}

/// Scalar capped topological value iteration for one objective.
inline std::vector<double> scalar_tvi(const FactoredModel& m, const StateSpace& space,
                                      std::size_t objective, double cap, double epsilon,
                                      long long sweep_cap) {
    std::vector<double> value(space.size(), 0.0);
    const auto backup = [&](int s) {
        double best = std::numeric_limits<double>::infinity();
        for (const TransitionEntry& t : space.transitions[s]) {
            double q = m.actions[t.action].cost[objective];
            for (const auto& [succ, prob] : t.successors) q += prob * value[succ];
            best = std::min(best, q);
        }
        return std::min(best, cap);  // action-less or diverging states pin at the cap
    };
    for (const std::vector<int>& component : strongly_connected_components(space)) {
        bool cyclic = component.size() > 1;
        if (!cyclic) {
            const int s = component.front();
            for (const TransitionEntry& t : space.transitions[s])
                for (const auto& [succ, prob] : t.successors)
                    if (succ == s) cyclic = true;
        }
        if (!cyclic) {
            const int s = component.front();
            if (!space.goal[s]) value[s] = backup(s);
            continue;
        }
        for (long long sweep = 0;; ++sweep) {
            if (sweep >= sweep_cap) throw SolveError("projection solve diverged (scalar TVI)");
            double max_delta = 0.0;
            for (int s : component) {
                if (space.goal[s]) continue;
                const double fresh = backup(s);
                max_delta = std::max(max_delta, std::abs(fresh - value[s]));
                value[s] = fresh;
            }
            if (max_delta < epsilon) break;
        }
    }
    return value;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Heuristic constructors
// ---------------------------------------------------------------------------

/// The weakest admissible heuristic: {0} for every state.
inline Heuristic blind(const FactoredModel& m) {
    const std::size_t n = m.n_objectives();
    return Heuristic{"blind", [n](const State&) { return VectorSet{CostVector(n, 0.0)}; }};
}

/**
 * @brief Ideal-point hmax: classical hmax applied to each objective on the
 * determinised model. Returns a single vector of per-objective estimates;
 * a goal fact unreachable under the relaxation contributes the cap.
 */
inline Heuristic ideal_hmax(const FactoredModel& m, const HeuristicConfig& cfg = {}) {
    auto det = std::make_shared<FactoredModel>(determinise(m));
    auto facts = std::make_shared<detail::FactIndex>(*det);
    const CostVector cap = detail::heuristic_bound(m, cfg);
    const std::size_t n = m.n_objectives();
    return Heuristic{"ideal-hmax", [det, facts, cap, n](const State& s) {
                         CostVector h(n);
                         for (std::size_t i = 0; i < n; ++i)
                             h[i] = detail::scalar_hmax(*det, *facts, s, i, cap[i]);
                         return VectorSet{std::move(h)};
                     }};
}

/**
 * @brief Multi-objective hmax: fact costs are vector sets; an achiever
 * update combines precondition facts with comax and adds the action cost,
 * and the state evaluates to the comax over goal facts.
 */
inline Heuristic mo_comax_hmax(const FactoredModel& m, const HeuristicConfig& cfg = {}) {
    auto det = std::make_shared<FactoredModel>(determinise(m));
    auto facts = std::make_shared<detail::FactIndex>(*det);
    const CostVector cap = detail::heuristic_bound(m, cfg);
    const CoverageOps ops = cfg.coverage;

    const auto sets_equal = [](const VectorSet& a, const VectorSet& b) {
        if (a.size() != b.size()) return false;
        for (const CostVector& v : a)
            if (!contains(b, v)) return false;
        return true;
    };

    return Heuristic{
        "mo-comax",
        [det, facts, cap, ops, sets_equal](const State& s) {
            std::vector<VectorSet> cost(facts->total);  // empty set = not yet reachable
            for (std::size_t var = 0; var < s.values.size(); ++var)
                cost[facts->id(static_cast<int>(var), s.values[var])] =
                    VectorSet{CostVector(cap.size(), 0.0)};

            const long long cap_sweeps = 4 * (facts->total + 1) + 64;
            for (long long sweep = 0;; ++sweep) {
                if (sweep >= cap_sweeps)
                    throw SolveError("mo-comax fixpoint failed to converge");
                bool changed = false;
                for (const ProbabilisticAction& a : det->actions) {
                    VectorSet pre{CostVector(cap.size(), 0.0)};
                    bool ready = true;
                    for (const auto& [var, value] : a.precondition) {
                        const VectorSet& f = cost[facts->id(var, value)];
                        if (f.empty()) {
                            ready = false;
                            break;
                        }
                        pre = comax(pre, f, ops);
                    }
                    if (!ready) continue;
                    const VectorSet through = capped_sum({a.cost}, pre, cap, ops);
                    for (const Outcome& o : a.outcomes) {
                        for (const auto& [var, value] : o.effect) {
                            VectorSet& slot = cost[facts->id(var, value)];
                            VectorSet merged = slot;
                            merged.insert(merged.end(), through.begin(), through.end());
                            merged = cs_b_prune(merged, cap, ops);
                            if (!sets_equal(slot, merged)) {
                                slot = std::move(merged);
                                changed = true;
                            }
                        }
                    }
                }
                if (!changed) break;
            }

            VectorSet out{CostVector(cap.size(), 0.0)};
            for (const auto& [var, value] : det->goal) {
                const VectorSet& f = cost[facts->id(var, value)];
                out = comax(out, f.empty() ? VectorSet{cap} : f, ops);
            }
            return out;
        }};
}

/**
 * @brief All variable subsets of cardinality <= @p size containing at least
 * one goal variable, enumerated by ascending cardinality then
 * lexicographic order, capped at 64 patterns. The enumeration order makes
 * the size-2 collection a subset of the size-3 collection.
 */
inline std::vector<Pattern> generate_patterns(const FactoredModel& m, int size) {
    std::vector<char> is_goal_var(m.variables.size(), 0);
    for (const auto& [var, value] : m.goal) is_goal_var[var] = 1;
    std::vector<Pattern> out;
    const int v = static_cast<int>(m.variables.size());
    constexpr std::size_t kPatternCap = 64;

    std::vector<int> current;
    const std::function<void(int, int)> enumerate = [&](int start, int remaining) {
        if (out.size() >= kPatternCap) return;
        if (remaining == 0) {
            for (int var : current) {
                if (is_goal_var[var]) {
                    out.push_back(current);
                    return;
                }
            }
            return;
        }
        for (int var = start; var < v; ++var) {
            current.push_back(var);
            enumerate(var + 1, remaining - 1);
            current.pop_back();
            if (out.size() >= kPatternCap) return;
        }
    };
    for (int card = 1; card <= size && out.size() < kPatternCap; ++card) enumerate(0, card);
    return out;
}

/**
 * @brief Ideal-point SSP pattern databases: each projection is solved as n
 * independent scalar SSPs with capped topological VI; evaluation takes
 * the per-objective maximum across patterns and returns the single
 * ideal-point vector.
 */
inline Heuristic ideal_pdb(const FactoredModel& m, int size, const HeuristicConfig& cfg = {}) {
    const CostVector cap = detail::heuristic_bound(m, cfg);
    const std::size_t n = m.n_objectives();
    auto tables = std::make_shared<std::vector<PdbTable>>();
    for (const Pattern& pattern : generate_patterns(m, size)) {
        const FactoredModel abstract = project(m, pattern);
        const StateSpace space = build_state_space(abstract, cfg.limits.state_cap);
        std::vector<std::vector<double>> per_objective(n);
        for (std::size_t i = 0; i < n; ++i)
            per_objective[i] =
                detail::scalar_tvi(abstract, space, i, cap[i], cfg.epsilon, cfg.limits.sweep_cap);
        PdbTable table;
        table.pattern = pattern;
        for (std::size_t s = 0; s < space.size(); ++s) {
            CostVector h(n);
            for (std::size_t i = 0; i < n; ++i) h[i] = per_objective[i][s];
            table.values.emplace(space.states[s], VectorSet{std::move(h)});
        }
        tables->push_back(std::move(table));
    }
    return Heuristic{"ideal-pdb" + std::to_string(size), [tables, n](const State& s) {
                         CostVector h(n, 0.0);
                         for (const PdbTable& table : *tables) {
                             const auto it = table.values.find(abstract_state(s, table.pattern));
                             if (it == table.values.end()) continue;
                             const CostVector& entry = it->second.front();
                             for (std::size_t i = 0; i < n; ++i) h[i] = std::max(h[i], entry[i]);
                         }
                         return VectorSet{std::move(h)};
                     }};
}

namespace detail {

inline Heuristic pdb_family(const FactoredModel& solve_model, const FactoredModel& pattern_source,
                            std::string name, int size, const HeuristicConfig& cfg) {
    const CostVector cap = heuristic_bound(pattern_source, cfg);
    const CoverageOps ops = cfg.coverage;
    auto tables = std::make_shared<std::vector<PdbTable>>();
    for (const Pattern& pattern : generate_patterns(pattern_source, size)) {
        const FactoredModel abstract = project(solve_model, pattern);
        ViConfig vi_cfg;
        vi_cfg.coverage = ops;
        vi_cfg.limits = cfg.limits;
        const ValueFunction solved =
            motvi(abstract, {}, cfg.epsilon, Bound(cap), vi_cfg);
        PdbTable table;
        table.pattern = pattern;
        for (const auto& [state, value] : solved.values)
            table.values.emplace(state, value.empty() ? VectorSet{cap} : value);
        tables->push_back(std::move(table));
    }
    const std::size_t n = pattern_source.n_objectives();
    return Heuristic{std::move(name), [tables, ops, n](const State& s) {
                         VectorSet out{CostVector(n, 0.0)};
                         for (const PdbTable& table : *tables) {
                             const auto it = table.values.find(abstract_state(s, table.pattern));
                             if (it == table.values.end()) continue;
                             out = comax(out, it->second, ops);
                         }
                         return out;
                     }};
}

}  // namespace detail

/**
 * @brief Multi-objective deterministic PDBs: projections of the determinised
 * model solved as MO shortest-path problems, combined with comax.
 */
inline Heuristic mo_pdb(const FactoredModel& m, int size, const HeuristicConfig& cfg = {}) {
    return detail::pdb_family(determinise(m), m, "mo-pdb" + std::to_string(size), size, cfg);
}

/**
 * @brief MOSSP PDBs: projections keep both the stochastic and the
 * multi-objective structure and are solved with capped topological VI.
 */
inline Heuristic mossp_pdb(const FactoredModel& m, int size, const HeuristicConfig& cfg = {}) {
    return detail::pdb_family(m, m, "mossp-pdb" + std::to_string(size), size, cfg);
}

/// Builds a heuristic from its CLI selection string.
inline Heuristic make_heuristic(const FactoredModel& m, const std::string& name,
                                const HeuristicConfig& cfg = {}) {
    if (name == "blind") return blind(m);
    if (name == "ideal-hmax") return ideal_hmax(m, cfg);
    if (name == "mo-comax") return mo_comax_hmax(m, cfg);
    if (name == "ideal-pdb2") return ideal_pdb(m, 2, cfg);
    if (name == "ideal-pdb3") return ideal_pdb(m, 3, cfg);
    if (name == "mo-pdb2") return mo_pdb(m, 2, cfg);
    if (name == "mo-pdb3") return mo_pdb(m, 3, cfg);
    if (name == "mossp-pdb2") return mossp_pdb(m, 2, cfg);
    if (name == "mossp-pdb3") return mossp_pdb(m, 3, cfg);
    throw SolveError("unknown heuristic '" + name + "'");
}

/// The nine selection strings accepted by make_heuristic.
inline const std::vector<std::string>& heuristic_names() {
    static const std::vector<std::string> names = {
        "blind",   "ideal-hmax", "mo-comax",  "ideal-pdb2", "ideal-pdb3",
        "mo-pdb2", "mo-pdb3",    "mossp-pdb2", "mossp-pdb3"};
    return names;
}

// ---------------------------------------------------------------------------
// Admissibility audit
// ---------------------------------------------------------------------------

struct AdmissibilityReport {
    long long states_checked = 0;
    std::vector<std::pair<State, std::string>> violations;
    bool ok() const { return violations.empty(); }
};

/**
 * @brief Checks the heuristic against an exact value function: goal states
 * must evaluate to exactly {0}, and every optimal vector must be
 * dominated, within @p slack per entry, by a point of the heuristic
 * set's lower convex surface (mixtures count, as the convex coverage
 * set semantics prescribe).
 */
inline AdmissibilityReport audit_admissible(const FactoredModel& m, const Heuristic& heuristic,
                                            const ValueFunction& oracle, double slack) {
    AdmissibilityReport report;
    for (const auto& [state, optimal] : oracle.values) {
        ++report.states_checked;
        const VectorSet h = heuristic.evaluate(state);
        if (is_goal(m, state)) {
            if (h.size() != 1 || !vectors_equal(h.front(), CostVector(m.n_objectives(), 0.0)))
                report.violations.emplace_back(state, "goal state does not evaluate to {0}");
            continue;
        }
        if (h.empty()) {
            report.violations.emplace_back(state, "empty heuristic value");
            continue;
        }
        if (optimal.empty()) continue;  // no proper value to bound
        if (!convex_dominates(h, optimal, slack))
            report.violations.emplace_back(state, "heuristic value exceeds the optimal value");
    }
    return report;
}

}  // namespace mossp
