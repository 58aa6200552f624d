/**
 * @file vi.hpp
 * @brief Multi-objective Bellman backups and the value-iteration family.
 *
 * Provides the plain and capped set-valued Bellman backup, synchronous
 * value iteration (plain and under a proper-policy bound), topological
 * value iteration over the SCC condensation, greedy-action extraction and
 * scalarised policy extraction.
 *
 * Residuals are Hausdorff distances between a state's value set before
 * and after one backup. Goal states are pinned to {0} with residual 0.
 */

#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mossp/model.hpp"
#include "mossp/state_space.hpp"
#include "mossp/vecset.hpp"

namespace mossp {

class SolveError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class SolveTimeout : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Euclidean tolerance under which a Q-vector counts as contributing to a
/// state's value; exact float equality would empty greedy-action sets after
/// LP pruning noise.
inline constexpr double kMatchTolerance = 1e-6;

/// An upper bound on the value of every proper policy, strictly positive in
/// every entry (the weak improper-policy assumption's separating vector).
struct Bound {
    CostVector b;

    explicit Bound(CostVector vec) : b(std::move(vec)) {
        for (double x : b)
            if (!(x > 0.0)) throw SolveError("bound entries must be strictly positive");
    }
};

/// Value function over explicitly discovered states.
struct ValueFunction {
    std::unordered_map<State, VectorSet, StateHash> values;
    std::unordered_map<State, double, StateHash> residuals;
    std::unordered_set<State, StateHash> solved;

    const VectorSet& at(const State& s) const {
        const auto it = values.find(s);
        if (it == values.end()) throw SolveError("value function has no entry for state");
        return it->second;
    }

    /// Residual of an unvisited state is +infinity until its first backup.
    double residual(const State& s) const {
        const auto it = residuals.find(s);
        return it == residuals.end() ? std::numeric_limits<double>::infinity() : it->second;
    }
};

/// Maps states to the set of greedy actions supporting their value.
using GreedyPolicy = std::unordered_map<State, std::vector<int>, StateHash>;

/// Per-solve counters; all monotone while the solve runs.
struct SearchStats {
    long long backups = 0;
    long long expansions = 0;
    long long trials = 0;
    long long lp_calls = 0;
    std::int64_t wall_ms = 0;
};

/// Initial-value provider; when empty, states start at {0}.
using ValueInit = std::function<VectorSet(const State&)>;

struct SolveLimits {
    long long sweep_cap = 100000;       ///< synchronous sweeps (VI family)
    long long iteration_cap = 100000;   ///< outer iterations (search family)
    std::size_t state_cap = 10'000'000;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

inline void check_deadline(const SolveLimits& limits) {
    if (limits.deadline && std::chrono::steady_clock::now() > *limits.deadline)
        throw SolveTimeout("solve exceeded its deadline");
}

struct ViConfig {
    CoverageOps coverage{};
    ValueInit init{};
    SolveLimits limits{};
    /// Called after each completed sweep with the dense values (test hook).
    std::function<void(int sweep, const StateSpace&, const std::vector<VectorSet>&)> observer{};
};

namespace detail {

inline VectorSet zero_set(std::size_t n) { return {CostVector(n, 0.0)}; }

/// Q(s,a) = {C(a)} (+) fold of scaled successor sets; capped when b is given.
template <typename Lookup>
VectorSet q_value(const FactoredModel& m, const TransitionEntry& entry, Lookup&& value_of,
                  const CoverageOps& ops, const CostVector* b) {
    const ProbabilisticAction& action = m.actions[entry.action];
    VectorSet acc;
    bool first = true;
    for (const auto& [succ, prob] : entry.successors) {
        VectorSet scaled = scale(prob, value_of(succ));
        if (first) {
            acc = std::move(scaled);
            first = false;
        } else {
            acc = b ? capped_sum(acc, scaled, *b, ops) : set_sum(acc, scaled, ops);
        }
    }
    const VectorSet cost{action.cost};
    if (first) return cost;  // no successors recorded: cost alone
    return b ? capped_sum(cost, acc, *b, ops) : set_sum(cost, acc, ops);
}

template <typename Lookup>
VectorSet backup_state(const FactoredModel& m, const std::vector<TransitionEntry>& transitions,
                       Lookup&& value_of, const CoverageOps& ops, const CostVector* b) {
    if (transitions.empty())
        throw SolveError("dead end encountered: no applicable action at a nongoal state");
    VectorSet pool;
    for (const TransitionEntry& entry : transitions) {
        VectorSet q = q_value(m, entry, value_of, ops, b);
        pool.insert(pool.end(), q.begin(), q.end());
    }
    return b ? cs_b_prune(pool, *b, ops) : ops.prune(pool);
}

struct DenseRun {
    StateSpace space;
    std::vector<VectorSet> values;
    std::vector<double> residuals;
    SearchStats stats;
};

inline void init_dense(DenseRun& run, const FactoredModel& m, const ValueInit& init) {
    const std::size_t n = m.n_objectives();
    run.values.resize(run.space.size());
    run.residuals.assign(run.space.size(), std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < run.space.size(); ++i) {
        if (run.space.goal[i]) {
            run.values[i] = zero_set(n);
            run.residuals[i] = 0.0;
        } else {
            run.values[i] = init ? init(run.space.states[i]) : zero_set(n);
            if (run.values[i].empty())
                throw SolveError("initial value sets must be non-empty");
        }
    }
    run.stats.expansions = static_cast<long long>(run.space.size());
}

inline ValueFunction export_values(const DenseRun& run, bool mark_solved) {
    ValueFunction vf;
    vf.values.reserve(run.space.size());
    for (std::size_t i = 0; i < run.space.size(); ++i) {
        vf.values.emplace(run.space.states[i], run.values[i]);
        vf.residuals.emplace(run.space.states[i], run.residuals[i]);
        if (mark_solved) vf.solved.insert(run.space.states[i]);
    }
    return vf;
}

inline void strip_bound(std::vector<VectorSet>& values, const CostVector& b) {
    for (VectorSet& set : values) {
        VectorSet kept;
        kept.reserve(set.size());
        for (CostVector& v : set)
            if (!vectors_equal(v, b)) kept.push_back(std::move(v));
        set = std::move(kept);
    }
}

/// Synchronous sweeps over a subset of states until the max residual drops
/// below epsilon; values of states outside the subset stay frozen.
inline void sweep_to_consistency(DenseRun& run, const FactoredModel& m,
                                 const std::vector<int>& subset, double epsilon,
                                 const CoverageOps& ops, const CostVector* b,
                                 const SolveLimits& limits, const ViConfig* observer_cfg) {
    const auto lookup = [&run](int idx) -> const VectorSet& { return run.values[idx]; };
    for (long long sweep = 0; sweep < limits.sweep_cap; ++sweep) {
        check_deadline(limits);
        double max_residual = 0.0;
        std::vector<VectorSet> fresh(subset.size());
        for (std::size_t k = 0; k < subset.size(); ++k) {
            const int s = subset[k];
            if (run.space.goal[s]) {
                fresh[k] = run.values[s];
                run.residuals[s] = 0.0;
                continue;
            }
            fresh[k] = backup_state(m, run.space.transitions[s], lookup, ops, b);
            ++run.stats.backups;
            run.residuals[s] = hausdorff(run.values[s], fresh[k]);
            max_residual = std::max(max_residual, run.residuals[s]);
        }
        for (std::size_t k = 0; k < subset.size(); ++k) run.values[subset[k]] = std::move(fresh[k]);
        if (observer_cfg && observer_cfg->observer)
            observer_cfg->observer(static_cast<int>(sweep), run.space, run.values);
        if (max_residual < epsilon) return;
    }
    throw SolveError("no convergence: sweep cap (" + std::to_string(limits.sweep_cap) +
                     ") exceeded");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Public backups
// ---------------------------------------------------------------------------

/// One multi-objective Bellman backup of @p s under the values in @p vf.
/// Every successor of @p s must already have a value.
inline VectorSet bellman_backup(const FactoredModel& m, const State& s, const ValueFunction& vf,
                                const CoverageOps& ops = {}) {
    if (is_goal(m, s)) return detail::zero_set(m.n_objectives());
    std::vector<TransitionEntry> transitions;
    std::vector<VectorSet> local;
    for (int a : applicable_actions(m, s)) {
        TransitionEntry entry;
        entry.action = a;
        for (auto& [succ, prob] : successors(m, s, a)) {
            local.push_back(vf.at(succ));
            entry.successors.emplace_back(static_cast<int>(local.size()) - 1, prob);
        }
        transitions.push_back(std::move(entry));
    }
    const auto lookup = [&local](int idx) -> const VectorSet& { return local[idx]; };
    return detail::backup_state(m, transitions, lookup, ops, nullptr);
}

/// Capped backup: sums that would exceed @p bound are pinned to it, and the
/// bound itself survives pruning. The result always dominates {bound}.
inline VectorSet bellman_backup_capped(const FactoredModel& m, const State& s,
                                       const ValueFunction& vf, const Bound& bound,
                                       const CoverageOps& ops = {}) {
    if (is_goal(m, s)) return detail::zero_set(m.n_objectives());
    std::vector<TransitionEntry> transitions;
    std::vector<VectorSet> local;
    for (int a : applicable_actions(m, s)) {
        TransitionEntry entry;
        entry.action = a;
        for (auto& [succ, prob] : successors(m, s, a)) {
            local.push_back(vf.at(succ));
            entry.successors.emplace_back(static_cast<int>(local.size()) - 1, prob);
        }
        transitions.push_back(std::move(entry));
    }
    const auto lookup = [&local](int idx) -> const VectorSet& { return local[idx]; };
    return detail::backup_state(m, transitions, lookup, ops, &bound.b);
}

// ---------------------------------------------------------------------------
// Value iteration
// ---------------------------------------------------------------------------

struct SolveOutput {
    ValueFunction values;
    SearchStats stats;
};

/**
 * @brief Synchronous multi-objective value iteration over all reachable
 * states, sweeping in BFS discovery order until the maximum Hausdorff
 * residual falls below @p epsilon.
 *
 * Requires the reachability and strong improper-policy assumptions; on
 * models violating them the sweep cap is hit and "no convergence" is
 * raised (never silent truncation).
 */
inline SolveOutput run_movi(const FactoredModel& m, double epsilon, const ViConfig& cfg = {}) {
    const auto started = std::chrono::steady_clock::now();
    const long long lp_before = lp::solve_count;
    detail::DenseRun run;
    run.space = build_state_space(m, cfg.limits.state_cap);
    detail::init_dense(run, m, cfg.init);
    std::vector<int> all(run.space.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    detail::sweep_to_consistency(run, m, all, epsilon, cfg.coverage, nullptr, cfg.limits, &cfg);
    run.stats.lp_calls = lp::solve_count - lp_before;
    run.stats.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - started)
                            .count();
    SolveOutput out{detail::export_values(run, true), run.stats};
    return out;
}

/**
 * @brief Value iteration under the weak improper-policy assumption: capped
 * backups keep improper-policy values pinned at @p bound, which is then
 * stripped from every state's set after convergence.
 */
inline SolveOutput run_movi_capped(const FactoredModel& m, double epsilon, const Bound& bound,
                                   const ViConfig& cfg = {}) {
    const auto started = std::chrono::steady_clock::now();
    const long long lp_before = lp::solve_count;
    detail::DenseRun run;
    run.space = build_state_space(m, cfg.limits.state_cap);
    detail::init_dense(run, m, cfg.init);
    std::vector<int> all(run.space.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    detail::sweep_to_consistency(run, m, all, epsilon, cfg.coverage, &bound.b, cfg.limits, &cfg);
    detail::strip_bound(run.values, bound.b);
    run.stats.lp_calls = lp::solve_count - lp_before;
    run.stats.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - started)
                            .count();
    return SolveOutput{detail::export_values(run, true), run.stats};
}

/**
 * @brief Topological value iteration: solves the SCCs of the reachable
 * transition graph in reverse topological order, each to epsilon
 * consistency with capped backups. Singleton components without
 * self-loops need exactly one backup.
 */
inline SolveOutput run_motvi(const FactoredModel& m, double epsilon, const Bound& bound,
                             const ViConfig& cfg = {}) {
    const auto started = std::chrono::steady_clock::now();
    const long long lp_before = lp::solve_count;
    detail::DenseRun run;
    run.space = build_state_space(m, cfg.limits.state_cap);
    detail::init_dense(run, m, cfg.init);
    const auto components = strongly_connected_components(run.space);
    const auto lookup = [&run](int idx) -> const VectorSet& { return run.values[idx]; };
    for (const std::vector<int>& component : components) {
        check_deadline(cfg.limits);
        bool trivial = component.size() == 1;
        if (trivial) {
            const int s = component.front();
            for (const TransitionEntry& t : run.space.transitions[s])
                for (const auto& [succ, prob] : t.successors)
                    if (succ == s) trivial = false;
        }
        if (trivial) {
            const int s = component.front();
            if (!run.space.goal[s]) {
                VectorSet fresh =
                    detail::backup_state(m, run.space.transitions[s], lookup, cfg.coverage,
                                         &bound.b);
                ++run.stats.backups;
                run.residuals[s] = hausdorff(run.values[s], fresh);
                run.values[s] = std::move(fresh);
            }
            continue;
        }
        detail::sweep_to_consistency(run, m, component, epsilon, cfg.coverage, &bound.b,
                                     cfg.limits, nullptr);
    }
    detail::strip_bound(run.values, bound.b);
    run.stats.lp_calls = lp::solve_count - lp_before;
    run.stats.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - started)
                            .count();
    return SolveOutput{detail::export_values(run, true), run.stats};
}

inline ValueFunction movi(const FactoredModel& m, const ValueInit& init, double epsilon,
                          ViConfig cfg = {}) {
    cfg.init = init;
    return run_movi(m, epsilon, cfg).values;
}

inline ValueFunction movi_capped(const FactoredModel& m, const ValueInit& init, double epsilon,
                                 const Bound& bound, ViConfig cfg = {}) {
    cfg.init = init;
    return run_movi_capped(m, epsilon, bound, cfg).values;
}

inline ValueFunction motvi(const FactoredModel& m, const ValueInit& init, double epsilon,
                           const Bound& bound, ViConfig cfg = {}) {
    cfg.init = init;
    return run_motvi(m, epsilon, bound, cfg).values;
}

// ---------------------------------------------------------------------------
// Greedy actions and policies
// ---------------------------------------------------------------------------

/**
 * @brief Actions whose Q set contributes to the state's current value:
 * some Q vector lies within kMatchTolerance of a value vector.
 *
 * Never empty when the state has applicable actions: if pruning noise
 * leaves no exact contributor, the action with the nearest Q vector is
 * returned.
 */
inline std::vector<int> get_actions(const FactoredModel& m, const State& s,
                                    const ValueFunction& vf, const CoverageOps& ops = {},
                                    const CostVector* bound = nullptr) {
    const VectorSet& value = vf.at(s);
    std::vector<int> out;
    int closest_action = -1;
    double closest = std::numeric_limits<double>::infinity();
    for (int a : applicable_actions(m, s)) {
        TransitionEntry entry;
        entry.action = a;
        std::vector<VectorSet> local;
        for (auto& [succ, prob] : successors(m, s, a)) {
            local.push_back(vf.at(succ));
            entry.successors.emplace_back(static_cast<int>(local.size()) - 1, prob);
        }
        const auto lookup = [&local](int idx) -> const VectorSet& { return local[idx]; };
        const VectorSet q = detail::q_value(m, entry, lookup, ops, bound);
        double best = std::numeric_limits<double>::infinity();
        for (const CostVector& qv : q)
            for (const CostVector& v : value) best = std::min(best, euclidean(qv, v));
        if (best <= kMatchTolerance) out.push_back(a);
        if (best < closest) {
            closest = best;
            closest_action = a;
        }
    }
    if (out.empty() && closest_action >= 0) out.push_back(closest_action);
    return out;
}

/**
 * @brief Deterministic policy for a scalarising weight: at each state pick
 * the action minimising the best scalarised Q vector, ties broken by
 * declaration order. The returned map is closed with respect to the
 * initial state.
 */
inline std::unordered_map<State, int, StateHash> extract_policy(const FactoredModel& m,
                                                                const ValueFunction& vf,
                                                                const CostVector& weights,
                                                                const CoverageOps& ops = {},
                                                                const CostVector* bound = nullptr) {
    if (weights.size() != m.n_objectives())
        throw SolveError("extract_policy: weight dimension mismatch");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw SolveError("extract_policy: negative weight");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw SolveError("extract_policy: weights must sum to 1");

    std::unordered_map<State, int, StateHash> policy;
    std::vector<State> queue{m.init};
    std::unordered_set<State, StateHash> seen{m.init};
    while (!queue.empty()) {
        const State s = queue.back();
        queue.pop_back();
        if (is_goal(m, s)) continue;
        int best_action = -1;
        double best_value = std::numeric_limits<double>::infinity();
        for (int a : applicable_actions(m, s)) {
            TransitionEntry entry;
            entry.action = a;
            std::vector<VectorSet> local;
            for (auto& [succ, prob] : successors(m, s, a)) {
                local.push_back(vf.at(succ));
                entry.successors.emplace_back(static_cast<int>(local.size()) - 1, prob);
            }
            const auto lookup = [&local](int idx) -> const VectorSet& { return local[idx]; };
            const VectorSet q = detail::q_value(m, entry, lookup, ops, bound);
            double scalarised = std::numeric_limits<double>::infinity();
            for (const CostVector& qv : q) {
                double acc = 0.0;
                for (std::size_t i = 0; i < weights.size(); ++i) acc += weights[i] * qv[i];
                scalarised = std::min(scalarised, acc);
            }
            if (scalarised < best_value - 1e-12) {
                best_value = scalarised;
                best_action = a;
            }
        }
        if (best_action < 0) throw SolveError("extract_policy: dead end encountered");
        policy.emplace(s, best_action);
        for (auto& [succ, prob] : successors(m, s, best_action)) {
            if (seen.insert(succ).second) queue.push_back(succ);
        }
    }
    return policy;
}

}  // namespace mossp
