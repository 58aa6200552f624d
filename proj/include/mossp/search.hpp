/**
 * @file search.hpp
 * @brief Heuristic-search solvers over lazily expanded state graphs.
 *
 * MOLAO* repeatedly expands a frontier state of the current partial
 * solution and runs value iteration on its ancestors; iMOLAO* replaces the
 * inner VI with one backup per state in DFS postorder of the solution
 * graph; MOLRTDP runs labelled trials, sampling greedy actions and
 * unsolved successors, and marks states solved via the checkSolved sweep.
 *
 * All backups here are capped: termination on problems with improper
 * policies needs the proper-policy bound, which defaults to 100 in every
 * dimension. States are initialised from the heuristic on first touch.
 */

#pragma once

#include <chrono>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "mossp/model.hpp"
#include "mossp/state_space.hpp"
#include "mossp/vecset.hpp"
#include "mossp/vi.hpp"

namespace mossp {

struct SearchConfig {
    CoverageOps coverage{};
    /// Proper-policy value bound; when unset, 100 in every entry.
    std::optional<CostVector> bound;
    SolveLimits limits{};
    /// Trial-length cap for MOLRTDP: factor times the discovered-state count.
    long long trial_step_factor = 50;
    /// Debug hook: assert that values of solved states never change again.
    bool validate_solved_labels = false;
};

struct SearchResult {
    ValueFunction values;
    GreedyPolicy policy;
    SearchStats stats;
};

namespace detail {

inline CostVector resolve_bound(const FactoredModel& m, const SearchConfig& cfg) {
    if (cfg.bound) {
        if (cfg.bound->size() != m.n_objectives())
            throw SolveError("bound dimension does not match the number of objectives");
        return *cfg.bound;
    }
    return CostVector(m.n_objectives(), 100.0);
}

/// Lazily discovered search graph: states get heuristic values on first
/// touch and transition lists when first expanded.
class LazyGraph {
  public:
    LazyGraph(const FactoredModel& m, const ValueInit& heuristic, const SearchConfig& cfg,
              CostVector bound)
        : model_(m),
          heuristic_(heuristic),
          coverage_(cfg.coverage),
          bound_(std::move(bound)),
          limits_(cfg.limits) {}

    int discover(const State& s) {
        const auto it = index_.find(s);
        if (it != index_.end()) return it->second;
        if (states_.size() >= limits_.state_cap)
            throw SolveError("state cap exceeded (" + std::to_string(limits_.state_cap) + ")");
        const int id = static_cast<int>(states_.size());
        index_.emplace(s, id);
        states_.push_back(s);
        const bool g = is_goal(model_, s);
        goal_.push_back(g);
        expanded_.push_back(0);
        solved_.push_back(g ? 1 : 0);
        transitions_.emplace_back();
        residuals_.push_back(g ? 0.0 : std::numeric_limits<double>::infinity());
        if (g) {
            values_.push_back(zero_set(model_.n_objectives()));
        } else {
            VectorSet init = heuristic_ ? heuristic_(s) : zero_set(model_.n_objectives());
            if (init.empty()) throw SolveError("heuristic returned an empty value set");
            values_.push_back(std::move(init));
        }
        return id;
    }

    void expand(int id, SearchStats& stats) {
        if (expanded_[id] || goal_[id]) return;
        expanded_[id] = 1;
        ++stats.expansions;
        const State s = states_[id];
        for (int a : applicable_actions(model_, s)) {
            TransitionEntry entry;
            entry.action = a;
            for (auto& [succ, prob] : successors(model_, s, a))
                entry.successors.emplace_back(discover(succ), prob);
            transitions_[id].push_back(std::move(entry));
        }
    }

    VectorSet compute_backup(int id) const {
        const auto lookup = [this](int idx) -> const VectorSet& { return values_[idx]; };
        return backup_state(model_, transitions_[id], lookup, coverage_, &bound_);
    }

    /// Backs up @p id in place, returning the residual.
    double backup(int id, SearchStats& stats) {
        VectorSet fresh = compute_backup(id);
        ++stats.backups;
        residuals_[id] = hausdorff(values_[id], fresh);
        values_[id] = std::move(fresh);
        return residuals_[id];
    }

    /// Residual probe: distance to a fresh backup without committing it.
    double probe_residual(int id, SearchStats& stats) {
        VectorSet fresh = compute_backup(id);
        ++stats.backups;
        return hausdorff(values_[id], fresh);
    }

    std::vector<int> greedy_actions(int id) const {
        const VectorSet& value = values_[id];
        std::vector<int> out;
        int closest_action = -1;
        double closest = std::numeric_limits<double>::infinity();
        for (const TransitionEntry& entry : transitions_[id]) {
            const auto lookup = [this](int idx) -> const VectorSet& { return values_[idx]; };
            const VectorSet q = q_value(model_, entry, lookup, coverage_, &bound_);
            double best = std::numeric_limits<double>::infinity();
            for (const CostVector& qv : q)
                for (const CostVector& v : value) best = std::min(best, euclidean(qv, v));
            if (best <= kMatchTolerance) out.push_back(entry.action);
            if (best < closest) {
                closest = best;
                closest_action = entry.action;
            }
        }
        if (out.empty() && closest_action >= 0) out.push_back(closest_action);
        return out;
    }

    /// Successor ids under one greedy action list, in edge order.
    std::vector<int> policy_successors(int id, const std::vector<int>& actions) const {
        std::vector<int> out;
        for (int a : actions) {
            for (const TransitionEntry& entry : transitions_[id]) {
                if (entry.action != a) continue;
                for (const auto& [succ, prob] : entry.successors) out.push_back(succ);
            }
        }
        return out;
    }

    const FactoredModel& model() const { return model_; }
    const CostVector& bound() const { return bound_; }
    const CoverageOps& coverage() const { return coverage_; }
    const SolveLimits& limits() const { return limits_; }
    std::size_t size() const { return states_.size(); }
    const State& state(int id) const { return states_[id]; }
    bool is_goal_node(int id) const { return goal_[id]; }
    bool is_expanded(int id) const { return expanded_[id]; }
    bool is_solved(int id) const { return solved_[id]; }
    void mark_solved(int id) { solved_[id] = 1; }
    const VectorSet& value(int id) const { return values_[id]; }
    void set_value(int id, VectorSet v) { values_[id] = std::move(v); }
    double residual(int id) const { return residuals_[id]; }
    void set_residual(int id, double r) { residuals_[id] = r; }
    const std::vector<TransitionEntry>& transitions(int id) const { return transitions_[id]; }

    SearchResult finish(SearchStats stats,
                        const std::unordered_map<int, std::vector<int>>& greedy,
                        long long lp_before,
                        std::chrono::steady_clock::time_point started) const {
        SearchResult result;
        for (std::size_t id = 0; id < states_.size(); ++id) {
            result.values.values.emplace(states_[id], values_[id]);
            result.values.residuals.emplace(states_[id], residuals_[id]);
            if (solved_[id]) result.values.solved.insert(states_[id]);
        }
        for (const auto& [id, actions] : greedy) {
            if (!actions.empty()) result.policy.emplace(states_[id], actions);
        }
        result.stats = stats;
        result.stats.lp_calls = lp::solve_count - lp_before;
        result.stats.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                   std::chrono::steady_clock::now() - started)
                                   .count();
        return result;
    }

  private:
    const FactoredModel& model_;
    ValueInit heuristic_;
    CoverageOps coverage_;
    CostVector bound_;
    SolveLimits limits_;

    std::vector<State> states_;
    std::unordered_map<State, int, StateHash> index_;
    std::vector<char> goal_;
    std::vector<char> expanded_;
    std::vector<char> solved_;
    std::vector<std::vector<TransitionEntry>> transitions_;
    std::vector<VectorSet> values_;
    std::vector<double> residuals_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// MOLAO*
// ---------------------------------------------------------------------------

/**
 * @brief MOLAO*: expand one frontier state of the partial solution per
 * iteration, re-run value iteration on its ancestors in the partial
 * solution, and stop when no nongoal frontier state is reachable under
 * the greedy policy from the initial state.
 */
inline SearchResult molao_star(const FactoredModel& m, const ValueInit& heuristic,
                               double epsilon, const SearchConfig& cfg = {}) {
    const auto started = std::chrono::steady_clock::now();
    const long long lp_before = lp::solve_count;
    detail::LazyGraph graph(m, heuristic, cfg, detail::resolve_bound(m, cfg));
    SearchStats stats;

    const int root = graph.discover(m.init);
    std::unordered_set<int> frontier{root};
    std::unordered_set<int> interior;
    std::unordered_map<int, std::vector<int>> greedy;

    const auto solution_graph = [&]() {
        std::unordered_set<int> seen{root};
        std::vector<int> queue{root};
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const int s = queue[head];
            const auto it = greedy.find(s);
            if (it == greedy.end()) continue;
            for (int succ : graph.policy_successors(s, it->second))
                if (seen.insert(succ).second) queue.push_back(succ);
        }
        return seen;
    };

    const auto ancestors_in_policy = [&](int target) {
        // Reverse reachability of target over the greedy-policy edges.
        std::unordered_map<int, std::vector<int>> reverse;
        for (const auto& [s, actions] : greedy)
            for (int succ : graph.policy_successors(s, actions)) reverse[succ].push_back(s);
        std::unordered_set<int> seen{target};
        std::vector<int> queue{target};
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const auto it = reverse.find(queue[head]);
            if (it == reverse.end()) continue;
            for (int pred : it->second)
                if (seen.insert(pred).second) queue.push_back(pred);
        }
        std::vector<int> out(seen.begin(), seen.end());
        std::sort(out.begin(), out.end());
        return out;
    };

    long long iterations = 0;
    for (;;) {
        check_deadline(cfg.limits);
        const std::unordered_set<int> in_solution = solution_graph();
        // Earliest-discovered nongoal frontier state in the solution graph.
        int chosen = -1;
        for (int s : frontier) {
            if (graph.is_goal_node(s) || !in_solution.count(s)) continue;
            if (chosen < 0 || s < chosen) chosen = s;
        }
        if (chosen < 0) break;
        if (++iterations > cfg.limits.iteration_cap)
            throw SolveError("iteration cap exceeded in MOLAO*");

        frontier.erase(chosen);
        interior.insert(chosen);
        graph.expand(chosen, stats);
        for (const TransitionEntry& entry : graph.transitions(chosen))
            for (const auto& [succ, prob] : entry.successors)
                if (!interior.count(succ)) frontier.insert(succ);

        // Value iteration restricted to the ancestors of the expanded state;
        // values outside the set stay frozen.
        const std::vector<int> ancestors = ancestors_in_policy(chosen);
        for (long long sweep = 0;; ++sweep) {
            if (sweep >= cfg.limits.sweep_cap)
                throw SolveError("no convergence: sweep cap exceeded in MOLAO*");
            check_deadline(cfg.limits);
            double max_residual = 0.0;
            for (int s : ancestors) {
                if (graph.is_goal_node(s) || !graph.is_expanded(s)) continue;
                max_residual = std::max(max_residual, graph.backup(s, stats));
            }
            if (max_residual < epsilon) break;
        }
        for (int s : ancestors) {
            if (graph.is_goal_node(s) || !graph.is_expanded(s)) continue;
            greedy[s] = graph.greedy_actions(s);
        }
    }
    return graph.finish(stats, greedy, lp_before, started);
}

// ---------------------------------------------------------------------------
// iMOLAO*
// ---------------------------------------------------------------------------

/**
 * @brief iMOLAO*: per outer iteration, one capped backup per state of the
 * solution graph in DFS postorder. Terminates when a pass discovers no
 * new nongoal state and the maximum residual over the pass is below
 * epsilon.
 */
inline SearchResult imolao_star(const FactoredModel& m, const ValueInit& heuristic,
                                double epsilon, const SearchConfig& cfg = {}) {
    const auto started = std::chrono::steady_clock::now();
    const long long lp_before = lp::solve_count;
    detail::LazyGraph graph(m, heuristic, cfg, detail::resolve_bound(m, cfg));
    SearchStats stats;

    const int root = graph.discover(m.init);
    std::unordered_set<int> interior;
    std::unordered_map<int, std::vector<int>> greedy;

    const auto postorder = [&]() {
        std::vector<int> order;
        std::unordered_set<int> visited{root};
        struct Frame {
            int node;
            std::vector<int> children;
            std::size_t next = 0;
        };
        std::vector<Frame> stack;
        const auto children_of = [&](int s) {
            std::vector<int> children;
            const auto it = greedy.find(s);
            if (it != greedy.end()) {
                for (int succ : graph.policy_successors(s, it->second)) {
                    if (!visited.count(succ)) {
                        visited.insert(succ);
                        children.push_back(succ);
                    }
                }
            }
            return children;
        };
        stack.push_back({root, children_of(root)});
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.next < f.children.size()) {
                const int child = f.children[f.next++];
                stack.push_back({child, children_of(child)});
            } else {
                order.push_back(f.node);
                stack.pop_back();
            }
        }
        return order;
    };

    long long iterations = 0;
    for (;;) {
        check_deadline(cfg.limits);
        if (++iterations > cfg.limits.iteration_cap)
            throw SolveError("iteration cap exceeded in iMOLAO*");
        const std::vector<int> order = postorder();
        double max_residual = 0.0;
        long long fresh_states = 0;
        for (int s : order) {
            if (!graph.is_goal_node(s)) {
                graph.expand(s, stats);
                max_residual = std::max(max_residual, graph.backup(s, stats));
                greedy[s] = graph.greedy_actions(s);
            }
            if (!interior.count(s)) {
                interior.insert(s);
                if (!graph.is_goal_node(s)) ++fresh_states;
            }
        }
        if (fresh_states == 0 && max_residual < epsilon) break;
    }
    return graph.finish(stats, greedy, lp_before, started);
}

// ---------------------------------------------------------------------------
// MOLRTDP
// ---------------------------------------------------------------------------

namespace detail {

/// checkSolved over the lazy graph: walks the descendants of @p start under
/// all greedy actions; if every visited state is epsilon-consistent the
/// closed set is labelled solved, otherwise the closed states are re-backed
/// up in reverse pop order.
inline bool check_solved_impl(LazyGraph& graph, int start, double epsilon, SearchStats& stats) {
    bool consistent = true;
    std::vector<int> open;
    std::vector<int> closed;
    std::unordered_set<int> queued;
    if (!graph.is_solved(start)) {
        open.push_back(start);
        queued.insert(start);
    }
    while (!open.empty()) {
        const int s = open.back();
        open.pop_back();
        closed.push_back(s);
        graph.expand(s, stats);
        if (graph.probe_residual(s, stats) > epsilon) {
            consistent = false;
            continue;
        }
        for (int succ : graph.policy_successors(s, graph.greedy_actions(s))) {
            if (!graph.is_solved(succ) && !queued.count(succ)) {
                open.push_back(succ);
                queued.insert(succ);
            }
        }
    }
    if (consistent) {
        for (int s : closed) graph.mark_solved(s);
    } else {
        while (!closed.empty()) {
            const int s = closed.back();
            closed.pop_back();
            graph.backup(s, stats);
        }
    }
    return consistent;
}

}  // namespace detail

/**
 * @brief MOLRTDP: labelled real-time dynamic programming with multi-objective
 * backups. Each trial samples a greedy action uniformly and an unsolved
 * successor by renormalised probability; trials end at goals, at solved
 * states, when every successor of the sampled action is solved, or at the
 * trial-length cap. Visited states are then checked solved in reverse order.
 */
inline SearchResult molrtdp(const FactoredModel& m, const ValueInit& heuristic, double epsilon,
                            std::uint64_t seed, const SearchConfig& cfg = {}) {
    const auto started = std::chrono::steady_clock::now();
    const long long lp_before = lp::solve_count;
    detail::LazyGraph graph(m, heuristic, cfg, detail::resolve_bound(m, cfg));
    SearchStats stats;
    std::mt19937_64 rng(seed);

    const int root = graph.discover(m.init);

    // Debug bookkeeping for the solved-label soundness check.
    std::unordered_map<int, VectorSet> solved_snapshot;
    const auto snapshot_solved = [&]() {
        if (!cfg.validate_solved_labels) return;
        for (std::size_t id = 0; id < graph.size(); ++id) {
            const int s = static_cast<int>(id);
            if (!graph.is_solved(s)) continue;
            const auto it = solved_snapshot.find(s);
            if (it == solved_snapshot.end()) {
                solved_snapshot.emplace(s, graph.value(s));
            } else if (!set_dominates(it->second, graph.value(s)) ||
                       !set_dominates(graph.value(s), it->second)) {
                throw SolveError("solved-label soundness violated: value changed after marking");
            }
        }
    };

    while (!graph.is_solved(root)) {
        check_deadline(cfg.limits);
        if (++stats.trials > cfg.limits.iteration_cap)
            throw SolveError("iteration cap exceeded in MOLRTDP");
        std::vector<int> visited;
        int s = root;
        long long steps = 0;
        while (!graph.is_solved(s)) {
            visited.push_back(s);
            if (graph.is_goal_node(s)) break;
            if (steps++ > cfg.trial_step_factor * static_cast<long long>(graph.size()))
                break;  // truncated trial; the reverse checkSolved sweep still runs
            graph.expand(s, stats);
            graph.backup(s, stats);
            const std::vector<int> actions = graph.greedy_actions(s);
            if (actions.empty()) break;
            std::uniform_int_distribution<std::size_t> pick(0, actions.size() - 1);
            const int action = actions[pick(rng)];

            // Sample an unsolved successor of the chosen action, probabilities
            // renormalised over the unsolved ones; all solved ends the trial.
            std::vector<std::pair<int, double>> candidates;
            double total = 0.0;
            for (const TransitionEntry& entry : graph.transitions(s)) {
                if (entry.action != action) continue;
                for (const auto& [succ, prob] : entry.successors) {
                    if (!graph.is_solved(succ)) {
                        candidates.emplace_back(succ, prob);
                        total += prob;
                    }
                }
            }
            if (candidates.empty() || total <= 0.0) break;
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            double ticket = unit(rng) * total;
            int next = candidates.back().first;
            for (const auto& [succ, prob] : candidates) {
                if (ticket < prob) {
                    next = succ;
                    break;
                }
                ticket -= prob;
            }
            s = next;
        }
        while (!visited.empty()) {
            const int top = visited.back();
            visited.pop_back();
            if (!detail::check_solved_impl(graph, top, epsilon, stats)) break;
        }
        snapshot_solved();
    }

    std::unordered_map<int, std::vector<int>> greedy;
    for (std::size_t id = 0; id < graph.size(); ++id) {
        const int s = static_cast<int>(id);
        if (!graph.is_goal_node(s) && graph.is_expanded(s)) greedy[s] = graph.greedy_actions(s);
    }
    return graph.finish(stats, greedy, lp_before, started);
}

/**
 * @brief Standalone checkSolved on an explicit value function: explores the
 * descendants of @p s through all greedy actions; marks the closed set
 * solved when every visited state has residual <= epsilon, otherwise
 * re-backs up the closed states in reverse pop order.
 */
inline bool check_solved(const FactoredModel& m, const State& s, ValueFunction& vf,
                         double epsilon, const CoverageOps& ops = {},
                         const CostVector* bound = nullptr) {
    bool consistent = true;
    std::vector<State> open;
    std::vector<State> closed;
    std::unordered_set<State, StateHash> queued;
    const auto solved = [&](const State& x) {
        return is_goal(m, x) || vf.solved.count(x) > 0;
    };
    if (!solved(s)) {
        open.push_back(s);
        queued.insert(s);
    }
    const auto backup_of = [&](const State& x) {
        return bound ? bellman_backup_capped(m, x, vf, Bound(*bound), ops)
                     : bellman_backup(m, x, vf, ops);
    };
    while (!open.empty()) {
        const State current = open.back();
        open.pop_back();
        closed.push_back(current);
        const VectorSet fresh = backup_of(current);
        const double res = hausdorff(vf.at(current), fresh);
        vf.residuals[current] = res;
        if (res > epsilon) {
            consistent = false;
            continue;
        }
        for (int a : get_actions(m, current, vf, ops, bound)) {
            for (auto& [succ, prob] : successors(m, current, a)) {
                if (!solved(succ) && !queued.count(succ)) {
                    open.push_back(succ);
                    queued.insert(succ);
                }
            }
        }
    }
    if (consistent) {
        for (const State& x : closed) vf.solved.insert(x);
    } else {
        while (!closed.empty()) {
            const State x = closed.back();
            closed.pop_back();
            VectorSet fresh = backup_of(x);
            vf.residuals[x] = hausdorff(vf.at(x), fresh);
            vf.values[x] = std::move(fresh);
        }
    }
    return consistent;
}

}  // namespace mossp
