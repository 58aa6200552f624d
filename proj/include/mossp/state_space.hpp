/**
 * @file state_space.hpp
 * @brief Reachable-state enumeration, SCC condensation and dead-end analysis.
 *
 * Goal states are absorbing throughout: no action is expanded at a goal,
 * matching the convention that goal values are pinned to {0}.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mossp/model.hpp"

namespace mossp {

class StateSpaceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct TransitionEntry {
    int action = -1;
    std::vector<std::pair<int, double>> successors;  ///< (state index, probability)
};

/// A fully enumerated reachable fragment: states in BFS discovery order from
/// the initial state (index 0), with per-state applicable transitions.
struct StateSpace {
    std::vector<State> states;
    std::unordered_map<State, int, StateHash> index;
    std::vector<char> goal;
    std::vector<std::vector<TransitionEntry>> transitions;

    std::size_t size() const { return states.size(); }
};

inline StateSpace build_state_space(const FactoredModel& m,
                                    std::size_t state_cap = 10'000'000) {
    StateSpace space;
    space.states.push_back(m.init);
    space.index.emplace(m.init, 0);
    for (std::size_t next = 0; next < space.states.size(); ++next) {
        const State s = space.states[next];  // copy: vector may reallocate below
        const bool goal = is_goal(m, s);
        space.goal.push_back(goal);
        space.transitions.emplace_back();
        if (goal) continue;
        for (int a : applicable_actions(m, s)) {
            TransitionEntry entry;
            entry.action = a;
            for (auto& [succ, prob] : successors(m, s, a)) {
                auto [it, inserted] = space.index.emplace(succ, space.states.size());
                if (inserted) {
                    if (space.states.size() >= state_cap)
                        throw StateSpaceError("state cap exceeded (" +
                                              std::to_string(state_cap) + ")");
                    space.states.push_back(succ);
                }
                entry.successors.emplace_back(it->second, prob);
            }
            space.transitions[next].push_back(std::move(entry));
        }
    }
    return space;
}

/// All states reachable from the initial state, in BFS discovery order.
inline std::vector<State> reachable_states(const FactoredModel& m,
                                           std::size_t state_cap = 10'000'000) {
    return build_state_space(m, state_cap).states;
}

/**
 * @brief Strongly connected components of the transition graph, emitted in
 * reverse topological order of the condensation: every SCC appears before
 * the SCCs that can reach it, so value iteration can sweep the list
 * front-to-back with all successor components already solved.
 */
inline std::vector<std::vector<int>> strongly_connected_components(const StateSpace& space) {
    const int n = static_cast<int>(space.size());
    std::vector<int> dfs_number(n, -1), low_link(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<int> stack;
    std::vector<std::vector<int>> sccs;
    int counter = 0;

    // Iterative Tarjan; explicit frames keep deep graphs off the call stack.
    struct Frame {
        int state;
        std::size_t entry = 0;
        std::size_t succ = 0;
    };
    std::vector<Frame> frames;

    auto edges = [&space](int s) -> const std::vector<TransitionEntry>& {
        return space.transitions[s];
    };

    for (int root = 0; root < n; ++root) {
        if (dfs_number[root] >= 0) continue;
        frames.push_back({root});
        dfs_number[root] = low_link[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!frames.empty()) {
            Frame& f = frames.back();
            const auto& trans = edges(f.state);
            bool descended = false;
            while (f.entry < trans.size()) {
                const auto& succs = trans[f.entry].successors;
                if (f.succ >= succs.size()) {
                    ++f.entry;
                    f.succ = 0;
                    continue;
                }
                const int t = succs[f.succ].first;
                ++f.succ;
                if (dfs_number[t] < 0) {
                    dfs_number[t] = low_link[t] = counter++;
                    stack.push_back(t);
                    on_stack[t] = 1;
                    frames.push_back({t});
                    descended = true;
                    break;
                }
                if (on_stack[t]) low_link[f.state] = std::min(low_link[f.state], dfs_number[t]);
            }
            if (descended) continue;
            const int s = f.state;
            frames.pop_back();
            if (!frames.empty())
                low_link[frames.back().state] = std::min(low_link[frames.back().state], low_link[s]);
            if (low_link[s] == dfs_number[s]) {
                std::vector<int> component;
                for (;;) {
                    const int t = stack.back();
                    stack.pop_back();
                    on_stack[t] = 0;
                    component.push_back(t);
                    if (t == s) break;
                }
                sccs.push_back(std::move(component));
            }
        }
    }
    return sccs;
}

/**
 * @brief Per-state flag: does a policy exist that reaches the goal with
 * probability 1? Computed by the standard iterative pruning: keep only
 * actions whose every successor is still viable, re-run backward
 * reachability from the goals, repeat to fixpoint.
 */
inline std::vector<char> proper_policy_exists(const StateSpace& space) {
    const int n = static_cast<int>(space.size());
    std::vector<char> viable(n, 1);
    for (;;) {
        // Backward reachability from goals using only fully-viable actions.
        std::vector<std::vector<int>> predecessors(n);
        for (int s = 0; s < n; ++s) {
            if (!viable[s]) continue;
            for (const TransitionEntry& t : space.transitions[s]) {
                bool allowed = true;
                for (const auto& [succ, prob] : t.successors) {
                    if (!viable[succ]) {
                        allowed = false;
                        break;
                    }
                }
                if (!allowed) continue;
                for (const auto& [succ, prob] : t.successors) predecessors[succ].push_back(s);
            }
        }
        std::vector<char> reaches(n, 0);
        std::vector<int> queue;
        for (int s = 0; s < n; ++s) {
            if (space.goal[s] && viable[s]) {
                reaches[s] = 1;
                queue.push_back(s);
            }
        }
        for (std::size_t head = 0; head < queue.size(); ++head) {
            for (int p : predecessors[queue[head]]) {
                if (!reaches[p]) {
                    reaches[p] = 1;
                    queue.push_back(p);
                }
            }
        }
        bool changed = false;
        for (int s = 0; s < n; ++s) {
            if (viable[s] && !reaches[s]) {
                viable[s] = 0;
                changed = true;
            }
        }
        if (!changed) return viable;
    }
}

/// True iff some reachable state has no goal-reaching policy.
inline bool has_dead_ends(const FactoredModel& m,
                          std::size_t state_cap = 10'000'000) {
    const StateSpace space = build_state_space(m, state_cap);
    const std::vector<char> viable = proper_policy_exists(space);
    for (char v : viable)
        if (!v) return true;
    return false;
}

}  // namespace mossp
