// Independent oracles used to freeze expected values:
//  - a scalarising-weight grid sweep certifying convex-coverage pruning,
//  - exhaustive deterministic-policy enumeration with linear-system policy
//    evaluation (Gaussian elimination), independent of the solver path.

#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "mossp/model.hpp"
#include "mossp/state_space.hpp"
#include "mossp/vecset.hpp"

namespace oracles {

// For each candidate, true iff it is the unique minimiser of w.v at some
// weight on a grid over the simplex with the given pitch (2 or 3 objectives).
inline std::vector<bool> grid_unique_winner(const mossp::VectorSet& candidates, double pitch) {
    std::vector<bool> certified(candidates.size(), false);
    if (candidates.empty()) return certified;
    const std::size_t n = candidates.front().size();
    const int steps = static_cast<int>(std::lround(1.0 / pitch));
    const auto scan = [&](const std::vector<double>& w) {
        double best = std::numeric_limits<double>::infinity(), second = best;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            double value = 0.0;
            for (std::size_t d = 0; d < n; ++d) value += w[d] * candidates[i][d];
            if (value < best) {
                second = best;
                best = value;
                arg = i;
            } else if (value < second) {
                second = value;
            }
        }
        if (second - best > 1e-9) certified[arg] = true;
    };
    if (n == 2) {
        for (int i = 0; i <= steps; ++i) {
            const double w0 = static_cast<double>(i) / steps;
            scan({w0, 1.0 - w0});
        }
    } else if (n == 3) {
        for (int i = 0; i <= steps; ++i) {
            for (int j = 0; j <= steps - i; ++j) {
                const double w0 = static_cast<double>(i) / steps;
                const double w1 = static_cast<double>(j) / steps;
                scan({w0, w1, 1.0 - w0 - w1});
            }
        }
    }
    return certified;
}

// Solves A x = rhs by Gaussian elimination with partial pivoting; empty on
// (near-)singular systems.
inline std::optional<std::vector<double>> solve_linear(std::vector<std::vector<double>> a,
                                                       std::vector<double> rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) < 1e-9) return std::nullopt;
        std::swap(a[col], a[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double factor = a[r][col] / a[col][col];
            if (factor == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
            rhs[r] -= factor * rhs[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = rhs[i] / a[i][i];
    return x;
}

// Exact CCS of the initial state by brute force: enumerate every
// deterministic policy, keep the proper ones, evaluate each objective by
// solving the linear system V = C + P V over the policy's reachable
// states, and prune the collected value vectors.
inline mossp::VectorSet enumerate_policy_ccs(const mossp::FactoredModel& m,
                                             const mossp::CostVector& bound,
                                             double lambda) {
    using namespace mossp;
    const StateSpace space = build_state_space(m);
    std::vector<int> nongoal;
    for (std::size_t s = 0; s < space.size(); ++s)
        if (!space.goal[s]) nongoal.push_back(static_cast<int>(s));

    VectorSet values;
    std::vector<std::size_t> choice(nongoal.size(), 0);
    for (;;) {
        // The policy: nongoal state -> transition entry; states without
        // actions simply make the policy improper if reached.
        const auto entry_of = [&](int s) -> const TransitionEntry* {
            for (std::size_t k = 0; k < nongoal.size(); ++k) {
                if (nongoal[k] == s) {
                    if (space.transitions[s].empty()) return nullptr;
                    return &space.transitions[s][choice[k]];
                }
            }
            return nullptr;
        };

        // Reachable-under-policy set from the initial state.
        std::vector<int> reach{0};
        std::vector<char> seen(space.size(), 0);
        seen[0] = 1;
        bool stuck = false;
        for (std::size_t head = 0; head < reach.size() && !stuck; ++head) {
            const int s = reach[head];
            if (space.goal[s]) continue;
            const TransitionEntry* entry = entry_of(s);
            if (entry == nullptr) {
                stuck = true;
                break;
            }
            for (const auto& [succ, prob] : entry->successors) {
                if (!seen[succ]) {
                    seen[succ] = 1;
                    reach.push_back(succ);
                }
            }
        }

        // Properness: every policy-reachable state can reach a goal inside
        // the policy graph.
        bool proper = !stuck;
        if (proper) {
            std::vector<char> reaches_goal(space.size(), 0);
            bool grew = true;
            while (grew) {
                grew = false;
                for (int s : reach) {
                    if (reaches_goal[s]) continue;
                    if (space.goal[s]) {
                        reaches_goal[s] = 1;
                        grew = true;
                        continue;
                    }
                    const TransitionEntry* entry = entry_of(s);
                    for (const auto& [succ, prob] : entry->successors) {
                        if (reaches_goal[succ]) {
                            reaches_goal[s] = 1;
                            grew = true;
                            break;
                        }
                    }
                }
            }
            for (int s : reach)
                if (!reaches_goal[s]) proper = false;
        }

        if (proper) {
            // Linear-system evaluation per objective over reachable nongoal rows.
            std::vector<int> rows;
            std::vector<int> row_of(space.size(), -1);
            for (int s : reach) {
                if (!space.goal[s]) {
                    row_of[s] = static_cast<int>(rows.size());
                    rows.push_back(s);
                }
            }
            bool ok = !rows.empty() || space.goal[0];
            CostVector value(m.n_objectives(), 0.0);
            for (std::size_t obj = 0; obj < m.n_objectives() && ok && !rows.empty(); ++obj) {
                std::vector<std::vector<double>> a(rows.size(),
                                                   std::vector<double>(rows.size(), 0.0));
                std::vector<double> rhs(rows.size(), 0.0);
                for (std::size_t r = 0; r < rows.size(); ++r) {
                    const int s = rows[r];
                    const TransitionEntry* entry = entry_of(s);
                    a[r][r] = 1.0;
                    rhs[r] = m.actions[entry->action].cost[obj];
                    for (const auto& [succ, prob] : entry->successors)
                        if (row_of[succ] >= 0) a[r][row_of[succ]] -= prob;
                }
                const auto solution = solve_linear(std::move(a), std::move(rhs));
                if (!solution) {
                    ok = false;  // singular system: improper in disguise
                    break;
                }
                if (row_of[0] >= 0) value[obj] = (*solution)[row_of[0]];
            }
            for (std::size_t i = 0; i < value.size() && ok; ++i)
                if (value[i] > bound[i] + 1e-6) ok = false;
            if (ok) values.push_back(value);
        }

        // Next policy in mixed radix.
        std::size_t k = 0;
        for (; k < nongoal.size(); ++k) {
            const std::size_t arity = std::max<std::size_t>(
                1, space.transitions[nongoal[k]].size());
            if (++choice[k] < arity) break;
            choice[k] = 0;
        }
        if (k == nongoal.size()) break;
    }
    if (values.empty()) return values;
    return ccs_prune(values, lambda);
}

}  // namespace oracles
