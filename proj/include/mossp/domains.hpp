/**
 * @file domains.hpp
 * @brief Programmatic benchmark-instance generators.
 *
 * Four families, all emitting the JSON model format:
 *
 *  - tireworld:    triangular road map with one-way zigzag detours; moving
 *                  may flatten a tire, spares sit on the upper rows, dead
 *                  ends appear when a flat strikes a spare-less cell.
 *                  Meant to be solved after the give-up transformation.
 *  - pvisitall:    grid VisitAll with per-agent move objectives; the risky
 *                  move costs half as much but teleports the agent home
 *                  half the time.
 *  - visitalltire: VisitAll where moves can flatten a tire instead of
 *                  moving; spare placement is seeded. Dead ends possible.
 *  - sar:          search-and-rescue: find and board a survivor and return
 *                  to base; moves burn 1 or 2 fuel with equal probability,
 *                  waiting and boarding burn none (zero-cost cycles in the
 *                  fuel dimension).
 *
 * Generation is bit-deterministic given parameters and seed.
 */

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mossp/model.hpp"

namespace mossp {

namespace detail {

inline std::string cell_name(int x, int y) {
    return "x" + std::to_string(x) + "y" + std::to_string(y);
}

}  // namespace detail

/**
 * @brief MO Triangle Tireworld of parameter @p n.
 *
 * The bottom row has 2n+1 locations; up to two detour rows sit above it
 * with one spare tire each. Roads are one-way: along the bottom, up, and
 * diagonally down-forward. One objective (actions) before the give-up
 * transformation.
 */
inline FactoredModel gen_tireworld(int n, double p_flat = 0.5) {
    if (n < 1) throw ModelError("gen_tireworld: n must be >= 1");
    const int rows = std::min(n, 2) + 1;  // keeps exact solves desk-sized
    const auto width = [n](int r) { return 2 * n + 1 - r; };
    const auto loc = [](int r, int c) {
        return "r" + std::to_string(r) + "c" + std::to_string(c);
    };

    FactoredModel m;
    std::vector<std::string> locations;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < width(r); ++c) locations.push_back(loc(r, c));
    m.variables.push_back({"pos", locations});
    m.variables.push_back({"flat", {"no", "yes"}});
    m.variables.push_back({"carry", {"no", "yes"}});
    std::vector<std::pair<int, int>> spare_cells;
    for (int r = 1; r < rows; ++r)
        for (int c = 0; c < width(r); ++c) {
            m.variables.push_back({"spare-" + loc(r, c), {"yes", "no"}});
            spare_cells.emplace_back(r, c);
        }

    m.init.values.assign(m.variables.size(), 0);  // pos=r0c0, flat=no, carry=no, spares=yes
    m.goal = {{0, static_cast<int>(std::find(locations.begin(), locations.end(),
                                             loc(0, 2 * n)) -
                                   locations.begin())}};
    m.objectives = {"actions"};

    const auto loc_index = [&locations](int r, int c) {
        const std::string name = "r" + std::to_string(r) + "c" + std::to_string(c);
        return static_cast<int>(std::find(locations.begin(), locations.end(), name) -
                                locations.begin());
    };
    const auto add_move = [&](int fr, int fc, int tr, int tc) {
        ProbabilisticAction a;
        a.name = "move-" + loc(fr, fc) + "-" + loc(tr, tc);
        a.precondition = {{0, loc_index(fr, fc)}, {1, 0}};
        a.cost = {1.0};
        a.outcomes.push_back({1.0 - p_flat, {{0, loc_index(tr, tc)}}});
        a.outcomes.push_back({p_flat, {{0, loc_index(tr, tc)}, {1, 1}}});
        m.actions.push_back(std::move(a));
    };

    for (int c = 0; c + 1 < width(0); ++c) add_move(0, c, 0, c + 1);  // bottom, direct
    for (int r = 0; r + 1 < rows; ++r)
        for (int c = 0; c < width(r + 1); ++c) add_move(r, c, r + 1, c);  // up
    for (int r = 1; r < rows; ++r)
        for (int c = 0; c + 1 < width(r - 1); ++c) add_move(r, c, r - 1, c + 1);  // down-forward

    for (std::size_t i = 0; i < spare_cells.size(); ++i) {
        const auto [r, c] = spare_cells[i];
        const int spare_var = 3 + static_cast<int>(i);
        ProbabilisticAction a;
        a.name = "load-" + loc(r, c);
        a.precondition = {{0, loc_index(r, c)}, {2, 0}, {spare_var, 0}};
        a.cost = {1.0};
        a.outcomes.push_back({1.0, {{2, 1}, {spare_var, 1}}});
        m.actions.push_back(std::move(a));
    }
    {
        ProbabilisticAction a;
        a.name = "change-tire";
        a.precondition = {{1, 1}, {2, 1}};
        a.cost = {1.0};
        a.outcomes.push_back({1.0, {{1, 0}, {2, 0}}});
        m.actions.push_back(std::move(a));
    }
    return m;
}

/**
 * @brief Probabilistic VisitAll on a @p width x @p height grid.
 *
 * One objective per agent, counting its own moves. The plain move costs 2
 * and always works; move-risky costs 1 and teleports the agent back to
 * its initial cell with probability 0.5.
 */
inline FactoredModel gen_pvisitall(int width, int height, int agents) {
    if (width < 1 || height < 1 || agents < 1)
        throw ModelError("gen_pvisitall: dimensions and agent count must be >= 1");
    const int cells = width * height;
    FactoredModel m;
    std::vector<std::string> cell_names;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) cell_names.push_back(detail::cell_name(x, y));

    for (int i = 0; i < agents; ++i)
        m.variables.push_back({"pos-a" + std::to_string(i), cell_names});
    for (int c = 0; c < cells; ++c)
        m.variables.push_back({"visited-" + cell_names[c], {"no", "yes"}});

    std::vector<int> home(agents);
    m.init.values.assign(m.variables.size(), 0);
    for (int i = 0; i < agents; ++i) {
        home[i] = i % cells;
        m.init.values[i] = home[i];
        m.init.values[agents + home[i]] = 1;
    }
    for (int c = 0; c < cells; ++c) m.goal.emplace_back(agents + c, 1);
    for (int i = 0; i < agents; ++i) m.objectives.push_back("moves-a" + std::to_string(i));

    constexpr int dx[4] = {1, -1, 0, 0};
    constexpr int dy[4] = {0, 0, 1, -1};
    for (int i = 0; i < agents; ++i) {
        CostVector safe_cost(agents, 0.0), risky_cost(agents, 0.0);
        safe_cost[i] = 2.0;
        risky_cost[i] = 1.0;
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                const int from = y * width + x;
                for (int d = 0; d < 4; ++d) {
                    const int tx = x + dx[d], ty = y + dy[d];
                    if (tx < 0 || tx >= width || ty < 0 || ty >= height) continue;
                    const int to = ty * width + tx;
                    const std::string suffix = "-a" + std::to_string(i) + "-" +
                                               cell_names[from] + "-" + cell_names[to];
                    ProbabilisticAction safe;
                    safe.name = "move" + suffix;
                    safe.precondition = {{i, from}};
                    safe.cost = safe_cost;
                    safe.outcomes.push_back({1.0, {{i, to}, {agents + to, 1}}});
                    m.actions.push_back(std::move(safe));

                    ProbabilisticAction risky;
                    risky.name = "move-risky" + suffix;
                    risky.precondition = {{i, from}};
                    risky.cost = risky_cost;
                    risky.outcomes.push_back({0.5, {{i, to}, {agents + to, 1}}});
                    risky.outcomes.push_back({0.5, {{i, home[i]}}});
                    m.actions.push_back(std::move(risky));
                }
            }
        }
    }
    return m;
}

/**
 * @brief VisitAllTire: VisitAll dynamics where a move flattens the agent's
 * tire instead of moving with probability 0.5. Spare tires are placed on
 * @p spares seeded cells; load and change-tire actions per agent.
 * Dead ends when a flat strikes with no spare in reach.
 */
inline FactoredModel gen_visitalltire(int width, int height, int agents, int spares,
                                      std::uint64_t seed) {
    if (width < 1 || height < 1 || agents < 1)
        throw ModelError("gen_visitalltire: dimensions and agent count must be >= 1");
    const int cells = width * height;
    if (spares < 0 || spares > cells)
        throw ModelError("gen_visitalltire: spare count out of range");
    FactoredModel m;
    std::vector<std::string> cell_names;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) cell_names.push_back(detail::cell_name(x, y));

    for (int i = 0; i < agents; ++i)
        m.variables.push_back({"pos-a" + std::to_string(i), cell_names});
    const int visited_base = agents;
    for (int c = 0; c < cells; ++c)
        m.variables.push_back({"visited-" + cell_names[c], {"no", "yes"}});
    const int flat_base = visited_base + cells;
    for (int i = 0; i < agents; ++i)
        m.variables.push_back({"flat-a" + std::to_string(i), {"no", "yes"}});
    const int carry_base = flat_base + agents;
    for (int i = 0; i < agents; ++i)
        m.variables.push_back({"carry-a" + std::to_string(i), {"no", "yes"}});

    // Seeded spare placement: first `spares` cells of a Fisher-Yates shuffle.
    std::vector<int> shuffled(cells);
    for (int c = 0; c < cells; ++c) shuffled[c] = c;
    std::mt19937_64 rng(seed);
    for (int c = cells - 1; c > 0; --c) {
        std::uniform_int_distribution<int> pick(0, c);
        std::swap(shuffled[c], shuffled[pick(rng)]);
    }
    std::vector<int> spare_cells(shuffled.begin(), shuffled.begin() + spares);
    std::sort(spare_cells.begin(), spare_cells.end());
    const int spare_base = carry_base + agents;
    std::vector<int> spare_var(cells, -1);
    for (std::size_t k = 0; k < spare_cells.size(); ++k) {
        spare_var[spare_cells[k]] = spare_base + static_cast<int>(k);
        m.variables.push_back({"spare-" + cell_names[spare_cells[k]], {"yes", "no"}});
    }

    m.init.values.assign(m.variables.size(), 0);
    std::vector<int> home(agents);
    for (int i = 0; i < agents; ++i) {
        home[i] = i % cells;
        m.init.values[i] = home[i];
        m.init.values[visited_base + home[i]] = 1;
    }
    for (int c = 0; c < cells; ++c) m.goal.emplace_back(visited_base + c, 1);
    for (int i = 0; i < agents; ++i) m.objectives.push_back("moves-a" + std::to_string(i));

    constexpr int dx[4] = {1, -1, 0, 0};
    constexpr int dy[4] = {0, 0, 1, -1};
    for (int i = 0; i < agents; ++i) {
        CostVector cost(agents, 0.0);
        cost[i] = 1.0;
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                const int from = y * width + x;
                for (int d = 0; d < 4; ++d) {
                    const int tx = x + dx[d], ty = y + dy[d];
                    if (tx < 0 || tx >= width || ty < 0 || ty >= height) continue;
                    const int to = ty * width + tx;
                    ProbabilisticAction move;
                    move.name = "move-a" + std::to_string(i) + "-" + cell_names[from] + "-" +
                                cell_names[to];
                    move.precondition = {{i, from}, {flat_base + i, 0}};
                    move.cost = cost;
                    move.outcomes.push_back({0.5, {{i, to}, {visited_base + to, 1}}});
                    move.outcomes.push_back({0.5, {{flat_base + i, 1}}});
                    m.actions.push_back(std::move(move));
                }
            }
        }
        for (int c : spare_cells) {
            ProbabilisticAction load;
            load.name = "load-a" + std::to_string(i) + "-" + cell_names[c];
            load.precondition = {{i, c}, {carry_base + i, 0}, {spare_var[c], 0}};
            load.cost = cost;
            load.outcomes.push_back({1.0, {{carry_base + i, 1}, {spare_var[c], 1}}});
            m.actions.push_back(std::move(load));
        }
        ProbabilisticAction change;
        change.name = "change-tire-a" + std::to_string(i);
        change.precondition = {{flat_base + i, 1}, {carry_base + i, 1}};
        change.cost = cost;
        change.outcomes.push_back({1.0, {{flat_base + i, 0}, {carry_base + i, 0}}});
        m.actions.push_back(std::move(change));
    }
    return m;
}

/**
 * @brief Search and Rescue on an n x n grid, objectives [time, fuel].
 *
 * One survivor's cell is known; @p survivors further candidate cells hold
 * one with probability 0.5, resolved by an observe action. Moves burn one
 * fuel always and a second one half the time (a fatigue flag forces the
 * catch-breath action, which costs [0,1], before anything else happens).
 * Waiting and boarding cost time but no fuel.
 */
inline FactoredModel gen_sar(int n, int survivors, std::uint64_t seed) {
    if (n < 2) throw ModelError("gen_sar: n must be >= 2");
    const int cells = n * n;
    if (survivors < 0 || survivors > cells - 2)
        throw ModelError("gen_sar: too many candidate cells");
    FactoredModel m;
    std::vector<std::string> cell_names;
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) cell_names.push_back(detail::cell_name(x, y));

    // Seeded choice of the known-survivor cell and the candidate cells,
    // all distinct and away from the base at cell 0.
    std::vector<int> non_base(cells - 1);
    for (int c = 1; c < cells; ++c) non_base[c - 1] = c;
    std::mt19937_64 rng(seed);
    for (int c = static_cast<int>(non_base.size()) - 1; c > 0; --c) {
        std::uniform_int_distribution<int> pick(0, c);
        std::swap(non_base[c], non_base[pick(rng)]);
    }
    const int known_cell = non_base.front();
    std::vector<int> candidate_cells(non_base.begin() + 1, non_base.begin() + 1 + survivors);
    std::sort(candidate_cells.begin(), candidate_cells.end());

    m.variables.push_back({"pos", cell_names});
    m.variables.push_back({"boarded", {"no", "yes"}});
    m.variables.push_back({"fatigue", {"no", "yes"}});
    std::vector<int> presence_var(cells, -1);
    for (std::size_t k = 0; k < candidate_cells.size(); ++k) {
        presence_var[candidate_cells[k]] = 3 + static_cast<int>(k);
        m.variables.push_back({"pres-" + cell_names[candidate_cells[k]], {"unknown", "yes", "no"}});
    }

    m.init.values.assign(m.variables.size(), 0);
    m.goal = {{0, 0}, {1, 1}, {2, 0}};  // at base, boarded, rested
    m.objectives = {"time", "fuel"};

    constexpr int dx[4] = {1, -1, 0, 0};
    constexpr int dy[4] = {0, 0, 1, -1};
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const int from = y * n + x;
            for (int d = 0; d < 4; ++d) {
                const int tx = x + dx[d], ty = y + dy[d];
                if (tx < 0 || tx >= n || ty < 0 || ty >= n) continue;
                const int to = ty * n + tx;
                ProbabilisticAction move;
                move.name = "move-" + cell_names[from] + "-" + cell_names[to];
                move.precondition = {{0, from}, {2, 0}};
                move.cost = {1.0, 1.0};
                move.outcomes.push_back({0.5, {{0, to}}});
                move.outcomes.push_back({0.5, {{0, to}, {2, 1}}});
                m.actions.push_back(std::move(move));
            }
        }
    }
    {
        ProbabilisticAction rest;
        rest.name = "catch-breath";
        rest.precondition = {{2, 1}};
        rest.cost = {0.0, 1.0};
        rest.outcomes.push_back({1.0, {{2, 0}}});
        m.actions.push_back(std::move(rest));
    }
    for (int c : candidate_cells) {
        ProbabilisticAction observe;
        observe.name = "observe-" + cell_names[c];
        observe.precondition = {{0, c}, {2, 0}, {presence_var[c], 0}};
        observe.cost = {1.0, 0.0};
        observe.outcomes.push_back({0.5, {{presence_var[c], 1}}});
        observe.outcomes.push_back({0.5, {{presence_var[c], 2}}});
        m.actions.push_back(std::move(observe));
    }
    {
        ProbabilisticAction board;
        board.name = "board-known";
        board.precondition = {{0, known_cell}, {1, 0}, {2, 0}};
        board.cost = {1.0, 0.0};
        board.outcomes.push_back({1.0, {{1, 1}}});
        m.actions.push_back(std::move(board));
    }
    for (int c : candidate_cells) {
        ProbabilisticAction board;
        board.name = "board-" + cell_names[c];
        board.precondition = {{0, c}, {1, 0}, {2, 0}, {presence_var[c], 1}};
        board.cost = {1.0, 0.0};
        board.outcomes.push_back({1.0, {{1, 1}}});
        m.actions.push_back(std::move(board));
    }
    {
        ProbabilisticAction wait;
        wait.name = "wait";
        wait.precondition = {{2, 0}};
        wait.cost = {1.0, 0.0};
        wait.outcomes.push_back({1.0, {}});
        m.actions.push_back(std::move(wait));
    }
    return m;
}

/// Canonical instance file stem: <family>-<params>-s<seed>.
inline std::string instance_stem(const std::string& family, const std::string& params,
                                 std::uint64_t seed) {
    return family + "-" + params + "-s" + std::to_string(seed);
}

}  // namespace mossp
