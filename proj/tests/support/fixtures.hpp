// Shared test fixtures: the two hand-built reference models, a seeded
// random-model generator, and small comparison helpers.

#pragma once

#include <random>
#include <string>

#include "mossp/model.hpp"
#include "mossp/vecset.hpp"

namespace fixtures {

// Self-loop MOSSP with two goals: P(stay) = P(goal_i) = 0.5 under either
// action, costs [1,0] and [0,1]. Optimal value at the start is
// {[2,0],[0,2]}.
inline const char* kFig1Json = R"({
  "variables": [
    {"name": "pos", "domain": ["s0", "g1", "g2"]},
    {"name": "reached", "domain": ["no", "yes"]}
  ],
  "init": {"pos": "s0", "reached": "no"},
  "goal": {"reached": "yes"},
  "objectives": ["c1", "c2"],
  "actions": [
    {"name": "a1", "pre": {"pos": "s0"}, "cost": [1, 0], "outcomes": [
      {"prob": 0.5, "effect": {}},
      {"prob": 0.5, "effect": {"pos": "g1", "reached": "yes"}}
    ]},
    {"name": "a2", "pre": {"pos": "s0"}, "cost": [0, 1], "outcomes": [
      {"prob": 0.5, "effect": {}},
      {"prob": 0.5, "effect": {"pos": "g2", "reached": "yes"}}
    ]}
  ]
})";

// Deterministic two-state cycle plus an escape: the only proper policy
// costs [0,1]; the cycle accumulates [1,0] forever, so plain value
// iteration diverges. Under the bound [2,2] the optimum is {[0,1]}.
inline const char* kFig2Json = R"({
  "variables": [{"name": "pos", "domain": ["s0", "s1", "g"]}],
  "init": {"pos": "s0"},
  "goal": {"pos": "g"},
  "objectives": ["c1", "c2"],
  "actions": [
    {"name": "a1", "pre": {"pos": "s0"}, "cost": [1, 0],
     "outcomes": [{"prob": 1.0, "effect": {"pos": "s1"}}]},
    {"name": "a2", "pre": {"pos": "s1"}, "cost": [1, 0],
     "outcomes": [{"prob": 1.0, "effect": {"pos": "s0"}}]},
    {"name": "ag", "pre": {"pos": "s0"}, "cost": [0, 1],
     "outcomes": [{"prob": 1.0, "effect": {"pos": "g"}}]}
  ]
})";

inline mossp::FactoredModel fig1() { return mossp::parse_model(kFig1Json); }
inline mossp::FactoredModel fig2() { return mossp::parse_model(kFig2Json); }

// True when the two sets are within Hausdorff distance `tol`.
inline bool sets_close(const mossp::VectorSet& a, const mossp::VectorSet& b, double tol) {
    if (a.empty() || b.empty()) return a.empty() && b.empty();
    return mossp::hausdorff(a, b) <= tol;
}

struct RandomModelParams {
    int states = 20;            // flat size; encoded over two variables
    int objectives = 2;
    int max_actions = 3;        // per state
    int max_outcomes = 3;
    bool forward_biased = false;  // outcomes never decrease the state index
    std::uint64_t seed = 0;
};

// Random factored model over two variables a (goal-bearing) and b. States
// are (a, b) pairs with flat index a * B + b; the goal is a = A-1 (partial,
// so several goal states exist). Every action carries at least one
// strictly positive cost entry, which keeps every cycle positive somewhere.
inline mossp::FactoredModel random_model(const RandomModelParams& p) {
    using namespace mossp;
    std::mt19937_64 rng(p.seed * 0x9e3779b97f4a7c15ull + 12345);
    int a_size = 2;
    while (a_size * a_size < p.states) ++a_size;
    const int b_size = (p.states + a_size - 1) / a_size;

    FactoredModel m;
    std::vector<std::string> a_dom, b_dom;
    for (int i = 0; i < a_size; ++i) a_dom.push_back("a" + std::to_string(i));
    for (int i = 0; i < b_size; ++i) b_dom.push_back("b" + std::to_string(i));
    m.variables.push_back({"a", a_dom});
    m.variables.push_back({"b", b_dom});
    m.init.values = {0, 0};
    m.goal = {{0, a_size - 1}};
    for (int i = 0; i < p.objectives; ++i) m.objectives.push_back("o" + std::to_string(i));

    const auto flat = [&](int av, int bv) { return av * b_size + bv; };
    const int total = a_size * b_size;

    for (int av = 0; av < a_size - 1; ++av) {  // a = A-1 states are goals
        for (int bv = 0; bv < b_size; ++bv) {
            if (flat(av, bv) >= p.states) continue;
            std::uniform_int_distribution<int> n_actions(1, p.max_actions);
            const int k = n_actions(rng);
            for (int j = 0; j < k; ++j) {
                ProbabilisticAction act;
                act.name = "act-" + std::to_string(flat(av, bv)) + "-" + std::to_string(j);
                act.precondition = {{0, av}, {1, bv}};
                act.cost.assign(p.objectives, 0.0);
                std::uniform_int_distribution<int> cost_dist(0, 3);
                std::uniform_int_distribution<int> hot(0, p.objectives - 1);
                for (int i = 0; i < p.objectives; ++i)
                    act.cost[i] = static_cast<double>(cost_dist(rng));
                const int h = hot(rng);
                if (act.cost[h] == 0.0) act.cost[h] = 1.0;

                std::uniform_int_distribution<int> n_outcomes(1, p.max_outcomes);
                const int outcomes = n_outcomes(rng);
                std::vector<int> weights(outcomes);
                std::uniform_int_distribution<int> weight_dist(1, 3);
                int weight_sum = 0;
                for (int& w : weights) {
                    w = weight_dist(rng);
                    weight_sum += w;
                }
                const int lo = p.forward_biased ? flat(av, bv) + 1 : 0;
                std::uniform_int_distribution<int> target_dist(std::min(lo, total - 1), total - 1);
                for (int o = 0; o < outcomes; ++o) {
                    const int target = target_dist(rng);
                    Outcome out;
                    out.probability = static_cast<double>(weights[o]) / weight_sum;
                    out.effect = {{0, target / b_size}, {1, target % b_size}};
                    // Merged at successor generation when targets repeat.
                    act.outcomes.push_back(std::move(out));
                }
                m.actions.push_back(std::move(act));
            }
        }
    }
    return m;
}

}  // namespace fixtures
