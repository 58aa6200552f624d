/**
 * @file model.hpp
 * @brief Factored multi-objective stochastic shortest path models.
 *
 * A model is a set of finite-domain variables, a full initial assignment,
 * a partial goal assignment, and probabilistic actions with vector costs.
 * This header covers parsing and validation of the JSON model format,
 * successor generation, and the model-to-model transformations: the
 * give-up transformation (removes dead ends at the price of one extra
 * objective), all-outcomes determinisation, and syntactic projection
 * onto a variable pattern.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mossp/vecset.hpp"

namespace mossp {

class ModelError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Variable {
    std::string name;
    std::vector<std::string> domain;  ///< value names; index is the stored value
};

/// Sorted (variable index, value index) pairs.
using PartialAssignment = std::vector<std::pair<int, int>>;

struct Outcome {
    double probability = 0.0;
    PartialAssignment effect;
};

struct ProbabilisticAction {
    std::string name;
    PartialAssignment precondition;
    CostVector cost;
    std::vector<Outcome> outcomes;
};

/// A full assignment, one value index per variable. Hashable and ordered so
/// it can key hash maps and give deterministic iteration when sorted.
struct State {
    std::vector<std::int32_t> values;

    friend bool operator==(const State&, const State&) = default;
    friend auto operator<=>(const State&, const State&) = default;
};

struct StateHash {
    std::size_t operator()(const State& s) const {
        std::size_t h = 1469598103934665603ull;  // FNV-1a
        for (std::int32_t v : s.values) {
            h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }
};

/// An ordered subset of variable indices used for projection.
using Pattern = std::vector<int>;

struct FactoredModel {
    std::vector<Variable> variables;
    State init;
    PartialAssignment goal;
    std::vector<std::string> objectives;
    std::vector<ProbabilisticAction> actions;

    std::size_t n_objectives() const { return objectives.size(); }

    int variable_index(const std::string& name) const {
        for (std::size_t i = 0; i < variables.size(); ++i)
            if (variables[i].name == name) return static_cast<int>(i);
        return -1;
    }
};

inline bool satisfies(const State& s, const PartialAssignment& cond) {
    for (const auto& [var, value] : cond)
        if (s.values[var] != value) return false;
    return true;
}

inline State apply_effect(const State& s, const PartialAssignment& effect) {
    State out = s;
    for (const auto& [var, value] : effect) out.values[var] = value;
    return out;
}

inline bool is_goal(const FactoredModel& m, const State& s) {
    return satisfies(s, m.goal);
}

/// Ids of the actions whose precondition holds in @p s, in declaration order.
inline std::vector<int> applicable_actions(const FactoredModel& m, const State& s) {
    std::vector<int> out;
    for (std::size_t a = 0; a < m.actions.size(); ++a)
        if (satisfies(s, m.actions[a].precondition)) out.push_back(static_cast<int>(a));
    return out;
}

/**
 * @brief Successor distribution of applying action @p action in @p s.
 *
 * Outcomes that land in the same state are merged with summed probability;
 * the order of first occurrence is kept.
 */
inline std::vector<std::pair<State, double>> successors(const FactoredModel& m,
                                                        const State& s, int action) {
    const ProbabilisticAction& act = m.actions[action];
    if (!satisfies(s, act.precondition))
        throw ModelError("action '" + act.name + "' not applicable in state");
    std::vector<std::pair<State, double>> out;
    for (const Outcome& o : act.outcomes) {
        State t = apply_effect(s, o.effect);
        bool merged = false;
        for (auto& [existing, p] : out) {
            if (existing == t) {
                p += o.probability;
                merged = true;
                break;
            }
        }
        if (!merged) out.emplace_back(std::move(t), o.probability);
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON model format
// ---------------------------------------------------------------------------

namespace detail {

inline void reject_unknown_keys(const nlohmann::ordered_json& obj,
                                const std::vector<std::string>& allowed,
                                const std::string& where) {
    for (const auto& item : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
            throw ModelError(where + ": unknown key '" + item.key() + "'");
    }
}

inline PartialAssignment parse_assignment(const nlohmann::ordered_json& obj,
                                          const FactoredModel& m,
                                          const std::string& where) {
    if (!obj.is_object()) throw ModelError(where + ": expected an object");
    PartialAssignment out;
    for (const auto& item : obj.items()) {
        const int var = m.variable_index(item.key());
        if (var < 0) throw ModelError(where + ": unknown variable '" + item.key() + "'");
        if (!item.value().is_string())
            throw ModelError(where + ": value for '" + item.key() + "' must be a string");
        const std::string value_name = item.value().get<std::string>();
        const auto& domain = m.variables[var].domain;
        const auto it = std::find(domain.begin(), domain.end(), value_name);
        if (it == domain.end())
            throw ModelError(where + ": value '" + value_name + "' not in domain of '" +
                             item.key() + "'");
        out.emplace_back(var, static_cast<int>(it - domain.begin()));
    }
    std::sort(out.begin(), out.end());
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i].first == out[i - 1].first)
            throw ModelError(where + ": variable assigned twice");
    return out;
}

}  // namespace detail

/// Parses and fully validates a model document. Every violated invariant is
/// reported as a distinct diagnostic naming the offending location.
inline FactoredModel parse_model(const std::string& text) {
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ModelError(std::string("model document is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ModelError("model document must be a JSON object");
    detail::reject_unknown_keys(doc, {"variables", "init", "goal", "objectives", "actions"},
                                "model");
    for (const char* key : {"variables", "init", "goal", "objectives", "actions"})
        if (!doc.contains(key)) throw ModelError(std::string("model: missing key '") + key + "'");

    FactoredModel m;

    for (std::size_t i = 0; i < doc["variables"].size(); ++i) {
        const auto& v = doc["variables"][i];
        const std::string where = "variables[" + std::to_string(i) + "]";
        detail::reject_unknown_keys(v, {"name", "domain"}, where);
        if (!v.contains("name") || !v["name"].is_string())
            throw ModelError(where + ": missing or non-string 'name'");
        if (!v.contains("domain") || !v["domain"].is_array() || v["domain"].empty())
            throw ModelError(where + ": 'domain' must be a non-empty array");
        Variable var;
        var.name = v["name"].get<std::string>();
        if (m.variable_index(var.name) >= 0)
            throw ModelError(where + ": duplicate variable name '" + var.name + "'");
        for (const auto& d : v["domain"]) {
            if (!d.is_string()) throw ModelError(where + ": domain values must be strings");
            const std::string value = d.get<std::string>();
            if (std::find(var.domain.begin(), var.domain.end(), value) != var.domain.end())
                throw ModelError(where + ": duplicate domain value '" + value + "'");
            var.domain.push_back(value);
        }
        m.variables.push_back(std::move(var));
    }

    const PartialAssignment init = detail::parse_assignment(doc["init"], m, "init");
    if (init.size() != m.variables.size())
        throw ModelError("init: must assign every variable (got " +
                         std::to_string(init.size()) + " of " +
                         std::to_string(m.variables.size()) + ")");
    m.init.values.resize(m.variables.size());
    for (const auto& [var, value] : init) m.init.values[var] = value;

    m.goal = detail::parse_assignment(doc["goal"], m, "goal");

    if (!doc["objectives"].is_array() || doc["objectives"].empty())
        throw ModelError("objectives: must be a non-empty array");
    for (const auto& o : doc["objectives"]) {
        if (!o.is_string()) throw ModelError("objectives: names must be strings");
        m.objectives.push_back(o.get<std::string>());
    }

    if (!doc["actions"].is_array()) throw ModelError("actions: must be an array");
    for (std::size_t i = 0; i < doc["actions"].size(); ++i) {
        const auto& a = doc["actions"][i];
        std::string where = "actions[" + std::to_string(i) + "]";
        detail::reject_unknown_keys(a, {"name", "pre", "cost", "outcomes"}, where);
        for (const char* key : {"name", "pre", "cost", "outcomes"})
            if (!a.contains(key)) throw ModelError(where + ": missing key '" + key + "'");
        ProbabilisticAction action;
        action.name = a["name"].get<std::string>();
        where += " '" + action.name + "'";
        action.precondition = detail::parse_assignment(a["pre"], m, where + " pre");

        if (!a["cost"].is_array() || a["cost"].size() != m.n_objectives())
            throw ModelError(where + ": cost must have " + std::to_string(m.n_objectives()) +
                             " entries");
        for (const auto& c : a["cost"]) {
            if (!c.is_number()) throw ModelError(where + ": cost entries must be numbers");
            const double value = c.get<double>();
            if (!(value >= 0.0) || !std::isfinite(value))
                throw ModelError(where + ": negative cost");
            action.cost.push_back(value);
        }

        if (!a["outcomes"].is_array() || a["outcomes"].empty())
            throw ModelError(where + ": 'outcomes' must be a non-empty array");
        double total = 0.0;
        for (std::size_t k = 0; k < a["outcomes"].size(); ++k) {
            const auto& o = a["outcomes"][k];
            const std::string owhere = where + " outcomes[" + std::to_string(k) + "]";
            detail::reject_unknown_keys(o, {"prob", "effect"}, owhere);
            if (!o.contains("prob") || !o["prob"].is_number())
                throw ModelError(owhere + ": missing or non-numeric 'prob'");
            if (!o.contains("effect"))
                throw ModelError(owhere + ": missing 'effect'");
            Outcome outcome;
            outcome.probability = o["prob"].get<double>();
            if (!(outcome.probability > 0.0) || outcome.probability > 1.0)
                throw ModelError(owhere + ": probability must be in (0, 1]");
            outcome.effect = detail::parse_assignment(o["effect"], m, owhere + " effect");
            total += outcome.probability;
            action.outcomes.push_back(std::move(outcome));
        }
        if (std::abs(total - 1.0) > 1e-6) {
            throw ModelError(where + ": probabilities sum to " + std::to_string(total));
        }
        m.actions.push_back(std::move(action));
    }
    return m;
}

namespace detail {

inline nlohmann::ordered_json assignment_to_json(const FactoredModel& m,
                                                 const PartialAssignment& assignment) {
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    for (const auto& [var, value] : assignment)
        out[m.variables[var].name] = m.variables[var].domain[value];
    return out;
}

}  // namespace detail

/// Canonical serialisation: fixed key order, variable-declaration order in
/// maps, shortest round-trip numbers. Regenerating a model is byte-stable.
inline std::string serialize_model(const FactoredModel& m) {
    nlohmann::ordered_json doc;
    doc["variables"] = nlohmann::ordered_json::array();
    for (const Variable& v : m.variables)
        doc["variables"].push_back({{"name", v.name}, {"domain", v.domain}});
    nlohmann::ordered_json init = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < m.variables.size(); ++i)
        init[m.variables[i].name] = m.variables[i].domain[m.init.values[i]];
    doc["init"] = std::move(init);
    doc["goal"] = detail::assignment_to_json(m, m.goal);
    doc["objectives"] = m.objectives;
    doc["actions"] = nlohmann::ordered_json::array();
    for (const ProbabilisticAction& a : m.actions) {
        nlohmann::ordered_json action;
        action["name"] = a.name;
        action["pre"] = detail::assignment_to_json(m, a.precondition);
        action["cost"] = a.cost;
        action["outcomes"] = nlohmann::ordered_json::array();
        for (const Outcome& o : a.outcomes)
            action["outcomes"].push_back(
                {{"prob", o.probability}, {"effect", detail::assignment_to_json(m, o.effect)}});
        doc["actions"].push_back(std::move(action));
    }
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Transformations
// ---------------------------------------------------------------------------

/**
 * @brief Give-up transformation: one extra objective counting the
 * probability of abandoning, plus a universally applicable action that
 * jumps straight to a goal state.
 *
 * Every original cost vector is extended with a zero entry; the new
 * give-up action costs 1 in the new dimension only. Its single outcome
 * sets the goal assignment and leaves other variables unchanged, which
 * picks the canonical goal state agreeing with the goal condition.
 * The transformed model has no dead ends.
 */
inline FactoredModel apply_giveup_transform(const FactoredModel& m) {
    for (const ProbabilisticAction& a : m.actions)
        if (a.name == "give-up")
            throw ModelError("give-up transform: an action named 'give-up' already exists");
    FactoredModel out = m;
    out.objectives.push_back("give-up");
    for (ProbabilisticAction& a : out.actions) a.cost.push_back(0.0);
    ProbabilisticAction giveup;
    giveup.name = "give-up";
    giveup.cost.assign(out.n_objectives(), 0.0);
    giveup.cost.back() = 1.0;
    giveup.outcomes.push_back(Outcome{1.0, m.goal});
    out.actions.push_back(std::move(giveup));
    return out;
}

/**
 * @brief All-outcomes determinisation: every probabilistic outcome becomes
 * its own deterministic action with the parent's precondition and full
 * cost vector. Single-outcome actions are kept untouched.
 */
inline FactoredModel determinise(const FactoredModel& m) {
    FactoredModel out = m;
    out.actions.clear();
    for (const ProbabilisticAction& a : m.actions) {
        if (a.outcomes.size() == 1) {
            ProbabilisticAction d = a;
            d.outcomes.front().probability = 1.0;
            out.actions.push_back(std::move(d));
            continue;
        }
        for (std::size_t k = 0; k < a.outcomes.size(); ++k) {
            ProbabilisticAction d;
            d.name = a.name + "__o" + std::to_string(k);
            d.precondition = a.precondition;
            d.cost = a.cost;
            d.outcomes.push_back(Outcome{1.0, a.outcomes[k].effect});
            out.actions.push_back(std::move(d));
        }
    }
    return out;
}

namespace detail {

inline PartialAssignment restrict_assignment(const PartialAssignment& assignment,
                                             const std::vector<int>& remap) {
    PartialAssignment out;
    for (const auto& [var, value] : assignment)
        if (remap[var] >= 0) out.emplace_back(remap[var], value);
    return out;
}

}  // namespace detail

/**
 * @brief Syntactic projection onto a pattern of variables.
 *
 * Variables outside the pattern disappear from preconditions, effects,
 * the goal and the initial state. Outcomes whose restricted effects
 * coincide are merged with summed probability. Costs are unchanged, so
 * abstract optimal values lower-bound concrete ones.
 */
inline FactoredModel project(const FactoredModel& m, const Pattern& pattern) {
    if (pattern.empty()) throw ModelError("project: empty pattern");
    std::vector<int> remap(m.variables.size(), -1);
    FactoredModel out;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        const int var = pattern[i];
        if (var < 0 || var >= static_cast<int>(m.variables.size()))
            throw ModelError("project: pattern variable out of range");
        if (remap[var] >= 0) throw ModelError("project: duplicate pattern variable");
        remap[var] = static_cast<int>(i);
        out.variables.push_back(m.variables[var]);
    }
    out.init.values.resize(pattern.size());
    for (std::size_t i = 0; i < pattern.size(); ++i)
        out.init.values[i] = m.init.values[pattern[i]];
    out.goal = detail::restrict_assignment(m.goal, remap);
    out.objectives = m.objectives;
    for (const ProbabilisticAction& a : m.actions) {
        ProbabilisticAction p;
        p.name = a.name;
        p.precondition = detail::restrict_assignment(a.precondition, remap);
        p.cost = a.cost;
        for (const Outcome& o : a.outcomes) {
            PartialAssignment effect = detail::restrict_assignment(o.effect, remap);
            bool merged = false;
            for (Outcome& existing : p.outcomes) {
                if (existing.effect == effect) {
                    existing.probability += o.probability;
                    merged = true;
                    break;
                }
            }
            if (!merged) p.outcomes.push_back(Outcome{o.probability, std::move(effect)});
        }
        out.actions.push_back(std::move(p));
    }
    return out;
}

/// Image of a concrete state under a pattern's abstraction mapping.
inline State abstract_state(const State& s, const Pattern& pattern) {
    State out;
    out.values.reserve(pattern.size());
    for (int var : pattern) out.values.push_back(s.values[var]);
    return out;
}

}  // namespace mossp
