/**
 * @file vecset.hpp
 * @brief Coverage-set algebra over sets of non-negative cost vectors.
 *
 * A value in a multi-objective problem is a finite set of cost vectors.
 * This header provides the operations these sets are closed under:
 * dominance tests, Pareto and convex pruning, set sums (plain and capped
 * by an upper bound), scalar scaling, the componentwise-max combiner, and
 * Hausdorff-style distances used for residuals and error metrics.
 *
 * All functions are pure; inputs are never mutated. Vectors compare equal
 * when every entry differs by at most kEqTolerance, and deduplication
 * keeps the first vector in insertion order so results are deterministic.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "mossp/lp.hpp"

namespace mossp {

/// One cost/value vector: an entry per objective, all entries finite and >= 0.
using CostVector = std::vector<double>;

/// A finite set of cost vectors of equal dimension.
using VectorSet = std::vector<CostVector>;

/// Absolute per-entry tolerance for vector equality and membership.
/// LP round-trips introduce noise far above machine epsilon.
inline constexpr double kEqTolerance = 1e-9;

/// Default margin for the convex-coverage-set pruning LP.
inline constexpr double kDefaultLambda = 0.01;

class VecsetError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Thrown when the pruning LP cannot be solved; carries the offending vector.
class LpFailure : public VecsetError {
  public:
    LpFailure(const std::string& what, CostVector vec)
        : VecsetError(what), vector(std::move(vec)) {}
    CostVector vector;
};

inline void require_same_dimension(const CostVector& u, const CostVector& v) {
    if (u.size() != v.size())
        throw VecsetError("dimension mismatch: " + std::to_string(u.size()) + " vs " +
                          std::to_string(v.size()));
}

inline bool vectors_equal(const CostVector& u, const CostVector& v,
                          double tol = kEqTolerance) {
    if (u.size() != v.size()) return false;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (std::abs(u[i] - v[i]) > tol) return false;
    return true;
}

inline bool contains(const VectorSet& set, const CostVector& v,
                     double tol = kEqTolerance) {
    for (const auto& u : set)
        if (vectors_equal(u, v, tol)) return true;
    return false;
}

/// True iff u dominates v, i.e. u_i <= v_i for every objective.
inline bool dominates(const CostVector& u, const CostVector& v) {
    require_same_dimension(u, v);
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] > v[i]) return false;
    return true;
}

/// True iff every member of @p vs is dominated by some member of @p us.
inline bool set_dominates(const VectorSet& us, const VectorSet& vs) {
    for (const auto& v : vs) {
        bool covered = false;
        for (const auto& u : us) {
            if (dominates(u, v)) {
                covered = true;
                break;
            }
        }
        if (!covered) return false;
    }
    return true;
}

inline double euclidean(const CostVector& u, const CostVector& v) {
    require_same_dimension(u, v);
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double d = u[i] - v[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

inline double norm(const CostVector& v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
}

inline CostVector add(const CostVector& u, const CostVector& v) {
    require_same_dimension(u, v);
    CostVector out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] + v[i];
    return out;
}

inline CostVector componentwise_max(const CostVector& u, const CostVector& v) {
    require_same_dimension(u, v);
    CostVector out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = std::max(u[i], v[i]);
    return out;
}

/**
 * @brief Pareto prune: drop duplicates and every dominated member.
 *
 * Keeps the first of any group of tolerance-equal vectors, in insertion
 * order, so repeated runs give byte-identical results.
 */
inline VectorSet pcs_prune(const VectorSet& input) {
    VectorSet kept;
    kept.reserve(input.size());
    for (const auto& v : input) {
        if (contains(kept, v)) continue;
        kept.push_back(v);
    }
    VectorSet out;
    out.reserve(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < kept.size(); ++j) {
            if (i == j) continue;
            if (dominates(kept[j], kept[i]) && !vectors_equal(kept[j], kept[i])) {
                dominated = true;
                break;
            }
        }
        if (!dominated) out.push_back(kept[i]);
    }
    return out;
}

namespace detail {

/// Decides whether @p v is strictly (by margin lambda) optimal for some
/// scalarising weight against @p others: maximise x subject to
/// w·(v - v') + x <= -lambda for every v', sum(w) = 1, w >= 0; keep iff x* >= 0.
inline bool ccs_keeps(const CostVector& v, const VectorSet& others, double lambda) {
    if (others.empty()) return true;
    const std::size_t n = v.size();
    // Variables: w_1..w_n, x+ and x- (x free as a difference).
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    std::vector<lp::RowSense> senses;
    rows.reserve(others.size() + 1);
    for (const auto& other : others) {
        std::vector<double> row(n + 2, 0.0);
        for (std::size_t i = 0; i < n; ++i) row[i] = v[i] - other[i];
        row[n] = 1.0;
        row[n + 1] = -1.0;
        rows.push_back(std::move(row));
        rhs.push_back(-lambda);
        senses.push_back(lp::RowSense::kLessEqual);
    }
    std::vector<double> simplex_row(n + 2, 0.0);
    for (std::size_t i = 0; i < n; ++i) simplex_row[i] = 1.0;
    rows.push_back(std::move(simplex_row));
    rhs.push_back(1.0);
    senses.push_back(lp::RowSense::kEqual);

    std::vector<double> objective(n + 2, 0.0);
    objective[n] = 1.0;
    objective[n + 1] = -1.0;

    const lp::Result res = lp::solve(rows, rhs, senses, objective);
    if (res.status != lp::Status::kOptimal)
        throw LpFailure("coverage-set LP failed to solve", v);
    return res.objective >= -1e-9;
}

}  // namespace detail

/**
 * @brief Convex coverage-set prune.
 *
 * Pareto-prunes first (cheap O(m^2) filter), then keeps each survivor iff
 * it is optimal by margin @p lambda for some non-negative scalarising
 * weight. With lambda > 0 this also discards points on the interior of
 * the lower convex hull, which only stand for stochastic mixtures.
 */
inline VectorSet ccs_prune(const VectorSet& input, double lambda = kDefaultLambda) {
    VectorSet pareto = pcs_prune(input);
    if (pareto.size() <= 1) return pareto;
    VectorSet out;
    out.reserve(pareto.size());
    for (std::size_t i = 0; i < pareto.size(); ++i) {
        VectorSet others;
        others.reserve(pareto.size() - 1);
        for (std::size_t j = 0; j < pareto.size(); ++j)
            if (j != i) others.push_back(pareto[j]);
        if (detail::ccs_keeps(pareto[i], others, lambda)) out.push_back(pareto[i]);
    }
    return out;
}

enum class CoverageKind { kPcs, kCcs };

/// The active coverage-set operator, threaded through every operation that
/// the problem configuration says should prune its result.
struct CoverageOps {
    CoverageKind kind = CoverageKind::kCcs;
    double lambda = kDefaultLambda;

    VectorSet prune(const VectorSet& v) const {
        return kind == CoverageKind::kPcs ? pcs_prune(v) : ccs_prune(v, lambda);
    }
};

/**
 * @brief Coverage-set prune that never discards the bound vector @p b.
 *
 * The bound marks values of improper policies; it has to survive pruning
 * so it can be stripped explicitly after convergence.
 */
inline VectorSet cs_b_prune(const VectorSet& input, const CostVector& b,
                            const CoverageOps& ops = {}) {
    VectorSet rest;
    rest.reserve(input.size());
    bool has_bound = false;
    for (const auto& v : input) {
        if (vectors_equal(v, b)) {
            has_bound = true;
        } else {
            rest.push_back(v);
        }
    }
    VectorSet out = ops.prune(rest);
    if (has_bound) out.push_back(b);
    return out;
}

/// Set sum U (+) V = {u + v}, pruned with the active coverage-set operator.
/// An empty operand is a contract violation: value functions are never empty.
inline VectorSet set_sum(const VectorSet& us, const VectorSet& vs,
                         const CoverageOps& ops = {}) {
    if (us.empty() || vs.empty())
        throw VecsetError("set_sum: empty operand (value sets must be non-empty)");
    // A singleton operand is a translation: dominance structure is unchanged,
    // so the other (already pruned) set needs no re-prune.
    if (us.size() == 1 || vs.size() == 1) {
        const CostVector& shift = us.size() == 1 ? us.front() : vs.front();
        const VectorSet& base = us.size() == 1 ? vs : us;
        VectorSet out;
        out.reserve(base.size());
        for (const auto& v : base) out.push_back(add(shift, v));
        return out;
    }
    VectorSet sums;
    sums.reserve(us.size() * vs.size());
    for (const auto& u : us)
        for (const auto& v : vs) sums.push_back(add(u, v));
    return ops.prune(sums);
}

/// Scalar-set product {p * v}. p = 0 collapses everything onto the origin.
inline VectorSet scale(double p, const VectorSet& vs) {
    if (p < 0.0 || p > 1.0) throw VecsetError("scale: factor outside [0, 1]");
    VectorSet out;
    out.reserve(vs.size());
    for (const auto& v : vs) {
        CostVector scaled(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) scaled[i] = p * v[i];
        if (!contains(out, scaled)) out.push_back(scaled);
    }
    return out;
}

/**
 * @brief Capped set sum: pairwise sums, where any sum not dominating the
 * bound @p b (i.e. exceeding it in some entry) is replaced by @p b itself.
 *
 * The result is pruned with cs_b_prune so the bound survives.
 */
inline VectorSet capped_sum(const VectorSet& us, const VectorSet& vs,
                            const CostVector& b, const CoverageOps& ops = {}) {
    if (us.empty() || vs.empty())
        throw VecsetError("capped_sum: empty operand (value sets must be non-empty)");
    VectorSet sums;
    sums.reserve(us.size() * vs.size());
    for (const auto& u : us) {
        for (const auto& v : vs) {
            CostVector w = add(u, v);
            if (!dominates(w, b)) w = b;
            sums.push_back(std::move(w));
        }
    }
    return cs_b_prune(sums, b, ops);
}

/**
 * @brief Admissibility-preserving max combiner: pairwise componentwise
 * maxima, pruned. An empty operand acts as {0}: a missing heuristic
 * component must not raise the estimate.
 */
inline VectorSet comax(const VectorSet& us, const VectorSet& vs,
                       const CoverageOps& ops = {}) {
    if (us.empty()) return vs.empty() ? VectorSet{} : ops.prune(vs);
    if (vs.empty()) return ops.prune(us);
    VectorSet maxima;
    maxima.reserve(us.size() * vs.size());
    for (const auto& u : us)
        for (const auto& v : vs) maxima.push_back(componentwise_max(u, v));
    return ops.prune(maxima);
}

/// Directed Hausdorff term: max over @p us of the distance to @p vs.
inline double directed_hausdorff(const VectorSet& us, const VectorSet& vs) {
    double worst = 0.0;
    for (const auto& u : us) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& v : vs) best = std::min(best, euclidean(u, v));
        worst = std::max(worst, best);
    }
    return worst;
}

/// Hausdorff distance under the Euclidean point metric.
inline double hausdorff(const VectorSet& us, const VectorSet& vs) {
    if (us.empty() || vs.empty())
        throw VecsetError("hausdorff: empty operand");
    return std::max(directed_hausdorff(us, vs), directed_hausdorff(vs, us));
}

/**
 * @brief Relative error of a heuristic value set against an optimal set:
 * directed Hausdorff from the optimum into the heuristic, normalised by
 * the largest optimal vector norm.
 */
inline double directed_relative_error(const VectorSet& heuristic, const VectorSet& optimal) {
    if (heuristic.empty() || optimal.empty())
        throw VecsetError("directed_relative_error: empty operand");
    double scale_norm = 0.0;
    for (const auto& v : optimal) scale_norm = std::max(scale_norm, norm(v));
    if (scale_norm <= kEqTolerance)
        throw VecsetError("directed_relative_error: undefined (optimal value is the zero vector)");
    return directed_hausdorff(optimal, heuristic) / scale_norm;
}

/**
 * @brief True iff some convex combination of @p us dominates @p v within
 * @p slack per entry.
 *
 * This is dominance as the convex coverage set understands it: a set
 * stands for the lower surface of its convex hull, so mixtures count.
 */
inline bool convex_dominates_point(const VectorSet& us, const CostVector& v,
                                   double slack = 0.0) {
    if (us.empty()) return false;
    const std::size_t m = us.size();
    const std::size_t n = v.size();
    for (const auto& u : us)
        if (dominates(u, v)) return true;  // cheap exit, also handles slack-free cases
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    std::vector<lp::RowSense> senses;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row(m, 0.0);
        for (std::size_t j = 0; j < m; ++j) row[j] = us[j][i];
        rows.push_back(std::move(row));
        rhs.push_back(v[i] + slack);
        senses.push_back(lp::RowSense::kLessEqual);
    }
    rows.emplace_back(m, 1.0);
    rhs.push_back(1.0);
    senses.push_back(lp::RowSense::kEqual);
    const lp::Result res = lp::solve(rows, rhs, senses, std::vector<double>(m, 0.0));
    return res.status == lp::Status::kOptimal;
}

/// Convex set dominance: every member of @p vs is convex-dominated by @p us.
inline bool convex_dominates(const VectorSet& us, const VectorSet& vs,
                             double slack = 0.0) {
    for (const auto& v : vs)
        if (!convex_dominates_point(us, v, slack)) return false;
    return true;
}

/// Lexicographic sort, used when serialising sets for stable output.
inline VectorSet lexicographic_sorted(VectorSet set) {
    std::sort(set.begin(), set.end());
    return set;
}

}  // namespace mossp
