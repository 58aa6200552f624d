/**
 * @file lp.hpp
 * @brief Small dense linear-program solver (two-phase primal simplex).
 *
 * Sized for the tiny LPs that arise when pruning convex coverage sets:
 * a handful of variables (one weight per objective plus a free scalar)
 * and at most a few dozen constraints. Pivot selection uses Bland's
 * rule, which rules out cycling.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace mossp::lp {

enum class Status { kOptimal, kInfeasible, kUnbounded };

enum class RowSense { kLessEqual, kEqual };

struct Result {
    Status status = Status::kInfeasible;
    double objective = 0.0;
    std::vector<double> solution;  ///< values of the structural variables
};

/// Number of LPs solved on this thread since start; solvers snapshot it
/// to report LP-call counts without threading a context through the algebra.
inline thread_local long long solve_count = 0;

namespace detail {

constexpr double kPivotEps = 1e-9;

// Tableau layout: one row per constraint plus an objective row.
// Columns: structural vars, slacks (for <= rows), artificials, RHS.
class Tableau {
  public:
    Tableau(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    void pivot(std::size_t pr, std::size_t pc) {
        const double inv = 1.0 / at(pr, pc);
        for (std::size_t c = 0; c < cols_; ++c) at(pr, c) *= inv;
        at(pr, pc) = 1.0;
        for (std::size_t r = 0; r < rows_; ++r) {
            if (r == pr) continue;
            const double factor = at(r, pc);
            if (factor == 0.0) continue;
            for (std::size_t c = 0; c < cols_; ++c) at(r, c) -= factor * at(pr, c);
            at(r, pc) = 0.0;
        }
    }

  private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

}  // namespace detail

/**
 * @brief Maximise c·x subject to per-row constraints A x (<=|=) b, x >= 0.
 *
 * @param constraints one coefficient row per constraint (all of size c.size())
 * @param rhs one entry per constraint
 * @param senses row senses, parallel to @p constraints
 * @param objective the cost vector c
 */
inline Result solve(const std::vector<std::vector<double>>& constraints,
                    const std::vector<double>& rhs,
                    const std::vector<RowSense>& senses,
                    const std::vector<double>& objective) {
    using detail::kPivotEps;
    ++solve_count;

    const std::size_t m = constraints.size();
    const std::size_t n = objective.size();

    // Column map: [0,n) structural, [n, n+slacks) slack, then artificials, RHS last.
    std::size_t n_slack = 0;
    for (RowSense s : senses)
        if (s == RowSense::kLessEqual) ++n_slack;

    // Every row gets an artificial; redundant ones just start nonbasic-able
    // and are driven out in phase 1. Keeps the setup uniform.
    const std::size_t n_art = m;
    const std::size_t total = n + n_slack + n_art;
    const std::size_t rhs_col = total;

    detail::Tableau t(m + 1, total + 1);
    std::vector<std::size_t> basis(m);

    std::size_t slack_idx = 0;
    for (std::size_t r = 0; r < m; ++r) {
        const double sign = rhs[r] < 0.0 ? -1.0 : 1.0;  // keep RHS non-negative
        for (std::size_t c = 0; c < n; ++c) t.at(r, c) = sign * constraints[r][c];
        if (senses[r] == RowSense::kLessEqual) {
            t.at(r, n + slack_idx) = sign * 1.0;
            ++slack_idx;
        }
        t.at(r, n + n_slack + r) = 1.0;
        t.at(r, rhs_col) = sign * rhs[r];
        basis[r] = n + n_slack + r;
    }

    const std::size_t obj_row = m;

    auto run_simplex = [&](std::size_t limit_cols) -> bool {
        // Bland's rule: entering = lowest-index column with positive reduced
        // profit; leaving = min-ratio row, ties by lowest basis index.
        for (;;) {
            std::size_t enter = limit_cols;
            for (std::size_t c = 0; c < limit_cols; ++c) {
                if (t.at(obj_row, c) > kPivotEps) {
                    enter = c;
                    break;
                }
            }
            if (enter == limit_cols) return true;  // optimal

            std::size_t leave = m;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t r = 0; r < m; ++r) {
                const double a = t.at(r, enter);
                if (a <= kPivotEps) continue;
                const double ratio = t.at(r, rhs_col) / a;
                if (ratio < best_ratio - kPivotEps ||
                    (ratio < best_ratio + kPivotEps && (leave == m || basis[r] < basis[leave]))) {
                    best_ratio = ratio;
                    leave = r;
                }
            }
            if (leave == m) return false;  // unbounded

            t.pivot(leave, enter);
            basis[leave] = enter;
        }
    };

    // Phase 1: minimise the sum of artificials.
    for (std::size_t c = 0; c <= total; ++c) {
        double acc = 0.0;
        for (std::size_t r = 0; r < m; ++r) acc += t.at(r, c);
        t.at(obj_row, c) = acc;
    }
    for (std::size_t a = n + n_slack; a < total; ++a) t.at(obj_row, a) = 0.0;

    run_simplex(total);  // cannot be unbounded: objective bounded below by 0

    Result res;
    if (t.at(obj_row, rhs_col) > 1e-7) {
        res.status = Status::kInfeasible;
        return res;
    }

    // Drive leftover artificials out of the basis where possible.
    for (std::size_t r = 0; r < m; ++r) {
        if (basis[r] < n + n_slack) continue;
        std::size_t c = 0;
        for (; c < n + n_slack; ++c) {
            if (std::abs(t.at(r, c)) > kPivotEps) break;
        }
        if (c < n + n_slack) {
            t.pivot(r, c);
            basis[r] = c;
        }
        // else: redundant row, artificial stays basic at value 0.
    }

    // Phase 2: restore the real objective expressed over the current basis.
    for (std::size_t c = 0; c <= total; ++c) t.at(obj_row, c) = 0.0;
    for (std::size_t c = 0; c < n; ++c) t.at(obj_row, c) = objective[c];
    for (std::size_t r = 0; r < m; ++r) {
        const double coef = basis[r] < n ? objective[basis[r]] : 0.0;
        if (coef == 0.0) continue;
        for (std::size_t c = 0; c <= total; ++c) t.at(obj_row, c) -= coef * t.at(r, c);
        t.at(obj_row, basis[r]) = 0.0;
    }

    if (!run_simplex(n + n_slack)) {
        res.status = Status::kUnbounded;
        return res;
    }

    res.status = Status::kOptimal;
    res.objective = -t.at(obj_row, rhs_col);
    res.solution.assign(n, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        if (basis[r] < n) res.solution[basis[r]] = t.at(r, rhs_col);
    }
    return res;
}

}  // namespace mossp::lp
