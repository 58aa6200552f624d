#include <catch2/catch_amalgamated.hpp>

#include "mossp/lp.hpp"

using namespace mossp;

TEST_CASE("maximisation with slack-only rows") {
    // max x + y  s.t.  x + 2y <= 4, x <= 3
    const auto r = lp::solve({{1, 2}, {1, 0}}, {4, 3},
                             {lp::RowSense::kLessEqual, lp::RowSense::kLessEqual}, {1, 1});
    REQUIRE(r.status == lp::Status::kOptimal);
    CHECK_THAT(r.objective, Catch::Matchers::WithinAbs(3.5, 1e-9));
    CHECK_THAT(r.solution[0], Catch::Matchers::WithinAbs(3.0, 1e-9));
    CHECK_THAT(r.solution[1], Catch::Matchers::WithinAbs(0.5, 1e-9));
}

TEST_CASE("equality rows force phase one") {
    // max x  s.t.  x + y = 2, y <= 1
    const auto r = lp::solve({{1, 1}, {0, 1}}, {2, 1},
                             {lp::RowSense::kEqual, lp::RowSense::kLessEqual}, {1, 0});
    REQUIRE(r.status == lp::Status::kOptimal);
    CHECK_THAT(r.objective, Catch::Matchers::WithinAbs(2.0, 1e-9));
}

TEST_CASE("negative right-hand sides") {
    // max -x  s.t.  -x <= -2  (i.e. x >= 2) -> x = 2, objective -2
    const auto r = lp::solve({{-1}}, {-2}, {lp::RowSense::kLessEqual}, {-1});
    REQUIRE(r.status == lp::Status::kOptimal);
    CHECK_THAT(r.objective, Catch::Matchers::WithinAbs(-2.0, 1e-9));
}

TEST_CASE("infeasibility is detected") {
    // x <= -1 with x >= 0
    const auto r = lp::solve({{1}}, {-1}, {lp::RowSense::kLessEqual}, {1});
    CHECK(r.status == lp::Status::kInfeasible);
}

TEST_CASE("unboundedness is detected") {
    const auto r = lp::solve({{-1}}, {0}, {lp::RowSense::kLessEqual}, {1});
    CHECK(r.status == lp::Status::kUnbounded);
}

TEST_CASE("degenerate ties terminate under Bland's rule") {
    // Klee-Minty-flavoured degeneracy: several identical binding rows.
    const auto r = lp::solve({{1, 1}, {1, 1}, {1, 1}, {1, 0}}, {1, 1, 1, 1},
                             {lp::RowSense::kLessEqual, lp::RowSense::kLessEqual,
                              lp::RowSense::kLessEqual, lp::RowSense::kLessEqual},
                             {2, 1});
    REQUIRE(r.status == lp::Status::kOptimal);
    CHECK_THAT(r.objective, Catch::Matchers::WithinAbs(2.0, 1e-9));
}

TEST_CASE("coverage-set shaped instance") {
    // The pruning LP for v = [1,1] against {[0,2],[2,0]}: maximise x with
    // w.(v - v') + x <= -lambda. The optimum is -lambda: [1,1] sits exactly
    // on the hull between the two extreme points.
    const double lambda = 0.01;
    const auto r = lp::solve(
        {{1, -1, 1, -1}, {-1, 1, 1, -1}, {1, 1, 0, 0}},
        {-lambda, -lambda, 1},
        {lp::RowSense::kLessEqual, lp::RowSense::kLessEqual, lp::RowSense::kEqual},
        {0, 0, 1, -1});
    REQUIRE(r.status == lp::Status::kOptimal);
    CHECK_THAT(r.objective, Catch::Matchers::WithinAbs(-lambda, 1e-9));
}
