#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "mossp/vecset.hpp"
#include "support/oracles.hpp"

using namespace mossp;

namespace {

VectorSet random_set(std::mt19937_64& rng, std::size_t dim, std::size_t max_size,
                     double max_entry = 2.0) {
    std::uniform_int_distribution<std::size_t> size_dist(1, max_size);
    std::uniform_real_distribution<double> entry(0.0, max_entry);
    VectorSet out;
    const std::size_t size = size_dist(rng);
    for (std::size_t i = 0; i < size; ++i) {
        CostVector v(dim);
        for (double& x : v) x = entry(rng);
        out.push_back(std::move(v));
    }
    return out;
}

CostVector random_vector(std::mt19937_64& rng, std::size_t dim, double max_entry = 2.0) {
    std::uniform_real_distribution<double> entry(0.0, max_entry);
    CostVector v(dim);
    for (double& x : v) x = entry(rng);
    return v;
}

}  // namespace

TEST_CASE("dominates") {
    CHECK(dominates({0, 1}, {0, 1}));
    CHECK(dominates({0, 1}, {1, 1}));
    CHECK_FALSE(dominates({0, 2}, {2, 0}));
    CHECK_THROWS_AS(dominates({0, 1}, {0, 1, 2}), VecsetError);
}

TEST_CASE("set_dominates") {
    CHECK(set_dominates({{0, 0}}, {{5, 5}, {1, 2}}));
    CHECK_FALSE(set_dominates({{0, 2}, {2, 0}}, {{1, 1}}));
    CHECK(set_dominates({}, {}));
}

TEST_CASE("pcs_prune") {
    CHECK(pcs_prune({{0, 2}, {2, 0}, {1, 1}}) == VectorSet{{0, 2}, {2, 0}, {1, 1}});
    CHECK(pcs_prune({{1, 1}, {1, 2}}) == VectorSet{{1, 1}});
    CHECK(pcs_prune({}).empty());
}

TEST_CASE("ccs_prune") {
    // [1,1] is the midpoint of the other two and is pruned under lambda > 0.
    CHECK(ccs_prune({{0, 2}, {2, 0}, {1, 1}}) == VectorSet{{0, 2}, {2, 0}});
    CHECK(ccs_prune({{0, 2}, {2, 0}}) == VectorSet{{0, 2}, {2, 0}});
    CHECK(ccs_prune({{3, 3}}) == VectorSet{{3, 3}});
}

TEST_CASE("set_sum") {
    const CoverageOps ops;
    CHECK(set_sum({{1, 0}}, {{0, 1}}, ops) == VectorSet{{1, 1}});
    const VectorSet v{{2, 0}, {0, 2}};
    CHECK(set_sum({{0, 0}}, v, ops) == v);
    // Under the default CCS with lambda > 0 the interior sum is pruned too.
    CHECK(set_sum({{1, 0}, {0, 1}}, {{1, 0}, {0, 1}}, ops) == VectorSet{{2, 0}, {0, 2}});
    const CoverageOps pcs{CoverageKind::kPcs, 0.0};
    CHECK(set_sum({{1, 0}, {0, 1}}, {{1, 0}, {0, 1}}, pcs) ==
          VectorSet{{2, 0}, {1, 1}, {0, 2}});
    CHECK_THROWS_AS(set_sum({}, {{1, 0}}, ops), VecsetError);
}

TEST_CASE("scale") {
    CHECK(scale(0.5, {{2, 0}, {0, 2}}) == VectorSet{{1, 0}, {0, 1}});
    const VectorSet v{{1, 2}, {3, 0}};
    CHECK(scale(1.0, v) == v);
    CHECK(scale(0.0, {{7, 3}}) == VectorSet{{0, 0}});
}

TEST_CASE("capped_sum") {
    const CostVector b{2, 2};
    CHECK(capped_sum({{1, 0}}, {{0, 1}}, b) == VectorSet{{1, 1}});
    CHECK(capped_sum({{3, 0}}, {{0, 0}}, b) == VectorSet{{2, 2}});
    const VectorSet mixed = capped_sum({{1, 0}, {3, 0}}, {{0, 1}}, b);
    REQUIRE(mixed.size() == 2);
    CHECK(contains(mixed, {1, 1}));
    CHECK(contains(mixed, {2, 2}));
}

TEST_CASE("cs_b_prune keeps the bound") {
    const CostVector b{2, 2};
    const VectorSet kept = cs_b_prune({{2, 2}, {0, 1}}, b);
    REQUIRE(kept.size() == 2);
    CHECK(contains(kept, {2, 2}));
    CHECK(contains(kept, {0, 1}));
    CHECK(cs_b_prune({{0, 1}, {0, 2}}, b) == VectorSet{{0, 1}});
    CHECK(cs_b_prune({{2, 2}}, b) == VectorSet{{2, 2}});
}

TEST_CASE("comax") {
    CHECK(comax({{1, 0}}, {{0, 1}}) == VectorSet{{1, 1}});
    const VectorSet v{{2, 0}, {0, 2}};
    CHECK(comax({{0, 0}}, v) == v);
    const VectorSet traded = comax({{2, 0}, {0, 2}}, {{1, 1}});
    REQUIRE(traded.size() == 2);
    CHECK(contains(traded, {2, 1}));
    CHECK(contains(traded, {1, 2}));
    // An empty operand acts as {0}.
    CHECK(comax({}, v) == v);
}

TEST_CASE("hausdorff") {
    CHECK_THAT(hausdorff({{0, 0}}, {{0, 0}}), Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THAT(hausdorff({{0, 0}}, {{3, 4}}), Catch::Matchers::WithinAbs(5.0, 1e-12));
    CHECK_THAT(hausdorff({{0, 0}, {1, 1}}, {{0, 0}}),
               Catch::Matchers::WithinAbs(std::sqrt(2.0), 1e-12));
    CHECK_THROWS_AS(hausdorff({}, {{1, 1}}), VecsetError);
}

TEST_CASE("directed_relative_error") {
    const VectorSet vstar{{0, 2}};
    CHECK_THAT(directed_relative_error(vstar, vstar), Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THAT(directed_relative_error({{0, 0}}, {{3, 4}}),
               Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK_THAT(directed_relative_error({{0, 1}, {3, 0}}, {{0, 2}}),
               Catch::Matchers::WithinAbs(0.5, 1e-12));
    CHECK_THROWS_AS(directed_relative_error({{0, 0}}, {{0, 0}}), VecsetError);
}

TEST_CASE("dominance is a partial order on random triples") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 200; ++round) {
        const std::size_t dim = 2 + round % 2;
        const CostVector u = random_vector(rng, dim), v = random_vector(rng, dim),
                         w = random_vector(rng, dim);
        CHECK(dominates(u, u));
        if (dominates(u, v) && dominates(v, u)) CHECK(vectors_equal(u, v));
        if (dominates(u, v) && dominates(v, w)) CHECK(dominates(u, w));
    }
}

TEST_CASE("prune outputs cover their inputs") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 60; ++round) {
        const std::size_t dim = 2 + round % 2;
        const VectorSet input = random_set(rng, dim, 8);
        const VectorSet pareto = pcs_prune(input);
        CHECK(set_dominates(pareto, input));
        const VectorSet convex = ccs_prune(input);
        // The convex set stands for its hull: mixtures may do the covering.
        CHECK(convex_dominates(convex, input, 1e-9));
        // ccs_prune(V) is a subset of pcs_prune(V).
        for (const CostVector& v : convex) CHECK(contains(pareto, v));
    }
}

TEST_CASE("set_sum is commutative and associative up to pruning") {
    std::mt19937_64 rng(13);
    const CoverageOps ops;
    for (int round = 0; round < 40; ++round) {
        const std::size_t dim = 2;
        const VectorSet a = random_set(rng, dim, 4), b = random_set(rng, dim, 4),
                        c = random_set(rng, dim, 4);
        const VectorSet ab = set_sum(a, b, ops), ba = set_sum(b, a, ops);
        CHECK(hausdorff(ops.prune(ab), ops.prune(ba)) <= 1e-9);
        const VectorSet left = ops.prune(set_sum(set_sum(a, b, ops), c, ops));
        const VectorSet right = ops.prune(set_sum(a, set_sum(b, c, ops), ops));
        CHECK(convex_dominates(left, right, 1e-9));
        CHECK(convex_dominates(right, left, 1e-9));
        // {0} is the identity.
        const VectorSet za = set_sum(VectorSet{CostVector(dim, 0.0)}, a, ops);
        CHECK(hausdorff(za, a) <= 1e-12);
    }
}

TEST_CASE("capped_sum with a huge bound agrees with set_sum") {
    std::mt19937_64 rng(17);
    const CoverageOps ops;
    for (int round = 0; round < 40; ++round) {
        const VectorSet a = random_set(rng, 2, 4), b = random_set(rng, 2, 4);
        const CostVector huge(2, 1e9);
        const VectorSet capped = capped_sum(a, b, huge, ops);
        const VectorSet plain = set_sum(a, b, ops);
        CHECK(hausdorff(ops.prune(capped), ops.prune(plain)) <= 1e-9);
    }
}

TEST_CASE("hausdorff is a metric on pruned sets") {
    std::mt19937_64 rng(19);
    for (int round = 0; round < 60; ++round) {
        const VectorSet a = pcs_prune(random_set(rng, 2, 5));
        const VectorSet b = pcs_prune(random_set(rng, 2, 5));
        const VectorSet c = pcs_prune(random_set(rng, 2, 5));
        const double ab = hausdorff(a, b), ba = hausdorff(b, a);
        CHECK_THAT(ab, Catch::Matchers::WithinAbs(ba, 1e-12));
        if (ab <= kEqTolerance) {
            for (const CostVector& v : a) CHECK(contains(b, v, 1e-6));
        }
        CHECK(hausdorff(a, c) <= ab + hausdorff(b, c) + 1e-12);
    }
}

TEST_CASE("vectors kept by ccs_prune are unique grid minimisers") {
    std::mt19937_64 rng(23);
    for (int round = 0; round < 25; ++round) {
        const std::size_t dim = 2 + round % 2;
        const VectorSet input = random_set(rng, dim, 8);
        const VectorSet kept = ccs_prune(input);
        const VectorSet candidates = pcs_prune(input);
        const auto certified = oracles::grid_unique_winner(candidates, 1e-3);
        for (const CostVector& v : kept) {
            bool found = false;
            for (std::size_t i = 0; i < candidates.size(); ++i) {
                if (vectors_equal(candidates[i], v)) {
                    CHECK(certified[i]);
                    found = true;
                }
            }
            CHECK(found);
        }
    }
}
