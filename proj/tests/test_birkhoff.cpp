#include <doctest.h>

#include "rhb/acceptance.hpp"
#include "rhb/birkhoff.hpp"

using namespace rhb;

TEST_CASE("splitting type validation") {
    CHECK_THROWS_AS(SplittingType({0, 1}), validation_error);
    CHECK(SplittingType({2, 0, -1}).sum() == 1);
}

TEST_CASE("partial indices of diagonal and scalar symbols") {
    CHECK(partial_indices(MatrixLoop::diagonal_power({2, 0, -1})).entries() ==
          std::vector<int>{2, 0, -1});
    for (int k = -4; k <= 4; ++k) {
        MatrixLoop g(1, {{k, Mat::Identity(1, 1)}}, 64);
        auto got = partial_indices(g);
        CHECK(got.rank() == 1);
        CHECK(got.entry(0) == k);
    }
}

TEST_CASE("construct-then-recover round trip with unipotent factors") {
    std::uint64_t state = 1234;
    auto hp = testgen::random_unipotent_plus(state, 2, 2);
    auto hm = testgen::random_unipotent_minus(state, 2, 2);
    auto g = testgen::assemble_symbol(hm, {1, -1}, hp, 128);
    CHECK(partial_indices(g).entries() == std::vector<int>{1, -1});
}

TEST_CASE("orbit invariance of the indices") {
    std::uint64_t state = 77;
    auto g = testgen::assemble_symbol(testgen::random_minus_factor(state, 2, 2), {2, -1},
                                      testgen::random_plus_factor(state, 2, 2));
    auto h1 = testgen::random_unipotent_plus(state, 2, 1);
    auto h2 = testgen::random_unipotent_minus(state, 2, 1);
    auto conj = multiply(h1, multiply(g, inverse(h2)));
    CHECK(partial_indices(conj).entries() == partial_indices(g).entries());
}

TEST_CASE("factorize") {
    SUBCASE("diagonal symbol factors trivially") {
        auto g = MatrixLoop::diagonal_power({1, -2});
        auto f = factorize(g);
        CHECK(f.type.entries() == std::vector<int>{1, -2});
        CHECK(f.residual(g) < 1e-10);
        UnitCircleGrid grid(32);
        for (int k = 0; k < 32; ++k) {
            CHECK((f.plus.evaluate(grid.node(k)) - Mat::Identity(2, 2)).norm() < 1e-9);
            CHECK((f.minus.evaluate(grid.node(k)) - Mat::Identity(2, 2)).norm() < 1e-9);
        }
    }
    SUBCASE("constant symbol lands in the plus factor") {
        Mat c(2, 2);
        c << cplx(2.0, 0.0), cplx(0.5, 0.0), cplx(0.0, 0.0), cplx(1.0, 1.0);
        MatrixLoop g(2, {{0, c}}, 64);
        auto f = factorize(g);
        CHECK(f.type.entries() == std::vector<int>{0, 0});
        CHECK(f.residual(g) < 1e-10);
        CHECK((f.minus.evaluate(2.0) - Mat::Identity(2, 2)).norm() < 1e-9);
    }
    SUBCASE("triangular mixed symbol [[t, 1], [0, 1/t]]") {
        Mat c0 = Mat::Zero(2, 2), cp = Mat::Zero(2, 2), cm = Mat::Zero(2, 2);
        c0(0, 1) = 1.0;
        cp(0, 0) = 1.0;
        cm(1, 1) = 1.0;
        MatrixLoop g(2, {{-1, cm}, {0, c0}, {1, cp}}, 64);
        auto f = factorize(g);
        CHECK(f.type.entries() == std::vector<int>{1, -1});
        CHECK(f.residual(g) <= 1e-8 * g.sup_norm());
    }
    SUBCASE("random planted factorization round trip") {
        std::uint64_t state = 4321;
        for (int trial = 0; trial < 3; ++trial) {
            auto k = testgen::random_splitting(state, 2, -2, 2);
            auto fm = testgen::random_minus_factor(state, 2, 3);
            auto fp = testgen::random_plus_factor(state, 2, 3);
            auto g = testgen::assemble_symbol(fm, k, fp);
            FactorizeOptions fo;
            fo.plus_truncation = 96;
            auto f = factorize(g, fo);
            CHECK(f.type.entries() == k);
            CHECK(f.residual(g) <= 1e-8 * g.sup_norm());
            CHECK(f.type.sum() == global_index(g));
        }
    }
}

TEST_CASE("stratum invariants") {
    CHECK(stratum_invariants(SplittingType({0, 0})).dim_HK == 4);
    CHECK(stratum_invariants(SplittingType({0, 0})).codim == 0);
    CHECK(stratum_invariants(SplittingType({1, 0})).dim_HK == 4);
    CHECK(stratum_invariants(SplittingType({1, 0})).codim == 0);
    CHECK(stratum_invariants(SplittingType({2, 0})).dim_HK == 5);
    CHECK(stratum_invariants(SplittingType({2, 0})).codim == 1);
}

TEST_CASE("stability criterion") {
    CHECK(is_stable(SplittingType({1, 0, 0})));
    CHECK(is_stable(SplittingType({3, 3, 3})));
    CHECK_FALSE(is_stable(SplittingType({2, 0})));
}
