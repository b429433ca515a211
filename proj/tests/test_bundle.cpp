#include <doctest.h>

#include "rhb/bundle.hpp"

using namespace rhb;

TEST_CASE("chern, weight, reduced dimension") {
    CHECK(chern_number(SplittingType({0, 0, 0})) == 0);
    CHECK(chern_number(SplittingType({2, 1, 0})) == 3);
    CHECK(chern_number(SplittingType({7})) == 7);

    CHECK(weight_tau(SplittingType({2, 1, 0})) == 3);
    CHECK(weight_tau(SplittingType({4, 4, 4})) == 0);
    CHECK(weight_tau(SplittingType({3, 1, 0})) == 5);

    CHECK(reduced_dimension_nu(SplittingType({2, 1, 0})) == 4);
    CHECK(reduced_dimension_nu(SplittingType({5, 5})) == 0);
    CHECK(reduced_dimension_nu(SplittingType({3, 1, 0})) == 6);

    // k1 = (tau + c1)/n, so tau + c1 is divisible by the rank
    for (auto k : {SplittingType({2, 1, 0}), SplittingType({3, -1}), SplittingType({-2, -5, -9})}) {
        const long long t = weight_tau(k), c = chern_number(k);
        CHECK((t + c) % k.rank() == 0);
        CHECK((t + c) / k.rank() == k.top());
    }
    // rank two: tau = nu
    CHECK(weight_tau(SplittingType({4, -1})) == reduced_dimension_nu(SplittingType({4, -1})));
}

TEST_CASE("splitting from invariants") {
    CHECK(splitting_from_invariants_rank2(1, 1).entries() == std::vector<int>{1, 0});
    CHECK(splitting_from_invariants_rank2(0, 0).entries() == std::vector<int>{0, 0});
    CHECK(splitting_from_invariants_rank2(2, 4).entries() == std::vector<int>{3, -1});
    CHECK_THROWS_AS(splitting_from_invariants_rank2(1, 2), validation_error);
    CHECK_THROWS_AS(splitting_from_invariants_rank2(0, -2), validation_error);

    CHECK(splitting_from_invariants_rank3(3, 3, 4).entries() == std::vector<int>{2, 1, 0});
    CHECK(splitting_from_invariants_rank3(0, 0, 0).entries() == std::vector<int>{0, 0, 0});
    CHECK(splitting_from_invariants_rank3(4, 5, 6).entries() == std::vector<int>{3, 1, 0});
    CHECK_THROWS_AS(splitting_from_invariants_rank3(1, 1, 1), validation_error);
    CHECK_THROWS_AS(splitting_from_invariants_rank3(3, 3, 40), validation_error);
}

TEST_CASE("solvability count") {
    CHECK(solvability_count(SplittingType({0})).l == 1);
    for (int k = 0; k <= 5; ++k)
        CHECK(solvability_count(SplittingType({k})).l == k + 1);
    CHECK(solvability_count(SplittingType({1, 0})).l == 3);
    CHECK(solvability_count(SplittingType({1, -5})).solvable);
    CHECK_FALSE(solvability_count(SplittingType({-1, -2})).solvable);
}

TEST_CASE("endomorphism cohomology") {
    auto e = endo_cohomology(SplittingType({0, 0}));
    CHECK(e.h0 == 4);
    CHECK(e.h1 == 0);
    e = endo_cohomology(SplittingType({2, 1, 0}));
    CHECK(e.h0 == 10);  // pairwise line-bundle count; equals dim H_K
    CHECK(e.h1 == 1);
    e = endo_cohomology(SplittingType({9}));
    CHECK(e.h0 == 1);
    CHECK(e.h1 == 0);
}

TEST_CASE("slope is exact") {
    CHECK(slope(SplittingType({1, 0})) == Rational(1, 2));
    CHECK(slope(SplittingType({0, 0, 0})) == Rational(0));
    CHECK(slope(SplittingType({2, 2})) == Rational(2));
}

TEST_CASE("apparent singularity bounds") {
    CHECK(apparent_bound_ohtsuki(2, 0, 3) == 0);
    CHECK(apparent_bound_ohtsuki(1, 5, 17) == 5);
    CHECK(apparent_bound_ohtsuki(1, 2, 3) == 2);
    CHECK(apparent_bound_ohtsuki(2, 0, 4) == 1);

    CHECK(apparent_bound_corollary(2, 1) == 4);
    CHECK(apparent_bound_corollary(1, 7) == 8);
    CHECK(apparent_bound_corollary(3, 0) == 1 - 3);

    CHECK(partial_index_bound(2, 3, 2) == 0);
    CHECK(partial_index_bound(2, 4, 1) == 2);
    CHECK(partial_index_bound(3, 3, 3) == 1);
    CHECK(satisfies_partial_index_bound(SplittingType({0, 0}), 3, 2));
    CHECK_FALSE(satisfies_partial_index_bound(SplittingType({2, -2}), 3, 1));
}

TEST_CASE("minimal singular points of a rank-2 connexion") {
    CHECK(minimal_singularities_rank2(SplittingType({0, 0})) == 2);
    CHECK(minimal_singularities_rank2(SplittingType({1, 0})) == 3);
    CHECK(minimal_singularities_rank2(SplittingType({2, 0})) == 4);
    // p = 3 exactly on the stable types
    for (int k1 = -3; k1 <= 3; ++k1)
        for (int k2 = -3; k2 <= k1; ++k2) {
            SplittingType k({k1, k2});
            CHECK((minimal_singularities_rank2(k) == 3) == is_stable(k));
        }
    CHECK_THROWS_AS(minimal_singularities_rank2(SplittingType({1, 0, 0})), validation_error);
}

TEST_CASE("type codimension") {
    CHECK(type_codimension({Rational(1), Rational(0)}, 0) == Rational(0));
    CHECK(type_codimension({Rational(2), Rational(0)}, 0) == Rational(1));
    CHECK(type_codimension({Rational(3), Rational(3), Rational(3)}, 5) == Rational(0));
    // half-integer slopes at genus two
    CHECK(type_codimension({Rational(3, 2), Rational(1, 2)}, 2) == Rational(2));
    CHECK_THROWS_AS(type_codimension({Rational(0), Rational(1)}, 0), validation_error);
}

TEST_CASE("moduli dimension") {
    CHECK(moduli_dimension(2, 2) == 5);
    CHECK(moduli_dimension(9, 1) == 1);
    CHECK(moduli_dimension(1, 6) == 6);
}

TEST_CASE("rational arithmetic") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(1, -2) == Rational(-1, 2));
    CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
    CHECK((Rational(1, 2) * Rational(2, 3)) == Rational(1, 3));
    CHECK(Rational(7, 7).is_integer());
    CHECK(Rational(-3, 2).str() == "-3/2");
    CHECK_THROWS_AS(Rational(1, 0), validation_error);
}
