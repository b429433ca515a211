#include <doctest.h>

#include "rhb/acceptance.hpp"
#include "rhb/loop.hpp"

using namespace rhb;

namespace {

Mat e12() {
    Mat m = Mat::Zero(2, 2);
    m(0, 1) = 1.0;
    return m;
}

}  // namespace

TEST_CASE("loop_from_samples recovers exact Laurent data") {
    SUBCASE("constant identity") {
        std::vector<Mat> samples(8, Mat::Identity(2, 2));
        auto loop = loop_from_samples(samples, 1e-10);
        CHECK(loop.coeffs().size() == 1);
        CHECK((loop.coeff(0) - Mat::Identity(2, 2)).norm() == doctest::Approx(0.0).epsilon(1e-14));
    }
    SUBCASE("monomial diag(t, 1) on 8 nodes") {
        UnitCircleGrid grid(8);
        std::vector<Mat> samples;
        for (int k = 0; k < 8; ++k) {
            Mat m = Mat::Zero(2, 2);
            m(0, 0) = grid.node(k);
            m(1, 1) = 1.0;
            samples.push_back(m);
        }
        auto loop = loop_from_samples(samples, 1e-10);
        Mat c0 = Mat::Zero(2, 2);
        c0(1, 1) = 1.0;
        Mat c1 = Mat::Zero(2, 2);
        c1(0, 0) = 1.0;
        CHECK((loop.coeff(0) - c0).norm() < 1e-14);
        CHECK((loop.coeff(1) - c1).norm() < 1e-14);
        CHECK(loop.coeffs().size() == 2);
    }
    SUBCASE("two-term series I + 0.1 t^{-1} E12") {
        UnitCircleGrid grid(16);
        std::vector<Mat> samples;
        for (int k = 0; k < 16; ++k)
            samples.push_back(Mat(Mat::Identity(2, 2) + 0.1 / grid.node(k) * e12()));
        auto loop = loop_from_samples(samples, 1e-10);
        CHECK((loop.coeff(0) - Mat::Identity(2, 2)).norm() < 1e-14);
        CHECK((loop.coeff(-1) - 0.1 * e12()).norm() < 1e-14);
    }
    SUBCASE("round trip at the nodes") {
        std::uint64_t state = 7;
        auto f = testgen::random_plus_factor(state, 2, 3);
        UnitCircleGrid grid(64);
        auto loop = loop_from_samples(f.sample(grid), 1e-10);
        for (int k = 0; k < 64; ++k)
            CHECK((loop.evaluate(grid.node(k)) - f.evaluate(grid.node(k))).norm() < 1e-12);
    }
    SUBCASE("degenerate sample rejected") {
        std::vector<Mat> samples(8, Mat::Zero(2, 2));
        CHECK_THROWS_AS(loop_from_samples(samples, 1e-10), validation_error);
    }
    SUBCASE("under-resolved band is reported") {
        // t^4 aliases on an 8-point grid: all energy sits at the band edge
        UnitCircleGrid grid(8);
        std::vector<Mat> samples;
        for (int k = 0; k < 8; ++k) {
            Mat m(1, 1);
            m(0, 0) = std::pow(grid.node(k), 4);
            samples.push_back(m);
        }
        CHECK_THROWS_AS(loop_from_samples(samples, 1e-10), numerical_error);
    }
}

TEST_CASE("evaluate") {
    CHECK((MatrixLoop::identity(3).evaluate(cplx(0.3, 0.4)) - Mat::Identity(3, 3)).norm() < 1e-15);
    MatrixLoop shift(2, {{1, Mat::Identity(2, 2)}}, 64);
    CHECK((shift.evaluate(iu) - iu * Mat::Identity(2, 2)).norm() < 1e-15);
    MatrixLoop mixed(2, {{-1, e12()}, {0, Mat::Identity(2, 2)}}, 64);
    CHECK((mixed.evaluate(2.0) - (Mat::Identity(2, 2) + 0.5 * e12())).norm() < 1e-15);
    CHECK_THROWS_AS(mixed.evaluate(0.0), validation_error);
}

TEST_CASE("global_index") {
    CHECK(global_index(MatrixLoop::identity(2)) == 0);
    CHECK(global_index(MatrixLoop::diagonal_power({2, -1})) == 1);
    MatrixLoop tI(2, {{1, Mat::Identity(2, 2)}}, 64);
    CHECK(global_index(tI) == 2);
}

TEST_CASE("global_index is multiplicative and odd under inversion") {
    std::uint64_t state = 99;
    for (int trial = 0; trial < 5; ++trial) {
        auto f = multiply(testgen::random_minus_factor(state, 2, 2),
                          MatrixLoop::diagonal_power(testgen::random_splitting(state, 2, -2, 2)));
        auto g = multiply(MatrixLoop::diagonal_power(testgen::random_splitting(state, 2, -2, 2)),
                          testgen::random_plus_factor(state, 2, 2));
        CHECK(global_index(multiply(f, g)) == global_index(f) + global_index(g));
        CHECK(global_index(inverse(f)) == -global_index(f));
    }
}

TEST_CASE("piecewise loop bookkeeping") {
    auto pw = fixtures::scalar_two_jump();
    CHECK(pw.jump_count() == 2);
    // the plus side belongs to the arc that starts at the jump
    CHECK(std::abs(pw.limit_plus(0)(0, 0) - cplx(2.0, 0.0)) < 1e-14);
    CHECK(std::abs(pw.limit_minus(0)(0, 0) - cplx(0.5, 0.3)) < 1e-14);
    CHECK_THROWS_AS(pw.evaluate(std::polar(1.0, 0.4)), validation_error);
    // evaluation mid-arc picks the right piece
    CHECK(std::abs(pw.evaluate(std::polar(1.0, 1.0))(0, 0) - cplx(2.0, 0.0)) < 1e-14);
    CHECK(std::abs(pw.evaluate(std::polar(1.0, 3.5))(0, 0) - cplx(0.5, 0.3)) < 1e-14);
    CHECK(std::abs(pw.evaluate(std::polar(1.0, 0.1))(0, 0) - cplx(0.5, 0.3)) < 1e-14);
}
