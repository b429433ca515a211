#include <doctest.h>

#include "rhb/bundle.hpp"
#include "rhb/cauchy.hpp"

using namespace rhb;

namespace {

Density monomial_density(int m, int N) {
    UnitCircleGrid grid(N);
    Density d;
    for (int k = 0; k < N; ++k) {
        Mat v(1, 1);
        v(0, 0) = std::pow(grid.node(k), m);
        d.samples.push_back(v);
    }
    return d;
}

}  // namespace

TEST_CASE("cauchy_offcurve reproduces interior/exterior values") {
    const int N = 64;
    CHECK(std::abs(cauchy_offcurve(monomial_density(0, N), 0.0)(0, 0) - 1.0) < 1e-12);
    CHECK(std::abs(cauchy_offcurve(monomial_density(0, N), 2.0)(0, 0)) < 1e-12);
    CHECK(std::abs(cauchy_offcurve(monomial_density(1, N), 0.5)(0, 0) - 0.5) < 1e-12);
    CHECK(std::abs(cauchy_offcurve(monomial_density(-1, N), 2.0)(0, 0) - (-0.5)) < 1e-12);
    CHECK_THROWS_AS(cauchy_offcurve(monomial_density(0, N), cplx(1.0, 1e-5)), validation_error);
}

TEST_CASE("principal values on the circle") {
    const int N = 64;
    // PV[1] = 1/2: the Plemelj average of interior value 1 and exterior 0
    CHECK(std::abs(principal_value(monomial_density(0, N), 3)(0, 0) - 0.5) < 1e-12);
    CHECK(std::abs(principal_value(monomial_density(1, N), 0)(0, 0) - 0.5) < 1e-12);
    CHECK(std::abs(principal_value(monomial_density(-1, N), 0)(0, 0) - (-0.5)) < 1e-12);
}

TEST_CASE("plemelj boundary traces") {
    const int N = 64;
    UnitCircleGrid grid(N);
    SUBCASE("constant density") {
        auto tr = plemelj_boundary(monomial_density(0, N));
        for (int k = 0; k < N; ++k) {
            CHECK(std::abs(tr.plus[k](0, 0) - 1.0) < 1e-12);
            CHECK(std::abs(tr.minus[k](0, 0)) < 1e-12);
        }
    }
    SUBCASE("analytic-in-disk density phi = t") {
        auto tr = plemelj_boundary(monomial_density(1, N));
        for (int k = 0; k < N; ++k) {
            CHECK(std::abs(tr.plus[k](0, 0) - grid.node(k)) < 1e-12);
            CHECK(std::abs(tr.minus[k](0, 0)) < 1e-12);
        }
    }
    SUBCASE("exterior density phi = 1/t") {
        auto tr = plemelj_boundary(monomial_density(-1, N));
        for (int k = 0; k < N; ++k) {
            CHECK(std::abs(tr.plus[k](0, 0)) < 1e-12);
            CHECK(std::abs(tr.minus[k](0, 0) + 1.0 / grid.node(k)) < 1e-12);
        }
    }
    SUBCASE("jump identity holds to machine precision for rough data") {
        Density d;
        std::uint64_t s = 5;
        for (int k = 0; k < N; ++k) {
            Mat v(2, 1);
            s = s * 6364136223846793005ULL + 1442695040888963407ULL;
            v(0, 0) = cplx((s >> 11) * 0x1.0p-53, 0.3);
            v(1, 0) = cplx(0.1, (s >> 12) * 0x1.0p-52);
            d.samples.push_back(v);
        }
        auto tr = plemelj_boundary(d);
        for (int k = 0; k < N; ++k)
            CHECK((tr.plus[k] - tr.minus[k] - d.samples[k]).norm() < 1e-15);
    }
}

TEST_CASE("assembled transmission system") {
    SUBCASE("identity symbol forces phi = 0") {
        auto sys = assemble_transmission_system(MatrixLoop::identity(2, 16), {});
        CHECK((sys.op - 2.0 * Mat::Identity(32, 32)).norm() < 1e-12);
        CHECK(sys.rhs.norm() < 1e-15);
    }
    SUBCASE("constant diagonal symbol diag(2,1)") {
        Mat c = Mat::Zero(2, 2);
        c(0, 0) = 2.0;
        c(1, 1) = 1.0;
        MatrixLoop g(2, {{0, c}}, 16);
        UnitCircleGrid grid(16);
        Mat pv = pv_matrix(grid);
        auto sys = assemble_transmission_system(g, {});
        Mat a = Mat::Zero(2, 2), b = Mat::Zero(2, 2);
        a(0, 0) = 3.0;
        a(1, 1) = 2.0;
        b(0, 0) = -1.0;  // B = 1 - G
        for (int k = 0; k < 16; ++k)
            for (int j = 0; j < 16; ++j) {
                Mat expect = 2.0 * b * pv(k, j);
                if (j == k) expect += a;
                CHECK((sys.op.block(2 * k, 2 * j, 2, 2) - expect).norm() < 1e-13);
            }
    }
}

TEST_CASE("solve_rhtp dimensions and residuals") {
    SUBCASE("identity symbol: constants") {
        auto sols = solve_rhtp(MatrixLoop::identity(2, 32), 0);
        CHECK(sols.size() == 2);
    }
    SUBCASE("scalar t: dimension two") {
        MatrixLoop g(1, {{1, Mat::Identity(1, 1)}}, 32);
        auto sols = solve_rhtp(g, 0);
        CHECK(sols.size() == 2);
    }
    SUBCASE("scalar 1/t: no bounded solutions") {
        MatrixLoop g(1, {{-1, Mat::Identity(1, 1)}}, 32);
        auto sols = solve_rhtp(g, 0);
        CHECK(sols.empty());
    }
    SUBCASE("t I matches the sheaf count for K = (1,1)") {
        MatrixLoop g(2, {{1, Mat::Identity(2, 2)}}, 32);
        auto sols = solve_rhtp(g, 0);
        CHECK(static_cast<long long>(sols.size()) ==
              solvability_count(SplittingType({1, 1})).l);
    }
    SUBCASE("pole order raises the count by n per degree (scalar t)") {
        MatrixLoop g(1, {{1, Mat::Identity(1, 1)}}, 32);
        CHECK(solve_rhtp(g, 1).size() == 3);
        CHECK(solve_rhtp(g, 2).size() == 4);
    }
    SUBCASE("solution closure under division at a zero") {
        // Phi = (t - z0, 1 - z0/z) solves the scalar-t problem and vanishes
        // at z0; dividing by (z - z0) lands on the other basis solution
        MatrixLoop g(1, {{1, Mat::Identity(1, 1)}}, 32);
        UnitCircleGrid grid(32);
        const cplx z0(0.3, 0.1);
        for (int k = 0; k < 32; ++k) {
            const cplx t = grid.node(k);
            const cplx plus = (t - z0) / (t - z0);       // divided trace, interior
            const cplx minus = (1.0 - z0 / t) / (t - z0);
            CHECK(std::abs(plus - t * minus) < 1e-13);
        }
    }
}
