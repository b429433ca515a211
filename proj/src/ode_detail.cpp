#include "ode_detail.hpp"

#include <algorithm>
#include <cmath>

namespace rhb::detail {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

Mat transfer_matrix(const std::function<Mat(cplx)>& coeff, const PathLeg& leg, int dim,
                    const OdeOptions& opts) {
    auto f = [&](double u, const Mat& y) -> Mat { return leg.dz(u) * (coeff(leg.z(u)) * y); };
    Mat y = Mat::Identity(dim, dim);
    double u = 0.0;
    double h = std::min(opts.h_init, 1.0);
    int steps = 0;
    Mat k1 = f(u, y);
    while (u < 1.0) {
        if (++steps > opts.max_steps)
            throw numerical_error("ODE integrator exceeded the step budget; tolerance not met");
        if (opts.min_distance) {
            const double dist = opts.min_distance(leg.z(u));
            const double speed = std::abs(leg.dz(u)) + 1e-300;
            h = std::min(h, std::max(0.4 * dist / speed, 1e-12));
        }
        h = std::min(h, 1.0 - u);
        const Mat k2 = f(u + c2 * h, y + h * (a21 * k1));
        const Mat k3 = f(u + c3 * h, y + h * (a31 * k1 + a32 * k2));
        const Mat k4 = f(u + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Mat k5 = f(u + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Mat k6 = f(u + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Mat y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Mat k7 = f(u + h, y5);
        const Mat err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double sc = opts.atol + opts.rtol * std::max(y.norm(), y5.norm());
        const double e = err.norm() / sc;
        if (e <= 1.0) {
            u += h;
            y = y5;
            k1 = k7;  // FSAL
        }
        const double fac = std::clamp(0.9 * std::pow(std::max(e, 1e-10), -0.2), 0.2, 5.0);
        h = std::min(h * fac, 0.2);
        if (h < 1e-14) throw numerical_error("ODE step size underflow near a singular point");
    }
    return y;
}

Mat transfer_matrix(const std::function<Mat(cplx)>& coeff, const std::vector<PathLeg>& legs,
                    int dim, const OdeOptions& opts) {
    Mat y = Mat::Identity(dim, dim);
    for (const auto& leg : legs) y = transfer_matrix(coeff, leg, dim, opts) * y;
    return y;
}

}  // namespace rhb::detail
